// maassden: batch verification runs.  Every subcommand builds a run
// configuration and goes through the same validation as `maassden run`.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <maassden.hpp>
#include <nlohmann/json.hpp>
#include <string>
#include <vector>

using json = nlohmann::json;
using namespace maassden;

namespace {

struct Common {
  std::string out;
  std::string summary;
  bool quiet = false;
};

int execute(const json& cfg, const Common& cm) {
  std::string task = cfg.contains("task") && cfg["task"].contains("name") ? cfg["task"]["name"].get<std::string>()
                                                                          : std::string("?");
  std::ofstream file;
  std::ostream* out = &std::cout;
  auto open_out = [&](const std::string& path) {
    if (path.empty()) return;
    file.open(path);
    if (!file) throw error(errc::config, "cannot write " + path);
    out = &file;
  };
  try {
    RunConfig rc = parse_run_config(cfg);
    open_out(cm.out.empty() ? rc.output : cm.out);
    Report r = run(rc);
    write_report(r, *out);
    std::ostream& hs = out == &std::cout ? std::cerr : std::cout;
    std::ofstream sf;
    std::ostream* sum = &hs;
    if (!cm.summary.empty()) {
      sf.open(cm.summary);
      sum = &sf;
    }
    if (!cm.quiet || !cm.summary.empty()) {
      for (const std::string& line : r.summary) *sum << line << "\n";
      *sum << r.task << ": " << (r.passed ? "PASS" : "FAIL") << "\n";
    }
    return r.passed ? 0 : 1;
  } catch (const error& e) {
    write_error_report(task, e, *out);
    std::cerr << "maassden: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    write_error_report(task, error(errc::config, e.what()), *out);
    std::cerr << "maassden: " << e.what() << "\n";
    return 2;
  }
}

template <class T>
json array_of(const std::vector<T>& v) {
  json a = json::array();
  for (const T& x : v) a.push_back(x);
  return a;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Maass-form family densities: trace-formula terms, identities, explicit formula, random matrices"};
  app.require_subcommand(1);
  Common cm;
  app.add_option("-o,--out", cm.out, "TSV report path (default stdout)");
  app.add_option("--summary", cm.summary, "write the human summary to this file");
  app.add_flag("-q,--quiet", cm.quiet, "no human summary");

  json cfg;

  // run <config>
  std::string config_path;
  auto* run_cmd = app.add_subcommand("run", "run a JSON configuration file (comments allowed)");
  run_cmd->add_option("config", config_path, "configuration file")->required();

  // verify contour | expsum
  auto* verify = app.add_subcommand("verify", "exact identities");
  verify->require_subcommand(1);
  double vT = 11;
  std::vector<double> vX;
  std::string vweight = "h";
  auto* contour = verify->add_subcommand("contour", "Bessel-transform contour identity");
  contour->add_option("--T", vT, "odd integer T")->required();
  contour->add_option("--X", vX, "X values in (0, T]");
  contour->add_option("--weight", vweight, "h or H")->check(CLI::IsMember({"h", "H", "hT", "HT"}));
  auto* expsum = verify->add_subcommand("expsum", "exponential-sum identity chain");
  expsum->add_option("--T", vT, "odd integer T")->required();
  expsum->add_option("--X", vX, "X values in (0, T]");

  // kloosterman m n c_max
  long km = 1, kn = 1, kc = 100;
  auto* kl = app.add_subcommand("kloosterman", "Kloosterman sums and Weil ratios");
  kl->add_option("m", km)->required();
  kl->add_option("n", kn)->required();
  kl->add_option("c_max", kc)->required();

  // mass
  std::vector<long> mN{1};
  double mT = 11;
  long mc = 200;
  auto* mass = app.add_subcommand("mass", "geometric side at m = 1 (total mass)");
  mass->add_option("--N", mN, "levels");
  mass->add_option("--T", mT)->required();
  mass->add_option("--c-max", mc, "Kloosterman modulus cutoff");
  mass->add_option("--weight", vweight, "h or H")->check(CLI::IsMember({"h", "H", "hT", "HT"}));

  // density predict | zeros | family
  auto* dens = app.add_subcommand("density", "one-level densities");
  dens->require_subcommand(1);
  std::string group, shape = "fejer", dfile, dforms;
  double eta = 0.8, R = 0, dT = 12;
  std::vector<double> dt;
  auto* predict = dens->add_subcommand("predict", "random-matrix prediction");
  predict->add_option("--group", group)->required()->check(CLI::IsMember({"U", "Sp", "SOeven", "SOodd", "SO"}));
  auto* zeros = dens->add_subcommand("zeros", "zero side, optionally against the prime side of one form");
  zeros->add_option("--file", dfile, "zeros file")->required();
  zeros->add_option("--R", R)->required();
  zeros->add_option("--forms", dforms, "forms file for the prime side");
  zeros->add_option("--t", dt, "spectral parameter selecting the form")->expected(0, 1);
  auto* family = dens->add_subcommand("family", "weighted family average");
  family->add_option("--forms", dforms)->required();
  family->add_option("--T", dT)->required();
  family->add_option("--R", R, "scaling (default T^2 N)");
  family->add_option("--c-max", mc, "Kloosterman cutoff for the geometric mass");
  family->add_option("--weight", vweight, "h or H")->check(CLI::IsMember({"h", "H", "hT", "HT"}));
  for (auto* s : {predict, zeros, family}) {
    s->add_option("--eta", eta, "support of phi^");
    s->add_option("--shape", shape)->check(CLI::IsMember({"fejer", "bump_squared"}));
  }

  // rmt sample
  auto* rmt = app.add_subcommand("rmt", "random matrix ensembles");
  rmt->require_subcommand(1);
  int size = 10;
  long samples = 1000;
  std::uint64_t seed = 1;
  std::string statistic = "one_level";
  auto* sample = rmt->add_subcommand("sample", "Monte Carlo density of scaled eigenangles");
  sample->add_option("--group", group)->required()->check(CLI::IsMember({"U", "Sp", "SOeven", "SOodd", "SO"}));
  sample->add_option("--size", size)->required();
  sample->add_option("--samples", samples)->required();
  sample->add_option("--seed", seed);
  sample->add_option("--statistic", statistic)->check(CLI::IsMember({"one_level", "two_level"}));
  sample->add_option("--eta", eta);
  sample->add_option("--shape", shape)->check(CLI::IsMember({"fejer", "bump_squared"}));

  // kuznetsov check
  auto* kuz = app.add_subcommand("kuznetsov", "trace formula on ingested data");
  kuz->require_subcommand(1);
  double kT = 1;
  long kmm = 1, kcm = 2000;
  auto* check = kuz->add_subcommand("check", "spectral side of the records vs geometric side");
  check->add_option("--forms", dforms)->required();
  check->add_option("--T", kT);
  check->add_option("--m", kmm);
  check->add_option("--c-max", kcm);
  check->add_option("--weight", vweight, "h or H")->check(CLI::IsMember({"h", "H", "hT", "HT"}));

  // suite
  std::string data_dir = "data";
  auto* suite = app.add_subcommand("suite", "default verification suite on the bundled data");
  suite->add_option("--data", data_dir);

  CLI11_PARSE(app, argc, argv);

  auto weight = [&](double T) { return json{{"family", vweight}, {"T", T}}; };
  auto test_function = [&] { return json{{"shape", shape}, {"eta", eta}}; };

  if (run_cmd->parsed()) {
    try {
      cfg = read_config_json(config_path);
    } catch (const error& e) {
      write_error_report("?", e, std::cout);
      std::cerr << "maassden: " << e.what() << "\n";
      return 2;
    }
  } else if (contour->parsed() || expsum->parsed()) {
    cfg["weight"] = contour->parsed() ? weight(vT) : json{{"family", "hT"}, {"T", vT}};
    cfg["task"] = {{"name", contour->parsed() ? "verify contour" : "verify expsum"}};
    if (!vX.empty()) cfg["task"]["X"] = array_of(vX);
  } else if (kl->parsed()) {
    cfg["task"] = {{"name", "kloosterman"}, {"m", km}, {"n", kn}, {"c_max", kc}};
  } else if (mass->parsed()) {
    cfg["weight"] = weight(mT);
    cfg["task"] = {{"name", "mass"}, {"N", array_of(mN)}, {"c_max", mc}};
  } else if (predict->parsed()) {
    cfg["test_function"] = test_function();
    cfg["task"] = {{"name", "density predict"}, {"group", group}};
  } else if (zeros->parsed()) {
    cfg["test_function"] = test_function();
    cfg["task"] = {{"name", "density zeros"}, {"file", dfile}, {"R", R}};
    if (!dforms.empty()) cfg["task"]["forms"] = dforms;
    if (!dt.empty()) cfg["task"]["t"] = dt.front();
  } else if (family->parsed()) {
    cfg["weight"] = weight(dT);
    cfg["test_function"] = test_function();
    cfg["task"] = {{"name", "density family"}, {"forms", dforms}, {"c_max", mc}};
    if (R > 0) cfg["task"]["R"] = R;
  } else if (sample->parsed()) {
    cfg["test_function"] = test_function();
    cfg["seed"] = seed;
    cfg["task"] = {{"name", "rmt sample"}, {"group", group}, {"size", size}, {"samples", samples},
                   {"statistic", statistic}};
  } else if (check->parsed()) {
    cfg["weight"] = weight(kT);
    cfg["task"] = {{"name", "kuznetsov check"}, {"forms", dforms}, {"m", kmm}, {"c_max", kcm}};
  } else if (suite->parsed()) {
    cfg["task"] = {{"name", "suite"}, {"data_dir", data_dir}};
  }
  return execute(cfg, cm);
}
