#include <gtest/gtest.h>

#include <cstdlib>
#include <fstream>
#include <maassden/tasks.hpp>
#include <sstream>

using namespace maassden;

namespace {

std::string data(const std::string& rel) { return std::string(MAASSDEN_TEST_DATA) + "/" + rel; }

errc config_code(const std::string& text) {
  try {
    parse_run_config(text);
  } catch (const error& e) {
    return e.code();
  }
  return errc::invariant;  // sentinel: accepted
}

std::string report_text(const RunConfig& c) {
  std::ostringstream out;
  write_report(run(c), out);
  return out.str();
}

}  // namespace

TEST(Config, CommentsAccepted) {
  RunConfig c = parse_run_config(
      "// leading\n{ \"task\": { \"name\": \"kloosterman\", /* inline */ \"c_max\": 12 }, \"seed\": 5 }\n");
  EXPECT_EQ(c.task.name, "kloosterman");
  EXPECT_EQ(c.task.c_max, 12);
  EXPECT_EQ(c.seed, 5u);
}

TEST(Config, UnknownKeysRejected) {
  EXPECT_EQ(config_code(R"({"task": {"name": "kloosterman"}, "colour": 1})"), errc::config);
  EXPECT_EQ(config_code(R"({"task": {"name": "kloosterman", "cmax": 3}})"), errc::config);
  EXPECT_EQ(config_code(R"({"task": {"name": "kloosterman"}, "weight": {"TT": 3}})"), errc::config);
  EXPECT_EQ(config_code(R"({"task": {"name": "kloosterman"}, "tolerances": {"weill": 1}})"), errc::config);
  EXPECT_EQ(config_code(R"({"task": {"name": "no such task"}})"), errc::config);
  EXPECT_EQ(config_code(R"({"weight": {"T": 3}})"), errc::config);
}

TEST(Config, ValueChecks) {
  EXPECT_EQ(config_code(R"({"task": {"name": "kloosterman"}, "weight": {"T": -1}})"), errc::config);
  EXPECT_EQ(config_code(R"({"task": {"name": "kloosterman"}, "weight": {"support": 0.3}})"), errc::config);
  EXPECT_EQ(config_code(R"({"task": {"name": "kloosterman"}, "weight": {"kind": "squared", "zero_order": 3}})"),
            errc::config);
  EXPECT_EQ(config_code(R"({"task": {"name": "rmt sample", "group": "SOeven", "size": 7}})"), errc::config);
  EXPECT_EQ(config_code(R"({"task": {"name": "density predict"}})"), errc::config);
  EXPECT_EQ(config_code(R"({"task": {"name": "kloosterman"}, "seed": -2})"), errc::config);
  EXPECT_EQ(config_code("{ \"task\": "), errc::config);
}

TEST(Config, EvenTRejectedForContourAndExpsum) {
  EXPECT_EQ(config_code(R"({"weight": {"T": 10}, "task": {"name": "verify contour"}})"), errc::config);
  EXPECT_EQ(config_code(R"({"weight": {"T": 5.5}, "task": {"name": "verify expsum"}})"), errc::config);
  EXPECT_EQ(config_code(R"({"weight": {"T": 11}, "task": {"name": "verify contour", "X": [12]}})"), errc::config);
  EXPECT_NO_THROW(parse_run_config(R"({"weight": {"T": 11}, "task": {"name": "verify contour"}})"));
}

TEST(Config, ExampleFileParses) {
  std::string path = std::string(MAASSDEN_TEST_DATA) + "/../configs/example.jsonc";
  RunConfig c = load_run_config(path);
  EXPECT_EQ(c.task.name, "density family");
  EXPECT_EQ(c.weight.T, 12.0);
  EXPECT_EQ(c.test_function.eta, 0.4);
}

TEST(Tasks, PredictUnitaryIsTransformAtOrigin) {
  RunConfig c = parse_run_config(
      R"({"test_function": {"shape": "fejer", "eta": 0.7}, "task": {"name": "density predict", "group": "U"}})");
  Report r = run(c);
  ASSERT_EQ(r.rows.size(), 1u);
  EXPECT_DOUBLE_EQ(std::get<double>(r.rows[0][1]), 1.0);
  EXPECT_TRUE(r.passed);
  std::string text = report_text(c);
  EXPECT_NE(text.find("# task=density predict"), std::string::npos);
  EXPECT_NE(text.find("# result=PASS"), std::string::npos);
}

TEST(Tasks, KloostermanTableWithinWeil) {
  RunConfig c = parse_run_config(R"({"task": {"name": "kloosterman", "m": 3, "n": 7, "c_max": 60}})");
  Report r = run(c);
  EXPECT_EQ(r.rows.size(), 60u);
  EXPECT_TRUE(r.passed);
}

TEST(Tasks, ContourTaskPasses) {
  RunConfig c = parse_run_config(R"({"weight": {"T": 5}, "task": {"name": "verify contour", "X": [0.5, 1.0]}})");
  Report r = run(c);
  EXPECT_EQ(r.rows.size(), 2u);
  EXPECT_TRUE(r.passed);
}

TEST(Tasks, DensityZerosOnBundledForm) {
  nlohmann::json j = {{"test_function", {{"shape", "fejer"}, {"eta", 0.45}}},
                      {"task",
                       {{"name", "density zeros"},
                        {"file", data("zeros/level1_t9.53370.zeros")},
                        {"forms", data("level1.maass")},
                        {"t", 9.53370},
                        {"R", 1.0 + 9.53370 * 9.53370},
                        {"p_max", 100}}}};
  Report r = run(parse_run_config(j));
  EXPECT_TRUE(r.passed);
  EXPECT_FALSE(r.rows.empty());
}

TEST(Tasks, RmtReportDeterministic) {
  const std::string cfg =
      R"({"seed": 42, "test_function": {"eta": 0.5}, "task": {"name": "rmt sample", "group": "SOeven", "size": 8, "samples": 300}})";
  RunConfig c = parse_run_config(cfg);
  std::string a = report_text(c), b = report_text(c);
  EXPECT_EQ(a, b);
  EXPECT_NE(a.find("# seed=42"), std::string::npos);
  setenv("MAASSDEN_THREADS", "2", 1);
  std::string t2 = report_text(c);
  unsetenv("MAASSDEN_THREADS");
  EXPECT_EQ(a, t2);
  RunConfig d = parse_run_config(cfg);
  d.seed = 43;
  EXPECT_NE(report_text(d), a);
}

TEST(Tasks, ErrorReportFormat) {
  std::ostringstream out;
  write_error_report("mass", error(errc::config, "bad"), out);
  std::string s = out.str();
  EXPECT_NE(s.find("# result=ERROR"), std::string::npos);
  EXPECT_NE(s.find("bad"), std::string::npos);
}
