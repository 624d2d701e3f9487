// Acceptance run: one PASS/FAIL line per criterion, details indented below.
// Tolerances are fixed here; nothing is read from the environment except the
// thread count.

#include <algorithm>
#include <chrono>
#include <cstdarg>
#include <cmath>
#include <cstdio>
#include <functional>
#include <maassden.hpp>
#include <random>
#include <string>
#include <vector>

using namespace maassden;

namespace {

constexpr double contour_tol = 1e-7;
constexpr double contour_seconds = 120.0;
constexpr double bracket_max_exponent = -1.0;
constexpr double dirichlet_tol = 1e-12;
constexpr double c8_max_spread = 0.5;   // max |c8_i/c8 - 1| for a universal c8
constexpr double kloosterman_tol = 1e-10;
constexpr double mass_bracket = 2.0;
constexpr double mass_seconds = 300.0;
constexpr double mc_sigma = 3.0;
constexpr double rmt_seconds = 600.0;
constexpr double two_level_exact_tol = 1e-12;
constexpr double explicit_slack = 0.05;
constexpr double family_slack = 0.2;

std::string data_dir = "data";

double now() {
  return std::chrono::duration<double>(std::chrono::steady_clock::now().time_since_epoch()).count();
}

struct Outcome {
  bool pass = true;
  std::vector<std::string> notes;
  void note(const char* fmt, ...) __attribute__((format(printf, 2, 3))) {
    char buf[512];
    va_list ap;
    va_start(ap, fmt);
    std::vsnprintf(buf, sizeof buf, fmt, ap);
    va_end(ap);
    notes.emplace_back(buf);
  }
};

int failures = 0;

void report(int n, const char* title, const std::function<Outcome()>& body) {
  double t0 = now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o.pass = false;
    o.note("exception: %s", e.what());
  }
  std::printf("%s criterion %d: %s (%.1fs)\n", o.pass ? "PASS" : "FAIL", n, title, now() - t0);
  for (const std::string& s : o.notes) std::printf("    %s\n", s.c_str());
  std::fflush(stdout);
  if (!o.pass) ++failures;
}

// least-squares slope of y against x
double slope(const std::vector<double>& x, const std::vector<double>& y) {
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) mx += x[i], my += y[i];
  mx /= x.size(), my /= y.size();
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) sxy += (x[i] - mx) * (y[i] - my), sxx += (x[i] - mx) * (x[i] - mx);
  return sxy / sxx;
}

Outcome contour() {
  Outcome o;
  double t0 = now(), worst = 0.0;
  for (Family fam : {Family::hT, Family::HT})
    for (int T : {3, 5, 9, 11}) {
      SpectralWeight sw(fam == Family::hT ? default_h() : default_H(), T, fam);
      std::vector<double> Xs{0.1, 0.5, 1.0, 2.0, std::min(5.0, double(T))};
      ContourOptions opt;
      opt.defect_tol = contour_tol;
      double w = 0.0;
      for (const ContourCheck& c : contour_transform(Xs, sw, opt)) {
        w = std::max(w, c.defect);
        o.pass = o.pass && c.passed;
      }
      worst = std::max(worst, w);
      o.note("%s T=%2d: worst relative defect %.2e", to_string(fam), T, w);
    }
  ContourConstants k;
  double dt = now() - t0;
  o.note("c1 = %g%+gi, c2 = %g; worst defect %.2e < %.0e; %.1fs < %.0fs", k.c1.real(), k.c1.imag(), k.c2, worst,
         contour_tol, dt, contour_seconds);
  o.pass = o.pass && dt < contour_seconds;
  return o;
}

Outcome bracket() {
  Outcome o;
  std::vector<double> Ts, logs;
  double C = 0.0;
  for (int T : {3, 5, 7, 9, 11}) {
    SpectralWeight sw(default_h(), T, Family::hT);
    std::vector<double> Xs{0.1, 0.5, 1.0, 2.0, std::min(5.0, double(T))};
    ResidueEvaluator ev(sw, Xs.back());
    double m = 0.0;
    for (double X : Xs) {
      double b = std::fabs(ev(X).bracket / ContourConstants{}.c2);
      m = std::max(m, b / X);
      C = std::max(C, b / (X * std::exp(-double(T))));
    }
    Ts.push_back(T);
    logs.push_back(std::log(m));
    o.note("T=%2d: max_X |T^2 sum (-1)^k J_2kT(X) k^2 h(k)| / X = %.3e", T, m);
  }
  double k = slope(Ts, logs);
  o.note("fitted decay exponent %.3f (need <= %.0f); fitted C = %.3e in C X e^{-T}", k, bracket_max_exponent, C);
  o.pass = k <= bracket_max_exponent;
  return o;
}

Outcome dirichlet() {
  Outcome o;
  double worst = 0.0;
  long n = 0;
  for (int T : {3, 5, 11})
    for (long k = 1; k <= 4 * T; ++k) {
      if (k % (2 * T) == 0) continue;
      KernelPair p = dirichlet_kernel_identity(k, T);
      worst = std::max(worst, std::fabs(p.lhs - p.rhs));
      ++n;
    }
  o.note("%ld admissible (k, T), max |lhs - rhs| = %.2e (tolerance %.0e)", n, worst, dirichlet_tol);
  o.pass = worst <= dirichlet_tol;
  return o;
}

Outcome expsum_chain() {
  Outcome o;
  SmoothWeight h = default_h();
  struct P {
    int T;
    double X;
    ExpSumCheck c;
  };
  std::vector<P> fit, hold;
  for (int T : {5, 9, 11, 15})
    for (double X : {0.1, 0.5, 1.0, 2.0}) (T <= 9 ? fit : hold).push_back({T, X, expsum_check(X, T, h)});
  // envelope C X e^{-T/2}, C fitted on T in {5, 9}, checked on {11, 15};
  // the rounding floor of the two sums is added on both sides
  double C = 0.0;
  for (const P& p : fit) C = std::max(C, std::max(0.0, p.c.residual - p.c.rounding) / (p.X * std::exp(-0.5 * p.T)));
  bool env = true;
  double worst = 0.0;
  for (const P& p : hold) {
    double allowed = C * p.X * std::exp(-0.5 * p.T) + p.c.rounding;
    env = env && p.c.residual <= allowed;
    worst = std::max(worst, p.c.residual / allowed);
  }
  o.note("|S_J/2 - V_J|: fitted C = %.3e on T in {5,9}; held-out worst residual/allowed = %.3f -> %s", C, worst,
         env ? "within envelope" : "outside envelope");
  // c8: least squares V_J ~ c8 W over the grid, then per-point spread
  std::vector<P> all = fit;
  all.insert(all.end(), hold.begin(), hold.end());
  double vw = 0, ww = 0, spread = 0, lo = INFINITY, hi = -INFINITY;
  for (const P& p : all) vw += p.c.v_j * p.c.poisson_w, ww += p.c.poisson_w * p.c.poisson_w;
  double c8 = vw / ww;
  for (const P& p : all) {
    spread = std::max(spread, std::fabs(p.c.c8 / c8 - 1.0));
    lo = std::min(lo, p.c.c8);
    hi = std::max(hi, p.c.c8);
  }
  o.note("c8: least-squares %.4g; per-point V_J/W in [%.4g, %.4g]; max |c8_i/c8 - 1| = %.3g (need <= %.2f)", c8, lo, hi,
         spread, c8_max_spread);
  // the O(Y) form of the same question, for the record: with C_Y fitted on
  // T in {5,9} both the fitted c8 and c8 = 0 pass on {11,15}
  auto envelope_ok = [&](double c) {
    double CY = 0.0;
    for (const P& p : fit) CY = std::max(CY, std::fabs(p.c.v_j - c * p.c.poisson_w) / p.c.Y);
    for (const P& p : hold)
      if (std::fabs(p.c.v_j - c * p.c.poisson_w) > CY * p.c.Y) return false;
    return true;
  };
  o.note("O(Y) envelope check: fitted c8 %s, c8 = 0 %s (the envelope does not identify c8)",
         envelope_ok(c8) ? "passes" : "fails", envelope_ok(0.0) ? "passes" : "fails");
  o.pass = env && spread <= c8_max_spread;
  return o;
}

Outcome euler_maclaurin() {
  Outcome o;
  SmoothWeight h = default_h();
  double C = 0.0, worst_hold = 0.0, worst_consistency = 0.0;
  int checked = 0;
  for (int T : {11, 21, 41}) {
    double m = 0.0;
    for (double Y : {0.1, 0.5, 1.0, 2.0}) {
      int M0 = std::max(em_default_order(Y, T), 3);
      EulerMaclaurin e = euler_maclaurin_bound(Y, T, h, M0);
      m = std::max(m, e.bound_ratio);
      for (int M : {3, 4, 5}) {
        if (M < M0) continue;
        EulerMaclaurin f = euler_maclaurin_bound(Y, T, h, M);
        worst_consistency = std::max(worst_consistency, f.consistency / std::max(f.remainder_bound, 1e-300));
        ++checked;
      }
    }
    if (T == 11)
      C = m;
    else
      worst_hold = std::max(worst_hold, m);
    o.note("T=%2d: max_Y |S_h(Y)| T/Y = %.4e", T, m);
  }
  o.note("constant from T=11: %.4e; T in {21,41} max %.4e", C, worst_hold);
  o.note("decomposition vs remainder bound, %d (Y,T,M): max consistency/bound = %.3e", checked, worst_consistency);
  o.pass = worst_hold <= C && worst_consistency <= 1.0;
  return o;
}

Outcome kloosterman_suite() {
  Outcome o;
  std::mt19937_64 rng(20240601);
  std::uniform_int_distribution<long> d(-1000, 1000);
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    long m = d(rng), n = d(rng);
    if (m == 0) m = 1;
    std::vector<double> S = kloosterman_range(m, n, 2000);
    for (long c = 1; c <= 2000; ++c) worst = std::max(worst, std::fabs(S[c - 1]) / weil_bound(m, n, c));
  }
  o.note("Weil: 50 pairs, c <= 2000: max |S|/bound = %.12f", worst);
  bool weil = worst <= 1.0 + kloosterman_tol;

  std::uniform_int_distribution<long> cd(2, 400);
  double mult = 0.0;
  int pairs = 0;
  while (pairs < 200) {
    long c1 = cd(rng), c2 = cd(rng);
    if (gcd(c1, c2) != 1) continue;
    long m = d(rng), n = d(rng);
    i64 i2 = modinv(c2, c1), i1 = modinv(c1, c2);
    double lhs = kloosterman_naive(m, n, c1 * c2).real();
    double rhs = kloosterman_naive(m * i2, n * i2, c1).real() * kloosterman_naive(m * i1, n * i1, c2).real();
    mult = std::max(mult, std::fabs(lhs - rhs));
    ++pairs;
  }
  o.note("twisted multiplicativity, 200 coprime pairs vs brute force: max error %.2e", mult);
  bool tm = mult <= kloosterman_tol;

  int bad = 0;
  double mu_err = 0.0;
  for (long c = 1; c <= 500; ++c) {
    double s = kloosterman_naive(1, 0, c).real();
    mu_err = std::max(mu_err, std::fabs(s - mobius(c)));
    if (ramanujan_mu(c) != mobius(c)) ++bad;
  }
  o.note("S(1,0;c) = mu(c), c <= 500: max error %.2e, %d integer mismatches", mu_err, bad);
  o.pass = weil && tm && mu_err <= kloosterman_tol && bad == 0;
  return o;
}

Outcome total_mass_check() {
  Outcome o;
  double t0 = now(), lo = INFINITY, hi = 0.0;
  bool dom = true;
  for (int T : {11, 21, 41}) {
    SpectralWeight sw(default_h(), T, Family::hT);
    for (long N : {1, 2, 3, 5, 6}) {
      GeometricBreakdown g = total_mass(Level::make(N), sw, 200);
      lo = std::min(lo, g.diagonal_ratio);
      hi = std::max(hi, g.diagonal_ratio);
      dom = dom && g.diagonal_dominates;
      o.note("T=%2d N=%ld: diagonal/(T^2 nu) = %.6f, (|eis|+|bk|)/diagonal = %.4f", T, N, g.diagonal_ratio,
             (std::abs(g.eisenstein) + std::abs(g.bessel_kloosterman)) / g.diagonal);
    }
  }
  double dt = now() - t0;
  o.note("ratio spread max/min = %.4f (bracket %.0f); dominance %s; %.1fs < %.0fs", hi / lo, mass_bracket,
         dom ? "holds" : "fails", dt, mass_seconds);
  o.pass = hi <= mass_bracket * lo && dom && dt < mass_seconds;
  return o;
}

Outcome rmt_one_level() {
  Outcome o;
  double t0 = now();
  TestFunction f08(0.8, Shape::fejer), f12(1.2, Shape::fejer);
  struct E {
    Group g;
    int n;
  };
  double split[2] = {0, 0}, split_se[2] = {0, 0};
  for (E e : {E{Group::U, 30}, E{Group::SOeven, 30}, E{Group::SOodd, 31}, E{Group::Sp, 30}}) {
    EnsembleSpec s{e.g, e.n, 20000, 7};
    bool need_split = e.g == Group::SOeven || e.g == Group::SOodd;
    auto v = need_split ? one_level_samples(s, {f08, f12}) : one_level_samples(s, {f08});
    DensityReport r = rmtimpl::summarize(v[0], Statistic::one_level, s, f08.describe());
    double pred = predicted_one_level(e.g, f08);
    bool ok = std::fabs(r.value - pred) <= mc_sigma * r.error_estimate;
    o.pass = o.pass && ok;
    o.note("%s(%d), eta=0.8: %.5f +- %.5f vs %.5f (z = %+.2f)", to_string(e.g), e.n, r.value, r.error_estimate, pred,
           (r.value - pred) / r.error_estimate);
    if (need_split) {
      DensityReport q = rmtimpl::summarize(v[1], Statistic::one_level, s, f12.describe());
      int i = e.g == Group::SOeven ? 0 : 1;
      split[i] = q.value;
      split_se[i] = q.error_estimate;
    }
  }
  double target = predicted_one_level(Group::SOodd, f12) - predicted_one_level(Group::SOeven, f12);
  double diff = split[1] - split[0], se = std::hypot(split_se[0], split_se[1]);
  bool split_ok = std::fabs(diff - target) <= mc_sigma * se && diff > mc_sigma * se;
  o.note("split at eta=1.2: SOodd - SOeven = %.5f +- %.5f, target %.5f (detected at %.1f sigma)", diff, se, target,
         diff / se);
  double dt = now() - t0;
  o.note("%.1fs < %.0fs", dt, rmt_seconds);
  o.pass = o.pass && split_ok && dt < rmt_seconds;
  return o;
}

// brute force over index pairs i != +-j of a signed zero set
double brute_two_level(const std::vector<double>& x, const TestFunction& a, const TestFunction& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = 0; j < x.size(); ++j) {
      if (i == j || x[i] == -x[j]) continue;
      s += a.phi(x[i]) * b.phi(x[j]);
    }
  return s;
}

Outcome two_level_checks() {
  Outcome o;
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(0.05, 3.0);
  double worst = 0.0;
  const double R = 50.0, L = std::log(R);
  TestFunction a(0.7, Shape::fejer), b(0.5, Shape::bump_squared);
  for (int trial = 0; trial < 40; ++trial) {
    int sign = trial % 2 ? -1 : 1;
    int k = 1 + trial % 3;
    ZeroList z;
    std::vector<double> scaled;
    if (sign == -1) {
      z.gammas.push_back(0.0);
      scaled.push_back(0.0);
    }
    for (int i = 0; i < k; ++i) {
      double g = u(rng);
      z.gammas.push_back(g);
    }
    std::sort(z.gammas.begin(), z.gammas.end());
    for (double g : z.gammas)
      if (g > 0) {
        scaled.push_back(g * L / two_pi);
        scaled.push_back(-g * L / two_pi);
      }
    double v = two_level(z, sign, a, b, R).value;
    double bf = brute_two_level(scaled, a, b);
    worst = std::max(worst, std::fabs(v - bf));
  }
  o.note("40 synthetic zero sets (size <= 7): max |D2 - brute force| = %.2e (tolerance %.0e)", worst,
         two_level_exact_tol);
  bool exact = worst <= two_level_exact_tol;

  TestFunction f(0.25, Shape::fejer);
  std::vector<EnsembleSpec> mix{{Group::SOeven, 30, 20000, 11}, {Group::SOodd, 31, 20000, 13}};
  DensityReport r = empirical_two_level(mix, f, f);
  double pred = predicted_two_level(f, f, 0.5);
  bool mc = std::fabs(r.value - pred) <= mc_sigma * r.error_estimate;
  o.note("mixed SOeven(30)+SOodd(31), fejer eta=0.25: %.5f +- %.5f vs %.5f (z = %+.2f)", r.value, r.error_estimate,
         pred, (r.value - pred) / r.error_estimate);
  o.pass = exact && mc;
  return o;
}

Outcome explicit_formula() {
  Outcome o;
  std::vector<MaassFormRecord> forms = load_forms(data_dir + "/level1.maass");
  o.pass = !forms.empty();
  for (const MaassFormRecord& f : forms) {
    ZeroList z = load_zeros(taskimpl::zeros_path_for(data_dir, f.t));
    double R = 1.0 + f.t * f.t;
    for (Shape sh : {Shape::bump_squared, Shape::fejer}) {
      TestFunction phi(0.45, sh);
      DensityReport zr = one_level_from_zeros(z, R, phi, ZeroTailModel{1.0, f.t});
      DensityReport pr = one_level_prime_side(f, phi, R, 100);
      double budget = zr.error_estimate + pr.error_estimate + explicit_slack;
      double diff = zr.value - pr.value;
      bool ok = std::fabs(diff) <= budget;
      o.pass = o.pass && ok;
      o.note("t=%.5f %-12s zeros %.6f, primes %.6f, diff %+.2e, budget %.3e (zero tail %.1e)", f.t, to_string(sh),
             zr.value, pr.value, diff, budget, zr.error_estimate);
    }
  }
  SpectralWeight sw(default_h(), 12.0, Family::hT);
  TestFunction phi(0.4, Shape::fejer);
  GeometricBreakdown g = total_mass(Level::make(1), sw, 200);
  FamilyAverage fa = averaged_one_level(forms, phi, sw, 144.0, g.total.real());
  double target = phi.phi_hat(0.0) + 0.5 * phi.phi(0.0);
  bool fam = std::fabs(fa.report.value - target) <= fa.report.error_estimate + family_slack;
  o.note("family T=12, R=144: %.4f vs %.4f; declared error %.3f of which truncation %.3f (records carry %.3f%% of "
         "the geometric mass)",
         fa.report.value, target, fa.report.error_estimate, fa.truncation_error, 100.0 * (1.0 - fa.missing_fraction));
  o.pass = o.pass && fam;
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc > 1) data_dir = argv[1];
  report(1, "contour identity", contour);
  report(2, "bracket-term bound", bracket);
  report(3, "Dirichlet-kernel identity", dirichlet);
  report(4, "exponential-sum identity and c8", expsum_chain);
  report(5, "Euler-Maclaurin bound", euler_maclaurin);
  report(6, "Kloosterman suite", kloosterman_suite);
  report(7, "total mass", total_mass_check);
  report(8, "one-level Monte Carlo vs closed forms", rmt_one_level);
  report(9, "two-level identity and Monte Carlo", two_level_checks);
  report(10, "explicit formula on bundled data", explicit_formula);
  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
