#pragma once

// One- and two-level densities: zero side, prime side (explicit formula),
// family averages, Katz-Sarnak kernels and their closed-form integrals.

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "arith.hpp"
#include "core.hpp"
#include "kuznetsov.hpp"
#include "quadrature.hpp"
#include "records.hpp"
#include "specfun.hpp"
#include "testfn.hpp"
#include "weights.hpp"

namespace maassden {

enum class Statistic { one_level, two_level };

inline const char* to_string(Statistic s) { return s == Statistic::one_level ? "one_level" : "two_level"; }

struct DensityReport {
  Statistic statistic = Statistic::one_level;
  double value = 0.0;
  double error_estimate = 0.0;
  double R = 0.0;
  std::string weight_desc;
  std::string ensemble_or_family;
  bool relative_error_infinite = false;  // nothing to sum over
  std::size_t terms = 0;
};

// phi1 * phi2 with transform phi1^ * phi2^ supported in [-(eta1+eta2), eta1+eta2]
class ProductFunction {
 public:
  ProductFunction(TestFunction a, TestFunction b) : a_(std::move(a)), b_(std::move(b)) {}

  double eta() const { return a_.eta() + b_.eta(); }
  double phi(double x) const { return a_.phi(x) * b_.phi(x); }

  double phi_hat(double y) const {
    double lo = std::max(-a_.eta(), y - b_.eta());
    double hi = std::min(a_.eta(), y + b_.eta());
    if (lo >= hi) return 0.0;
    QuadratureSpec qs;
    qs.abs_tol = 1e-13;
    qs.rel_tol = 1e-11;
    std::vector<double> pts{lo};
    for (double c : {0.0, y}) // kinks of the triangle profiles
      if (c > lo && c < hi) pts.push_back(c);
    pts.push_back(hi);
    std::sort(pts.begin(), pts.end());
    auto f = [&](double u) { return a_.phi_hat(u) * b_.phi_hat(y - u); };
    return integrate(f, pts, qs).value.real();
  }

  double tail_envelope(double x) const { return a_.tail_envelope(x) * b_.tail_envelope(x); }
  std::string describe() const { return a_.describe() + "*" + b_.describe(); }

 private:
  TestFunction a_, b_;
};

// ---------------------------------------------------------------------------
// zero side

// Analytic data used to bound the zeros above the completeness height.
struct ZeroTailModel {
  double level = 1.0;
  double t = 0.0;
};

namespace densimpl {

// generous upper bound for the density of zero ordinates near height y of a
// degree-2 L-function with conductor N and spectral parameter t
inline double zero_density_bound(double y, const ZeroTailModel& m) {
  double q = std::log(std::max(m.level, 1.0)) + 2.0 * std::log(std::max(1.0, (std::fabs(y) + m.t + 3.0) / two_pi));
  return (q + 2.0) / two_pi;
}

template <class F>
double zero_tail(const F& phi, double H, double L, const ZeroTailModel& m) {
  if (!std::isfinite(H)) return 0.0;
  // y = H/u, u in (0, 1]
  auto f = [&](double u) {
    if (u <= 0.0) return 0.0;
    double y = H / u;
    return zero_density_bound(y, m) * phi.tail_envelope(y * L / two_pi) * H / (u * u);
  };
  QuadratureSpec qs;
  qs.abs_tol = 1e-12;
  qs.rel_tol = 1e-6;
  qs.max_subdivisions = 4000;
  return 2.0 * integrate(f, 0.0, 1.0, qs).value.real();
}

}  // namespace densimpl

// sum over ordinates of phi(gamma log R / 2 pi)
template <class F>
DensityReport one_level_from_zeros(const ZeroList& zeros, double R, const F& phi, const ZeroTailModel& tail = {}) {
  require(R > 1.0 && std::isfinite(R), errc::invalid_parameter, "one_level_from_zeros needs R > 1");
  DensityReport rep;
  rep.R = R;
  rep.weight_desc = phi.describe();
  rep.ensemble_or_family = "zeros";
  const double L = std::log(R);
  std::vector<double> ord = zeros.ordinates();
  if (ord.empty()) {
    rep.relative_error_infinite = true;
    return rep;
  }
  compensated_sum<double> s;
  for (double g : ord) s.add(phi.phi(g * L / two_pi));
  rep.value = s.value();
  rep.terms = ord.size();
  rep.error_estimate = densimpl::zero_tail(phi, zeros.completeness_height, L, tail);
  return rep;
}

// ---------------------------------------------------------------------------
// prime side

enum class ExplicitMode {
  exact,    // Weil explicit formula: gamma factors by quadrature, all prime powers
  leading,  // main terms only, remainder carried as C loglog R / log R
};

// Constant in the O((loglog R + loglog N)/log R) remainder of the leading
// mode: the largest |leading - exact| log R / max(1, loglog R) over the
// bundled level-1 forms at R in {1 + t^2, 10^2, 10^4}, both shapes,
// eta in {0.45, 0.9}, was 8.84.
inline constexpr double leading_remainder_constant = 9.0;

namespace densimpl {

// Re Lambda'/Lambda archimedean part at s = 1/2 + ir:
//   log N - 2 log pi + sum_j Re psi((1/2 + ir + mu_j)/2),  mu = eps +- i t
inline double gamma_part(double r, const MaassFormRecord& f) {
  double eps = f.sign == 1 ? 0.0 : 1.0;
  cplx t = f.spectral_parameter();
  cplx i1(0.0, 1.0);
  double s = std::log(static_cast<double>(f.level.N)) - 2.0 * std::log(pi);
  for (int sg : {1, -1}) {
    cplx mu = eps + i1 * (static_cast<double>(sg) * t);
    s += digamma((0.5 + i1 * r + mu) / 2.0).real();
  }
  return s;
}

// (1/2pi) int phi(r L/2pi) G(r) dr = (1/L) int phi(x) G(2 pi x/L) dx
inline void gamma_integral(const TestFunction& phi, const MaassFormRecord& f, double L, double& value,
                           double& err) {
  auto G = [&](double x) { return gamma_part(two_pi * x / L, f); };
  QuadratureSpec qs;
  qs.abs_tol = 1e-12;
  qs.rel_tol = 1e-11;
  qs.max_subdivisions = 200000;
  const double eta = phi.eta();
  double X0 = 400.0 / eta;
  std::vector<double> pts;
  double step = 0.5 / eta;  // one panel per half oscillation
  for (double x = 0.0; x < X0; x += step) pts.push_back(x);
  pts.push_back(X0);
  auto body = [&](double x) { return phi.phi(x) * G(x); };
  QuadResult core = integrate(body, pts, qs);
  double v = 2.0 * core.value.real();
  double e = 2.0 * core.error;
  if (phi.shape() == Shape::fejer) {
    // phi = A (1 - cos 2 pi eta x)/(2 pi^2 eta x^2) for x > X0; the smooth
    // part through x = X0/u, the oscillating part bounded by parts
    const double A = phi.amplitude();
    auto smooth = [&](double u) {
      if (u <= 0.0) return 0.0;
      return G(X0 / u);
    };
    QuadratureSpec q2 = qs;
    q2.rel_tol = 1e-10;
    QuadResult sm = integrate(smooth, 0.0, 1.0, q2);
    v += 2.0 * A * sm.value.real() / (2.0 * pi * pi * eta * X0);
    e += 2.0 * std::fabs(A) * sm.error / (2.0 * pi * pi * eta * X0);
    double gx = std::fabs(G(X0)) + 1.0;
    e += 2.0 * std::fabs(A) * 3.0 * gx / (4.0 * pi * pi * pi * eta * eta * X0 * X0);
  } else {
    // super-polynomial decay; bound by the envelope
    double gx = std::fabs(G(X0)) + 2.0 * std::log(X0 + 2.0);
    e += 2.0 * gx * phi.tail_integral(X0);
  }
  value = v / L;
  err = e / L;
}

// alpha^k + beta^k for the local factor (1 - lambda X + chi X^2)^{-1}
inline std::vector<double> power_sums(double lp, int chi, int kmax) {
  std::vector<double> s(static_cast<std::size_t>(kmax) + 1);
  s[0] = chi ? 2.0 : 1.0;
  if (kmax >= 1) s[1] = lp;
  for (int k = 2; k <= kmax; ++k) s[k] = lp * s[k - 1] - chi * s[k - 2];
  return s;
}

}  // namespace densimpl

inline DensityReport one_level_prime_side(const MaassFormRecord& form, const TestFunction& phi, double R,
                                          long p_max, ExplicitMode mode = ExplicitMode::exact) {
  require(R > 1.0 && std::isfinite(R), errc::invalid_parameter, "one_level_prime_side needs R > 1");
  require(p_max >= 1, errc::invalid_parameter, "p_max must be >= 1");
  const double L = std::log(R);
  const double eta = phi.eta();
  const double cutoff = std::exp(eta * L);  // phi^ vanishes for p^k >= R^eta
  DensityReport rep;
  rep.R = R;
  rep.weight_desc = phi.describe();
  rep.ensemble_or_family = "form t=" + std::to_string(form.t);

  const i64 pmax_needed = static_cast<i64>(std::floor(cutoff));
  const i64 plim = std::min<i64>(pmax_needed, p_max);
  std::vector<long> missing;
  for (i64 p : primes_up_to(plim))
    if (!form.hecke.count(p)) missing.push_back(static_cast<long>(p));
  if (!missing.empty())
    throw missing_coefficient_error(missing, "one_level_prime_side needs lambda_p for p <= " +
                                                 std::to_string(plim));

  compensated_sum<double> primes;
  double dropped = 0.0;
  for (i64 p : primes_up_to(pmax_needed)) {
    double lp = std::log(static_cast<double>(p));
    int kmax = static_cast<int>(std::floor(eta * L / lp + 1e-12));
    if (kmax < 1) continue;
    int chi = chi0(p, form.level);
    if (p > plim) {
      // Kim-Sarnak: |alpha^k + beta^k| <= 2 p^{7k/64}
      for (int k = 1; k <= kmax; ++k)
        dropped += 2.0 / L * 2.0 * std::pow(static_cast<double>(p), 7.0 * k / 64.0) * lp /
                   std::pow(static_cast<double>(p), 0.5 * k) * std::fabs(phi.phi_hat(k * lp / L));
      continue;
    }
    double lam = form.hecke.at(p);
    if (mode == ExplicitMode::leading) {
      for (int l = 1; l <= std::min(kmax, 2); ++l) {
        double lk = l == 1 ? lam : lam * lam - chi;
        primes.add(-2.0 * lk * lp / (std::pow(static_cast<double>(p), 0.5 * l) * L) * phi.phi_hat(l * lp / L));
      }
    } else {
      std::vector<double> s = densimpl::power_sums(lam, chi, kmax);
      for (int k = 1; k <= kmax; ++k)
        primes.add(-2.0 * s[k] * lp / (std::pow(static_cast<double>(p), 0.5 * k) * L) * phi.phi_hat(k * lp / L));
    }
  }

  if (mode == ExplicitMode::leading) {
    double t = std::abs(form.spectral_parameter());
    double main = 0.5 * phi.phi(0.0) +
                  phi.phi_hat(0.0) * (std::log(static_cast<double>(form.level.N)) + std::log(1.0 + t * t)) / L;
    rep.value = main + primes.value();
    double ll = std::max(1.0, std::log(L)) + (form.level.N > 2 ? std::log(std::log(double(form.level.N))) : 0.0);
    rep.error_estimate = leading_remainder_constant * std::fabs(phi.amplitude()) * ll / L + dropped;
  } else {
    double g = 0.0, ge = 0.0;
    densimpl::gamma_integral(phi, form, L, g, ge);
    rep.value = g + primes.value();
    rep.error_estimate = ge + dropped;
  }
  rep.terms = static_cast<std::size_t>(pmax_needed);
  return rep;
}

// ---------------------------------------------------------------------------
// family average

struct FamilyAverage {
  DensityReport report;
  double spectral_mass = 0.0;      // sum w_T(t_u)/||u||^2 over the records
  double missing_fraction = 0.0;   // 1 - spectral_mass/geometric mass, if given
  double truncation_error = 0.0;
};

// Avg(D_1; w_T) with weights w_T(t_u)/||u||^2.  If geometric_mass > 0 (the
// m = 1 Kuznetsov total) the weight of the absent forms is bounded through it.
inline FamilyAverage averaged_one_level(const std::vector<MaassFormRecord>& forms, const TestFunction& phi,
                                        const SpectralWeight& sw, double R, double geometric_mass = 0.0,
                                        ExplicitMode mode = ExplicitMode::exact, long p_max = 1000000) {
  require(!forms.empty(), errc::precondition, "averaged_one_level: empty family");
  const double N = static_cast<double>(forms.front().level.N);
  const double scale = sw.T() * sw.T() * N;
  require(R >= 0.5 * scale && R <= 2.0 * scale, errc::precondition,
          "averaged_one_level needs R within [0.5, 2] T^2 N");
  std::vector<double> d(forms.size()), e(forms.size()), w(forms.size());
  parallel_for(forms.size(), [&](std::size_t i) {
    DensityReport r = one_level_prime_side(forms[i], phi, R, p_max, mode);
    d[i] = r.value;
    e[i] = r.error_estimate;
    w[i] = spectral_weight_at(sw, forms[i]) / forms[i].normalized_norm_sq();
  });
  compensated_sum<double> num, den, err;
  for (std::size_t i = 0; i < forms.size(); ++i) {
    num.add(w[i] * d[i]);
    den.add(w[i]);
    err.add(std::fabs(w[i]) * e[i]);
  }
  FamilyAverage out;
  out.spectral_mass = den.value();
  require(out.spectral_mass != 0.0, errc::precondition, "averaged_one_level: total weight vanishes");
  out.report.value = num.value() / out.spectral_mass;
  out.report.error_estimate = err.value() / std::fabs(out.spectral_mass);
  out.report.R = R;
  out.report.weight_desc = phi.describe();
  out.report.ensemble_or_family = sw.describe();
  out.report.terms = forms.size();
  if (geometric_mass > 0.0) {
    out.missing_fraction = std::clamp(1.0 - out.spectral_mass / geometric_mass, 0.0, 1.0);
    // absent forms have |D_1| <= phi(0)/2 + phi^(0) log(N (1 + t^2))/log R + prime terms;
    // t is capped where the weight has decayed to 1e-8 of its total
    double tcap = kuzimpl::weight_cutoff(sw, 1e-8);
    const double L = std::log(R);
    double bound = 0.5 * phi.phi(0.0) + phi.phi_hat(0.0) * std::log(N * (1.0 + tcap * tcap)) / L;
    for (i64 p : primes_up_to(static_cast<i64>(std::exp(phi.eta() * L)))) {
      double lp = std::log(static_cast<double>(p));
      for (int k = 1; k * lp < phi.eta() * L; ++k)
        bound += 4.0 * std::pow(static_cast<double>(p), 7.0 * k / 64.0 - 0.5 * k) * lp / L *
                 std::fabs(phi.phi_hat(k * lp / L));
    }
    bound += 2.0;  // archimedean remainder beyond the log(1 + t^2) main term
    out.truncation_error = out.missing_fraction * (bound + std::fabs(out.report.value));
    out.report.error_estimate += out.truncation_error;
  }
  return out;
}

// ---------------------------------------------------------------------------
// two-level

// D_1(phi1) D_1(phi2) - 2 D_1(phi1 phi2) + [sign = -1] phi1(0) phi2(0)
inline DensityReport two_level(const ZeroList& zeros, int sign, const TestFunction& phi1, const TestFunction& phi2,
                               double R, const ZeroTailModel& tail = {}) {
  require(sign == 1 || sign == -1, errc::invalid_parameter, "sign must be +1 or -1");
  DensityReport a = one_level_from_zeros(zeros, R, phi1, tail);
  DensityReport b = one_level_from_zeros(zeros, R, phi2, tail);
  ProductFunction prod(phi1, phi2);
  DensityReport c = one_level_from_zeros(zeros, R, prod, tail);
  DensityReport rep;
  rep.statistic = Statistic::two_level;
  rep.R = R;
  rep.weight_desc = phi1.describe() + "," + phi2.describe();
  rep.ensemble_or_family = "zeros";
  rep.value = a.value * b.value - 2.0 * c.value + (sign == -1 ? phi1.phi(0.0) * phi2.phi(0.0) : 0.0);
  rep.error_estimate = std::fabs(a.value) * b.error_estimate + std::fabs(b.value) * a.error_estimate +
                       a.error_estimate * b.error_estimate + 2.0 * c.error_estimate;
  rep.relative_error_infinite = a.relative_error_infinite;
  rep.terms = a.terms;
  return rep;
}

// ---------------------------------------------------------------------------
// Katz-Sarnak kernels

enum class Group { U, Sp, SOeven, SOodd, SO };

inline const char* to_string(Group g) {
  switch (g) {
    case Group::U: return "U";
    case Group::Sp: return "Sp";
    case Group::SOeven: return "SOeven";
    case Group::SOodd: return "SOodd";
    case Group::SO: return "SO";
  }
  return "?";
}

// sin(pi y)/(pi y)
inline double sine_kernel(double y) {
  double u = pi * y;
  if (std::fabs(u) < 1e-4) return 1.0 - u * u / 6.0;
  return std::sin(u) / u;
}

// coefficient times delta(x_variable)
struct DeltaChannel {
  int variable = 0;
  double coefficient = 0.0;
};

struct KernelValue {
  double smooth = 0.0;
  std::vector<DeltaChannel> deltas;
};

namespace densimpl {

inline double k_eps(double x, double y, double e) { return sine_kernel(x - y) + e * sine_kernel(x + y); }

inline KernelValue det_kernel(const std::vector<double>& x, double e) {
  KernelValue v;
  if (x.size() == 1) {
    v.smooth = k_eps(x[0], x[0], e);
  } else {
    double a = k_eps(x[0], x[0], e), b = k_eps(x[0], x[1], e), c = k_eps(x[1], x[0], e),
           d = k_eps(x[1], x[1], e);
    v.smooth = a * d - b * c;
  }
  return v;
}

}  // namespace densimpl

inline KernelValue rmt_kernel(Group g, int n, const std::vector<double>& x) {
  require(n == 1 || n == 2, errc::invalid_parameter, "rmt_kernel supports n = 1, 2 only");
  require(static_cast<int>(x.size()) == n, errc::invalid_parameter, "rmt_kernel: x must have n entries");
  switch (g) {
    case Group::U: {
      KernelValue v;
      v.smooth = n == 1 ? 1.0 : 1.0 - std::pow(sine_kernel(x[0] - x[1]), 2);
      return v;
    }
    case Group::SOeven: return densimpl::det_kernel(x, 1.0);
    case Group::Sp: return densimpl::det_kernel(x, -1.0);
    case Group::SOodd: {
      KernelValue v = densimpl::det_kernel(x, -1.0);
      if (n == 1) {
        v.deltas.push_back({0, 1.0});
      } else {
        v.deltas.push_back({0, densimpl::k_eps(x[1], x[1], -1.0)});
        v.deltas.push_back({1, densimpl::k_eps(x[0], x[0], -1.0)});
      }
      return v;
    }
    case Group::SO: {
      KernelValue a = rmt_kernel(Group::SOeven, n, x), b = rmt_kernel(Group::SOodd, n, x);
      KernelValue v;
      v.smooth = 0.5 * (a.smooth + b.smooth);
      for (DeltaChannel d : b.deltas) v.deltas.push_back({d.variable, 0.5 * d.coefficient});
      return v;
    }
  }
  return {};
}

namespace densimpl {

template <class F>
double integrate_hat(const F& phi, double a, double b) {
  if (a >= b) return 0.0;
  QuadratureSpec qs;
  qs.abs_tol = 1e-13;
  qs.rel_tol = 1e-12;
  std::vector<double> pts{a};
  if (a < 0.0 && b > 0.0) pts.push_back(0.0);
  pts.push_back(b);
  return integrate([&](double y) { return phi.phi_hat(y); }, pts, qs).value.real();
}

}  // namespace densimpl

// int phi W_{1,G}
inline double predicted_one_level(Group g, const TestFunction& phi) {
  double c = std::min(1.0, phi.eta());
  switch (g) {
    case Group::U: return phi.phi_hat(0.0);
    case Group::SOeven: return phi.phi_hat(0.0) + 0.5 * densimpl::integrate_hat(phi, -c, c);
    case Group::Sp: return phi.phi_hat(0.0) - 0.5 * densimpl::integrate_hat(phi, -c, c);
    case Group::SOodd: return phi.phi_hat(0.0) - 0.5 * densimpl::integrate_hat(phi, -c, c) + phi.phi(0.0);
    case Group::SO: return phi.phi_hat(0.0) + 0.5 * phi.phi(0.0);
  }
  return 0.0;
}

// (phi1(0)/2 + phi1^(0))(phi2(0)/2 + phi2^(0)) + 2 int |x| phi1^ phi2^
//   - (1 - N(-1)) phi1(0) phi2(0) - 2 (phi1^ * phi2^)(0)
inline double predicted_two_level(const TestFunction& phi1, const TestFunction& phi2, double odd_fraction) {
  require(odd_fraction >= 0.0 && odd_fraction <= 1.0, errc::invalid_parameter, "odd_fraction must be in [0, 1]");
  double e = std::min(phi1.eta(), phi2.eta());
  QuadratureSpec qs;
  qs.abs_tol = 1e-14;
  qs.rel_tol = 1e-12;
  auto fx = [&](double y) { return 2.0 * y * phi1.phi_hat(y) * phi2.phi_hat(y); };  // |x| part, x >= 0 doubled
  auto fc = [&](double y) { return 2.0 * phi1.phi_hat(y) * phi2.phi_hat(y); };
  double ix = integrate(fx, 0.0, e, qs).value.real();
  double conv0 = integrate(fc, 0.0, e, qs).value.real();
  double a = 0.5 * phi1.phi(0.0) + phi1.phi_hat(0.0);
  double b = 0.5 * phi2.phi(0.0) + phi2.phi_hat(0.0);
  return a * b + 2.0 * ix - (1.0 - odd_fraction) * phi1.phi(0.0) * phi2.phi(0.0) - 2.0 * conv0;
}

}  // namespace maassden
