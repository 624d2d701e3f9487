#pragma once

// Geometric side of the Kuznetsov formula, the contour identity for the
// Bessel transform, and the spectral side from ingested records.

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "arith.hpp"
#include "core.hpp"
#include "dd.hpp"
#include "quadrature.hpp"
#include "records.hpp"
#include "specfun.hpp"
#include "weights.hpp"

namespace maassden {

// Constants of the contour identity
//   int_R J_{2ir}(X) r w_T(r)/cosh(pi r) dr = c1 (residues + bracket).
// The defaults are the hand residue values; acceptance pins them numerically.
enum class BracketSign { derived, alternating };

struct ContourConstants {
  cplx c1{0.0, -1.0};
  double c2 = -2.0;
  // derived: (-1)^k / cos(pi k T) from the poles of 1/sinh(pi r/T) against
  // 1/cosh(pi r) (identically 1 for odd T); alternating: plain (-1)^k
  BracketSign bracket_sign = BracketSign::derived;
};

enum class Precision { automatic, double_only, double_double };

struct ContourOptions {
  double rel_target = 1e-10;   // quadrature target relative to |c1 (res + bracket)|
  double defect_tol = 1e-7;
  Precision precision = Precision::automatic;
  ContourConstants constants{};
};

struct ContourCheck {
  double X = 0.0;
  double T = 0.0;
  Family family = Family::HT;
  cplx integral_side;
  double integral_error = 0.0;
  cplx residue_side;
  std::optional<cplx> bracket_term;
  cplx c1;
  double defect = 0.0;
  double tolerance = 0.0;
  bool passed = false;
  bool used_dd = false;
  long nodes = 0;
  double r_max = 0.0;
  int k_truncation = 0;
};

namespace contourimpl {

inline int residue_kmax(double X, double T) {
  return static_cast<int>(std::max(4.0 * T, std::ceil(std::exp(1.0) * X) + 40.0));
}

// w_T((k+1/2) i), k = 0..kmax
inline std::vector<double> residue_weights(const SpectralWeight& sw, int kmax) {
  std::vector<double> w(kmax + 1);
  if (sw.family() == Family::hT) {
    double twoT = 2.0 * sw.T();
    require(std::fabs(twoT - std::round(twoT)) > 1e-9 || static_cast<long>(std::round(twoT)) % 2 == 0,
            errc::pole, "2T is an odd integer: residue poles collide with the poles of h_T");
  }
  for (int k = 0; k <= kmax; ++k) {
    double a = k + 0.5;
    if (sw.family() == Family::HT && a / sw.T() > sw.base().imag_cap()) {
      w.resize(k);
      break;
    }
    w[k] = sw.eval_imag_axis(a);
  }
  return w;
}

inline double bracket_sign_factor(int k, double T, BracketSign s) {
  double alt = (k % 2 == 0) ? 1.0 : -1.0;
  if (s == BracketSign::alternating) return alt;
  return alt / std::cos(pi * k * T);
}

// J_nu(X) for real nu >= 0 by the power series
inline double bessel_j_real_order(double nu, double X) {
  double fl = std::floor(nu);
  if (nu == fl && nu < 1e6) return bessel_j_int(static_cast<int>(fl), X);
  double x = 0.5 * X;
  double lt = nu * std::log(x) - lgamma_complex(cplx(nu + 1.0, 0.0)).real();
  double t = 1.0, s = 1.0;
  for (int m = 1; m < 500; ++m) {
    t *= -x * x / (m * (m + nu));
    s += t;
    if (std::fabs(t) < 1e-17 * std::fabs(s) && x * x < m * (m + nu)) break;
  }
  return std::exp(lt) * s;
}

}  // namespace contourimpl

// Residue side sum_k (-1)^k J_{2k+1}(X)(2k+1) w_T((k+1/2)i) and bracket
// c2 T^2 sum_k sigma_k J_{2kT}(X) k^2 h(k).  Any X > 0: the residue theorem
// behind the identity does not use X <= T.
struct ResidueTerms {
  double residue = 0.0;
  double bracket = 0.0;
  int k_truncation = 0;
};

class ResidueEvaluator {
 public:
  explicit ResidueEvaluator(const SpectralWeight& sw, double X_max, ContourConstants k = {})
      : sw_(sw), constants_(k) {
    kmax_ = contourimpl::residue_kmax(X_max, sw.T());
    w_ = contourimpl::residue_weights(sw, kmax_);
    kmax_ = static_cast<int>(w_.size()) - 1;
    if (sw.family() == Family::hT) {
      int kb = 1;
      while (kb <= 64) {
        hk_.push_back(sw.base().eval_real(static_cast<double>(kb)));
        ++kb;
      }
    }
  }

  ResidueTerms operator()(double X) const {
    require(X > 0.0, errc::precondition, "residue sum needs X > 0");
    ResidueTerms out;
    std::vector<double> J = bessel_j_seq(2 * kmax_ + 1, X);
    compensated_sum<double> s;
    int used = 0;
    for (int k = 0; k <= kmax_; ++k) {
      double term = J[2 * k + 1] * (2.0 * k + 1.0) * w_[k];
      s.add((k % 2 == 0) ? term : -term);
      used = k;
      if (k > X && std::fabs(term) <= 1e-18 * std::fabs(s.value())) break;
    }
    out.residue = s.value();
    out.k_truncation = used;
    if (sw_.family() == Family::hT) {
      double T = sw_.T();
      compensated_sum<double> b;
      for (std::size_t k = 1; k <= hk_.size(); ++k) {
        double nu = 2.0 * k * T;
        double j = contourimpl::bessel_j_real_order(nu, X);
        double term = contourimpl::bracket_sign_factor(static_cast<int>(k), T, constants_.bracket_sign) *
                      j * static_cast<double>(k * k) * hk_[k - 1];
        b.add(term);
        if (j == 0.0 || std::fabs(term) <= 1e-18 * std::fabs(b.value()) + 1e-300) break;
      }
      out.bracket = constants_.c2 * T * T * b.value();
    }
    return out;
  }

  const std::vector<double>& weights() const { return w_; }
  int kmax() const { return kmax_; }

 private:
  const SpectralWeight& sw_;
  ContourConstants constants_;
  int kmax_ = 0;
  std::vector<double> w_;
  std::vector<double> hk_;
};

// ---------------------------------------------------------------------------
// integral side by fixed composite Gauss-Legendre, all X in one pass

namespace contourimpl {

// |r w_T(r)| * 2/sqrt(4 pi r) bounds the integrand for large r
inline double integrand_envelope(const SpectralWeight& sw, double r) {
  double w = std::fabs(sw.eval_real(r));
  return r * w / std::sqrt(pi * std::max(r, 1.0)) * 1.5;
}

// smallest scanned r beyond which the tail estimate drops below abs_tol
inline double truncation_point(const SpectralWeight& sw, double abs_tol) {
  double T = sw.T();
  double step = 0.25 * T;
  int below = 0;
  double r = step;
  double decay_len = T;  // conservative length scale for the remaining tail
  for (int it = 0; it < 40000; ++it, r += step) {
    double e = integrand_envelope(sw, r);
    // a window of consecutive small values guards against zeros of w
    if (e * decay_len * 8.0 < abs_tol)
      ++below;
    else
      below = 0;
    if (below >= 12) return r;
    if (sw.family() == Family::HT && r / T > 4000.0) break;
  }
  throw error(errc::truncation, "contour integral: weight does not decay below target");
}

template <class R>
struct bessel_integrand {
  const SpectralWeight& sw;
  std::vector<R> lx;   // log(X/2)
  std::vector<R> q;    // -X^2/4
  std::vector<double> qd;

  explicit bessel_integrand(const SpectralWeight& s, const std::vector<double>& Xs) : sw(s) {
    for (double X : Xs) {
      lx.push_back(num::log(R(X) * R(0.5)));
      q.push_back(-(R(X) * R(X)) * R(0.25));
      qd.push_back(0.25 * X * X);
    }
  }

  // Im[J_{2ir}(X)/cosh(pi r)] r w_T(r) for each X; also |.| for the L1 norm
  void operator()(R r, R* out, double* mag) const {
    const std::size_t nx = lx.size();
    if (r == R(0.0)) {
      for (std::size_t j = 0; j < nx; ++j) out[j] = R(0.0), mag[j] = 0.0;
      return;
    }
    R rw = r * sw.eval_real(r);
    Cx<R> lg = lgamma_stirling(Cx<R>(R(1.0), R(2.0) * r));
    R a = num::pi<R>() * r;
    R lc = a - num::log(R(2.0)) + num::log1p(num::exp(-(a + a)));
    R two_r = R(2.0) * r;
    double rd = num::to_double(r);
    const R eps = num::epsilon<R>();
    for (std::size_t j = 0; j < nx; ++j) {
      Cx<R> e = exp(Cx<R>(-lg.re - lc, two_r * lx[j] - lg.im));
      Cx<R> t(R(1.0)), s(R(1.0));
      for (int m = 1; m < 400; ++m) {
        R md(static_cast<double>(m));
        t = t * q[j] / Cx<R>(md * md, md * two_r);
        s = s + t;
        double ta = num::to_double(num::abs(t.re)) + num::to_double(num::abs(t.im));
        double sa = num::to_double(num::abs(s.re)) + num::to_double(num::abs(s.im));
        if (qd[j] < m * std::hypot(double(m), 2.0 * rd) * 0.5 && ta <= num::to_double(eps) * 0.1 * sa) break;
      }
      Cx<R> v = e * s;
      out[j] = rw * v.im;
      mag[j] = std::fabs(num::to_double(rw)) * num::to_double(abs(v));
    }
  }
};

struct integral_estimate {
  std::vector<double> value;   // int_0^{r_max} Im[...] dr, so I = 2i value
  std::vector<double> error;
  std::vector<double> l1;
  long nodes = 0;
};

template <class R>
integral_estimate integrate_batch(const SpectralWeight& sw, const std::vector<double>& Xs, double r_max,
                                  double width_scale) {
  const std::size_t nx = Xs.size();
  double xmin = *std::min_element(Xs.begin(), Xs.end());
  std::vector<double> edges{0.0};
  while (edges.back() < r_max) {
    double r = edges.back();
    double w = 0.5;
    if (r >= 2.0) {
      double omega = 2.0 * std::log(4.0 * r / xmin);
      w = std::min(1.0, 16.0 / std::max(omega, 1.0));
    }
    edges.push_back(std::min(r_max, r + w * width_scale));
  }
  static const GaussLegendre<R> g32(32), g24(24);
  bessel_integrand<R> f(sw, Xs);
  std::size_t np = edges.size() - 1;
  std::vector<std::vector<R>> v32(np, std::vector<R>(nx)), v24(np, std::vector<R>(nx));
  std::vector<std::vector<double>> m32(np, std::vector<double>(nx));
  parallel_for(np, [&](std::size_t p) {
    R a(edges[p]), b(edges[p + 1]);
    R c = (a + b) * R(0.5), h = (b - a) * R(0.5);
    std::vector<R> out(nx);
    std::vector<double> mag(nx);
    std::vector<R> s32(nx, R(0.0)), s24(nx, R(0.0));
    std::vector<double> l1(nx, 0.0);
    for (std::size_t i = 0; i < g32.x.size(); ++i) {
      f(c + h * g32.x[i], out.data(), mag.data());
      for (std::size_t j = 0; j < nx; ++j) {
        s32[j] = s32[j] + g32.w[i] * out[j];
        l1[j] += num::to_double(g32.w[i]) * mag[j];
      }
    }
    for (std::size_t i = 0; i < g24.x.size(); ++i) {
      f(c + h * g24.x[i], out.data(), mag.data());
      for (std::size_t j = 0; j < nx; ++j) s24[j] = s24[j] + g24.w[i] * out[j];
    }
    for (std::size_t j = 0; j < nx; ++j) {
      v32[p][j] = s32[j] * h;
      v24[p][j] = s24[j] * h;
      m32[p][j] = l1[j] * num::to_double(h);
    }
  });
  integral_estimate est;
  est.value.resize(nx);
  est.error.resize(nx);
  est.l1.resize(nx);
  est.nodes = static_cast<long>(np * 56);
  for (std::size_t j = 0; j < nx; ++j) {
    R tot(0.0);
    double err = 0.0, l1 = 0.0;
    for (std::size_t p = 0; p < np; ++p) {
      tot = tot + v32[p][j];
      // the 24-point rule is much less accurate; its gap overstates the
      // 32-point error, which is what we want from a bound
      err += std::fabs(num::to_double(v32[p][j] - v24[p][j]));
      l1 += m32[p][j];
    }
    est.value[j] = num::to_double(tot);
    est.error[j] = err + 8.0 * num::to_double(num::epsilon<R>()) * l1;
    est.l1[j] = l1;
  }
  return est;
}

}  // namespace contourimpl

// int_R J_{2ir}(X) r w_T(r) / cosh(pi r) dr for several X; no hypothesis on X
struct BesselIntegral {
  cplx value;
  double error = 0.0;
  bool used_dd = false;
  long nodes = 0;
  double r_max = 0.0;
};

inline std::vector<BesselIntegral> bessel_transform_quadrature(const SpectralWeight& sw,
                                                               const std::vector<double>& Xs,
                                                               const std::vector<double>& abs_targets,
                                                               Precision prec = Precision::automatic) {
  require(!Xs.empty() && Xs.size() == abs_targets.size(), errc::invalid_parameter,
          "bessel_transform_quadrature: one target per X");
  for (double X : Xs) require(X > 0.0, errc::precondition, "bessel transform needs X > 0");
  double tmin = *std::min_element(abs_targets.begin(), abs_targets.end());
  double r_max = contourimpl::truncation_point(sw, 0.5 * tmin);
  std::vector<BesselIntegral> out(Xs.size());
  std::vector<std::size_t> need_dd;
  if (prec != Precision::double_double) {
    auto est = contourimpl::integrate_batch<double>(sw, Xs, r_max, 1.0);
    for (std::size_t j = 0; j < Xs.size(); ++j) {
      out[j].value = cplx(0.0, 2.0 * est.value[j]);
      out[j].error = 2.0 * est.error[j];
      out[j].nodes = est.nodes;
      out[j].r_max = r_max;
      if (out[j].error > abs_targets[j]) need_dd.push_back(j);
    }
    if (prec == Precision::double_only) need_dd.clear();
  } else {
    for (std::size_t j = 0; j < Xs.size(); ++j) need_dd.push_back(j);
  }
  if (!need_dd.empty()) {
    std::vector<double> xs;
    for (std::size_t j : need_dd) xs.push_back(Xs[j]);
    auto est = contourimpl::integrate_batch<dd>(sw, xs, r_max, 1.0);
    for (std::size_t i = 0; i < need_dd.size(); ++i) {
      std::size_t j = need_dd[i];
      out[j].value = cplx(0.0, 2.0 * est.value[i]);
      out[j].error = 2.0 * est.error[i];
      out[j].nodes += est.nodes;
      out[j].r_max = r_max;
      out[j].used_dd = true;
    }
  }
  return out;
}

inline void check_contour_hypotheses(double X, const SpectralWeight& sw) {
  if (!(X > 0.0)) throw error(errc::hypothesis, "contour identity needs X > 0");
  if (!sw.T_is_odd_integer()) throw error(errc::hypothesis, "contour identity needs T to be an odd integer");
  if (X > sw.T()) throw error(errc::hypothesis, "contour identity needs X <= T");
  if (sw.family() == Family::hT && sw.base().zero_order_used() < 8)
    throw error(errc::hypothesis, "family hT needs a zero of order >= 8 at 0");
}

inline std::vector<ContourCheck> contour_transform(const std::vector<double>& Xs, const SpectralWeight& sw,
                                                   const ContourOptions& opt = {}) {
  for (double X : Xs) check_contour_hypotheses(X, sw);
  double xmax = *std::max_element(Xs.begin(), Xs.end());
  ResidueEvaluator res(sw, xmax, opt.constants);
  std::vector<ContourCheck> out(Xs.size());
  std::vector<double> targets;
  for (std::size_t j = 0; j < Xs.size(); ++j) {
    ResidueTerms rt = res(Xs[j]);
    ContourCheck& c = out[j];
    c.X = Xs[j];
    c.T = sw.T();
    c.family = sw.family();
    c.residue_side = rt.residue;
    if (sw.family() == Family::hT) c.bracket_term = cplx(rt.bracket, 0.0);
    c.c1 = opt.constants.c1;
    c.k_truncation = rt.k_truncation;
    c.tolerance = opt.defect_tol;
    double pred = std::abs(opt.constants.c1 * (rt.residue + rt.bracket));
    targets.push_back(opt.rel_target * std::max(pred, 1e-14));
  }
  auto ints = bessel_transform_quadrature(sw, Xs, targets, opt.precision);
  for (std::size_t j = 0; j < Xs.size(); ++j) {
    ContourCheck& c = out[j];
    c.integral_side = ints[j].value;
    c.integral_error = ints[j].error;
    c.used_dd = ints[j].used_dd;
    c.nodes = ints[j].nodes;
    c.r_max = ints[j].r_max;
    cplx rhs = c.c1 * (c.residue_side + c.bracket_term.value_or(0.0));
    c.defect = std::abs(c.integral_side - rhs) / std::max(std::abs(c.integral_side), 1e-14);
    c.passed = c.defect < c.tolerance;
  }
  return out;
}

inline ContourCheck contour_transform(double X, const SpectralWeight& sw, const ContourOptions& opt = {}) {
  return contour_transform(std::vector<double>{X}, sw, opt).front();
}

// ---------------------------------------------------------------------------
// geometric side

namespace kuzimpl {

// r beyond which |w_T| stays below tol (scan on a grid of T/4 steps)
inline double weight_cutoff(const SpectralWeight& sw, double tol) {
  double T = sw.T(), step = 0.25 * T;
  int below = 0;
  for (double r = step; r < 1e7; r += step) {
    double v = std::fabs(sw.eval_real(r)) * r;
    below = (v * T < tol) ? below + 1 : 0;
    if (below >= 12) return r;
    if (sw.family() == Family::HT && r / T > 4000.0) return r;
  }
  return 1e7;
}

inline std::vector<double> panels(double a, double b, double width) {
  std::vector<double> p{a};
  int n = std::max(1, static_cast<int>(std::ceil((b - a) / width)));
  for (int i = 1; i <= n; ++i) p.push_back(a + (b - a) * i / n);
  return p;
}

}  // namespace kuzimpl

struct GeometricBreakdown {
  double diagonal = 0.0;
  cplx eisenstein;
  cplx bessel_kloosterman;
  double truncation_error_bound = 0.0;
  long c_truncation = 0;
  int k_truncation = 0;
  cplx total;
  double diagonal_ratio = 0.0;   // diagonal / (T^2 nu(N))
  bool diagonal_dominates = false;  // |eis| + |bk| <= diagonal/2
};

inline double diagonal_term(i64 m, const Level& level, const SpectralWeight& sw, const QuadratureSpec& qs = {}) {
  if (m != 1) return 0.0;
  double rmax = kuzimpl::weight_cutoff(sw, qs.abs_tol * 1e-3);
  auto f = [&](double r) { return r * sw.eval_real(r) * std::tanh(pi * r); };
  QuadratureSpec q = qs;
  q.max_subdivisions = std::max(q.max_subdivisions, 20000);
  q.rel_tol = std::max(q.rel_tol, 1e-13);
  double I = integrate(f, kuzimpl::panels(0.0, rmax, 0.5 * sw.T()), q).value.real();
  return static_cast<double>(nu(level)) / (pi * pi) * 2.0 * I;
}

inline cplx eisenstein_term(i64 m, const Level& level, const SpectralWeight& sw, const QuadratureSpec& qs = {}) {
  require(m >= 1, errc::invalid_parameter, "eisenstein_term: m must be >= 1");
  require(gcd(m, level.N) == 1, errc::precondition, "eisenstein_term requires gcd(m, N) = 1");
  double rmax = kuzimpl::weight_cutoff(sw, qs.abs_tol * 1e-3);
  const std::vector<EisensteinIndex> idxs = eisenstein_indices(level);
  std::vector<double> nrm;
  for (const EisensteinIndex& idx : idxs) nrm.push_back(eisenstein_norm_sq(idx).value());
  const double lm = std::log(static_cast<double>(m));
  // integrand at -r is the conjugate of the integrand at r
  auto f = [&](double r) -> cplx {
    if (r == 0.0) return 0.0;  // 1/|zeta(1+2ir)|^2 vanishes at the pole
    cplx acc = 0.0;
    for (std::size_t i = 0; i < idxs.size(); ++i)
      acc += sigma_tilde(m, idxs[i], r) * std::conj(sigma_tilde(1, idxs[i], r)) / nrm[i];
    cplx z = zeta(cplx(1.0, 2.0 * r));
    return acc * std::exp(cplx(0.0, r * lm)) * sw.eval_real(r) / std::norm(z);
  };
  QuadratureSpec q = qs;
  q.max_subdivisions = std::max(q.max_subdivisions, 20000);
  q.rel_tol = std::max(q.rel_tol, 1e-13);
  cplx I = integrate(f, kuzimpl::panels(0.0, rmax, 0.5 * sw.T()), q).value;
  cplx total = I + std::conj(I);
  return -total / pi;
}

// tau(n) <= divisor_constant * n^{1/4}
inline double divisor_constant() {
  double c = 1.0;
  for (i64 p : primes_up_to(16)) {
    double best = 1.0;
    for (int k = 1; k < 64; ++k) best = std::max(best, (k + 1.0) / std::pow(static_cast<double>(p), k / 4.0));
    c *= best;
  }
  return c;
}

struct BesselKloostermanResult {
  cplx value;
  double tail_bound = 0.0;
  long c_max = 0;
  int k_truncation = 0;
  std::vector<cplx> per_c;  // summand for c = 1..c_max
};

// (2i/pi)(nu/N) sum_{c <= c_max} S(m,1;Nc)/c int J_{2ir}(4 pi sqrt(m)/(Nc)) r w_T(r)/cosh(pi r) dr
// with the inner integral from the residue identity.
inline BesselKloostermanResult bessel_kloosterman_term(i64 m, const Level& level, const SpectralWeight& sw,
                                                       long c_max, const ContourConstants& k = {}) {
  require(m >= 1, errc::invalid_parameter, "bessel_kloosterman_term: m must be >= 1");
  require(gcd(m, level.N) == 1, errc::precondition, "bessel_kloosterman_term requires gcd(m, N) = 1");
  require(c_max >= 1, errc::precondition, "c_max must be >= 1");
  const double N = static_cast<double>(level.N);
  const double x1 = 4.0 * pi * std::sqrt(static_cast<double>(m)) / N;
  ResidueEvaluator res(sw, x1, k);
  BesselKloostermanResult out;
  out.c_max = c_max;
  out.per_c.resize(static_cast<std::size_t>(c_max));
  std::vector<int> ktr(out.per_c.size());
  const cplx pref = cplx(0.0, 2.0 / pi) * (static_cast<double>(nu(level)) / N);
  parallel_for(out.per_c.size(), [&](std::size_t i) {
    long c = static_cast<long>(i) + 1;
    double X = x1 / c;
    ResidueTerms rt = res(X);
    ktr[i] = rt.k_truncation;
    double S = kloosterman(m, 1, level.N * c);
    out.per_c[i] = pref * (S / c) * (k.c1 * (rt.residue + rt.bracket));
  });
  out.value = pairwise_sum(out.per_c);
  out.k_truncation = *std::max_element(ktr.begin(), ktr.end());

  // tail: |S| <= tau(Nc) sqrt(Nc), |J_n(X)| <= (X/2)^n/n!, so
  // |I(X_c)| <= (X_c/2) A with A evaluated at X_{c_max+1} (monotone in X)
  double Xc = x1 / (c_max + 1.0);
  const auto& w = res.weights();
  double A = 0.0, pw = 1.0, fact = 1.0;
  for (std::size_t kk = 0; kk < w.size(); ++kk) {
    // (X/2)^{2k}/(2k+1)! * (2k+1) |w|
    A += pw / fact * (2.0 * kk + 1.0) * std::fabs(w[kk]);
    pw *= (Xc / 2) * (Xc / 2);
    fact *= (2.0 * kk + 2.0) * (2.0 * kk + 3.0);
  }
  if (sw.family() == Family::hT) {
    // bracket: |J_{2kT}(X)| <= (X/2)^{2kT}/(2kT)!, k = 1 dominates for X < 1
    double T = sw.T();
    double jb = std::exp(2 * T * std::log(Xc / 2) - std::lgamma(2 * T + 1));
    A += std::fabs(k.c2) * T * T * 2.0 * jb / (Xc / 2) * std::fabs(sw.base().eval_real(1.0));
  }
  double absc1 = std::abs(k.c1);
  compensated_sum<double> tail;
  long c2 = std::max<long>(64 * c_max, 100000);
  for (long c = c_max + 1; c <= c2; ++c) {
    double Xcc = x1 / c;
    tail.add(tau(level.N * c) * std::sqrt(N * c) / c * (Xcc / 2.0) * A);
  }
  double C = divisor_constant();
  double tail_rest = C * std::pow(N, 0.75) * (x1 / 2.0) * A * 4.0 * std::pow(static_cast<double>(c2), -0.25);
  out.tail_bound = std::abs(pref) * absc1 * (tail.value() + tail_rest);
  return out;
}

inline GeometricBreakdown total_mass(const Level& level, const SpectralWeight& sw, long c_max,
                                     const QuadratureSpec& qs = {}, const ContourConstants& k = {}) {
  GeometricBreakdown g;
  g.diagonal = diagonal_term(1, level, sw, qs);
  g.eisenstein = eisenstein_term(1, level, sw, qs);
  BesselKloostermanResult bk = bessel_kloosterman_term(1, level, sw, c_max, k);
  g.bessel_kloosterman = bk.value;
  g.truncation_error_bound = bk.tail_bound;
  g.c_truncation = c_max;
  g.k_truncation = bk.k_truncation;
  g.total = g.diagonal + g.eisenstein + g.bessel_kloosterman;
  g.diagonal_ratio = g.diagonal / (sw.T() * sw.T() * static_cast<double>(nu(level)));
  g.diagonal_dominates = std::abs(g.eisenstein) + std::abs(g.bessel_kloosterman) <= 0.5 * g.diagonal;
  return g;
}

// ---------------------------------------------------------------------------
// spectral side

struct SpectralSide {
  double value = 0.0;
  std::size_t forms = 0;
  bool incomplete = true;  // provided records are a truncation of the basis
};

inline double spectral_weight_at(const SpectralWeight& sw, const MaassFormRecord& f) {
  if (f.t_imaginary) return sw.eval_imag_axis(f.t);
  return sw.eval_real(f.t);
}

inline SpectralSide spectral_side(const std::vector<MaassFormRecord>& forms, i64 m, const SpectralWeight& sw) {
  SpectralSide out;
  if (forms.empty()) return out;
  i64 N = forms.front().level.N;
  compensated_sum<double> s;
  for (const MaassFormRecord& f : forms) {
    require(f.level.N == N, errc::precondition, "spectral_side: records must share one level");
    s.add(f.lambda(m) / f.normalized_norm_sq() * spectral_weight_at(sw, f));
  }
  out.value = s.value();
  out.forms = forms.size();
  return out;
}

}  // namespace maassden
