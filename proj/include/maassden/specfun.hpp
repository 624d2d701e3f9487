#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <vector>

#include "core.hpp"
#include "dd.hpp"
#include "quadrature.hpp"

namespace maassden {

// B_{2k} = bern_num[k] / bern_den[k], k = 0..16
inline constexpr std::array<double, 17> bern_num = {
    1.0,           1.0,       -1.0,        1.0,          -1.0,
    5.0,           -691.0,    7.0,         -3617.0,      43867.0,
    -174611.0,     854513.0,  -236364091.0, 8553103.0,   -23749461029.0,
    8615841276005.0, -7709321041217.0};
inline constexpr std::array<double, 17> bern_den = {1.0,   6.0,    30.0,  42.0,   30.0, 66.0,
                                                    2730.0, 6.0,   510.0, 798.0,  330.0, 138.0,
                                                    2730.0, 6.0,   870.0, 14322.0, 510.0};

inline double bernoulli_even(int k) {
  require(k >= 0 && k <= 16, errc::invalid_parameter, "bernoulli_even: k out of table");
  return bern_num[k] / bern_den[k];
}

// Bernoulli numbers B_n for any n >= 0 (B_1 = -1/2), via the Akiyama-Tanigawa
// recurrence for n beyond the table.
inline double bernoulli(int n) {
  require(n >= 0, errc::invalid_parameter, "bernoulli: n < 0");
  if (n == 1) return -0.5;
  if (n % 2 == 1) return 0.0;
  if (n / 2 <= 16) return bernoulli_even(n / 2);
  std::vector<long double> a(n + 1);
  for (int m = 0; m <= n; ++m) {
    a[m] = 1.0L / (m + 1);
    for (int j = m; j >= 1; --j) a[j - 1] = j * (a[j - 1] - a[j]);
  }
  return static_cast<double>(a[0]);
}

// B_n(x) from the explicit sum over binomials
inline double bernoulli_poly(int n, double x) {
  double s = 0.0, binom = 1.0;
  for (int k = 0; k <= n; ++k) {
    s += binom * bernoulli(k) * std::pow(x, n - k);
    binom = binom * (n - k) / (k + 1);
  }
  return s;
}

// ---------------------------------------------------------------------------
// log-gamma by Stirling with upward shift; generic in the real type

template <class R>
Cx<R> lgamma_stirling(Cx<R> z) {
  constexpr bool is_dd = std::is_same_v<R, dd>;
  const double rmin = is_dd ? 24.0 : 15.0;
  const int terms = is_dd ? 16 : 9;
  Cx<R> prod(R(1.0));
  bool shifted = false;
  Cx<R> w = z;
  while (std::hypot(num::to_double(w.re), num::to_double(w.im)) < rmin ||
         num::to_double(w.re) < 0.5) {
    prod = prod * w;
    w = w + R(1.0);
    shifted = true;
  }
  Cx<R> lw = log(w);
  Cx<R> res = (w - R(0.5)) * lw - w + R(0.5) * num::log(R(2.0) * num::pi<R>());
  Cx<R> winv = Cx<R>(R(1.0)) / w;
  Cx<R> w2 = winv * winv;
  Cx<R> p = winv;
  for (int k = 1; k <= terms; ++k) {
    R coef = R(bern_num[k]) / R(bern_den[k] * (2.0 * k) * (2.0 * k - 1.0));
    res = res + p * coef;
    p = p * w2;
  }
  if (shifted) res = res - log(prod);
  return res;
}

inline cplx lgamma_complex(cplx z) {
  require(!(z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::floor(z.real())),
          errc::pole, "lgamma at non-positive integer");
  if (z.real() < 0.5) {
    // reflection; branch of the log is immaterial for exponentiation
    cplx s = std::sin(pi * z);
    Cx<double> l = lgamma_stirling(Cx<double>(1.0 - z.real(), -z.imag()));
    return std::log(pi) - std::log(s) - cplx(l.re, l.im);
  }
  Cx<double> l = lgamma_stirling(Cx<double>(z.real(), z.imag()));
  return {l.re, l.im};
}

// Complex gamma by the Lanczos approximation (g = 7, 9 terms) with reflection.
inline cplx gamma_complex(cplx z) {
  require(!(z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::floor(z.real())),
          errc::pole, "gamma at non-positive integer");
  cplx lg = lgamma_complex(z);
  if (lg.real() > 709.0) throw error(errc::overflow, "gamma_complex: |Gamma(z)| exceeds double range");
  static constexpr std::array<double, 9> p = {
      0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
      771.32342877765313,   -176.61502916214059,   12.507343278686905,
      -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};
  if (z.real() < 0.5) return pi / (std::sin(pi * z) * gamma_complex(1.0 - z));
  z -= 1.0;
  cplx x = p[0];
  for (int i = 1; i < 9; ++i) x += p[i] / (z + static_cast<double>(i));
  cplx t = z + 7.5;
  return std::sqrt(two_pi) * std::pow(t, z + 0.5) * std::exp(-t) * x;
}

inline cplx digamma(cplx z) {
  require(!(z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::floor(z.real())),
          errc::pole, "digamma at non-positive integer");
  if (z.real() < 0.5) return digamma(1.0 - z) - pi / std::tan(pi * z);
  cplx acc = 0.0;
  while (std::abs(z) < 15.0) {
    acc -= 1.0 / z;
    z += 1.0;
  }
  cplx zi = 1.0 / z, zi2 = zi * zi, p = zi2;
  cplx s = std::log(z) - 0.5 * zi;
  for (int k = 1; k <= 9; ++k) {
    s -= bernoulli_even(k) / (2.0 * k) * p;
    p *= zi2;
  }
  return s + acc;
}

namespace zetaimpl {
inline const std::vector<double>& log_table() {
  static const std::vector<double> t = [] {
    std::vector<double> v(200001);
    for (std::size_t k = 1; k < v.size(); ++k) v[k] = std::log(static_cast<double>(k));
    return v;
  }();
  return t;
}
}  // namespace zetaimpl

// Riemann zeta, Euler-Maclaurin; s != 1.  With 16 correction terms the
// remainder is about (|s|/(2 pi n))^33, so n ~ 0.4|s| is enough.
inline cplx zeta(cplx s) {
  require(!(s.real() == 1.0 && s.imag() == 0.0), errc::pole, "zeta pole at s = 1");
  require(s.real() > -20.0, errc::invalid_parameter, "zeta: Re s too negative for this routine");
  const int n = 20 + static_cast<int>(std::ceil(0.4 * std::abs(s)));
  const auto& lt = zetaimpl::log_table();
  compensated_sum<cplx> acc;
  for (int k = n - 1; k >= 1; --k) {
    double l = k < static_cast<int>(lt.size()) ? lt[k] : std::log(static_cast<double>(k));
    acc.add(std::polar(std::exp(-s.real() * l), -s.imag() * l));
  }
  cplx nl = std::log(static_cast<double>(n));
  cplx ns = std::exp(-s * nl);
  acc.add(ns * static_cast<double>(n) / (s - 1.0));
  acc.add(0.5 * ns);
  // sum_k B_2k/(2k)! s(s+1)...(s+2k-2) n^{-s-2k+1}
  cplx rising = s;
  cplx npow = ns / static_cast<double>(n);
  double fact = 2.0;
  for (int k = 1; k <= 16; ++k) {
    cplx term = bernoulli_even(k) / fact * rising * npow;
    acc.add(term);
    if (std::abs(term) < 1e-18 * std::abs(acc.value())) break;
    rising *= (s + (2.0 * k - 1.0)) * (s + 2.0 * k);
    npow /= static_cast<double>(n) * n;
    fact *= (2.0 * k + 1.0) * (2.0 * k + 2.0);
  }
  return acc.value();
}

// ---------------------------------------------------------------------------
// Bessel J of integer order

template <class R>
R bessel_j_series(int n, R X) {
  R x = X * R(0.5);
  R x2 = -(x * x);
  R t(1.0);
  for (int k = 1; k <= n; ++k) t = t * x / R(static_cast<double>(k));
  R s = t;
  for (int m = 1; m < 1000; ++m) {
    t = t * x2 / R(static_cast<double>(m) * (m + n));
    s = s + t;
    if (num::abs(t) <= num::abs(s) * num::epsilon<R>() * 0.25 &&
        num::to_double(x * x) < (m + 1.0) * (m + 1.0 + n))
      break;
  }
  return s;
}

// J_0..J_nmax(X) by Miller's backward recurrence normalised with
// J_0 + 2 sum J_2k = 1.
inline std::vector<double> bessel_j_seq(int nmax, double X) {
  require(nmax >= 0, errc::invalid_parameter, "bessel_j_seq: nmax < 0");
  std::vector<double> out(nmax + 1, 0.0);
  if (X == 0.0) {
    out[0] = 1.0;
    return out;
  }
  double ax = std::fabs(X);
  if (ax < 1.0) {
    for (int n = 0; n <= nmax; ++n) {
      out[n] = bessel_j_series(n, ax);
      if (out[n] == 0.0) break;
    }
  } else {
    int top = std::max(nmax, static_cast<int>(ax)) + 30 +
              static_cast<int>(std::sqrt(60.0 * std::max<double>(nmax, ax)));
    top += top % 2;
    std::vector<double> j(top + 2, 0.0);
    j[top + 1] = 0.0;
    j[top] = 1e-300;
    double norm = 0.0;
    for (int k = top; k >= 1; --k) {
      j[k - 1] = (2.0 * k / ax) * j[k] - j[k + 1];
      if (std::fabs(j[k - 1]) > 1e250) {
        for (int i = k - 1; i <= top; ++i) j[i] *= 1e-250;
        norm *= 1e-250;
      }
      if ((k - 1) % 2 == 0 && k - 1 > 0) norm += 2.0 * j[k - 1];
    }
    norm += j[0];
    for (int n = 0; n <= nmax; ++n) out[n] = j[n] / norm;
  }
  if (X < 0)
    for (int n = 1; n <= nmax; n += 2) out[n] = -out[n];
  return out;
}

inline double bessel_j_int(int n, double X) {
  require(n >= 0, errc::invalid_parameter, "bessel_j_int: n < 0");
  if (X == 0.0) return n == 0 ? 1.0 : 0.0;
  double x = 0.5 * X;
  if (x * x <= n + 1.0) return bessel_j_series(n, X);
  return bessel_j_seq(n, X)[n];
}

// ---------------------------------------------------------------------------
// J_{2ir}(X), purely imaginary order

struct BesselImagOptions {
  double tol = 1e-16;
  int term_cap = 200;
};

// Series sum_m (-X^2/4)^m / (m! (1+2ir)_m), returned together with the
// Stirling-style tail estimate.  Generic in the real type.
template <class R>
Cx<R> bessel_imag_series(R r, R X, int term_cap, double tol, double* tail_out = nullptr) {
  R q = -(X * X) * R(0.25);
  Cx<R> t(R(1.0)), s(R(1.0));
  double tail = 0.0;
  bool done = false;
  double qd = num::abs(num::to_double(q));
  double rd = num::to_double(r);
  for (int m = 0; m < term_cap; ++m) {
    Cx<R> den(R(static_cast<double>(m + 1)) * R(static_cast<double>(m + 1)),
              R(static_cast<double>(m + 1)) * R(2.0) * r);
    t = t * q / den;
    s = s + t;
    // next-ratio bound; the tail is geometric once it drops below 1
    double ratio = qd / ((m + 2.0) * std::hypot(m + 2.0, 2.0 * rd));
    double ta = num::to_double(abs(t));
    if (ratio < 0.5) {
      tail = ta * ratio / (1.0 - ratio);
      if (tail <= tol * 1e-2 * num::to_double(abs(s))) {
        done = true;
        break;
      }
    }
  }
  if (tail_out) *tail_out = done ? tail : std::numeric_limits<double>::infinity();
  return s;
}

// log of the prefactor (X/2)^{2ir}/Gamma(1+2ir), optionally divided by cosh(pi r)
template <class R>
Cx<R> bessel_imag_logprefactor(R r, R X, bool divide_cosh) {
  Cx<R> lg = lgamma_stirling(Cx<R>(R(1.0), R(2.0) * r));
  R lx = num::log(X * R(0.5));
  Cx<R> e(-lg.re, R(2.0) * r * lx - lg.im);
  if (divide_cosh) {
    R a = num::abs(r) * num::pi<R>();
    // log cosh(a) = a - log 2 + log1p(e^{-2a})
    R lc = a - num::log(R(2.0)) + num::log1p(num::exp(-(a + a)));
    e.re = e.re - lc;
  }
  return e;
}

namespace besselimpl {

// J_nu(x) = (1/pi) int_0^pi cos(nu t - x sin t) dt - sin(nu pi)/pi int_0^inf
// e^{-x sinh t - nu t} dt, accurate for large x and modest |nu|.
inline cplx j_schlafli(cplx nu, double x) {
  QuadratureSpec qs;
  qs.abs_tol = 1e-15;
  qs.rel_tol = 1e-14;
  qs.max_subdivisions = 4000;
  auto f1 = [&](double t) { return std::cos(nu * t - x * std::sin(t)); };
  cplx a = integrate(f1, 0.0, pi, qs).value / pi;
  double tmax = std::asinh(60.0 / x) + 1.0;
  auto f2 = [&](double t) { return std::exp(-x * std::sinh(t) - nu * t); };
  cplx b = integrate(f2, 0.0, tmax, qs).value;
  return a - std::sin(nu * pi) / pi * b;
}

}  // namespace besselimpl

inline cplx bessel_j_imag(double r, double X, const BesselImagOptions& opt = {}) {
  require(X > 0.0, errc::precondition, "bessel_j_imag requires X > 0");
  if (r == 0.0) return bessel_j_int(0, X);
  double ar = std::fabs(r);
  // e-folds of cancellation in the power series vs the Schlafli integral
  double loss_series = std::min(X, X * X / (8.0 * ar));
  double loss_integral = pi * ar;
  if (loss_series > 8.0 && loss_series > loss_integral + 2.0)
    return besselimpl::j_schlafli(cplx(0.0, 2.0 * r), X);
  double tail = 0.0;
  Cx<double> s = bessel_imag_series<double>(r, X, opt.term_cap, opt.tol, &tail);
  if (!std::isfinite(tail))
    throw error(errc::truncation, "bessel_j_imag: series tail above tolerance at term cap");
  Cx<double> lp = bessel_imag_logprefactor<double>(r, X, false);
  if (lp.re > 709.0) throw error(errc::overflow, "bessel_j_imag: |J| exceeds double range");
  return checked(std::exp(cplx(lp.re, lp.im)) * cplx(s.re, s.im), "bessel_j_imag");
}

// J_{2ir}(X)/cosh(pi r): stays O(1) in r.
template <class R = double>
Cx<R> bessel_j_imag_scaled(R r, R X, const BesselImagOptions& opt = {}) {
  require(num::to_double(X) > 0.0, errc::precondition, "bessel_j_imag requires X > 0");
  double rd = num::abs(num::to_double(r)), xd = num::to_double(X);
  // the series cancels about min(X, X^2/8r) e-folds; past half the digits, integrate
  double loss = rd > 0 ? std::min(xd, xd * xd / (8.0 * rd)) : xd;
  if (loss > -0.5 * std::log(num::to_double(num::epsilon<R>()))) {
    if constexpr (std::is_same_v<R, double>) {
      cplx v = (rd == 0.0 ? cplx(bessel_j_int(0, xd)) : besselimpl::j_schlafli(cplx(0.0, 2.0 * r), xd)) /
               std::cosh(pi * rd);
      return {v.real(), v.imag()};
    } else {
      throw error(errc::truncation, "bessel_j_imag_scaled: series cancellation exceeds working precision");
    }
  }
  double tail = 0.0;
  double tol = std::max(opt.tol, num::to_double(num::epsilon<R>()));
  Cx<R> s = bessel_imag_series<R>(r, X, opt.term_cap, tol, &tail);
  if (!std::isfinite(tail))
    throw error(errc::truncation, "bessel_j_imag_scaled: series tail above tolerance at term cap");
  return exp(bessel_imag_logprefactor<R>(r, X, true)) * s;
}

}  // namespace maassden
