#pragma once

// Exponential sums attached to the Bessel series: S_J, its Dirichlet-kernel
// and Poisson rewritings, the Euler-Maclaurin decomposition of S_h, and the
// prime sums Q*_k.

#include <cmath>
#include <vector>

#include "arith.hpp"
#include "core.hpp"
#include "jet.hpp"
#include "quadrature.hpp"
#include "specfun.hpp"
#include "testfn.hpp"
#include "weights.hpp"

namespace maassden {

namespace expimpl {

inline void check_T(int T) {
  if (T <= 0 || T % 2 == 0) throw error(errc::hypothesis, "T must be a positive odd integer");
}

// x^2 h(x)
inline double h2(const SmoothWeight& h, double x) { return x * x * h.eval_real(x); }

// x^2 sgn(x) h(x), with g(0) = 0
inline double g2(const SmoothWeight& h, double x) {
  if (x == 0.0) return 0.0;
  double v = h2(h, std::fabs(x));
  return x < 0 ? -v : v;
}

}  // namespace expimpl

struct ExpSumCheck {
  double X = 0.0;
  double Y = 0.0;
  int T = 0;
  double s_j_direct = 0.0;
  double v_j = 0.0;
  double poisson_w = 0.0;  // leading Poisson term, T sum_alpha e(Y sin) g~~(...)
  double c8 = 0.0;
  double residual = 0.0;   // |S_J/2 - V_J|
  double rounding = 0.0;   // rounding floor of the two sums
};

// S_J(X) = T sum_{k>=0} (-1)^k J_{2k+1}(X) h~~((2k+1)/2T) / sin((2k+1) pi / 2T)
inline double s_j_direct(double X, int T, const SmoothWeight& h, double* abs_sum = nullptr) {
  expimpl::check_T(T);
  if (std::fabs(X) > T) throw error(errc::hypothesis, "s_j_direct needs |X| <= T");
  require(h.zero_order_used() >= 8, errc::hypothesis, "s_j_direct needs a zero of order >= 8");
  if (X == 0.0) {
    if (abs_sum) *abs_sum = 0.0;
    return 0.0;
  }
  int kmax = static_cast<int>(std::max(4.0 * T, std::ceil(std::exp(1.0) * std::fabs(X)) + 40.0));
  std::vector<double> J = bessel_j_seq(2 * kmax + 1, X);
  compensated_sum<double> s;
  double mag = 0.0;
  for (int k = 0; k <= kmax; ++k) {
    int n = 2 * k + 1;
    double x = n / (2.0 * T);
    double den = std::sin(n * pi / (2.0 * T));
    if (std::fabs(den) < 1e-300) continue;  // n a multiple of 2T cannot be odd
    double term = J[n] * expimpl::h2(h, x) / den;
    s.add((k % 2 == 0) ? term : -term);
    mag += std::fabs(term);
  }
  if (abs_sum) *abs_sum = T * mag;
  return T * s.value();
}

struct KernelPair {
  double lhs = 0.0;
  double rhs = 0.0;
};

// sin(pi k/2)/sin(pi k/2T) = sum_{|alpha| <= (T-1)/2} e^{pi i k alpha/T}
inline KernelPair dirichlet_kernel_identity(long k, int T) {
  expimpl::check_T(T);
  require(k % (2L * T) != 0, errc::precondition, "k must not be a multiple of 2T");
  KernelPair p;
  p.lhs = std::sin(pi * static_cast<double>(k % 4) / 2.0) / std::sin(pi * static_cast<double>(k % (4L * T)) / (2.0 * T));
  compensated_sum<double> s;
  int half = (T - 1) / 2;
  for (int a = -half; a <= half; ++a) {
    // exact reduction of k alpha mod 2T keeps the argument small
    long e = ((k % (2L * T)) * a) % (2L * T);
    s.add(std::cos(pi * static_cast<double>(e) / T));
  }
  p.rhs = s.value();
  return p;
}

struct PoissonForm {
  double v_j = 0.0;
  double w_g_leading = 0.0;
  double c8 = 0.0;  // v_j / w_g_leading for this (Y,T); fitted across a grid by the caller
  double v_j_abs = 0.0;
};

// V_J = (T/4) sum_alpha sum_{n in Z} J_n(X) g~~(n/2T) e(n alpha/2T), X = 2 pi Y
// W   = T sum_alpha e(Y sin(pi alpha/T)) g~~((pi Y/T) cos(pi alpha/T))
inline PoissonForm poisson_form(double Y, int T, const SmoothWeight& h) {
  expimpl::check_T(T);
  double X = two_pi * Y;
  if (!(X > 0.0) || X > T) throw error(errc::hypothesis, "poisson_form needs 0 < 2 pi Y <= T");
  int nmax = static_cast<int>(std::max(8.0 * T, std::ceil(std::exp(1.0) * X) + 60.0));
  std::vector<double> J = bessel_j_seq(nmax, X);
  int half = (T - 1) / 2;
  PoissonForm out;
  compensated_sum<double> v;
  double mag = 0.0;
  for (int a = -half; a <= half; ++a) {
    compensated_sum<double> inner;
    for (int n = 1; n <= nmax; ++n) {
      double ang = pi * static_cast<double>(((long)n * a) % (2L * T)) / T;
      double gp = expimpl::g2(h, n / (2.0 * T));
      // n and -n: J_{-n} = (-1)^n J_n, g~~ odd
      double jn = J[n];
      double jm = (n % 2 == 0) ? jn : -jn;
      double term_p = jn * gp * std::cos(ang);
      double term_m = jm * (-gp) * std::cos(ang);
      inner.add(term_p + term_m);
      mag += std::fabs(term_p) + std::fabs(term_m);
    }
    v.add(inner.value());
  }
  out.v_j = 0.25 * T * v.value();
  out.v_j_abs = 0.25 * T * mag;
  compensated_sum<double> w;
  for (int a = -half; a <= half; ++a) {
    double th = pi * a / static_cast<double>(T);
    // imaginary parts cancel between alpha and -alpha
    w.add(std::cos(X * std::sin(th)) * expimpl::g2(h, pi * Y / T * std::cos(th)));
  }
  out.w_g_leading = T * w.value();
  out.c8 = out.w_g_leading != 0.0 ? out.v_j / out.w_g_leading : 0.0;
  return out;
}

inline ExpSumCheck expsum_check(double X, int T, const SmoothWeight& h) {
  ExpSumCheck c;
  c.X = X;
  c.Y = X / two_pi;
  c.T = T;
  double sabs = 0.0;
  c.s_j_direct = s_j_direct(X, T, h, &sabs);
  PoissonForm p = poisson_form(c.Y, T, h);
  c.v_j = p.v_j;
  c.poisson_w = p.w_g_leading;
  c.c8 = p.c8;
  c.residual = std::fabs(0.5 * c.s_j_direct - c.v_j);
  c.rounding = 16.0 * std::numeric_limits<double>::epsilon() * (0.5 * sabs + p.v_j_abs);
  return c;
}

// ---------------------------------------------------------------------------
// Euler-Maclaurin for S_h(Y) = sum_{|alpha|<T/2} e(Y sin(pi alpha/T)) h~~((pi Y/T) cos(pi alpha/T))

struct EulerMaclaurin {
  cplx s_h;               // direct sum
  double bound_ratio = 0.0;  // |S_h| T / Y
  int M = 0;
  double eta = 0.0;
  cplx integral;
  cplx boundary;          // Bernoulli boundary terms
  double remainder_bound = 0.0;
  double consistency = 0.0;  // |S_h - integral - boundary|
};

namespace expimpl {

// Taylor jets of Re and Im of f(alpha) at alpha0
inline void em_jets(const SmoothWeight& h, double Y, int T, double a0, int order, jet<double>& re,
                    jet<double>& im) {
  const std::size_t n = static_cast<std::size_t>(order);
  jet<double> al = jet<double>::variable(n, a0);
  jet<double> s, c;
  sincos(al * (pi / T), s, c);
  jet<double> phase = s * (two_pi * Y);
  jet<double> ps, pc;
  sincos(phase, ps, pc);
  jet<double> u = c * (pi * Y / T);
  std::vector<double> hc = h.taylor(u.c[0], order);
  jet<double> hu = compose(hc, u);
  jet<double> H = u * u * hu;
  re = pc * H;
  im = ps * H;
}

inline cplx em_term(const SmoothWeight& h, double Y, int T, double a) {
  double th = pi * a / T;
  double amp = h2(h, pi * Y / T * std::cos(th));
  double ph = two_pi * Y * std::sin(th);
  return {std::cos(ph) * amp, std::sin(ph) * amp};
}

}  // namespace expimpl

inline int em_default_order(double Y, int T) {
  double eta = std::log(two_pi * Y) / std::log(static_cast<double>(T) * T);
  eta = std::clamp(eta, 0.0, 0.99);
  return 2 + static_cast<int>(std::ceil(1.0 / (1.0 - eta)));
}

inline EulerMaclaurin euler_maclaurin_bound(double Y, int T, const SmoothWeight& h, int M) {
  expimpl::check_T(T);
  require(Y > 0.0, errc::hypothesis, "euler_maclaurin_bound needs Y > 0");
  EulerMaclaurin out;
  out.eta = std::clamp(std::log(two_pi * Y) / std::log(static_cast<double>(T) * T), 0.0, 0.99);
  int mmin = 2 + static_cast<int>(std::ceil(1.0 / (1.0 - out.eta)));
  if (M < mmin)
    throw error(errc::hypothesis, "euler_maclaurin_bound needs M >= " + std::to_string(mmin));
  out.M = M;
  int half = (T - 1) / 2;
  compensated_sum<cplx> s;
  for (int a = -half; a <= half; ++a) s.add(expimpl::em_term(h, Y, T, a));
  out.s_h = s.value();
  out.bound_ratio = std::abs(out.s_h) * T / Y;

  QuadratureSpec qs;
  qs.abs_tol = 1e-300;
  qs.rel_tol = 1e-13;
  qs.max_subdivisions = 20000;
  const double b = 0.5 * T;
  std::vector<double> pts;
  for (int a = -half - 1; a <= half; ++a) pts.push_back(a + 0.5);
  auto f = [&](double a) { return expimpl::em_term(h, Y, T, a); };
  out.integral = integrate(f, pts, qs).value;

  // boundary sum_k B_2k(1/2)/(2k)! (f^{(2k-1)}(T/2) - f^{(2k-1)}(-T/2)), 2k < M
  cplx bnd = 0.0;
  {
    jet<double> rb, ib, ra, ia;
    expimpl::em_jets(h, Y, T, b, M, rb, ib);
    expimpl::em_jets(h, Y, T, -b, M, ra, ia);
    double fact = 1.0;
    for (int k = 1; 2 * k <= M; ++k) {
      fact *= (2.0 * k - 1.0) * (2.0 * k);
      double c = bernoulli_poly(2 * k, 0.5) / fact;
      std::size_t d = static_cast<std::size_t>(2 * k - 1);
      bnd += c * cplx(rb.derivative(d) - ra.derivative(d), ib.derivative(d) - ia.derivative(d));
    }
  }
  out.boundary = bnd;

  // |R| <= 2 zeta(M)/(2 pi)^M int |f^{(M)}|
  auto fm = [&](double a) {
    jet<double> r, i;
    expimpl::em_jets(h, Y, T, a, M, r, i);
    return std::hypot(r.derivative(M), i.derivative(M));
  };
  QuadratureSpec q2;
  q2.abs_tol = 1e-300;
  q2.rel_tol = 1e-6;
  q2.max_subdivisions = 20000;
  double l1 = integrate(fm, pts, q2).value.real();
  double zM = zeta(cplx(M, 0.0)).real();
  out.remainder_bound = 2.0 * zM / std::pow(two_pi, M) * l1 * (1.0 + 1e-5);
  out.consistency = std::abs(out.s_h - out.integral - out.boundary);
  return out;
}

// ---------------------------------------------------------------------------
// Q*_k(m;c) = 2 pi i^k sum_{p <= R^eta} S(p,1;c) J_{k-1}(4 pi m sqrt(p)/c) 2 log p/(sqrt(p) log R) phi^(log p/log R)

inline cplx q_star(int k, long m, long c, const TestFunction& phi, double R) {
  require(k >= 2, errc::invalid_parameter, "q_star needs k >= 2");
  require(m >= 1 && c >= 1, errc::invalid_parameter, "q_star needs m, c >= 1");
  require(R > 1.0, errc::invalid_parameter, "q_star needs R > 1");
  double lR = std::log(R);
  i64 pmax = static_cast<i64>(std::floor(std::exp(phi.eta() * lR) + 1e-9));
  compensated_sum<double> s;
  for (i64 p : primes_up_to(pmax)) {
    double lp = std::log(static_cast<double>(p));
    double ph = phi.phi_hat(lp / lR);
    if (ph == 0.0) continue;
    double x = 4.0 * pi * m * std::sqrt(static_cast<double>(p)) / c;
    s.add(kloosterman(p, 1, c) * bessel_j_int(k - 1, x) * 2.0 * lp / (std::sqrt(static_cast<double>(p)) * lR) * ph);
  }
  static const cplx ipow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  return two_pi * ipow[k % 4] * s.value();
}

// 2^{-k} if k >= 3z, k^{-1/2} otherwise
inline double gamma_tilde(int k, double z) { return k >= 3.0 * z ? std::pow(2.0, -k) : 1.0 / std::sqrt(k); }

}  // namespace maassden
