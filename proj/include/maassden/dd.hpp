#pragma once

// Double-double arithmetic for the few places where double loses too much to
// cancellation.  +,-,*,/ run natively; transcendentals round-trip through
// __float128 (libquadmath), which is slow but only used per quadrature node.

#include <cmath>
#include <cstdint>
#include <limits>
#include <type_traits>

extern "C" {
#include <quadmath.h>
}

namespace maassden {

struct dd {
  double hi = 0.0;
  double lo = 0.0;

  constexpr dd() = default;
  constexpr dd(double h) : hi(h), lo(0.0) {}  // NOLINT: implicit on purpose
  constexpr dd(double h, double l) : hi(h), lo(l) {}
  constexpr dd(int v) : hi(static_cast<double>(v)), lo(0.0) {}  // NOLINT
  constexpr dd(long v) : hi(static_cast<double>(v)), lo(0.0) {}  // NOLINT

  explicit operator double() const { return hi + lo; }
};

namespace ddimpl {

inline dd quick_two_sum(double a, double b) {
  double s = a + b;
  return {s, b - (s - a)};
}

inline dd two_sum(double a, double b) {
  double s = a + b;
  double bb = s - a;
  return {s, (a - (s - bb)) + (b - bb)};
}

// Dekker split; avoids depending on a hardware fma.
inline void split(double a, double& h, double& l) {
  constexpr double c = 134217729.0;  // 2^27 + 1
  double t = c * a;
  h = t - (t - a);
  l = a - h;
}

inline dd two_prod(double a, double b) {
  double p = a * b;
  double ah, al, bh, bl;
  split(a, ah, al);
  split(b, bh, bl);
  double e = ((ah * bh - p) + ah * bl + al * bh) + al * bl;
  return {p, e};
}

}  // namespace ddimpl

inline dd operator-(dd a) { return {-a.hi, -a.lo}; }

inline dd operator+(dd a, dd b) {
  dd s = ddimpl::two_sum(a.hi, b.hi);
  dd t = ddimpl::two_sum(a.lo, b.lo);
  s.lo += t.hi;
  s = ddimpl::quick_two_sum(s.hi, s.lo);
  s.lo += t.lo;
  return ddimpl::quick_two_sum(s.hi, s.lo);
}

inline dd operator+(dd a, double b) {
  dd s = ddimpl::two_sum(a.hi, b);
  s.lo += a.lo;
  return ddimpl::quick_two_sum(s.hi, s.lo);
}
inline dd operator+(double a, dd b) { return b + a; }
inline dd operator-(dd a, dd b) { return a + (-b); }
inline dd operator-(dd a, double b) { return a + (-b); }
inline dd operator-(double a, dd b) { return (-b) + a; }

inline dd operator*(dd a, dd b) {
  dd p = ddimpl::two_prod(a.hi, b.hi);
  p.lo += a.hi * b.lo + a.lo * b.hi;
  return ddimpl::quick_two_sum(p.hi, p.lo);
}

inline dd operator*(dd a, double b) {
  dd p = ddimpl::two_prod(a.hi, b);
  p.lo += a.lo * b;
  return ddimpl::quick_two_sum(p.hi, p.lo);
}
inline dd operator*(double a, dd b) { return b * a; }

inline dd operator/(dd a, dd b) {
  double q1 = a.hi / b.hi;
  dd r = a - b * q1;
  double q2 = r.hi / b.hi;
  r = r - b * q2;
  double q3 = r.hi / b.hi;
  return ddimpl::quick_two_sum(q1, q2) + q3;
}
inline dd operator/(dd a, double b) { return a / dd(b); }
inline dd operator/(double a, dd b) { return dd(a) / b; }

inline dd& operator+=(dd& a, dd b) { return a = a + b; }
inline dd& operator-=(dd& a, dd b) { return a = a - b; }
inline dd& operator*=(dd& a, dd b) { return a = a * b; }
inline dd& operator/=(dd& a, dd b) { return a = a / b; }

inline bool operator<(dd a, dd b) { return a.hi < b.hi || (a.hi == b.hi && a.lo < b.lo); }
inline bool operator>(dd a, dd b) { return b < a; }
inline bool operator<=(dd a, dd b) { return !(b < a); }
inline bool operator>=(dd a, dd b) { return !(a < b); }
inline bool operator==(dd a, dd b) { return a.hi == b.hi && a.lo == b.lo; }

inline __float128 to_quad(dd a) { return static_cast<__float128>(a.hi) + a.lo; }
inline dd from_quad(__float128 q) {
  double h = static_cast<double>(q);
  double l = static_cast<double>(q - h);
  return ddimpl::quick_two_sum(h, l);
}

// ---------------------------------------------------------------------------
// num:: gives the same spelling for double and dd in generic code

namespace num {

template <class R>
inline R pi() {
  if constexpr (std::is_same_v<R, dd>)
    return dd(3.141592653589793116, 1.2246467991473531772e-16);
  else
    return 3.14159265358979323846;
}

inline double to_double(double x) { return x; }
inline double to_double(dd x) { return x.hi + x.lo; }

inline double abs(double x) { return std::fabs(x); }
inline dd abs(dd x) { return x.hi < 0 ? -x : x; }

inline double sqrt(double x) { return std::sqrt(x); }
inline dd sqrt(dd x) { return from_quad(sqrtq(to_quad(x))); }

inline double exp(double x) { return std::exp(x); }
inline dd exp(dd x) { return from_quad(expq(to_quad(x))); }

inline double log(double x) { return std::log(x); }
inline dd log(dd x) { return from_quad(logq(to_quad(x))); }

inline double log1p(double x) { return std::log1p(x); }
inline dd log1p(dd x) { return from_quad(log1pq(to_quad(x))); }

inline double sin(double x) { return std::sin(x); }
inline dd sin(dd x) { return from_quad(sinq(to_quad(x))); }

inline double cos(double x) { return std::cos(x); }
inline dd cos(dd x) { return from_quad(cosq(to_quad(x))); }

inline void sincos(double x, double& s, double& c) {
  s = std::sin(x);
  c = std::cos(x);
}
inline void sincos(dd x, dd& s, dd& c) {
  __float128 qs, qc;
  sincosq(to_quad(x), &qs, &qc);
  s = from_quad(qs);
  c = from_quad(qc);
}

inline double atan2(double y, double x) { return std::atan2(y, x); }
inline dd atan2(dd y, dd x) { return from_quad(atan2q(to_quad(y), to_quad(x))); }

inline double sinh(double x) { return std::sinh(x); }
inline dd sinh(dd x) { return from_quad(sinhq(to_quad(x))); }

inline double cosh(double x) { return std::cosh(x); }
inline dd cosh(dd x) { return from_quad(coshq(to_quad(x))); }

inline double tanh(double x) { return std::tanh(x); }
inline dd tanh(dd x) { return from_quad(tanhq(to_quad(x))); }

template <class R>
inline R powi(R x, int n) {
  R r(1.0);
  bool inv = n < 0;
  unsigned u = inv ? static_cast<unsigned>(-n) : static_cast<unsigned>(n);
  while (u) {
    if (u & 1u) r = r * x;
    x = x * x;
    u >>= 1;
  }
  return inv ? R(1.0) / r : r;
}

template <class R>
inline R epsilon() {
  if constexpr (std::is_same_v<R, dd>)
    return dd(4.93038065763132e-32);
  else
    return std::numeric_limits<double>::epsilon();
}

}  // namespace num

// ---------------------------------------------------------------------------
// minimal complex type usable with R = double or dd

template <class R>
struct Cx {
  R re{};
  R im{};

  constexpr Cx() = default;
  constexpr Cx(R r) : re(r), im(0.0) {}  // NOLINT
  constexpr Cx(R r, R i) : re(r), im(i) {}
  constexpr Cx(double r) requires(!std::is_same_v<R, double>) : re(r), im(0.0) {}  // NOLINT
};

template <class R> inline Cx<R> operator-(Cx<R> a) { return {-a.re, -a.im}; }
template <class R> inline Cx<R> operator+(Cx<R> a, Cx<R> b) { return {a.re + b.re, a.im + b.im}; }
template <class R> inline Cx<R> operator-(Cx<R> a, Cx<R> b) { return {a.re - b.re, a.im - b.im}; }
template <class R> inline Cx<R> operator*(Cx<R> a, Cx<R> b) {
  return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}
template <class R> inline Cx<R> operator*(Cx<R> a, R b) { return {a.re * b, a.im * b}; }
template <class R> inline Cx<R> operator*(R b, Cx<R> a) { return {a.re * b, a.im * b}; }
template <class R> inline Cx<R> operator+(Cx<R> a, R b) { return {a.re + b, a.im}; }
template <class R> inline Cx<R> operator-(Cx<R> a, R b) { return {a.re - b, a.im}; }
template <class R> inline Cx<R> operator/(Cx<R> a, R b) { return {a.re / b, a.im / b}; }
template <class R> inline Cx<R> operator/(Cx<R> a, Cx<R> b) {
  // Smith's algorithm
  if (num::abs(b.re) >= num::abs(b.im)) {
    R t = b.im / b.re;
    R d = b.re + b.im * t;
    return {(a.re + a.im * t) / d, (a.im - a.re * t) / d};
  }
  R t = b.re / b.im;
  R d = b.re * t + b.im;
  return {(a.re * t + a.im) / d, (a.im * t - a.re) / d};
}
template <class R> inline Cx<R>& operator+=(Cx<R>& a, Cx<R> b) { return a = a + b; }
template <class R> inline Cx<R>& operator-=(Cx<R>& a, Cx<R> b) { return a = a - b; }
template <class R> inline Cx<R>& operator*=(Cx<R>& a, Cx<R> b) { return a = a * b; }

template <class R> inline Cx<R> conj(Cx<R> a) { return {a.re, -a.im}; }
template <class R> inline R norm(Cx<R> a) { return a.re * a.re + a.im * a.im; }
template <class R> inline R abs(Cx<R> a) {
  if constexpr (std::is_same_v<R, double>)
    return std::hypot(a.re, a.im);
  else
    return num::sqrt(norm(a));
}

template <class R> inline Cx<R> exp(Cx<R> a) {
  R e = num::exp(a.re), s, c;
  num::sincos(a.im, s, c);
  return {e * c, e * s};
}

template <class R> inline Cx<R> log(Cx<R> a) {
  if constexpr (std::is_same_v<R, double>) {
    return {std::log(std::hypot(a.re, a.im)), std::atan2(a.im, a.re)};
  } else {
    __float128 x = to_quad(a.re), y = to_quad(a.im);
    return {from_quad(static_cast<__float128>(0.5) * logq(x * x + y * y)), from_quad(atan2q(y, x))};
  }
}

template <class R> inline Cx<R> sqrt(Cx<R> a) {
  R r = abs(a);
  if (r == R(0.0)) return {};
  R t = num::sqrt((r + num::abs(a.re)) * R(0.5));
  if (a.re >= R(0.0)) return {t, a.im / (t * R(2.0))};
  return {num::abs(a.im) / (t * R(2.0)), a.im >= R(0.0) ? t : -t};
}

template <class R> inline std::complex<double> to_std(Cx<R> a) {
  return {num::to_double(a.re), num::to_double(a.im)};
}

}  // namespace maassden
