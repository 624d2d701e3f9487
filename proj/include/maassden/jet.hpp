#pragma once

// Truncated Taylor series ("jets"): c[k] = f^{(k)}(x0)/k!.
// Used for boundary derivatives in Euler-Maclaurin and for differentiating
// the bump profile.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

namespace maassden {

template <class T>
struct jet {
  std::vector<T> c;

  jet() = default;
  explicit jet(std::size_t order, T value = T{}) : c(order + 1, T{}) { c[0] = value; }

  std::size_t order() const { return c.empty() ? 0 : c.size() - 1; }
  T& operator[](std::size_t k) { return c[k]; }
  const T& operator[](std::size_t k) const { return c[k]; }

  // k-th derivative at the expansion point
  T derivative(std::size_t k) const {
    T f = c[k];
    for (std::size_t j = 2; j <= k; ++j) f *= static_cast<double>(j);
    return f;
  }

  static jet variable(std::size_t order, T x0) {
    jet j(order, x0);
    if (order >= 1) j.c[1] = T(1.0);
    return j;
  }
};

template <class T>
jet<T> operator+(const jet<T>& a, const jet<T>& b) {
  jet<T> r = a;
  for (std::size_t k = 0; k < r.c.size(); ++k) r.c[k] += b.c[k];
  return r;
}

template <class T>
jet<T> operator-(const jet<T>& a, const jet<T>& b) {
  jet<T> r = a;
  for (std::size_t k = 0; k < r.c.size(); ++k) r.c[k] -= b.c[k];
  return r;
}

template <class T, class S>
jet<T> operator*(const jet<T>& a, S s) {
  jet<T> r = a;
  for (auto& v : r.c) v *= s;
  return r;
}

template <class T>
jet<T> operator*(const jet<T>& a, const jet<T>& b) {
  std::size_t n = a.c.size();
  jet<T> r(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    if (a.c[i] == T{}) continue;
    for (std::size_t j = 0; i + j < n; ++j) r.c[i + j] += a.c[i] * b.c[j];
  }
  return r;
}

template <class T>
jet<T> operator/(const jet<T>& a, const jet<T>& b) {
  std::size_t n = a.c.size();
  jet<T> r(n - 1);
  for (std::size_t k = 0; k < n; ++k) {
    T s = a.c[k];
    for (std::size_t j = 1; j <= k; ++j) s -= b.c[j] * r.c[k - j];
    r.c[k] = s / b.c[0];
  }
  return r;
}

template <class T>
jet<T> exp(const jet<T>& a) {
  using std::exp;
  std::size_t n = a.c.size();
  jet<T> r(n - 1);
  r.c[0] = exp(a.c[0]);
  for (std::size_t k = 1; k < n; ++k) {
    T s{};
    for (std::size_t j = 1; j <= k; ++j) s += static_cast<double>(j) * a.c[j] * r.c[k - j];
    r.c[k] = s / static_cast<double>(k);
  }
  return r;
}

// sin and cos together (they feed each other's recurrences)
template <class T>
void sincos(const jet<T>& a, jet<T>& s, jet<T>& c) {
  using std::cos;
  using std::sin;
  std::size_t n = a.c.size();
  s = jet<T>(n - 1);
  c = jet<T>(n - 1);
  s.c[0] = sin(a.c[0]);
  c.c[0] = cos(a.c[0]);
  for (std::size_t k = 1; k < n; ++k) {
    T ss{}, cc{};
    for (std::size_t j = 1; j <= k; ++j) {
      T da = static_cast<double>(j) * a.c[j];
      ss += da * c.c[k - j];
      cc -= da * s.c[k - j];
    }
    s.c[k] = ss / static_cast<double>(k);
    c.c[k] = cc / static_cast<double>(k);
  }
}

template <class T>
jet<T> powi(const jet<T>& a, int n) {
  jet<T> r(a.order(), T(1.0));
  for (int i = 0; i < n; ++i) r = r * a;
  return r;
}

// f(u(x)) given Taylor coefficients of f at u(x0) (fc[k] = f^{(k)}/k!).
template <class T, class S>
jet<T> compose(const std::vector<S>& fc, const jet<T>& u) {
  std::size_t n = u.c.size();
  jet<T> d = u;
  d.c[0] = T{};
  jet<T> r(n - 1);
  // Horner in the nilpotent increment d
  for (std::size_t k = std::min(fc.size(), n); k-- > 0;) {
    r = r * d;
    r.c[0] += T(fc[k]);
  }
  return r;
}

}  // namespace maassden
