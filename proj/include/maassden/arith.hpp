#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "core.hpp"

namespace maassden {

using i64 = std::int64_t;

inline i64 gcd(i64 a, i64 b) { return std::gcd(a, b); }

inline i64 mod(i64 a, i64 m) {
  i64 r = a % m;
  return r < 0 ? r + m : r;
}

inline i64 mulmod(i64 a, i64 b, i64 m) {
  return static_cast<i64>(static_cast<__int128>(mod(a, m)) * mod(b, m) % m);
}

// inverse of a mod m (gcd(a,m) = 1), extended Euclid
inline i64 modinv(i64 a, i64 m) {
  if (m == 1) return 0;
  i64 g = m, x = 0, x1 = 1, a1 = mod(a, m);
  while (a1) {
    i64 q = g / a1;
    i64 t = g - q * a1;
    g = a1;
    a1 = t;
    t = x - q * x1;
    x = x1;
    x1 = t;
  }
  require(g == 1, errc::precondition, "modinv: not invertible");
  return mod(x, m);
}

// e(k/c) for an exactly reduced fraction
inline cplx e_frac(i64 k, i64 c) {
  double t = two_pi * static_cast<double>(mod(k, c)) / static_cast<double>(c);
  return {std::cos(t), std::sin(t)};
}

inline std::vector<std::pair<i64, int>> factorize(i64 n) {
  require(n >= 1, errc::invalid_parameter, "factorize: n must be >= 1");
  std::vector<std::pair<i64, int>> f;
  for (i64 p = 2; p * p <= n; ++p) {
    if (n % p) continue;
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    f.emplace_back(p, e);
  }
  if (n > 1) f.emplace_back(n, 1);
  return f;
}

inline std::vector<i64> divisors(i64 n) {
  std::vector<i64> d{1};
  for (auto [p, e] : factorize(n)) {
    std::size_t k = d.size();
    i64 pk = 1;
    for (int j = 1; j <= e; ++j) {
      pk *= p;
      for (std::size_t i = 0; i < k; ++i) d.push_back(d[i] * pk);
    }
  }
  std::sort(d.begin(), d.end());
  return d;
}

inline int tau(i64 n) {
  int t = 1;
  for (auto [p, e] : factorize(n)) t *= e + 1;
  return t;
}

inline int mobius(i64 n) {
  int s = 1;
  for (auto [p, e] : factorize(n)) {
    if (e > 1) return 0;
    s = -s;
  }
  return s;
}

inline std::vector<i64> primes_up_to(i64 n) {
  std::vector<i64> out;
  if (n < 2) return out;
  std::vector<char> comp(static_cast<std::size_t>(n) + 1, 0);
  for (i64 p = 2; p <= n; ++p) {
    if (comp[p]) continue;
    out.push_back(p);
    for (i64 q = p * p; q <= n; q += p) comp[q] = 1;
  }
  return out;
}

inline bool is_prime(i64 n) {
  if (n < 2) return false;
  for (i64 p = 2; p * p <= n; ++p)
    if (n % p == 0) return false;
  return true;
}

// ---------------------------------------------------------------------------

struct Level {
  i64 N = 1;
  std::vector<i64> prime_factors;
  int omega = 0;

  static Level make(i64 N) {
    require(N >= 1, errc::invalid_parameter, "level N must be >= 1");
    Level l;
    l.N = N;
    for (auto [p, e] : factorize(N)) {
      require(e == 1, errc::invalid_parameter, "level N = " + std::to_string(N) + " is not squarefree");
      l.prime_factors.push_back(p);
    }
    l.omega = static_cast<int>(l.prime_factors.size());
    return l;
  }

  bool divides(i64 p) const { return N % p == 0; }
};

// principal character mod N
inline int chi0(i64 d, const Level& level) { return gcd(d, level.N) == 1 ? 1 : 0; }

inline i64 nu(const Level& level) {
  i64 v = 1;
  for (i64 p : level.prime_factors) v *= p + 1;
  return v;
}

struct EisensteinIndex {
  Level level;
  std::vector<int> bits;  // bits[j] is i_p for p = level.prime_factors[j]

  i64 P() const {  // prod p^{i_p}
    i64 v = 1;
    for (std::size_t j = 0; j < bits.size(); ++j)
      if (bits[j]) v *= level.prime_factors[j];
    return v;
  }
  i64 Q() const { return level.N / P(); }  // prod p^{1-i_p}
};

inline std::vector<EisensteinIndex> eisenstein_indices(const Level& level) {
  std::vector<EisensteinIndex> out;
  for (unsigned mask = 0; mask < (1u << level.omega); ++mask) {
    EisensteinIndex idx{level, std::vector<int>(level.omega)};
    for (int j = 0; j < level.omega; ++j) idx.bits[j] = (mask >> j) & 1u;
    out.push_back(idx);
  }
  return out;
}

struct rational {
  i64 num = 0, den = 1;
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  bool operator==(const rational& o) const { return num * o.den == o.num * den; }
};

// prod p^{1-i_p}/(1+p)
inline rational eisenstein_norm_sq(const EisensteinIndex& idx) {
  i64 num = idx.Q(), den = nu(idx.level);
  i64 g = gcd(num, den);
  return {num / g, den / g};
}

// ---------------------------------------------------------------------------
// exponential sums

// sum over units xi mod n of cos(2 pi a xi / n)  (the Ramanujan sum c_n(a))
inline double ramanujan_sum(i64 a, i64 n) {
  compensated_sum<double> s;
  for (i64 x = 1; x <= n; ++x)
    if (gcd(x, n) == 1) s.add(e_frac(mulmod(a, x, n), n).real());
  return s.value();
}

inline int ramanujan_mu(i64 n) {
  require(n >= 1, errc::invalid_parameter, "ramanujan_mu: n must be >= 1");
  return static_cast<int>(std::lround(ramanujan_sum(1, n)));
}

// complex sum without the d <-> -d pairing; the imaginary part is rounding
inline cplx kloosterman_naive(i64 m, i64 n, i64 c) {
  require(c >= 1, errc::invalid_parameter, "kloosterman: c must be >= 1");
  compensated_sum<cplx> s;
  for (i64 d = 0; d < c; ++d) {
    if (gcd(d, c) != 1) continue;
    i64 di = modinv(d, c);
    s.add(e_frac(mod(mulmod(m, d, c) + mulmod(n, di, c), c), c));
  }
  return s.value();
}

namespace arithimpl {

inline double kloosterman_direct(i64 m, i64 n, i64 c) {
  if (c == 1) return 1.0;
  compensated_sum<double> s;
  // d and c-d give conjugate terms
  for (i64 d = 1; 2 * d <= c; ++d) {
    if (gcd(d, c) != 1) continue;
    i64 di = modinv(d, c);
    double v = e_frac(mod(mulmod(m, d, c) + mulmod(n, di, c), c), c).real();
    s.add(2 * d == c ? v : 2.0 * v);
  }
  return s.value();
}

}  // namespace arithimpl

inline constexpr i64 kloosterman_direct_limit = 1000000;

// S(m,n;c), real.  Direct for c <= 10^6, otherwise split over prime powers with
// S(m,n;c1c2) = S(m c2', n c2'; c1) S(m c1', n c1'; c2), c2' = c2^{-1} mod c1.
inline double kloosterman(i64 m, i64 n, i64 c) {
  require(c >= 1, errc::invalid_parameter, "kloosterman: c must be >= 1");
  if (c <= kloosterman_direct_limit) return arithimpl::kloosterman_direct(m, n, c);
  auto f = factorize(c);
  if (f.size() == 1) return arithimpl::kloosterman_direct(m, n, c);
  i64 c1 = 1;
  for (int j = 0; j < f[0].second; ++j) c1 *= f[0].first;
  i64 c2 = c / c1;
  i64 i2 = modinv(c2, c1), i1 = modinv(c1, c2);
  return kloosterman(mulmod(m, i2, c1), mulmod(n, i2, c1), c1) *
         kloosterman(mulmod(m, i1, c2), mulmod(n, i1, c2), c2);
}

inline double weil_bound(i64 m, i64 n, i64 c) {
  i64 g = gcd(gcd(std::llabs(m), std::llabs(n)), c);
  if (m == 0 && n == 0) g = c;
  return tau(c) * std::sqrt(static_cast<double>(g)) * std::sqrt(static_cast<double>(c));
}

// S(m,n;c) for c = 1..c_max; index c-1
inline std::vector<double> kloosterman_range(i64 m, i64 n, i64 c_max, i64 step = 1) {
  std::vector<double> out(static_cast<std::size_t>(c_max));
  parallel_for(out.size(), [&](std::size_t i) { out[i] = kloosterman(m, n, step * static_cast<i64>(i + 1)); });
  return out;
}

// sigma~_{ir}(a,(i_p)) = P^{-1-2ir} sum_{d|a} chi0(d mod Q) d^{-2ir} sum_{f in (Z/P)^x} e(af/(dP))
inline cplx sigma_tilde(i64 a, const EisensteinIndex& idx, double r) {
  require(a >= 1, errc::invalid_parameter, "sigma_tilde: a must be >= 1");
  require(gcd(a, idx.level.N) == 1, errc::precondition, "sigma_tilde requires gcd(a, N) = 1");
  i64 P = idx.P(), Q = idx.Q();
  compensated_sum<cplx> s;
  for (i64 d : divisors(a)) {
    if (gcd(d, Q) != 1) continue;
    cplx dpow = std::exp(cplx(0.0, -2.0 * r * std::log(static_cast<double>(d))));
    s.add(dpow * ramanujan_sum(a / d, P));
  }
  double lp = std::log(static_cast<double>(P));
  return std::exp(cplx(-lp, -2.0 * r * lp)) * s.value();
}

// ---------------------------------------------------------------------------
// Hecke multiplicativity: lambda_{p^{k+1}} = lambda_p lambda_{p^k} - chi0(p) lambda_{p^{k-1}}

inline double hecke_prime_power(double lp, int k, int chi) {
  double a = 1.0, b = lp;  // lambda_{p^0}, lambda_{p^1}
  if (k == 0) return 1.0;
  for (int j = 1; j < k; ++j) {
    double c = lp * b - chi * a;
    a = b;
    b = c;
  }
  return b;
}

// lambda_n from the stored prime eigenvalues; lists missing primes on failure
inline double hecke_lambda(i64 n, const std::map<i64, double>& lambda_p, const Level& level) {
  require(n >= 1, errc::invalid_parameter, "hecke_lambda: n must be >= 1");
  auto f = factorize(n);
  std::vector<i64> missing;
  for (auto [p, e] : f)
    if (!lambda_p.count(p)) missing.push_back(p);
  if (n > 1 && !missing.empty())
    throw missing_coefficient_error(missing, "lambda_n needs lambda_p for n = " + std::to_string(n));
  double v = 1.0;
  for (auto [p, e] : f) v *= hecke_prime_power(lambda_p.at(p), e, chi0(p, level));
  return v;
}

}  // namespace maassden
