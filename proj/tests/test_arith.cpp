#include <gtest/gtest.h>

#include <maassden/arith.hpp>
#include <random>

using namespace maassden;

namespace {

// brute force over d mod c with gcd(d, c) = 1
cplx kloosterman_brute(i64 m, i64 n, i64 c) {
  cplx s = 0.0;
  for (i64 d = 0; d < c; ++d) {
    if (std::gcd(d, c) != 1) continue;
    i64 di = 0;
    while ((d * di) % c != 1 % c) ++di;
    double x = static_cast<double>(mod(m * d + n * di, c)) / static_cast<double>(c);
    s += std::exp(cplx(0.0, two_pi * x));
  }
  return s;
}

int mobius_textbook(i64 n) {
  int mu = 1;
  for (i64 p = 2; p * p <= n; ++p) {
    if (n % p) continue;
    n /= p;
    if (n % p == 0) return 0;
    mu = -mu;
  }
  if (n > 1) mu = -mu;
  return mu;
}

}  // namespace

TEST(Kloosterman, SmallValues) {
  EXPECT_NEAR(kloosterman(1, 1, 1), 1.0, 1e-14);
  EXPECT_NEAR(kloosterman(1, 1, 3), -1.0, 1e-14);
  EXPECT_NEAR(kloosterman(1, 1, 3), kloosterman_brute(1, 1, 3).real(), 1e-14);
  EXPECT_NEAR(kloosterman(1, 1, 6), -1.0, 1e-13);
  EXPECT_NEAR(kloosterman(1, 1, 6), kloosterman(1, 1, 2) * kloosterman(2, 2, 3), 1e-13);
}

TEST(Kloosterman, NaiveImaginaryResidue) {
  for (i64 c : {5, 12, 97, 360, 1001}) {
    cplx s = kloosterman_naive(3, 7, c);
    EXPECT_LT(std::fabs(s.imag()), 1e-10) << c;
    EXPECT_NEAR(s.real(), kloosterman(3, 7, c), 1e-10);
  }
}

TEST(Kloosterman, WeilBound) {
  std::mt19937_64 rng(4);
  std::uniform_int_distribution<i64> u(-500, 500);
  for (int i = 0; i < 50; ++i) {
    i64 m = u(rng), n = u(rng);
    std::vector<double> S = kloosterman_range(m, n, 2000);
    for (i64 c = 1; c <= 2000; ++c)
      ASSERT_LE(std::fabs(S[c - 1]), weil_bound(m, n, c) * (1 + 1e-9) + 1e-9) << m << " " << n << " " << c;
  }
}

TEST(Kloosterman, TwistedMultiplicativity) {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<i64> uc(1, 200), um(-50, 50);
  int done = 0;
  while (done < 200) {
    i64 c1 = uc(rng), c2 = uc(rng);
    if (std::gcd(c1, c2) != 1 || c1 * c2 > 6000) continue;
    i64 m = um(rng), n = um(rng);
    i64 i1 = modinv(mod(c1, c2), c2), i2 = modinv(mod(c2, c1), c1);
    double lhs = kloosterman_brute(m, n, c1 * c2).real();
    double rhs = kloosterman_brute(m * i2, n * i2, c1).real() * kloosterman_brute(m * i1, n * i1, c2).real();
    EXPECT_NEAR(lhs, rhs, 1e-9);
    EXPECT_NEAR(kloosterman(m, n, c1 * c2), lhs, 1e-9);
    ++done;
  }
}

TEST(Kloosterman, CrtPathAgreesWithDirect) {
  i64 c = kloosterman_direct_limit + 6;  // forces the factorised path
  double a = kloosterman(2, 3, c);
  EXPECT_NEAR(a, arithimpl::kloosterman_direct(2, 3, c), 1e-6 * std::sqrt(static_cast<double>(c)));
}

TEST(RamanujanMu, Examples) {
  EXPECT_EQ(ramanujan_mu(1), 1);
  EXPECT_EQ(ramanujan_mu(4), 0);
  EXPECT_EQ(ramanujan_mu(6), 1);
}

TEST(RamanujanMu, MatchesMobius) {
  for (i64 n = 1; n <= 500; ++n) {
    EXPECT_EQ(ramanujan_mu(n), mobius_textbook(n)) << n;
    EXPECT_EQ(mobius(n), mobius_textbook(n)) << n;
    EXPECT_NEAR(kloosterman(1, 0, n), mobius_textbook(n), 1e-10) << n;
  }
}

TEST(Level, IndexAndSquarefree) {
  EXPECT_EQ(nu(Level::make(1)), 1);
  EXPECT_EQ(nu(Level::make(6)), 12);
  EXPECT_EQ(nu(Level::make(30)), 72);
  EXPECT_THROW(Level::make(12), error);
  EXPECT_THROW(Level::make(0), error);
  EXPECT_EQ(eisenstein_indices(Level::make(6)).size(), 4u);
}

TEST(EisensteinNorm, Examples) {
  EisensteinIndex one{Level::make(1), {}};
  EXPECT_DOUBLE_EQ(eisenstein_norm_sq(one).value(), 1.0);
  EisensteinIndex two{Level::make(2), {0}};
  EXPECT_TRUE((eisenstein_norm_sq(two) == rational{2, 3}));
  Level six = Level::make(6);
  ASSERT_EQ(six.prime_factors, (std::vector<i64>{2, 3}));
  EisensteinIndex idx{six, {1, 0}};
  rational v = eisenstein_norm_sq(idx);
  EXPECT_TRUE((v == rational{1, 4}));
  EXPECT_NEAR(v.value(), 6.0 / (12.0 * 2.0), 1e-15);
}

TEST(SigmaTilde, LevelOneIsOne) {
  EisensteinIndex one{Level::make(1), {}};
  for (double r : {0.0, 1.3, -4.0}) EXPECT_LT(std::abs(sigma_tilde(1, one, r) - 1.0), 1e-15);
}

TEST(SigmaTilde, AOneIsMobiusOfP) {
  Level l = Level::make(30);
  double r = 0.7;
  for (const EisensteinIndex& idx : eisenstein_indices(l)) {
    double P = static_cast<double>(idx.P());
    cplx expect = std::exp(cplx(-std::log(P), -2.0 * r * std::log(P))) * static_cast<double>(mobius(idx.P()));
    EXPECT_LT(std::abs(sigma_tilde(1, idx, r) - expect), 1e-14);
  }
}

TEST(SigmaTilde, BruteForceDoubleSum) {
  Level l = Level::make(2);
  EisensteinIndex idx{l, {1}};
  // P = 2, Q = 1, a = 3: divisors d in {1, 3}, f in (Z/2)^x = {1}
  cplx s = 0.0;
  for (i64 d : {1, 3}) s += std::exp(cplx(0.0, two_pi * (3.0 / d) / (2.0)));
  s /= 2.0;
  EXPECT_LT(std::abs(sigma_tilde(3, idx, 0.0) - s), 1e-14);
  for (double r : {0.0, 2.0, 9.0})
    EXPECT_LE(std::abs(sigma_tilde(3, idx, r)), tau(3) / 2.0 + 1e-14);
}

TEST(SigmaTilde, RejectsCommonFactor) {
  EisensteinIndex idx{Level::make(6), {1, 1}};
  EXPECT_THROW(sigma_tilde(4, idx, 0.0), error);
}

TEST(Hecke, PrimePowersAndMissing) {
  Level l = Level::make(1);
  std::map<i64, double> lp{{2, 0.5}, {3, -1.2}};
  EXPECT_DOUBLE_EQ(hecke_lambda(1, lp, l), 1.0);
  EXPECT_DOUBLE_EQ(hecke_lambda(4, lp, l), 0.25 - 1.0);
  EXPECT_NEAR(hecke_lambda(12, lp, l), (0.25 - 1.0) * -1.2, 1e-15);
  EXPECT_NEAR(hecke_lambda(8, lp, l), 0.5 * (0.25 - 1.0) - 0.5, 1e-15);
  EXPECT_THROW(hecke_lambda(5, lp, l), missing_coefficient_error);
  // at a prime dividing the level chi0 vanishes: lambda_{p^2} = lambda_p^2
  EXPECT_DOUBLE_EQ(hecke_lambda(4, lp, Level::make(2)), 0.25);
}
