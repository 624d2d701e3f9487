#include <gtest/gtest.h>

#include <maassden/density.hpp>
#include <maassden/io.hpp>
#include <random>

using namespace maassden;

namespace {

double plain_integral(const std::function<double(double)>& f, double a, double b, int panels) {
  QuadratureSpec qs;
  qs.abs_tol = 1e-13;
  qs.rel_tol = 1e-12;
  qs.max_subdivisions = 20000;
  std::vector<double> pts;
  for (int i = 0; i <= panels; ++i) pts.push_back(a + (b - a) * i / panels);
  return integrate(f, pts, qs).value.real();
}

// sum over ordered pairs i != j, skipping mirror partners
double brute_pairs(const std::vector<double>& x, const TestFunction& a, const TestFunction& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = 0; j < x.size(); ++j) {
      if (i == j || x[i] == -x[j]) continue;
      s += a.phi(x[i]) * b.phi(x[j]);
    }
  return s;
}

MaassFormRecord toy_form(double t) {
  MaassFormRecord f;
  f.t = t;
  f.norm_sq = 1.0;
  for (i64 p : primes_up_to(200)) f.hecke[p] = 0.3 * std::cos(static_cast<double>(p));
  return f;
}

std::string data(const std::string& rel) { return std::string(MAASSDEN_TEST_DATA) + "/" + rel; }

}  // namespace

TEST(TestFunction, FejerNormalisation) {
  TestFunction f(0.7, Shape::fejer);
  EXPECT_DOUBLE_EQ(f.phi_hat(0.0), 1.0);
  EXPECT_NEAR(f.phi(0.0), 0.7, 1e-15);
  EXPECT_EQ(f.phi_hat(0.7), 0.0);
  EXPECT_EQ(f.phi_hat(-0.9), 0.0);
}

TEST(TestFunction, FourierPairsIntegrate) {
  for (Shape sh : {Shape::fejer, Shape::bump_squared}) {
    TestFunction f(0.5, sh);
    double ih = plain_integral([&](double y) { return f.phi_hat(y); }, -0.5, 0.5, 8);
    EXPECT_NEAR(ih, f.phi(0.0), 1e-8) << f.describe();
    // phi decays like x^-2 for fejer; the tail envelope bounds what is cut off
    double X = 4000.0;
    double ip = 2.0 * plain_integral([&](double x) { return f.phi(x); }, 0.0, X, 8000);
    EXPECT_NEAR(ip, f.phi_hat(0.0), 1e-8 + f.tail_integral(X)) << f.describe();
  }
}

TEST(TestFunction, EvenAndNonnegativeTransform) {
  for (Shape sh : {Shape::fejer, Shape::bump_squared}) {
    TestFunction f(0.9, sh);
    for (double x : {0.1, 1.3, 7.0}) EXPECT_DOUBLE_EQ(f.phi(x), f.phi(-x));
    for (double y = -1.0; y <= 1.0; y += 0.05) EXPECT_GE(f.phi_hat(y), -1e-14);
    EXPECT_THROW(TestFunction(0.0, sh), error);
  }
}

TEST(OneLevelZeros, SingleZeroAtOrigin) {
  TestFunction f(0.6, Shape::fejer);
  ZeroList z;
  z.gammas = {0.0};
  DensityReport r = one_level_from_zeros(z, 100.0, f);
  EXPECT_DOUBLE_EQ(r.value, f.phi(0.0));
  EXPECT_EQ(r.terms, 1u);
}

TEST(OneLevelZeros, LinearInAmplitude) {
  ZeroList z;
  z.gammas = {1.5, 3.25, 7.0};
  TestFunction f(0.6, Shape::bump_squared), g(0.6, Shape::bump_squared, 2.0);
  EXPECT_NEAR(one_level_from_zeros(z, 50.0, g).value, 2.0 * one_level_from_zeros(z, 50.0, f).value, 1e-14);
}

TEST(OneLevelZeros, MirroredPairAtScaledOne) {
  double R = 300.0;
  ZeroList z;
  z.gammas = {two_pi / std::log(R)};
  TestFunction f(0.8, Shape::fejer);
  EXPECT_NEAR(one_level_from_zeros(z, R, f).value, 2.0 * f.phi(1.0), 1e-14);
  z.mirror = false;
  EXPECT_NEAR(one_level_from_zeros(z, R, f).value, f.phi(1.0), 1e-14);
}

TEST(OneLevelZeros, EmptyListFlagged) {
  DensityReport r = one_level_from_zeros(ZeroList{}, 10.0, TestFunction(0.5, Shape::fejer));
  EXPECT_TRUE(r.relative_error_infinite);
  EXPECT_EQ(r.value, 0.0);
  EXPECT_THROW(one_level_from_zeros(ZeroList{}, 1.0, TestFunction(0.5, Shape::fejer)), error);
}

TEST(OneLevelZeros, TailGrowsWhenCompletenessDrops) {
  ZeroList z;
  z.gammas = {9.2, 13.0};
  TestFunction f(0.9, Shape::fejer);
  z.completeness_height = 20.0;
  double a = one_level_from_zeros(z, 90.0, f, {1.0, 9.5}).error_estimate;
  z.completeness_height = 60.0;
  double b = one_level_from_zeros(z, 90.0, f, {1.0, 9.5}).error_estimate;
  EXPECT_GT(a, b);
  EXPECT_GT(b, 0.0);
}

TEST(PrimeSide, NoPrimesBelowSupportCutoff) {
  // R^eta < 2: only the archimedean main terms survive
  MaassFormRecord f = toy_form(9.5);
  TestFunction phi(0.1, Shape::fejer);
  double R = 100.0;
  ASSERT_LT(std::pow(R, 0.1), 2.0);
  DensityReport r = one_level_prime_side(f, phi, R, 100, ExplicitMode::leading);
  EXPECT_NEAR(r.value, 0.5 * phi.phi(0.0) + phi.phi_hat(0.0) * std::log(1.0 + 9.5 * 9.5) / std::log(R), 1e-14);
}

TEST(PrimeSide, LeadingPrimeTermsByHand) {
  MaassFormRecord f = toy_form(12.0);
  TestFunction phi(0.5, Shape::fejer);
  double R = 100.0, L = std::log(R);
  // R^0.5 = 10: primes 2, 3, 5, 7; squares 4 and 9 also lie below the cutoff
  double s = 0.5 * phi.phi(0.0) + phi.phi_hat(0.0) * std::log(1.0 + 144.0) / L;
  for (i64 p : {2, 3, 5, 7}) {
    double lp = std::log(static_cast<double>(p)), lam = f.hecke.at(p);
    s -= 2.0 * lam * lp / (std::sqrt(static_cast<double>(p)) * L) * phi.phi_hat(lp / L);
    s -= 2.0 * (lam * lam - 1.0) * lp / (p * L) * phi.phi_hat(2 * lp / L);
  }
  EXPECT_NEAR(one_level_prime_side(f, phi, R, 100, ExplicitMode::leading).value, s, 1e-13);
}

TEST(PrimeSide, MissingCoefficientRaises) {
  MaassFormRecord f = toy_form(9.5);
  f.hecke.erase(7);
  TestFunction phi(0.5, Shape::fejer);
  try {
    one_level_prime_side(f, phi, 100.0, 100);
    FAIL();
  } catch (const missing_coefficient_error& e) {
    EXPECT_EQ(e.code(), errc::missing_coefficient);
  }
  // with p_max below 7 the prime is bounded instead of required
  DensityReport r = one_level_prime_side(f, phi, 100.0, 5);
  EXPECT_GT(r.error_estimate, 0.0);
}

TEST(PrimeSide, BundledFormAgainstZeros) {
  std::vector<MaassFormRecord> forms = load_forms(data("level1.maass"));
  const MaassFormRecord& f = forms.front();
  ASSERT_NEAR(f.t, 9.5337, 1e-4);
  ZeroList z = load_zeros(data("zeros/level1_t9.53370.zeros"));
  double R = 1.0 + f.t * f.t;
  for (Shape sh : {Shape::fejer, Shape::bump_squared}) {
    TestFunction phi(0.45, sh);
    DensityReport zr = one_level_from_zeros(z, R, phi, ZeroTailModel{1.0, f.t});
    DensityReport pr = one_level_prime_side(f, phi, R, 100);
    EXPECT_LE(std::fabs(zr.value - pr.value), zr.error_estimate + pr.error_estimate + 0.05) << phi.describe();
    // the leading mode carries its own larger budget
    DensityReport lr = one_level_prime_side(f, phi, R, 100, ExplicitMode::leading);
    EXPECT_LE(std::fabs(lr.value - pr.value), lr.error_estimate);
  }
}

TEST(FamilyAverage, SingleFormEqualsItsDensity) {
  MaassFormRecord f = toy_form(9.5);
  TestFunction phi(0.4, Shape::fejer);
  SpectralWeight sw(default_h(), 5.0, Family::hT);
  double R = 25.0;
  FamilyAverage a = averaged_one_level({f}, phi, sw, R);
  EXPECT_NEAR(a.report.value, one_level_prime_side(f, phi, R, 1000000).value, 1e-14);
  EXPECT_EQ(a.truncation_error, 0.0);
}

TEST(FamilyAverage, InvariantUnderCommonNormScaling) {
  std::vector<MaassFormRecord> fam{toy_form(9.5), toy_form(12.2), toy_form(13.8)};
  fam[1].norm_sq = 0.4;
  fam[2].norm_sq = 2.5;
  TestFunction phi(0.4, Shape::bump_squared);
  SpectralWeight sw(default_h(), 7.0, Family::hT);
  double a = averaged_one_level(fam, phi, sw, 49.0).report.value;
  for (MaassFormRecord& f : fam) f.norm_sq *= 3.7;
  double b = averaged_one_level(fam, phi, sw, 49.0).report.value;
  EXPECT_NEAR(a, b, 1e-13 * std::fabs(a));
}

TEST(FamilyAverage, Preconditions) {
  TestFunction phi(0.4, Shape::fejer);
  SpectralWeight sw(default_h(), 5.0, Family::hT);
  EXPECT_THROW(averaged_one_level({}, phi, sw, 25.0), error);
  EXPECT_THROW(averaged_one_level({toy_form(9.5)}, phi, sw, 200.0), error);
}

TEST(TwoLevel, MatchesPairSumBruteForce) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(0.05, 3.0);
  const double R = 60.0, L = std::log(R);
  TestFunction a(0.6, Shape::fejer), b(0.4, Shape::bump_squared);
  for (int trial = 0; trial < 30; ++trial) {
    int sign = trial % 2 ? -1 : 1;
    ZeroList z;
    std::vector<double> x;
    if (sign == -1) {
      z.gammas.push_back(0.0);
      x.push_back(0.0);
    }
    for (int i = 0; i < 1 + trial % 4; ++i) z.gammas.push_back(u(rng));
    std::sort(z.gammas.begin(), z.gammas.end());
    for (double g : z.gammas)
      if (g > 0) {
        x.push_back(g * L / two_pi);
        x.push_back(-g * L / two_pi);
      }
    EXPECT_NEAR(two_level(z, sign, a, b, R).value, brute_pairs(x, a, b), 1e-12) << trial;
  }
}

TEST(TwoLevel, DegenerateCases) {
  ZeroList z;
  z.gammas = {1.0, 2.0};
  TestFunction a(0.6, Shape::fejer), zero(0.6, Shape::fejer, 0.0);
  EXPECT_EQ(two_level(z, 1, a, zero, 20.0).value, 0.0);
  EXPECT_EQ(two_level(ZeroList{}, 1, a, a, 20.0).value, 0.0);
  EXPECT_THROW(two_level(z, 0, a, a, 20.0), error);
}

TEST(Kernels, PointValues) {
  EXPECT_EQ(rmt_kernel(Group::U, 1, {0.3}).smooth, 1.0);
  EXPECT_NEAR(rmt_kernel(Group::Sp, 1, {0.0}).smooth, 0.0, 1e-15);
  EXPECT_NEAR(rmt_kernel(Group::SOeven, 1, {0.0}).smooth, 2.0, 1e-15);
  KernelValue odd = rmt_kernel(Group::SOodd, 1, {0.2});
  ASSERT_EQ(odd.deltas.size(), 1u);
  EXPECT_EQ(odd.deltas[0].coefficient, 1.0);
  EXPECT_NEAR(rmt_kernel(Group::U, 2, {0.4, 0.4}).smooth, 0.0, 1e-12);
  // far apart the pair kernel factorises
  double x = 40.3, y = 71.9;
  EXPECT_NEAR(rmt_kernel(Group::SOeven, 2, {x, y}).smooth,
              rmt_kernel(Group::SOeven, 1, {x}).smooth * rmt_kernel(Group::SOeven, 1, {y}).smooth, 2e-2);
  EXPECT_THROW(rmt_kernel(Group::U, 3, {0.0, 0.0, 0.0}), error);
}

TEST(Predictions, OneLevel) {
  TestFunction f(0.8, Shape::fejer);
  EXPECT_DOUBLE_EQ(predicted_one_level(Group::U, f), f.phi_hat(0.0));
  EXPECT_NEAR(predicted_one_level(Group::SO, f), f.phi_hat(0.0) + 0.5 * f.phi(0.0), 1e-14);
  // for eta < 1 the even and odd orthogonal densities agree
  EXPECT_NEAR(predicted_one_level(Group::SOeven, f), predicted_one_level(Group::SOodd, f), 1e-12);
  // the midpoint of SOeven and SOodd is SO at every support
  TestFunction g(1.2, Shape::fejer);
  EXPECT_NEAR(0.5 * (predicted_one_level(Group::SOeven, g) + predicted_one_level(Group::SOodd, g)),
              predicted_one_level(Group::SO, g), 1e-12);
  EXPECT_GT(predicted_one_level(Group::SOodd, g) - predicted_one_level(Group::SOeven, g), 0.0);
  // Sp against a direct integral of 1 - sin(2 pi x)/(2 pi x)
  double direct = 2.0 * plain_integral([&](double x) { return f.phi(x) * (1.0 - sine_kernel(2.0 * x)); }, 0.0, 3000.0,
                                       6000);
  EXPECT_NEAR(predicted_one_level(Group::Sp, f), direct, 1e-3);
}

TEST(Predictions, TwoLevelOddFraction) {
  TestFunction a(0.4, Shape::fejer), b(0.3, Shape::bump_squared);
  double p0 = predicted_two_level(a, b, 0.0), p1 = predicted_two_level(a, b, 1.0);
  EXPECT_NEAR(p1 - p0, a.phi(0.0) * b.phi(0.0), 1e-12);
  EXPECT_NEAR(predicted_two_level(a, b, 0.5), 0.5 * (p0 + p1), 1e-12);
  EXPECT_THROW(predicted_two_level(a, b, 1.5), error);
}
