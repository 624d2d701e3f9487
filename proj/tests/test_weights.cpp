#include <gtest/gtest.h>

#include <maassden/quadrature.hpp>
#include <maassden/weights.hpp>
#include <random>

using namespace maassden;

namespace {

// direct quadrature of the base bump, then the x^K factor (squared: of the half-width root)
cplx direct_transform(const SmoothWeight& w, cplx z) {
  QuadratureSpec qs;
  qs.abs_tol = 1e-16;
  qs.rel_tol = 1e-13;
  const BumpTransform& b = w.bump();
  double s = b.half_width();
  auto f = [&](double y) { return b.profile(y) * std::exp(cplx(0.0, two_pi) * z * y); };
  cplx B = integrate(f, -s, s, qs).value;
  int K = w.zero_order_used();
  if (w.kind() == WeightKind::plain_bump) return std::pow(z, K) * B;
  cplx g = std::pow(z, K / 2) * B;
  return g * g;
}

cplx fourier_of_profile(const SmoothWeight& w, double x) {
  QuadratureSpec qs;
  qs.abs_tol = 1e-15;
  qs.rel_tol = 1e-12;
  double s = w.support_half_width();
  auto f = [&](double y) { return w.profile(y) * std::cos(two_pi * x * y); };
  return integrate(f, -s, s, qs).value;
}

}  // namespace

TEST(SmoothWeight, PlainZeroOrderZeroIsPositiveAtOrigin) {
  SmoothWeight w = SmoothWeight::make_bump(0.25, 0, WeightKind::plain_bump);
  EXPECT_GT(w.eval(0.0).real(), 0.0);
}

TEST(SmoothWeight, EnforcedZeroByFiniteDifferences) {
  SmoothWeight w = default_h();
  std::vector<double> c = w.taylor(0.0, 7);
  for (int k = 0; k <= 7; ++k) EXPECT_LT(std::fabs(c[k]), 1e-9) << k;
  // also by central differences on the values themselves
  double h = 1e-2;
  for (double x : {h, 2 * h, 3 * h}) EXPECT_LT(std::fabs(w.eval(x).real()), std::pow(x, 8) * 1e3);
  EXPECT_EQ(w.eval(0.0), cplx(0.0));
}

TEST(SmoothWeight, SquaredIsNonnegative) {
  SmoothWeight w = SmoothWeight::make_bump(0.125, 2, WeightKind::squared);
  for (double x = -100.0; x <= 100.0; x += 0.25) EXPECT_GE(w.eval(x).real(), -1e-14) << x;
}

TEST(SmoothWeight, InvalidParameters) {
  EXPECT_THROW(SmoothWeight::make_bump(0.3, 0, WeightKind::plain_bump), error);
  EXPECT_THROW(SmoothWeight::make_bump(0.25, 3, WeightKind::squared), error);
  EXPECT_THROW(SmoothWeight::make_bump(0.25, -1, WeightKind::plain_bump), error);
}

TEST(SmoothWeight, RealArgumentGivesRealValue) {
  SmoothWeight w = default_h();
  for (double x : {0.3, 1.7, 4.0, 11.5}) EXPECT_LT(std::fabs(w.eval(x).imag()), 1e-12);
}

TEST(SmoothWeight, ImaginaryAxisAgainstQuadratureAndGrowthBound) {
  for (const SmoothWeight& w : {default_h(), default_H(2), SmoothWeight::make_bump(0.25, 0, WeightKind::plain_bump)}) {
    cplx z(0.0, 3.0);
    cplx v = w.eval(z);
    cplx o = direct_transform(w, z);
    EXPECT_LT(std::abs(v - o), 1e-10 * std::max(1.0, std::abs(o))) << w.describe();
    EXPECT_LE(std::abs(v), w.profile_l1() * std::exp(3.0 * pi / 2.0) * (1 + 1e-9));
  }
}

TEST(SmoothWeight, ProfileMatchesTransformOnRealLine) {
  SmoothWeight w = default_H(1);
  for (double x : {0.0, 0.5, 2.0, 6.0}) {
    cplx o = fourier_of_profile(w, x);
    EXPECT_NEAR(w.eval(x).real(), o.real(), 1e-10) << x;
  }
}

TEST(SmoothWeight, ProfileVanishesOutsideSupport) {
  SmoothWeight w = default_h();
  for (double y : {0.25, 0.26, 0.4, -0.3}) EXPECT_EQ(w.profile(y), 0.0);
  for (double y : {0.1, 0.2}) EXPECT_DOUBLE_EQ(w.profile(y), w.profile(-y));
}

TEST(SmoothWeight, InverseTransformRoundTrip) {
  // trapezoid inversion of w on a wide window; aliases sit at y +- 1/step.
  // K = 0 so that the x^K factor does not amplify rounding in the tail
  SmoothWeight w = SmoothWeight::make_bump(0.25, 0, WeightKind::plain_bump);
  const double step = 0.25;
  std::vector<double> vals;
  for (int j = 0; j * step <= 1000.0; ++j) vals.push_back(w.eval(j * step).real());
  for (double y : {0.0, 0.1, 0.2, 0.26, 0.3, 0.5, 1.0}) {
    double v = vals[0];
    for (std::size_t j = 1; j < vals.size(); ++j) v += 2.0 * vals[j] * std::cos(two_pi * j * step * y);
    EXPECT_NEAR(v * step, w.profile(y), 1e-9) << y;
  }
}

TEST(SmoothWeight, OverflowCap) {
  SmoothWeight w = default_h();
  EXPECT_THROW(w.eval(cplx(0.0, w.imag_cap() * 1.01)), error);
}

TEST(SpectralWeight, HTRemovableAtOrigin) {
  SpectralWeight sw(default_h(), 11.0, Family::hT);
  EXPECT_LT(std::abs(sw.eval(0.0)), 1e-14);
}

TEST(SpectralWeight, HTMatchesBase) {
  SmoothWeight H = default_H(2);
  SpectralWeight sw(H, 7.0, Family::HT);
  for (double y : {0.3, 1.1, 2.5}) EXPECT_NEAR(sw.eval(7.0 * y).real(), H.eval(y).real(), 1e-14 * std::fabs(H.eval(y).real()));
}

TEST(SpectralWeight, HTDecayConstantFit) {
  // fit C on r in [T, 10T], then the envelope must hold out to 20T
  double T = 11.0;
  SpectralWeight sw(default_h(), T, Family::hT);
  double C = 0.0;
  for (double r = T; r <= 10 * T; r += 0.5) C = std::max(C, std::fabs(sw.eval(r).real()) * std::exp(pi * r / (4 * T)));
  EXPECT_LE(std::fabs(sw.eval(5 * T).real()), C * std::exp(-5.0 * pi / 4.0));
  for (double r = 10 * T; r <= 20 * T; r += 0.5)
    EXPECT_LE(std::fabs(sw.eval(r).real()), C * std::exp(-pi * r / (4 * T))) << r;
}

TEST(SpectralWeight, PoleRaises) {
  SpectralWeight sw(default_h(), 5.0, Family::hT);
  try {
    sw.eval(cplx(0.0, -5.0));
    FAIL();
  } catch (const error& e) {
    EXPECT_EQ(e.code(), errc::pole);
  }
  SpectralWeight sH(default_H(), 5.0, Family::HT);
  EXPECT_NO_THROW(sH.eval(cplx(0.0, -5.0)));
}

TEST(SpectralWeight, Evenness) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.01, 30.0);
  for (Family f : {Family::hT, Family::HT}) {
    SpectralWeight sw(f == Family::hT ? default_h() : default_H(2), 9.0, f);
    for (int i = 0; i < 100; ++i) {
      double r = u(rng);
      cplx a = sw.eval(r), b = sw.eval(-r);
      EXPECT_LT(std::abs(a - b), 1e-12 * std::max(1.0, std::abs(a)));
      double ai = r * 0.5;  // stays below the first pole at T
      cplx c = sw.eval(cplx(0.0, ai)), d = sw.eval(cplx(0.0, -ai));
      EXPECT_LT(std::abs(c - d), 1e-12 * std::max(1.0, std::abs(c)));
    }
  }
}

TEST(SpectralWeight, HTPositivity) {
  SpectralWeight sw(default_h(), 11.0, Family::hT);
  for (double r = -80.0; r <= 80.0; r += 0.37) EXPECT_GE(sw.eval(r).real(), -1e-12) << r;
  const SmoothWeight& h = sw.base();
  for (double r = 0.1; r < 5.5; r += 0.1) EXPECT_GE(h.eval(cplx(0.0, r / 11.0)).real(), -1e-12);
}

TEST(SpectralWeight, GrowthEnvelopes) {
  SpectralWeight sh(default_h(), 11.0, Family::hT);
  double C = sh.growth_constant();
  for (double r = 0.0; r <= 200.0; r += 2.5)
    EXPECT_LE(std::fabs(sh.eval(r).real()), C * std::exp(-pi * r / 44.0) + 1e-15);
  SpectralWeight sH(default_H(2), 11.0, Family::HT);
  double CH = sH.growth_constant();
  for (double a = 0.0; a <= 60.0; a += 2.5)
    EXPECT_LE(std::fabs(sH.eval(cplx(0.0, a)).real()), CH * std::exp(pi * a / 22.0) * (1 + 1e-12));
}

TEST(SpectralWeight, RejectsNonPositiveT) {
  EXPECT_THROW(SpectralWeight(default_h(), 0.0, Family::hT), error);
  EXPECT_THROW(SpectralWeight(default_h(), -3.0, Family::HT), error);
}
