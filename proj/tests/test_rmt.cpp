#include <gtest/gtest.h>

#include <cstdlib>
#include <maassden/rmt.hpp>

using namespace maassden;

namespace {

rmtimpl::MatC quaternionic_j(int n) {
  int m = n / 2;
  rmtimpl::MatC J = rmtimpl::MatC::Zero(n, n);
  for (int i = 0; i < m; ++i) {
    J(i, m + i) = -1.0;
    J(m + i, i) = 1.0;
  }
  return J;
}

EnsembleSpec spec(Group g, int n, long samples, std::uint64_t seed = 7) {
  EnsembleSpec s;
  s.group = g;
  s.size = n;
  s.samples = samples;
  s.seed = seed;
  return s;
}

class ThreadsEnv {
 public:
  explicit ThreadsEnv(const char* v) {
    if (const char* old = std::getenv("MAASSDEN_THREADS")) old_ = old;
    setenv("MAASSDEN_THREADS", v, 1);
  }
  ~ThreadsEnv() {
    if (old_.empty())
      unsetenv("MAASSDEN_THREADS");
    else
      setenv("MAASSDEN_THREADS", old_.c_str(), 1);
  }

 private:
  std::string old_;
};

}  // namespace

TEST(Haar, UnitaryAndDeterminants) {
  for (Group g : {Group::U, Group::SOeven, Group::SOodd, Group::Sp}) {
    int n = g == Group::SOodd ? 7 : 8;
    Sampler smp(spec(g, n, 20));
    for (long i = 0; i < 20; ++i) {
      rmtimpl::MatC M = smp.matrix(i);
      double dev = (M.adjoint() * M - rmtimpl::MatC::Identity(n, n)).norm();
      EXPECT_LT(dev, 1e-12) << to_string(g);
      if (g == Group::SOeven || g == Group::SOodd) {
        EXPECT_LT(M.imag().norm(), 1e-15);
        EXPECT_NEAR(M.determinant().real(), 1.0, 1e-12);
      }
      if (g == Group::Sp) {
        rmtimpl::MatC J = quaternionic_j(n);
        EXPECT_LT((M * J - J * M.conjugate()).norm(), 1e-12);
      }
    }
  }
}

TEST(Haar, UnitaryTraceMoments) {
  // E tr M = 0 and E |tr M|^2 = 1 on U(n)
  const long S = 4000;
  Sampler smp(spec(Group::U, 10, S));
  cplx m1 = 0.0;
  double m2 = 0.0;
  for (long i = 0; i < S; ++i) {
    cplx t = smp.matrix(i).trace();
    m1 += t;
    m2 += std::norm(t);
  }
  m1 /= static_cast<double>(S);
  m2 /= static_cast<double>(S);
  EXPECT_LT(std::abs(m1), 4.0 / std::sqrt(static_cast<double>(S)));
  EXPECT_NEAR(m2, 1.0, 0.1);
}

TEST(Haar, UnitaryAnglesLookUniform) {
  Sampler smp(spec(Group::U, 10, 1000, 3));
  std::vector<double> all;
  for (long i = 0; i < 1000; ++i) {
    EigenangleSample s = smp.sample(i);
    all.insert(all.end(), s.angles.begin(), s.angles.end());
  }
  EXPECT_LT(ks_uniform(all), ks_critical_1pct(all.size()));
  std::vector<double> bunched(all.size(), 0.5);
  EXPECT_GT(ks_uniform(bunched), ks_critical_1pct(bunched.size()));
}

TEST(Haar, SymmetricSpectra) {
  for (Group g : {Group::SOeven, Group::SOodd, Group::Sp}) {
    int n = g == Group::SOodd ? 9 : 8;
    Sampler smp(spec(g, n, 10));
    for (long i = 0; i < 10; ++i) {
      EigenangleSample s = smp.sample(i);
      ASSERT_EQ(static_cast<int>(s.angles.size()), n);
      for (std::size_t k = 0; k < s.angles.size(); ++k)
        EXPECT_NEAR(s.angles[k], -s.angles[s.angles.size() - 1 - k], 1e-15);
      bool has_zero = std::count(s.angles.begin(), s.angles.end(), 0.0) > 0;
      EXPECT_EQ(has_zero, g == Group::SOodd);
      // the kept angles are the true eigenvalue arguments
      Eigen::ComplexEigenSolver<rmtimpl::MatC> es(smp.matrix(i), false);
      std::vector<double> direct = rmtimpl::args_of(es.eigenvalues());
      std::sort(direct.begin(), direct.end());
      for (std::size_t k = 0; k < direct.size(); ++k) EXPECT_NEAR(direct[k], s.angles[k], 1e-9);
    }
  }
}

TEST(Ensemble, Validation) {
  EXPECT_THROW(Sampler(spec(Group::SOeven, 7, 1)), error);
  EXPECT_THROW(Sampler(spec(Group::SOodd, 8, 1)), error);
  EXPECT_THROW(Sampler(spec(Group::Sp, 3, 1)), error);
  EXPECT_THROW(Sampler(spec(Group::SO, 8, 1)), error);
  EXPECT_THROW(Sampler(spec(Group::U, 8, 0)), error);
  EXPECT_EQ(spec(Group::Sp, 8, 1).scale(), 9.0);
  EXPECT_EQ(spec(Group::SOodd, 9, 1).scale(), 8.0);
  EnsembleSpec literal = spec(Group::SOeven, 8, 1);
  literal.effective_scaling = false;
  EXPECT_EQ(literal.scale(), 8.0);
}

TEST(Periodized, MatchesDirectLatticeSum) {
  TestFunction phi(0.7, Shape::bump_squared);
  const double L = 9.0;
  PeriodizedFunction per(phi, L);
  for (double x : {0.0, 0.3, 2.2, 4.49}) {
    double s = 0.0;
    for (int m = -400; m <= 400; ++m) s += phi.phi(x + m * L);
    EXPECT_NEAR(per(x), s, 1e-9) << x;
  }
}

TEST(OneLevel, ZeroAmplitudeGivesZero) {
  TestFunction zero(0.5, Shape::fejer, 0.0);
  DensityReport r = empirical_one_level(spec(Group::SOeven, 6, 50), zero);
  EXPECT_EQ(r.value, 0.0);
  EXPECT_EQ(r.error_estimate, 0.0);
}

TEST(OneLevel, UnitaryMeanIsTransformAtOrigin) {
  TestFunction phi(0.8, Shape::fejer);
  DensityReport r = empirical_one_level(spec(Group::U, 12, 3000), phi);
  EXPECT_LE(std::fabs(r.value - predicted_one_level(Group::U, phi)), 4.0 * r.error_estimate + 1e-12);
}

TEST(OneLevel, EvenOrthogonalAgainstPrediction) {
  TestFunction phi(0.6, Shape::fejer);
  DensityReport r = empirical_one_level(spec(Group::SOeven, 20, 4000), phi);
  EXPECT_LE(std::fabs(r.value - predicted_one_level(Group::SOeven, phi)), 4.0 * r.error_estimate);
}

TEST(TwoLevel, OneByOneOddOrthogonalIsZero) {
  TestFunction phi(0.5, Shape::fejer);
  DensityReport r = empirical_two_level(spec(Group::SOodd, 1, 20), phi, phi);
  EXPECT_EQ(r.value, 0.0);
}

TEST(TwoLevel, SampleSumExcludesMirrorPairs) {
  EnsembleSpec sp = spec(Group::SOodd, 7, 5);
  sp.periodize = false;
  TestFunction a(0.5, Shape::fejer), b(0.3, Shape::bump_squared);
  std::vector<double> v = two_level_samples(sp, a, b);
  Sampler smp(sp);
  for (long i = 0; i < 5; ++i) {
    EigenangleSample s = smp.sample(i);
    double bf = 0.0;
    for (std::size_t j = 0; j < s.scaled.size(); ++j)
      for (std::size_t k = 0; k < s.scaled.size(); ++k)
        if (j != k && s.scaled[j] != -s.scaled[k]) bf += a.phi(s.scaled[j]) * b.phi(s.scaled[k]);
    EXPECT_NEAR(v[i], bf, 1e-12);
  }
}

TEST(Reproducibility, BitIdenticalAcrossThreadCounts) {
  EnsembleSpec sp = spec(Group::Sp, 10, 64, 123);
  TestFunction phi(0.9, Shape::fejer);
  std::vector<std::vector<double>> one, three;
  std::vector<double> t1, t3;
  {
    ThreadsEnv env("1");
    one = one_level_samples(sp, {phi});
    t1 = two_level_samples(sp, phi, phi);
  }
  {
    ThreadsEnv env("3");
    three = one_level_samples(sp, {phi});
    t3 = two_level_samples(sp, phi, phi);
  }
  EXPECT_EQ(one, three);
  EXPECT_EQ(t1, t3);
  // a different seed gives a different stream
  sp.seed = 124;
  EXPECT_NE(one_level_samples(sp, {phi}), one);
}
