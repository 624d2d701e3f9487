#pragma once

// Haar sampling from U(n), SO(2n), SO(2n+1), USp(2n) and Monte Carlo
// one- and two-level statistics of the scaled eigenangles.

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "core.hpp"
#include "density.hpp"
#include "testfn.hpp"

namespace maassden {

struct EnsembleSpec {
  Group group = Group::U;
  int size = 10;
  long samples = 1000;
  std::uint64_t seed = 1;
  // scale angles by the effective dimension (mean density of nontrivial
  // angles exactly 1) instead of the matrix size
  bool effective_scaling = true;
  // sum the periodised test function sum_m phi(x + m L) (finite, via phi^)
  bool periodize = true;

  void validate() const {
    require(group != Group::SO, errc::invalid_parameter, "sample SOeven or SOodd, not SO");
    require(size >= 1, errc::invalid_parameter, "size must be >= 1");
    require(samples >= 1, errc::invalid_parameter, "samples must be >= 1");
    if (group == Group::SOeven || group == Group::Sp)
      require(size % 2 == 0, errc::invalid_parameter, std::string(to_string(group)) + " needs even size");
    if (group == Group::SOodd) require(size % 2 == 1, errc::invalid_parameter, "SOodd needs odd size");
  }

  // L such that nontrivial angles have mean density L/(2 pi)
  double scale() const {
    if (!effective_scaling) return size;
    switch (group) {
      case Group::SOeven:
      case Group::SOodd: return size - 1.0;
      case Group::Sp: return size + 1.0;
      default: return size;
    }
  }
};

struct EigenangleSample {
  std::vector<double> angles;  // in (-pi, pi], ascending
  std::vector<double> scaled;  // angle * L/(2 pi)
};

namespace rmtimpl {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t index) {
  return splitmix64(splitmix64(seed) ^ splitmix64(index + 0x632be59bd9b4e019ULL));
}

using MatC = Eigen::MatrixXcd;
using MatR = Eigen::MatrixXd;
using VecC = Eigen::VectorXcd;

inline MatC haar_unitary(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, std::sqrt(0.5));
  MatC Z(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) Z(i, j) = cplx(g(rng), g(rng));
  Eigen::HouseholderQR<MatC> qr(Z);
  MatC Q = qr.householderQ();
  const MatC& R = qr.matrixQR();
  for (int j = 0; j < n; ++j) {
    cplx d = R(j, j);
    Q.col(j) *= d / std::abs(d);
  }
  return Q;
}

inline MatR haar_orthogonal(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  MatR Z(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) Z(i, j) = g(rng);
  Eigen::HouseholderQR<MatR> qr(Z);
  MatR Q = qr.householderQ();
  const MatR& R = qr.matrixQR();
  for (int j = 0; j < n; ++j)
    if (R(j, j) < 0) Q.col(j) *= -1.0;
  return Q;
}

// x = (a; b) -> (-conj b; conj a), the quaternionic structure on C^{2m}
inline VecC partner(const VecC& x) {
  int m = static_cast<int>(x.size()) / 2;
  VecC y(x.size());
  y.head(m) = -x.tail(m).conjugate();
  y.tail(m) = x.head(m).conjugate();
  return y;
}

// quaternionic Gram-Schmidt of a quaternion-Gaussian matrix: Haar on USp(2m)
inline MatC haar_symplectic(int n, std::mt19937_64& rng) {
  int m = n / 2;
  std::normal_distribution<double> g(0.0, std::sqrt(0.5));
  MatC M(n, n);
  for (int k = 0; k < m; ++k) {
    VecC v(n);
    for (int i = 0; i < n; ++i) v(i) = cplx(g(rng), g(rng));
    for (int pass = 0; pass < 2; ++pass) {
      for (int j = 0; j < k; ++j) {
        v -= M.col(j) * M.col(j).dot(v);
        v -= M.col(m + j) * M.col(m + j).dot(v);
      }
    }
    v /= v.norm();
    M.col(k) = v;
    M.col(m + k) = partner(v);
  }
  return M;
}

inline std::vector<double> args_of(const VecC& ev) {
  std::vector<double> a(ev.size());
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    double r = std::abs(ev(i));
    if (std::fabs(r - 1.0) > 1e-10)
      throw error(errc::invariant, "eigenvalue off the unit circle by " + std::to_string(std::fabs(r - 1.0)));
    double t = std::arg(ev(i));
    if (t <= -pi) t = pi;
    a[i] = t;
  }
  return a;
}

// keep the m largest angles and mirror them, plus 0 for odd orthogonal
inline std::vector<double> symmetrize(std::vector<double> a, int m, bool fixed_one) {
  std::sort(a.begin(), a.end(), std::greater<double>());
  std::vector<double> out;
  for (int i = 0; i < m; ++i) {
    out.push_back(a[i]);
    out.push_back(-a[i]);
  }
  if (fixed_one) out.push_back(0.0);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace rmtimpl

class Sampler {
 public:
  explicit Sampler(EnsembleSpec spec) : spec_(spec) { spec_.validate(); }

  const EnsembleSpec& spec() const { return spec_; }

  // the index-th matrix of the stream, as a complex matrix
  rmtimpl::MatC matrix(long index) const {
    std::mt19937_64 rng(rmtimpl::substream_seed(spec_.seed, static_cast<std::uint64_t>(index)));
    return draw_matrix(rng);
  }

  EigenangleSample sample(long index) const {
    std::mt19937_64 rng(rmtimpl::substream_seed(spec_.seed, static_cast<std::uint64_t>(index)));
    const int n = spec_.size;
    EigenangleSample s;
    switch (spec_.group) {
      case Group::U: {
        rmtimpl::MatC M = draw_matrix(rng);
        Eigen::ComplexEigenSolver<rmtimpl::MatC> es(M, false);
        s.angles = rmtimpl::args_of(es.eigenvalues());
        std::sort(s.angles.begin(), s.angles.end());
        break;
      }
      case Group::SOeven:
      case Group::SOodd: {
        rmtimpl::MatR M = orthogonal(rng);
        Eigen::EigenSolver<rmtimpl::MatR> es(M, false);
        s.angles = rmtimpl::symmetrize(rmtimpl::args_of(es.eigenvalues()), n / 2, n % 2 == 1);
        break;
      }
      case Group::Sp: {
        rmtimpl::MatC M = rmtimpl::haar_symplectic(n, rng);
        Eigen::ComplexEigenSolver<rmtimpl::MatC> es(M, false);
        s.angles = rmtimpl::symmetrize(rmtimpl::args_of(es.eigenvalues()), n / 2, false);
        break;
      }
      case Group::SO: break;
    }
    const double L = spec_.scale();
    for (double a : s.angles) s.scaled.push_back(a * L / two_pi);
    return s;
  }

 private:
  rmtimpl::MatR orthogonal(std::mt19937_64& rng) const {
    rmtimpl::MatR M = rmtimpl::haar_orthogonal(spec_.size, rng);
    if (M.determinant() < 0) {
      // odd size: M -> -M; even size: flip one column (a coset bijection O^- -> SO)
      if (spec_.size % 2 == 1)
        M = -M;
      else
        M.col(0) *= -1.0;
    }
    return M;
  }

  rmtimpl::MatC draw_matrix(std::mt19937_64& rng) const {
    switch (spec_.group) {
      case Group::U: return rmtimpl::haar_unitary(spec_.size, rng);
      case Group::SOeven:
      case Group::SOodd: return orthogonal(rng).cast<cplx>();
      case Group::Sp: return rmtimpl::haar_symplectic(spec_.size, rng);
      case Group::SO: break;
    }
    return {};
  }

  EnsembleSpec spec_;
};

// sum_m phi(x + m L) = (1/L) sum_k phi^(k/L) e(k x/L), a finite sum
class PeriodizedFunction {
 public:
  PeriodizedFunction(const TestFunction& phi, double L) : L_(L) {
    int kmax = static_cast<int>(std::ceil(phi.eta() * L)) + 1;
    for (int k = 0; k <= kmax; ++k) c_.push_back(phi.phi_hat(k / L) / L);
  }

  // value at scaled position x, i.e. angle 2 pi x/L
  double operator()(double x) const {
    double th = two_pi * x / L_;
    double c1 = std::cos(th), ck = 1.0, ckm1 = c1;  // cos(0), cos(-th)
    double s = c_[0];
    for (std::size_t k = 1; k < c_.size(); ++k) {
      double next = 2.0 * c1 * ck - ckm1;  // cos(k th)
      ckm1 = ck;
      ck = next;
      s += 2.0 * c_[k] * ck;
    }
    return s;
  }

 private:
  double L_;
  std::vector<double> c_;
};

namespace rmtimpl {

// phi evaluated at the scaled angles, periodised or not
inline std::vector<double> evaluate(const EnsembleSpec& spec, const TestFunction& phi, const PeriodizedFunction* per,
                                    const EigenangleSample& s) {
  std::vector<double> v(s.scaled.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = per ? (*per)(s.scaled[i]) : phi.phi(s.scaled[i]);
  (void)spec;
  return v;
}

inline DensityReport summarize(const std::vector<double>& x, Statistic st, const EnsembleSpec& spec,
                               const std::string& desc) {
  compensated_sum<double> s, s2;
  for (double v : x) s.add(v);
  double mean = s.value() / static_cast<double>(x.size());
  for (double v : x) s2.add((v - mean) * (v - mean));
  double var = x.size() > 1 ? s2.value() / static_cast<double>(x.size() - 1) : 0.0;
  DensityReport r;
  r.statistic = st;
  r.value = mean;
  r.error_estimate = std::sqrt(var / static_cast<double>(x.size()));
  r.R = spec.scale();
  r.weight_desc = desc;
  r.ensemble_or_family = std::string(to_string(spec.group)) + "(" + std::to_string(spec.size) + ")";
  r.terms = x.size();
  return r;
}

}  // namespace rmtimpl

// per-sample values of sum_j phi(scaled_j), one vector per test function
inline std::vector<std::vector<double>> one_level_samples(const EnsembleSpec& spec,
                                                          const std::vector<TestFunction>& phis) {
  Sampler smp(spec);
  std::vector<PeriodizedFunction> per;
  for (const TestFunction& p : phis) per.emplace_back(p, spec.scale());
  std::vector<std::vector<double>> out(phis.size(), std::vector<double>(static_cast<std::size_t>(spec.samples)));
  parallel_for(static_cast<std::size_t>(spec.samples), [&](std::size_t i) {
    EigenangleSample s = smp.sample(static_cast<long>(i));
    for (std::size_t f = 0; f < phis.size(); ++f) {
      std::vector<double> v = rmtimpl::evaluate(spec, phis[f], spec.periodize ? &per[f] : nullptr, s);
      compensated_sum<double> acc;
      for (double x : v) acc.add(x);
      out[f][i] = acc.value();
    }
  });
  return out;
}

inline DensityReport empirical_one_level(const EnsembleSpec& spec, const TestFunction& phi) {
  auto v = one_level_samples(spec, {phi});
  return rmtimpl::summarize(v[0], Statistic::one_level, spec, phi.describe());
}

// sum over i != j with theta_i + theta_j != 0 of phi1(x_i) phi2(x_j)
inline std::vector<double> two_level_samples(const EnsembleSpec& spec, const TestFunction& phi1,
                                             const TestFunction& phi2) {
  Sampler smp(spec);
  PeriodizedFunction p1(phi1, spec.scale()), p2(phi2, spec.scale());
  std::vector<double> out(static_cast<std::size_t>(spec.samples));
  parallel_for(out.size(), [&](std::size_t i) {
    EigenangleSample s = smp.sample(static_cast<long>(i));
    std::vector<double> a = rmtimpl::evaluate(spec, phi1, spec.periodize ? &p1 : nullptr, s);
    std::vector<double> b = rmtimpl::evaluate(spec, phi2, spec.periodize ? &p2 : nullptr, s);
    compensated_sum<double> acc;
    for (std::size_t j = 0; j < a.size(); ++j)
      for (std::size_t k = 0; k < b.size(); ++k) {
        if (j == k || std::fabs(s.angles[j] + s.angles[k]) < 1e-12) continue;
        acc.add(a[j] * b[k]);
      }
    out[i] = acc.value();
  });
  return out;
}

inline DensityReport empirical_two_level(const EnsembleSpec& spec, const TestFunction& phi1, const TestFunction& phi2) {
  return rmtimpl::summarize(two_level_samples(spec, phi1, phi2), Statistic::two_level, spec,
                            phi1.describe() + "," + phi2.describe());
}

// equal-weight mixture of ensembles (e.g. half SOeven, half SOodd)
inline DensityReport empirical_two_level(const std::vector<EnsembleSpec>& parts, const TestFunction& phi1,
                                         const TestFunction& phi2) {
  require(!parts.empty(), errc::invalid_parameter, "mixture needs at least one ensemble");
  DensityReport out;
  out.statistic = Statistic::two_level;
  double var = 0.0;
  std::string name;
  for (const EnsembleSpec& p : parts) {
    DensityReport r = empirical_two_level(p, phi1, phi2);
    out.value += r.value / static_cast<double>(parts.size());
    var += r.error_estimate * r.error_estimate;
    out.terms += r.terms;
    name += (name.empty() ? "" : "+") + r.ensemble_or_family;
  }
  out.error_estimate = std::sqrt(var) / static_cast<double>(parts.size());
  out.weight_desc = phi1.describe() + "," + phi2.describe();
  out.ensemble_or_family = name;
  return out;
}

// Kolmogorov-Smirnov distance of angles in (-pi, pi] from the uniform law
inline double ks_uniform(std::vector<double> x) {
  std::sort(x.begin(), x.end());
  double n = static_cast<double>(x.size()), d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double F = (x[i] + pi) / two_pi;
    d = std::max({d, F - i / n, (i + 1) / n - F});
  }
  return d;
}

// asymptotic 1% critical value of the one-sample KS statistic
inline double ks_critical_1pct(std::size_t n) { return 1.6276 / std::sqrt(static_cast<double>(n)); }

}  // namespace maassden
