#pragma once

#include <cmath>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "core.hpp"
#include "dd.hpp"
#include "jet.hpp"
#include "quadrature.hpp"

namespace maassden {

// Transform B(z) = int b(u) e(zu) du / int b of the even bump
// b(u) = exp(-1/(1-(u/s)^2)) on |u| < s.  B(0) = 1.
class BumpTransform {
 public:
  static constexpr int max_half_nodes = 8192;  // trapezoid intervals on [0, s]
  static constexpr int moment_terms = 300;

  explicit BumpTransform(double s) : s_(s) {
    require(s > 0.0 && std::isfinite(s), errc::invalid_parameter, "bump half-width must be > 0");
    grid_.resize(max_half_nodes + 1);
    for (int j = 0; j <= max_half_nodes; ++j) grid_[j] = profile_raw(s_ * j / max_half_nodes);
    // trapezoid on the full grid gives the normalisation to full precision
    compensated_sum<double> acc;
    for (int j = max_half_nodes; j >= 1; --j) acc.add(2.0 * grid_[j]);
    acc.add(grid_[0]);
    norm_ = acc.value() * (s_ / max_half_nodes);
  }

  double half_width() const { return s_; }
  double norm() const { return norm_; }

  // unnormalised profile b(u)
  double profile_raw(double u) const {
    double v = u / s_;
    if (std::fabs(v) >= 1.0) return 0.0;
    return std::exp(-1.0 / (1.0 - v * v));
  }
  double profile(double u) const { return profile_raw(u) / norm_; }

  // d^k/du^k of the normalised profile
  double profile_derivative(double u, int k) const {
    double v = u / s_;
    if (std::fabs(v) >= 1.0) return 0.0;
    jet<double> x = jet<double>::variable(static_cast<std::size_t>(k), u);
    jet<double> w = x * (1.0 / s_);
    jet<double> one(static_cast<std::size_t>(k), 1.0);
    jet<double> f = exp((one * -1.0) / (one - w * w));
    return f.derivative(static_cast<std::size_t>(k)) / norm_;
  }

  // B(z) for complex z: nested trapezoid, doubling until stable.
  cplx eval(cplx z) const {
    cplx prev{};
    for (int m = 32; m <= max_half_nodes; m *= 2) {
      double l1 = 0.0;
      cplx t = trapezoid(z, m, &l1);
      // aliases sit at distance m/s - |x|; successive grids can share one, so
      // only trust agreement once the grid resolves the frequency
      bool resolved = m / s_ >= 2.0 * std::fabs(z.real()) + 32.0;
      if (m > 32 && resolved && std::abs(t - prev) <= 4.0 * std::numeric_limits<double>::epsilon() * l1)
        return t;
      prev = t;
    }
    return prev;
  }

  // B(x) for real x in type R (rotation recurrence, restarted every 64 nodes)
  template <class R>
  R eval_real(R x) const {
    const double tol = 4.0 * num::to_double(num::epsilon<R>());
    R prev{};
    for (int m = 64; m <= max_half_nodes; m *= 2) {
      int stride = max_half_nodes / m;
      R h = R(s_) / R(static_cast<double>(m));
      R theta = R(2.0) * num::pi<R>() * x * h;
      R acc = grid_at<R>(0);
      Cx<R> rot, step;
      num::sincos(theta, step.im, step.re);
      for (int j = 1; j <= m; ++j) {
        if ((j - 1) % 64 == 0) {
          R sj, cj;
          num::sincos(theta * R(static_cast<double>(j)), sj, cj);
          rot = Cx<R>(cj, sj);
        } else {
          rot = rot * step;
        }
        acc = acc + R(2.0) * grid_at<R>(j * stride) * rot.re;
      }
      R t = acc * h / R(norm_);
      // |b e(xu)| integrates to 1, so an absolute test is the natural one
      bool resolved = m / s_ >= 2.0 * std::fabs(num::to_double(x)) + 32.0;
      if (m > 64 && resolved && std::fabs(num::to_double(t - prev)) <= tol) return t;
      prev = t;
    }
    return prev;
  }

  // B(iy), real, by the moment series when it converges fast, else by
  // trapezoid (integrand positive, no cancellation).
  template <class R>
  R eval_imag(R y) const {
    double a = 2.0 * pi * s_ * std::fabs(num::to_double(y));
    if (a <= 80.0) {
      const auto& mom = moments<R>();
      R ay = R(2.0) * num::pi<R>() * R(s_) * num::abs(y);
      R a2 = ay * ay;
      R term(1.0), sum = mom[0];
      for (int j = 1; j < moment_terms; ++j) {
        term = term * a2 / R((2.0 * j - 1.0) * (2.0 * j));
        R add = mom[j] * term;
        sum = sum + add;
        if (2.0 * j > a && num::to_double(add) <= num::to_double(sum) * 1e-34) break;
      }
      return sum;
    }
    if constexpr (std::is_same_v<R, double>) {
      return eval(cplx(0.0, y)).real();
    } else {
      const std::vector<dd>& g = dd_grid();
      R h = R(s_) / R(static_cast<double>(max_half_nodes));
      R acc = g[0];
      R two_pi_y = R(2.0) * num::pi<R>() * num::abs(y);
      for (int j = 1; j <= max_half_nodes; ++j)
        acc = acc + R(2.0) * g[j] * num::cosh(two_pi_y * h * R(static_cast<double>(j)));
      return acc * h / R(norm_);
    }
  }

  // Taylor coefficients of B at real x up to the given order
  std::vector<double> taylor(double x, int order) const {
    const int m = 4096;
    const int stride = max_half_nodes / m;
    double h = s_ / m;
    std::vector<double> out(order + 1, 0.0);
    std::vector<compensated_sum<double>> acc(order + 1);
    for (int j = 0; j <= m; ++j) {
      double u = j * h;
      double b = grid_[static_cast<std::size_t>(j) * stride] * (j == 0 ? 1.0 : 2.0);
      double th = two_pi * x * u;
      double c = std::cos(th), sn = std::sin(th);
      double p = 1.0;  // (2 pi u)^k
      for (int k = 0; k <= order; ++k) {
        // i^k e^{i th} + (-1)^k i^k e^{-i th}, halved, for the even pairing
        double v = (k % 2 == 0) ? c : sn;
        double sign = ((k % 4) == 0 || (k % 4) == 3) ? 1.0 : -1.0;
        if (j == 0 && k % 2 == 1) v = 0.0;
        acc[k].add(sign * b * p * v);
        p *= two_pi * u;
      }
    }
    double fact = 1.0;
    for (int k = 0; k <= order; ++k) {
      if (k > 0) fact *= k;
      out[k] = acc[k].value() * h / norm_ / fact;
    }
    return out;
  }

 private:
  cplx trapezoid(cplx z, int m, double* l1) const {
    int stride = max_half_nodes / m;
    double h = s_ / m;
    compensated_sum<cplx> acc;
    double mag = 0.0;
    acc.add(grid_[0]);
    mag += grid_[0];
    cplx iz = cplx(0.0, two_pi) * z;
    for (int j = 1; j <= m; ++j) {
      double u = j * h;
      double b = grid_[static_cast<std::size_t>(j) * stride];
      if (b == 0.0) continue;
      cplx e1 = std::exp(iz * u);
      cplx e2 = std::exp(-iz * u);
      acc.add(b * (e1 + e2));
      mag += b * (std::abs(e1) + std::abs(e2));
    }
    *l1 = mag * h / norm_;
    return acc.value() * h / norm_;
  }

  template <class R>
  R grid_at(int j) const {
    if constexpr (std::is_same_v<R, dd>)
      return dd_grid()[static_cast<std::size_t>(j)];
    else
      return grid_[static_cast<std::size_t>(j)];
  }

  const std::vector<dd>& dd_grid() const {
    std::call_once(dd_once_->flag, [this] {
      auto& g = dd_once_->grid;
      g.resize(max_half_nodes + 1);
      for (int j = 0; j <= max_half_nodes; ++j) {
        __float128 v = static_cast<__float128>(j) / max_half_nodes;
        g[j] = (j == max_half_nodes) ? dd(0.0) : from_quad(expq(-1 / (1 - v * v)));
      }
    });
    return dd_once_->grid;
  }

  // normalised even moments int b (u/s)^{2j} / int b
  template <class R>
  const std::vector<R>& moments() const {
    std::call_once(mom_once_->flag, [this] {
      const auto& g = dd_grid();
      const int m = 4096;
      const int stride = max_half_nodes / m;
      std::vector<dd> mom(moment_terms, dd(0.0));
      std::vector<dd> v2(m + 1);
      for (int j = 0; j <= m; ++j) {
        dd v = dd(static_cast<double>(j)) / dd(static_cast<double>(m));
        v2[j] = v * v;
      }
      std::vector<dd> pw(m + 1);
      for (int j = 0; j <= m; ++j) pw[j] = g[static_cast<std::size_t>(j) * stride];
      dd norm = dd(0.0);
      for (int k = 0; k < moment_terms; ++k) {
        dd acc = pw[0] * (k == 0 ? dd(1.0) : dd(0.0));
        for (int j = 1; j <= m; ++j) {
          acc = acc + dd(2.0) * pw[j];
          pw[j] = pw[j] * v2[j];
        }
        if (k == 0) {
          norm = acc;
          pw[0] = dd(0.0);
        }
        mom[k] = acc / norm;
      }
      mom_once_->m_dd = mom;
      mom_once_->m_d.resize(moment_terms);
      for (int k = 0; k < moment_terms; ++k) mom_once_->m_d[k] = num::to_double(mom[k]);
    });
    if constexpr (std::is_same_v<R, dd>)
      return mom_once_->m_dd;
    else
      return mom_once_->m_d;
  }

  struct dd_cache {
    std::once_flag flag;
    std::vector<dd> grid;
  };
  struct mom_cache {
    std::once_flag flag;
    std::vector<dd> m_dd;
    std::vector<double> m_d;
  };

  double s_;
  double norm_ = 1.0;
  std::vector<double> grid_;
  std::shared_ptr<dd_cache> dd_once_ = std::make_shared<dd_cache>();
  std::shared_ptr<mom_cache> mom_once_ = std::make_shared<mom_cache>();
};

// ---------------------------------------------------------------------------

enum class WeightKind { plain_bump, squared };

inline const char* to_string(WeightKind k) { return k == WeightKind::plain_bump ? "plain" : "squared"; }

// Transform side w(x) = int w^(y) e(xy) dy with w^ even, supported in (-s, s).
//   plain:   w(x) = x^K B_s(x)            (K rounded up to even, see zero_order_used)
//   squared: w(x) = (x^{K/2} B_{s/2}(x))^2 >= 0 on the real line
class SmoothWeight {
 public:
  static SmoothWeight make_bump(double support_half_width, int zero_order, WeightKind kind) {
    require(support_half_width > 0.0 && support_half_width <= 0.25, errc::invalid_parameter,
            "support half-width must lie in (0, 1/4]");
    require(zero_order >= 0, errc::invalid_parameter, "zero order must be >= 0");
    if (kind == WeightKind::squared)
      require(zero_order % 2 == 0, errc::invalid_parameter, "squared kind needs an even zero order");
    return SmoothWeight(support_half_width, zero_order, kind);
  }

  double support_half_width() const { return s_; }
  int zero_order() const { return k_req_; }
  // an odd request for the plain kind is realised with the next even order so
  // the profile stays real and even
  int zero_order_used() const { return k_; }
  WeightKind kind() const { return kind_; }

  double imag_cap() const { return 200.0 / (4.0 * s_); }

  cplx eval(cplx z) const {
    if (std::fabs(z.imag()) > imag_cap())
      throw error(errc::overflow, "eval_weight: |Im z| beyond cap " + std::to_string(imag_cap()));
    if (kind_ == WeightKind::plain_bump) return std::pow(z, k_) * bump_.eval(z);
    cplx g = std::pow(z, k_ / 2) * bump_.eval(z);
    return g * g;
  }

  template <class R>
  R eval_real(R x) const {
    R b = bump_.eval_real(x);
    if (kind_ == WeightKind::plain_bump) return num::powi(x, k_) * b;
    R g = num::powi(x, k_ / 2) * b;
    return g * g;
  }

  // w(iy), real for even effective order
  template <class R>
  R eval_imag(R y) const {
    if (std::fabs(num::to_double(y)) > imag_cap())
      throw error(errc::overflow, "eval_weight: |Im z| beyond cap");
    R b = bump_.eval_imag(y);
    double sgn = ((k_ / 2) % 2 == 0) ? 1.0 : -1.0;  // i^K
    if (kind_ == WeightKind::plain_bump) return R(sgn) * num::powi(y, k_) * b;
    return R(sgn) * num::powi(y, k_) * b * b;
  }

  // profile w^(y)
  double profile(double y) const {
    if (std::fabs(y) >= s_) return 0.0;
    if (kind_ == WeightKind::plain_bump) {
      // x^K B(x) <-> (2 pi i)^{-K} (-1)^K d^K/dy^K b ... real for even K
      double d = bump_.profile_derivative(y, k_);
      double sgn = ((k_ / 2) % 2 == 0) ? 1.0 : -1.0;
      return sgn * d / std::pow(two_pi, k_);
    }
    // g^ * g^ with g = x^{K/2} B_{s/2}; for odd K/2 the i^{-K} factor squares to -1
    double sh = s_ / 2.0;
    int kk = k_ / 2;
    double sgn = (kk % 2 == 0) ? 1.0 : -1.0;
    auto gh = [&](double u) { return sgn * bump_.profile_derivative(u, kk) / std::pow(two_pi, kk); };
    double lo = std::max(-sh, y - sh), hi = std::min(sh, y + sh);
    if (lo >= hi) return 0.0;
    QuadratureSpec qs;
    qs.abs_tol = 1e-15;
    qs.rel_tol = 1e-12;
    auto f = [&](double u) { return gh(u) * gh(y - u) * (kk % 2 == 1 ? -1.0 : 1.0); };
    return integrate(f, lo, hi, qs).value.real();
  }

  // int |w^|, the constant in |w(x+iy)| <= C e^{2 pi s |y|}
  double profile_l1() const {
    std::call_once(l1_->flag, [this] {
      QuadratureSpec qs;
      qs.abs_tol = 1e-13;
      qs.rel_tol = 1e-9;
      auto f = [&](double y) { return std::fabs(profile(y)); };
      l1_->value = 2.0 * integrate(f, 0.0, s_, qs).value.real();
    });
    return l1_->value;
  }

  // Taylor coefficients of w at real x
  std::vector<double> taylor(double x, int order) const {
    std::vector<double> b = bump_.taylor(x, order);
    jet<double> bj(static_cast<std::size_t>(order));
    bj.c = b;
    jet<double> xv = jet<double>::variable(static_cast<std::size_t>(order), x);
    if (kind_ == WeightKind::plain_bump) return (powi(xv, k_) * bj).c;
    jet<double> g = powi(xv, k_ / 2) * bj;
    return (g * g).c;
  }

  const BumpTransform& bump() const { return bump_; }

  std::string describe() const {
    return std::string(to_string(kind_)) + "(s=" + std::to_string(s_) + ",K=" + std::to_string(k_req_) + ")";
  }

 private:
  SmoothWeight(double s, int k, WeightKind kind)
      : s_(s),
        k_req_(k),
        k_(kind == WeightKind::plain_bump ? k + (k % 2) : k),
        kind_(kind),
        bump_(kind == WeightKind::plain_bump ? s : s / 2.0) {}

  struct l1_cache {
    std::once_flag flag;
    double value = 0.0;
  };

  double s_;
  int k_req_;
  int k_;
  WeightKind kind_;
  BumpTransform bump_;
  std::shared_ptr<l1_cache> l1_ = std::make_shared<l1_cache>();
};

// ---------------------------------------------------------------------------

enum class Family { hT, HT };

inline const char* to_string(Family f) { return f == Family::hT ? "hT" : "HT"; }

// w_T(r) = H(r/T)                          (family HT)
// w_T(r) = (r/T) h(ir/T) / sinh(pi r/T)    (family hT)
class SpectralWeight {
 public:
  SpectralWeight(SmoothWeight base, double T, Family family)
      : base_(std::move(base)), T_(T), family_(family) {
    require(T > 0.0 && std::isfinite(T), errc::invalid_parameter, "T must be positive");
  }

  const SmoothWeight& base() const { return base_; }
  double T() const { return T_; }
  Family family() const { return family_; }

  bool T_is_odd_integer() const {
    double r = std::round(T_);
    return std::fabs(T_ - r) < 1e-12 && static_cast<long>(r) % 2 == 1;
  }

  cplx eval(cplx r) const {
    if (r.imag() == 0.0) return eval_real(r.real());
    if (r.real() == 0.0) return eval_imag_axis(r.imag());
    cplx y = r / T_;
    if (family_ == Family::HT) return base_.eval(y);
    cplx sh = std::sinh(pi * y);
    check_pole(r);
    return y * base_.eval(cplx(0.0, 1.0) * y) / sh;
  }

  // real argument, generic precision
  template <class R>
  R eval_real(R r) const {
    R y = r / R(T_);
    if (family_ == Family::HT) return base_.eval_real(y);
    R h = base_.eval_imag(y);
    return y_over_sinh(y) * h;
  }

  // w_T(i a) for real a
  double eval_imag_axis(double a) const {
    double y = a / T_;
    if (family_ == Family::HT) return base_.eval_imag(y);
    check_pole(cplx(0.0, a));
    // (ia/T) h(-a/T) / sinh(i pi a/T) = (a/T) h(a/T) / sin(pi a/T)
    double u = pi * y;
    double ratio = std::fabs(u) < 1e-2 ? 1.0 / pi / (1.0 - u * u / 6.0 + u * u * u * u / 120.0)
                                       : y / std::sin(u);
    return ratio * base_.eval_real(y);
  }

  // decay envelope constants: |w_T(r)| <= C e^{-pi |r| / (4T)} (hT) on the
  // real line, |H_T(ir)| <= C e^{pi |r| / (2T)} on the imaginary axis (HT)
  double growth_constant() const { return base_.profile_l1(); }

  std::string describe() const {
    return std::string(to_string(family_)) + "[T=" + std::to_string(T_) + "," + base_.describe() + "]";
  }

 private:
  template <class R>
  static R y_over_sinh(R y) {
    double yd = std::fabs(num::to_double(y));
    if (yd < 1e-2) {
      R u = num::pi<R>() * y;
      R u2 = u * u;
      // (1/pi) (1 - u^2/6 + 7u^4/360 - 31u^6/15120)
      R s = R(1.0) - u2 / R(6.0) + R(7.0) * u2 * u2 / R(360.0) - R(31.0) * u2 * u2 * u2 / R(15120.0);
      return s / num::pi<R>();
    }
    if (yd > 300.0) return R(0.0);
    return y / num::sinh(num::pi<R>() * y);
  }

  void check_pole(cplx r) const {
    if (family_ != Family::hT) return;
    double k = r.imag() / T_;
    double kr = std::round(k);
    if (kr != 0.0 && std::fabs(r.real()) < 1e-12 * T_ && std::fabs(k - kr) < 1e-12)
      throw error(errc::pole, "h_T has a pole at r = " + std::to_string(r.imag()) + "i");
  }

  SmoothWeight base_;
  double T_;
  Family family_;
};

// default weights
inline SmoothWeight default_h() { return SmoothWeight::make_bump(0.25, 8, WeightKind::plain_bump); }
inline SmoothWeight default_H(int K0 = 0) {
  return SmoothWeight::make_bump(0.25, 2 * K0, WeightKind::squared);
}

}  // namespace maassden
