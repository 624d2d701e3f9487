#pragma once

// Even test functions phi with compactly supported transform phi^.

#include <cmath>
#include <memory>
#include <mutex>
#include <string>

#include "core.hpp"
#include "quadrature.hpp"
#include "weights.hpp"

namespace maassden {

enum class Shape { fejer, bump_squared };

inline const char* to_string(Shape s) { return s == Shape::fejer ? "fejer" : "bump_squared"; }

class TestFunction {
 public:
  // fejer:        phi^(y) = max(0, 1 - |y|/eta),  phi(x) = eta sinc^2(pi eta x)
  // bump_squared: phi(x) = B(x)^2 with B the normalised transform of the bump
  //               of half-width eta/2, so phi^ = b*b/(int b)^2 on [-eta, eta]
  TestFunction(double eta, Shape shape, double amplitude = 1.0) : eta_(eta), shape_(shape), amp_(amplitude) {
    require(eta > 0.0 && std::isfinite(eta), errc::invalid_parameter, "test function needs eta > 0");
    require(std::isfinite(amplitude), errc::invalid_parameter, "amplitude must be finite");
    if (shape == Shape::bump_squared) bump_ = std::make_shared<BumpTransform>(0.5 * eta);
  }

  double eta() const { return eta_; }
  Shape shape() const { return shape_; }
  double amplitude() const { return amp_; }

  TestFunction scaled(double c) const {
    TestFunction t = *this;
    t.amp_ *= c;
    return t;
  }

  double phi(double x) const {
    if (amp_ == 0.0) return 0.0;
    if (shape_ == Shape::fejer) {
      double u = pi * eta_ * x;
      if (std::fabs(u) < 1e-4) return amp_ * eta_ * (1.0 - u * u / 3.0);
      double s = std::sin(u) / u;
      return amp_ * eta_ * s * s;
    }
    double b = bump_->eval_real(x);
    return amp_ * b * b;
  }

  double phi_hat(double y) const {
    if (amp_ == 0.0 || std::fabs(y) >= eta_) return 0.0;
    if (shape_ == Shape::fejer) return amp_ * (1.0 - std::fabs(y) / eta_);
    // normalised profile autocorrelation
    double s = 0.5 * eta_;
    double ay = std::fabs(y);
    double lo = ay - s, hi = s;
    QuadratureSpec qs;
    qs.abs_tol = 1e-15;
    qs.rel_tol = 1e-13;
    auto f = [&](double u) { return bump_->profile(u) * bump_->profile(ay - u); };
    return amp_ * integrate(f, lo, hi, qs).value.real();
  }

  // sup_{|x'| >= x} |phi(x')|
  double tail_envelope(double x) const {
    double ax = std::fabs(x);
    if (shape_ == Shape::fejer) {
      double u = pi * eta_ * ax;
      return std::fabs(amp_) * eta_ * std::min(1.0, 1.0 / (u * u));
    }
    // |B(x)| <= int |b''| / (4 pi^2 x^2 int b)
    double c = second_derivative_l1();
    double v = std::min(1.0, c / (4.0 * pi * pi * ax * ax));
    return std::fabs(amp_) * v * v;
  }

  // int_{|x| >= x0} |phi|
  double tail_integral(double x0) const {
    double a = std::max(std::fabs(x0), 1e-300);
    if (shape_ == Shape::fejer) return std::fabs(amp_) * 2.0 / (pi * pi * eta_ * a);
    double c = second_derivative_l1() / (4.0 * pi * pi);
    return std::fabs(amp_) * 2.0 * c * c / (3.0 * a * a * a);
  }

  std::string describe() const {
    return std::string(to_string(shape_)) + "(eta=" + std::to_string(eta_) + ")";
  }

 private:
  double second_derivative_l1() const {
    std::call_once(c2_->flag, [this] {
      QuadratureSpec qs;
      qs.abs_tol = 1e-10;
      qs.rel_tol = 1e-8;
      double s = 0.5 * eta_;
      auto f = [&](double u) { return std::fabs(bump_->profile_derivative(u, 2)); };
      c2_->value = 2.0 * integrate(f, 0.0, s, qs).value.real();
    });
    return c2_->value;
  }

  struct cache {
    std::once_flag flag;
    double value = 0.0;
  };

  double eta_;
  Shape shape_;
  double amp_;
  std::shared_ptr<BumpTransform> bump_;
  std::shared_ptr<cache> c2_ = std::make_shared<cache>();
};

inline TestFunction make_test_function(double eta, Shape shape) { return TestFunction(eta, shape); }

}  // namespace maassden
