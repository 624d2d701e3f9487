#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <queue>
#include <vector>

#include "core.hpp"
#include "dd.hpp"

namespace maassden {

struct QuadratureSpec {
  double abs_tol = 1e-11;
  double rel_tol = 0.0;
  int max_subdivisions = 2000;
  int panel_order = 15;

  void validate() const {
    require(abs_tol >= 0 && rel_tol >= 0, errc::invalid_parameter, "tolerances must be >= 0");
    require(abs_tol > 0 || rel_tol > 0, errc::invalid_parameter,
            "one of abs_tol/rel_tol must be positive");
    require(max_subdivisions >= 1, errc::invalid_parameter, "max_subdivisions must be >= 1");
    require(panel_order >= 2, errc::invalid_parameter, "panel_order must be >= 2");
  }
};

struct QuadResult {
  cplx value;
  double error = 0.0;
  int subdivisions = 0;
  long evaluations = 0;
};

// Gauss-Legendre nodes/weights on [-1, 1], Newton iteration on P_n.
template <class R = double>
struct GaussLegendre {
  std::vector<R> x, w;

  explicit GaussLegendre(int n) : x(n), w(n) {
    for (int i = 0; i < (n + 1) / 2; ++i) {
      R z = std::cos(pi * (i + 0.75) / (n + 0.5));
      R dp{};
      for (int it = 0; it < 100; ++it) {
        R p0(1.0), p1 = z;
        for (int k = 2; k <= n; ++k) {
          R p2 = (R(2.0 * k - 1) * z * p1 - R(k - 1.0) * p0) / R(static_cast<double>(k));
          p0 = p1;
          p1 = p2;
        }
        if (n == 1) {
          p1 = z;
          p0 = R(1.0);
        }
        dp = R(static_cast<double>(n)) * (z * p1 - p0) / (z * z - R(1.0));
        R dz = p1 / dp;
        z = z - dz;
        if (num::abs(num::to_double(dz)) < 1e-34 + num::to_double(num::epsilon<R>()) * 0.25)
          break;
      }
      // final derivative at the converged node
      R p0(1.0), p1 = z;
      for (int k = 2; k <= n; ++k) {
        R p2 = (R(2.0 * k - 1) * z * p1 - R(k - 1.0) * p0) / R(static_cast<double>(k));
        p0 = p1;
        p1 = p2;
      }
      dp = R(static_cast<double>(n)) * (z * p1 - p0) / (z * z - R(1.0));
      x[i] = -z;
      x[n - 1 - i] = z;
      R wi = R(2.0) / ((R(1.0) - z * z) * dp * dp);
      w[i] = wi;
      w[n - 1 - i] = wi;
    }
    if (n % 2 == 1) x[n / 2] = R(0.0);
  }
};

namespace quadimpl {

struct panel {
  double a, b;
  cplx coarse;  // n-point rule on [a, b]
  cplx fine;    // sum of n-point rules on the halves
  cplx left, right;
  double err;
  bool operator<(const panel& o) const { return err < o.err; }
};

template <class F>
cplx apply_rule(const GaussLegendre<double>& gl, F& f, double a, double b, long& evals,
                double* l1 = nullptr) {
  double c = 0.5 * (a + b), h = 0.5 * (b - a);
  compensated_sum<cplx> s;
  double m = 0.0;
  for (std::size_t i = 0; i < gl.x.size(); ++i) {
    cplx v = cplx(f(c + h * gl.x[i]));
    s.add(gl.w[i] * v);
    m += gl.w[i] * std::abs(v);
  }
  evals += static_cast<long>(gl.x.size());
  if (l1) *l1 = m * std::fabs(h);
  return s.value() * h;
}

}  // namespace quadimpl

// Adaptive Gauss-Legendre with a global error queue.  Panel error is the
// difference between the order-n rule on the panel and on its two halves.
template <class F>
QuadResult integrate(F&& f, double a, double b, const QuadratureSpec& spec = {}) {
  spec.validate();
  QuadResult res;
  if (a == b) return res;
  const GaussLegendre<double> gl(spec.panel_order);
  auto make = [&](double lo, double hi, cplx coarse) {
    quadimpl::panel p{lo, hi, coarse, {}, {}, {}, 0.0};
    double mid = 0.5 * (lo + hi);
    double l1a = 0.0, l1b = 0.0;
    p.left = quadimpl::apply_rule(gl, f, lo, mid, res.evaluations, &l1a);
    p.right = quadimpl::apply_rule(gl, f, mid, hi, res.evaluations, &l1b);
    p.fine = p.left + p.right;
    // differences at rounding level carry no information
    double noise = 64.0 * std::numeric_limits<double>::epsilon() * (l1a + l1b);
    p.err = std::max(0.0, std::abs(p.fine - p.coarse) - noise);
    if (!finite(p.fine)) throw error(errc::overflow, "integrate: non-finite integrand value");
    return p;
  };
  std::priority_queue<quadimpl::panel> q;
  q.push(make(a, b, quadimpl::apply_rule(gl, f, a, b, res.evaluations)));
  cplx total = q.top().fine;
  double err = q.top().err;
  compensated_sum<cplx> tsum;
  compensated_sum<double> esum;
  tsum.add(total);
  esum.add(err);
  while (true) {
    double target = std::max(spec.abs_tol, spec.rel_tol * std::abs(total));
    if (err <= target) break;
    if (res.subdivisions >= spec.max_subdivisions)
      throw convergence_error("integrate: max_subdivisions exhausted", total, err);
    quadimpl::panel p = q.top();
    q.pop();
    double mid = 0.5 * (p.a + p.b);
    quadimpl::panel l = make(p.a, mid, p.left);
    quadimpl::panel r = make(mid, p.b, p.right);
    ++res.subdivisions;
    q.push(l);
    q.push(r);
    tsum.add(l.fine);
    tsum.add(r.fine);
    tsum.add(-p.fine);
    esum.add(l.err);
    esum.add(r.err);
    esum.add(-p.err);
    total = tsum.value();
    err = std::max(0.0, esum.value());
  }
  res.value = total;
  res.error = err;
  return res;
}

// Splits [points[0], points.back()] at the given breakpoints and integrates
// each piece with a share of the tolerance.
template <class F>
QuadResult integrate(F&& f, const std::vector<double>& points, const QuadratureSpec& spec = {}) {
  require(points.size() >= 2, errc::invalid_parameter, "need at least two breakpoints");
  QuadResult out;
  QuadratureSpec sub = spec;
  sub.abs_tol = spec.abs_tol / static_cast<double>(points.size() - 1);
  compensated_sum<cplx> t;
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    QuadResult r = integrate(f, points[i], points[i + 1], sub);
    t.add(r.value);
    out.error += r.error;
    out.subdivisions += r.subdivisions;
    out.evaluations += r.evaluations;
  }
  out.value = t.value();
  return out;
}

}  // namespace maassden
