#pragma once

// Ingested spectral data: Maass form records and zero lists.

#include <cmath>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "arith.hpp"
#include "core.hpp"

namespace maassden {

// How norm_sq was measured.
//   paper_index_normalized: the value that makes sum lambda_m w(t)/norm_sq the
//     spectral side with diagonal nu(N)/pi^2 int r w tanh(pi r) dr
//   fundamental_domain: int over Gamma_0(N)\H of |u|^2 dxdy/y^2 with
//     u = cosh(pi t)^{1/2} y^{1/2} sum lambda_n K_it(2 pi |n| y) e(nx);
//     paper_index_normalized = fundamental_domain / nu(N)
enum class NormConvention { paper_index_normalized, fundamental_domain };

inline const char* to_string(NormConvention c) {
  return c == NormConvention::paper_index_normalized ? "paper_index_normalized" : "fundamental_domain";
}

struct MaassFormRecord {
  Level level = Level::make(1);
  double t = 0.0;              // spectral parameter magnitude
  bool t_imaginary = false;    // exceptional eigenvalue, t = i*|t| with |t| <= 1/4
  int sign = 1;                // (-1)^eps
  double norm_sq = 1.0;
  NormConvention norm_convention = NormConvention::paper_index_normalized;
  std::map<i64, double> hecke;  // lambda_p

  cplx spectral_parameter() const { return t_imaginary ? cplx(0.0, t) : cplx(t, 0.0); }

  // ||u||^2 in the paper_index_normalized convention
  double normalized_norm_sq() const {
    if (norm_convention == NormConvention::paper_index_normalized) return norm_sq;
    return norm_sq / static_cast<double>(nu(level));
  }

  double lambda(i64 n) const { return hecke_lambda(n, hecke, level); }

  // lambda_{p^2} = lambda_p^2 - chi0(p)
  double lambda_p2(i64 p) const { return lambda(p * p); }

  void validate() const {
    if (!std::isfinite(t) || t < 0) throw invariant_error("t", "spectral parameter must be finite and >= 0");
    if (t_imaginary && t > 0.25) throw invariant_error("t", "exceptional parameter must satisfy |t| <= 1/4");
    if (sign != 1 && sign != -1) throw invariant_error("sign", "sign must be +1 or -1");
    if (!(norm_sq > 0) || !std::isfinite(norm_sq)) throw invariant_error("norm2", "norm must be positive");
    for (auto [p, l] : hecke) {
      if (!is_prime(p)) throw invariant_error("p" + std::to_string(p), "Hecke key is not a prime");
      if (!std::isfinite(l)) throw invariant_error("p" + std::to_string(p), "non-finite eigenvalue");
      double bound = 2.0 * std::pow(static_cast<double>(p), 7.0 / 64.0) + 1e-6;
      if (!level.divides(p) && std::fabs(l) > bound)
        throw invariant_error("p" + std::to_string(p),
                              "|lambda_p| = " + std::to_string(std::fabs(l)) + " exceeds 2p^{7/64} = " +
                                  std::to_string(bound - 1e-6));
    }
  }
};

struct ZeroList {
  std::vector<double> gammas;  // ascending, as given
  bool mirror = true;          // each gamma > 0 also stands for -gamma
  double completeness_height = std::numeric_limits<double>::infinity();

  // all ordinates with the mirror applied (0 counted once)
  std::vector<double> ordinates() const {
    std::vector<double> out;
    for (double g : gammas) {
      out.push_back(g);
      if (mirror && g > 0) out.push_back(-g);
    }
    std::sort(out.begin(), out.end());
    return out;
  }
};

}  // namespace maassden
