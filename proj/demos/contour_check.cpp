// Both sides of the Bessel-transform contour identity for the two weight families.
#include <cstdio>
#include <maassden/kuznetsov.hpp>

int main() {
  using namespace maassden;
  for (int T : {5, 9}) {
    for (Family fam : {Family::hT, Family::HT}) {
      SpectralWeight sw(fam == Family::hT ? default_h() : default_H(), T, fam);
      for (const ContourCheck& c : contour_transform({0.5, 2.0, std::min(5.0, double(T))}, sw))
        std::printf("%s T=%d X=%-4g integral %+.12e i   residues %+.12e   defect %.1e\n", to_string(fam), T, c.X,
                    c.integral_side.imag(), (c.c1 * (c.residue_side + c.bracket_term.value_or(0.0))).imag(),
                    c.defect);
    }
  }
}
