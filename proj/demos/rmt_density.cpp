// Monte Carlo one-level densities of the classical groups next to the
// Katz-Sarnak predictions.
#include <cstdio>
#include <maassden/rmt.hpp>

int main() {
  using namespace maassden;
  TestFunction phi(1.2, Shape::fejer);
  struct E {
    Group g;
    int n;
  };
  for (E e : {E{Group::U, 20}, E{Group::Sp, 20}, E{Group::SOeven, 20}, E{Group::SOodd, 21}}) {
    DensityReport r = empirical_one_level({e.g, e.n, 4000, 42}, phi);
    std::printf("%-7s %3d  %.4f +- %.4f   predicted %.4f\n", to_string(e.g), e.n, r.value, r.error_estimate,
                predicted_one_level(e.g, phi));
  }
}
