// Zero side against prime side of the explicit formula for the bundled forms.
#include <cstdio>
#include <maassden/density.hpp>
#include <maassden/io.hpp>

int main(int argc, char** argv) {
  using namespace maassden;
  std::string dir = argc > 1 ? argv[1] : "data";
  TestFunction phi(0.45, Shape::bump_squared);
  for (const MaassFormRecord& f : load_forms(dir + "/level1.maass")) {
    char name[64];
    std::snprintf(name, sizeof name, "/zeros/level1_t%.5f.zeros", f.t);
    ZeroList z = load_zeros(dir + name);
    double R = 1.0 + f.t * f.t;
    DensityReport a = one_level_from_zeros(z, R, phi, ZeroTailModel{1.0, f.t});
    DensityReport b = one_level_prime_side(f, phi, R, 100);
    std::printf("t=%9.5f sign=%+d  zeros %.8f  primes %.8f  diff %+.1e\n", f.t, f.sign, a.value, b.value,
                a.value - b.value);
  }
}
