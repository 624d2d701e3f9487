// Kloosterman sums S(m,n;c) against the Weil bound.
#include <cstdio>
#include <cstdlib>
#include <maassden/arith.hpp>

int main(int argc, char** argv) {
  using namespace maassden;
  i64 m = argc > 1 ? std::atol(argv[1]) : 1;
  i64 n = argc > 2 ? std::atol(argv[2]) : 1;
  i64 c_max = argc > 3 ? std::atol(argv[3]) : 30;
  std::vector<double> S = kloosterman_range(m, n, c_max);
  std::printf("%6s %14s %10s\n", "c", "S(m,n;c)", "|S|/Weil");
  for (i64 c = 1; c <= c_max; ++c)
    std::printf("%6lld %14.8f %10.6f\n", static_cast<long long>(c), S[c - 1],
                std::fabs(S[c - 1]) / weil_bound(m, n, c));
}
