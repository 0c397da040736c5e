// Serial reference vs OpenMP for the exhaustive isotropic search and the
// signature sweep. Prints one line per kernel with the best of several runs.

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <string>

#include "demuskin/cli/reports.hpp"

using namespace demuskin;

namespace {

double best_seconds(int repeats, const std::function<void()>& body) {
  double best = 1e300;
  for (int i = 0; i < repeats; ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    body();
    const auto t1 = std::chrono::steady_clock::now();
    best = std::min(best, std::chrono::duration<double>(t1 - t0).count());
  }
  return best;
}

void compare(const std::string& name, int repeats, const std::function<void(zq::Execution)>& kernel) {
  const double serial = best_seconds(repeats, [&] { kernel(zq::Execution::Serial); });
  const double parallel = best_seconds(repeats, [&] { kernel(zq::Execution::Parallel); });
  std::printf("%-34s %10.4f %10.4f %8.2fx\n", name.c_str(), serial, parallel, serial / parallel);
}

void oracle(int n, const zq::Modulus& m, int repeats) {
  const auto pres = core::standard_presentation(n, m);
  const auto inv = core::invariants(pres);
  const auto full = zq::Submodule::full(m.ring_q(), pres.rank());
  std::uint64_t candidates = 0;
  compare("oracle d=" + std::to_string(pres.rank()) + " q=" + std::to_string(m.q), repeats, [&](zq::Execution exec) {
    candidates = zq::search_isotropic_summands(inv.cup, full, true, exec).candidates;
  });
  std::printf("%-34s %10llu candidates\n", "", static_cast<unsigned long long>(candidates));
}

}  // namespace

int main(int argc, char** argv) {
  const int repeats = argc > 1 ? std::max(1, std::stoi(argv[1])) : 3;
  std::printf("threads: %d, best of %d\n", omp_get_max_threads(), repeats);
  std::printf("%-34s %10s %10s %9s\n", "kernel", "serial s", "omp s", "speedup");
  oracle(2, zq::Modulus(3, 1), repeats);
  oracle(2, zq::Modulus(3, 2), repeats);
  oracle(4, zq::Modulus(3, 1), repeats);
  oracle(2, zq::Modulus(5, 1), repeats);
  oracle(4, zq::Modulus(3, 2), repeats);
  compare("sweep n={2,4,6} q={3,9,5}", repeats,
          [](zq::Execution exec) { cli::run_sweep({2, 4, 6}, {3, 9, 5}, exec); });
  compare("sweep n={8} q={3,5,7,9,25}", repeats,
          [](zq::Execution exec) { cli::run_sweep({8}, {3, 5, 7, 9, 25}, exec); });
  return 0;
}
