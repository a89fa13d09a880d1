// Timing comparison of the OpenMP grid scans against their serial reference.
// Run: tfe_bench [points]

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "tfe/expansion.hpp"
#include "tfe/profile.hpp"
#include "tfe/scan.hpp"

#ifdef TFE_HAVE_OPENMP
#include <omp.h>
#endif

using namespace tfe;
using clock_type = std::chrono::steady_clock;

namespace {

template <class F>
double time_ms(F&& f) {
  auto t0 = clock_type::now();
  f();
  return std::chrono::duration<double, std::milli>(clock_type::now() - t0).count();
}

void report(const char* name, double serial_ms, double parallel_ms) {
  std::printf("%-24s serial %8.1f ms   parallel %8.1f ms   speedup %.2fx\n", name, serial_ms,
              parallel_ms, serial_ms / parallel_ms);
}

}  // namespace

int main(int argc, char** argv) {
  int points = argc > 1 ? std::atoi(argv[1]) : 64;
  if (points < 2) points = 2;

#ifdef TFE_HAVE_OPENMP
  std::printf("OpenMP threads: %d, grid points: %d\n", omp_get_max_threads(), points);
#else
  std::printf("OpenMP not enabled; both columns run serially. Grid points: %d\n", points);
#endif

  {
    std::vector<double> mus(points);
    for (int i = 0; i < points; ++i) mus[i] = -0.05 - 0.9 * i / (points - 1);
    ProfileProblem p;
    p.n = 1.8;
    auto shot_end = [&](double mu) { return shoot(p, mu).traj.t.back(); };

    std::vector<double> a, b;
    double ts = time_ms([&] { a = scan::serial_map(mus, shot_end); });
    double tp = time_ms([&] { b = scan::parallel_map(mus, shot_end); });
    report("mu scan (n=1.8)", ts, tp);
    if (a != b) {
      std::fprintf(stderr, "mismatch between serial and parallel mu scan\n");
      return 1;
    }
  }

  {
    auto ds = d_grid(1e-2, 1e3, points | 1);
    auto origin_slope = [](double d) { return backshoot_positive(1.9, d).origin[1]; };

    std::vector<double> a, b;
    double ts = time_ms([&] { a = scan::serial_map(ds, origin_slope); });
    double tp = time_ms([&] { b = scan::parallel_map(ds, origin_slope); });
    report("interface D scan", ts, tp);
    if (a != b) {
      std::fprintf(stderr, "mismatch between serial and parallel D scan\n");
      return 1;
    }
  }

  return 0;
}
