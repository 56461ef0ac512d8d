// Benchmark: serial reference kernels vs the OpenMP variants. The parallel
// kernels are designed to be bitwise identical to the serial ones, so the
// table also reports the maximum absolute difference (expected: 0).

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <vector>

#include "perron/kernels.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

using Clock = std::chrono::steady_clock;

double time_ms(const std::function<void()>& fn, int reps) {
  auto t0 = Clock::now();
  for (int r = 0; r < reps; ++r) fn();
  auto t1 = Clock::now();
  return std::chrono::duration<double, std::milli>(t1 - t0).count() / reps;
}

}  // namespace

int main() {
#ifdef _OPENMP
  std::printf("OpenMP enabled, max threads: %d\n", omp_get_max_threads());
#else
  std::printf("OpenMP not available; both columns run the serial code\n");
#endif
  std::printf("%-18s %10s %10s %8s %12s\n", "kernel", "serial ms", "omp ms",
              "speedup", "max |diff|");

  std::mt19937_64 rng(12345);
  std::normal_distribution<double> gauss(0.0, 1.0);

  for (int n : {64, 128, 256, 384}) {
    std::vector<double> a(static_cast<size_t>(n) * n);
    std::vector<double> b(a.size()), c1(a.size()), c2(a.size());
    for (auto& x : a) x = gauss(rng);
    for (auto& x : b) x = gauss(rng);

    int reps = n <= 128 ? 20 : 5;
    double ts = time_ms(
        [&] {
          perron::kernels::serial::matmul(a.data(), b.data(), c1.data(), n, n,
                                          n);
        },
        reps);
    double tp = time_ms(
        [&] {
          perron::kernels::omp::matmul(a.data(), b.data(), c2.data(), n, n,
                                       n);
        },
        reps);
    double diff = 0.0;
    for (size_t i = 0; i < c1.size(); ++i)
      diff = std::max(diff, std::fabs(c1[i] - c2[i]));
    char label[32];
    std::snprintf(label, sizeof(label), "matmul %dx%d", n, n);
    std::printf("%-18s %10.3f %10.3f %7.2fx %12g\n", label, ts, tp, ts / tp,
                diff);
  }

  for (int n : {128, 384}) {
    std::vector<double> a(static_cast<size_t>(n) * n);
    std::vector<double> x(a.size()), o1(a.size()), o2(a.size());
    for (auto& v : a) v = gauss(rng);
    for (auto& v : x) v = gauss(rng);
    int reps = n <= 128 ? 20 : 5;
    double ts = time_ms(
        [&] {
          perron::kernels::serial::shifted_apply(a.data(), x.data(), 1.5,
                                                 o1.data(), n, n);
        },
        reps);
    double tp = time_ms(
        [&] {
          perron::kernels::omp::shifted_apply(a.data(), x.data(), 1.5,
                                              o2.data(), n, n);
        },
        reps);
    double diff = 0.0;
    for (size_t i = 0; i < o1.size(); ++i)
      diff = std::max(diff, std::fabs(o1[i] - o2[i]));
    char label[32];
    std::snprintf(label, sizeof(label), "shifted %dx%d", n, n);
    std::printf("%-18s %10.3f %10.3f %7.2fx %12g\n", label, ts, tp, ts / tp,
                diff);
  }
  return 0;
}
