// Timing comparison of the OpenMP scan kernels against their serial
// reference implementations.

#include <chrono>
#include <cstdio>
#include <omp.h>

#include "pcm/grids.hpp"
#include "pcm/noncomp.hpp"

using namespace pcm;

namespace {

double ms_since(std::chrono::high_resolution_clock::time_point t0) {
  auto t1 = std::chrono::high_resolution_clock::now();
  return std::chrono::duration<double, std::milli>(t1 - t0).count();
}

OscillatorySum sample_sum() {
  OscillatorySum E;
  E.terms.push_back({ExpCoeff(1), ExpCoeff(1), {}});
  E.terms.push_back({-ExpCoeff(1), ExpCoeff(2), {}});
  E.terms.push_back({ExpCoeff(Rat(1, 2)), ExpCoeff(Rat(7, 3)), {}});
  return E;
}

void bench_scan() {
  OscillatorySum E = sample_sum();
  auto ys = log_ladder(1.0, 1e6, 200000);
  auto t0 = std::chrono::high_resolution_clock::now();
  auto serial = osc_scan_abs_serial(E, ys);
  double t_serial = ms_since(t0);
  t0 = std::chrono::high_resolution_clock::now();
  auto parallel = osc_scan_abs_omp(E, ys);
  double t_omp = ms_since(t0);
  double diff = 0;
  for (size_t k = 0; k < ys.size(); ++k) diff = std::max(diff, std::abs(serial[k] - parallel[k]));
  std::printf("witness scan   %9zu pts  serial %8.1f ms  omp %8.1f ms  x%.2f  maxdiff %.1e\n",
              ys.size(), t_serial, t_omp, t_serial / t_omp, diff);
}

void bench_partition() {
  Grid g;
  g.d = 2;
  g.data.push_back({ExpCoeff(1), ExpCoeff(0), 0});
  g.data.push_back({ExpCoeff(Rat(1), Rat(1)), ExpCoeff(Rat(1, 3)), 0});
  g.data.push_back({ExpCoeff(2), ExpCoeff(Rat(-1, 2)), 1});
  Window w{-4, 4, -4, 4};
  const long N = 400000;
  std::vector<std::complex<double>> pts(N);
  unsigned state = 12345;
  auto rnd = [&state]() {
    state = state * 1664525u + 1013904223u;
    return (state >> 8) * (1.0 / (1 << 24));
  };
  for (long k = 0; k < N; ++k)
    pts[k] = {w.re_lo + rnd() * (w.re_hi - w.re_lo), w.im_lo + rnd() * (w.im_hi - w.im_lo)};

  std::vector<long> serial_cls(N), omp_cls(N);
  auto classify = [&g](const std::complex<double>& s) {
    long code = 0;
    for (size_t i = 0; i < g.data.size(); ++i) {
      auto [j, on] = g.classify(i, s);
      code = code * 1315423911L + j * 2 + (on ? 1 : 0);
    }
    return code;
  };
  auto t0 = std::chrono::high_resolution_clock::now();
  for (long k = 0; k < N; ++k) serial_cls[k] = classify(pts[k]);
  double t_serial = ms_since(t0);
  t0 = std::chrono::high_resolution_clock::now();
#pragma omp parallel for schedule(static)
  for (long k = 0; k < N; ++k) omp_cls[k] = classify(pts[k]);
  double t_omp = ms_since(t0);
  long mismatch = 0;
  for (long k = 0; k < N; ++k) mismatch += serial_cls[k] != omp_cls[k];
  std::printf("grid classify  %9ld pts  serial %8.1f ms  omp %8.1f ms  x%.2f  mismatches %ld\n",
              N, t_serial, t_omp, t_serial / t_omp, mismatch);
}

}  // namespace

int main() {
  std::printf("threads: %d\n", omp_get_max_threads());
  bench_scan();
  bench_partition();
  return 0;
}
