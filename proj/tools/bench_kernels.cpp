// Compares the OpenMP kernels against their serial references: same bits,
// different wall time. Run with OMP_NUM_THREADS to vary the thread count.

#include <chrono>
#include <cstdio>
#include <random>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "gdft/dft.hpp"
#include "gdft/io.hpp"

using namespace gdft;

namespace {

double now_ms() {
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

Matrix random_matrix(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> d(0.0, 1.0);
  Matrix m(n, n);
  for (std::size_t i = 0; i < m.size(); ++i) m.data()[i] = cplx(d(rng), d(rng));
  return m;
}

template <class F>
double time_best_of(int reps, F&& f) {
  double best = 1e300;
  for (int i = 0; i < reps; ++i) {
    double t0 = now_ms();
    f();
    best = std::min(best, now_ms() - t0);
  }
  return best;
}

}  // namespace

int main() {
#ifdef _OPENMP
  std::printf("threads: %d\n", omp_get_max_threads());
#else
  std::printf("threads: 1 (compiled without OpenMP)\n");
#endif
  std::printf("%-18s %8s %12s %12s %9s %10s\n", "kernel", "size", "serial_ms", "parallel_ms",
              "speedup", "max_diff");

  std::mt19937_64 rng(12345);
  for (int n : {64, 128, 256, 384}) {
    Matrix a = random_matrix(n, rng);
    Matrix b = random_matrix(n, rng);
    Matrix serial_out, parallel_out;
    double ts = time_best_of(3, [&] { matmul_serial(a, b, serial_out); });
    double tp = time_best_of(3, [&] { matmul_into(a, b, parallel_out); });
    std::printf("%-18s %8d %12.3f %12.3f %8.2fx %10.2e\n", "matmul", n, ts, tp, ts / tp,
                max_abs_diff(serial_out, parallel_out));
  }

  for (const char* spec : {"cyclic:256", "symmetric:5", "sl2:5"}) {
    GroupPtr g = group_from_cli(spec);
    IrrepSet irreps = compute_irreps(g);
    GroupAlgebraElement alpha = random_alpha(g, 7);
    BlockDiagonal serial_out, parallel_out;
    double ts = time_best_of(3, [&] { serial_out = naive_dft_serial(alpha, irreps); });
    double tp = time_best_of(3, [&] { parallel_out = naive_dft(alpha, irreps); });
    double diff = serial_out.max_block_residual(parallel_out);
    std::printf("%-18s %8d %12.3f %12.3f %8.2fx %10.2e\n", spec, g->order(), ts, tp, ts / tp,
                diff);
  }
  return 0;
}
