// Times the serial reference kernels against the OpenMP ones on the register
// sizes that matter (10^6 and 10^7 amplitudes) and checks that both paths
// agree before trusting the numbers. Usage: qcell_bench [reps]

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <random>
#include <string>
#include <vector>

#include <omp.h>

#include "qcell/kernels.hpp"

using namespace qcell;
using kernels::Mat2;

namespace {

using clock_type = std::chrono::steady_clock;

std::vector<cplx> random_amps(std::size_t dim, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::vector<cplx> a(dim);
  for (auto& z : a) z = {dist(gen), dist(gen)};
  return a;
}

template <class F>
double time_best_ms(int reps, F&& body) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    auto t0 = clock_type::now();
    body();
    auto t1 = clock_type::now();
    best = std::min(best,
                    std::chrono::duration<double, std::milli>(t1 - t0).count());
  }
  return best;
}

double max_abs_diff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  double worst = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k)
    worst = std::max(worst, std::abs(a[k] - b[k]));
  return worst;
}

struct Row {
  std::string name;
  std::size_t dim;
  double serial_ms;
  double par_ms;
  double diff;
};

void print_row(const Row& row) {
  std::printf("%-22s %9zu %12.3f %12.3f %9.2fx  %s\n", row.name.c_str(),
              row.dim, row.serial_ms, row.par_ms, row.serial_ms / row.par_ms,
              row.diff <= 1e-9 ? "ok" : "MISMATCH");
}

}  // namespace

int main(int argc, char** argv) {
  int reps = argc > 1 ? std::atoi(argv[1]) : 5;
  if (reps < 1) reps = 1;

  std::printf("kernel benchmark: serial reference vs OpenMP (%d threads), "
              "best of %d reps\n\n",
              omp_get_max_threads(), reps);
  std::printf("%-22s %9s %12s %12s %10s\n", "kernel", "dim", "serial ms",
              "par ms", "speedup");

  int failures = 0;
  for (std::size_t dim : {std::size_t{1000000}, std::size_t{10000000}}) {
    const std::size_t stride = dim / 10;       // cell 0
    const std::size_t s_lo = dim / 10;         // pair (0, 1) on >= 2 cells
    const std::size_t s_hi = dim / 100;
    const Mat2 had{cplx{M_SQRT1_2, 0}, cplx{M_SQRT1_2, 0},
                   cplx{M_SQRT1_2, 0}, cplx{-M_SQRT1_2, 0}};
    const std::vector<cplx> base = random_amps(dim, 42 + dim);
    std::vector<cplx> lhs = base, rhs = base;

    auto bench_pair = [&](const std::string& name, auto&& serial_fn,
                          auto&& par_fn) {
      Row row{name, dim, 0.0, 0.0, 0.0};
      lhs = base;
      row.serial_ms = time_best_ms(reps, [&] { serial_fn(lhs.data()); });
      rhs = base;
      row.par_ms = time_best_ms(reps, [&] { par_fn(rhs.data()); });
      row.diff = max_abs_diff(lhs, rhs);
      if (row.diff > 1e-12) ++failures;
      print_row(row);
    };

    bench_pair(
        "apply_spin_mat",
        [&](cplx* a) { kernels::serial::apply_spin_mat(a, dim, stride, had, -1); },
        [&](cplx* a) { kernels::par::apply_spin_mat(a, dim, stride, had, -1); });
    bench_pair(
        "pair_split+merge",
        [&](cplx* a) {
          kernels::serial::pair_split(a, dim, s_lo, s_hi, 3, 2, 4, 1,
                                      M_SQRT1_2, M_SQRT1_2);
          kernels::serial::pair_merge(a, dim, s_lo, s_hi, 3, 2, 4, 1,
                                      M_SQRT1_2, M_SQRT1_2);
        },
        [&](cplx* a) {
          kernels::par::pair_split(a, dim, s_lo, s_hi, 3, 2, 4, 1, M_SQRT1_2,
                                   M_SQRT1_2);
          kernels::par::pair_merge(a, dim, s_lo, s_hi, 3, 2, 4, 1, M_SQRT1_2,
                                   M_SQRT1_2);
        });
    bench_pair(
        "pair_phase",
        [&](cplx* a) {
          kernels::serial::pair_phase(a, dim, s_lo, s_hi, 3, 2, 4, 1,
                                      std::polar(1.0, 0.3),
                                      std::polar(1.0, -0.3));
        },
        [&](cplx* a) {
          kernels::par::pair_phase(a, dim, s_lo, s_hi, 3, 2, 4, 1,
                                   std::polar(1.0, 0.3),
                                   std::polar(1.0, -0.3));
        });
    bench_pair(
        "phase_flip",
        [&](cplx* a) { kernels::serial::phase_flip(a, dim, stride); },
        [&](cplx* a) { kernels::par::phase_flip(a, dim, stride); });

    // reductions: compare scalars instead of arrays
    {
      Row row{"norm_sq", dim, 0.0, 0.0, 0.0};
      double vs = 0.0, vp = 0.0;
      row.serial_ms = time_best_ms(
          reps, [&] { vs = kernels::serial::norm_sq(base.data(), dim); });
      row.par_ms = time_best_ms(
          reps, [&] { vp = kernels::par::norm_sq(base.data(), dim); });
      row.diff = std::abs(vs - vp) / vs;
      if (row.diff > 1e-9) ++failures;
      print_row(row);
    }
    {
      Row row{"inner", dim, 0.0, 0.0, 0.0};
      cplx vs, vp;
      row.serial_ms = time_best_ms(reps, [&] {
        vs = kernels::serial::inner(base.data(), lhs.data(), dim);
      });
      row.par_ms = time_best_ms(reps, [&] {
        vp = kernels::par::inner(base.data(), lhs.data(), dim);
      });
      row.diff = std::abs(vs - vp) / std::abs(vs);
      if (row.diff > 1e-9) ++failures;
      print_row(row);
    }
    {
      Row row{"reduced_pair_density", dim, 0.0, 0.0, 0.0};
      cplx rho_s[16], rho_p[16];
      row.serial_ms = time_best_ms(reps, [&] {
        kernels::serial::reduced_pair_density(base.data(), dim, s_lo, s_hi,
                                              rho_s);
      });
      row.par_ms = time_best_ms(reps, [&] {
        kernels::par::reduced_pair_density(base.data(), dim, s_lo, s_hi,
                                           rho_p);
      });
      double worst = 0.0;
      for (int k = 0; k < 16; ++k)
        worst = std::max(worst, std::abs(rho_s[k] - rho_p[k]));
      row.diff = worst / std::abs(rho_s[0]);
      if (row.diff > 1e-9) ++failures;
      print_row(row);
    }
    std::printf("\n");
  }

  if (failures) {
    std::printf("%d kernel(s) disagreed between serial and parallel\n",
                failures);
    return 1;
  }
  std::printf("all kernels agree between serial and parallel\n");
  return 0;
}
