#include <array>
#include <vector>

#include "qcell/kernels.hpp"

// OpenMP kernels. Element-wise updates are race-free because every source
// index owns a disjoint set of target indices (split/merge/rotation pairs
// partition the amplitude array). Reductions accumulate over a fixed block
// partition and combine serially, so results are independent of the thread
// count.

namespace qcell::kernels::par {

namespace {
using idx = std::int64_t;

constexpr idx reduction_blocks = 1024;

inline idx block_begin(idx dim, idx b) { return dim * b / reduction_blocks; }
}  // namespace

void apply_spin_mat(cplx* a, std::size_t dim, std::size_t stride,
                    const Mat2& u, int site_filter) {
  const idx n = static_cast<idx>(dim);
  const idx s = static_cast<idx>(stride);
  const idx flip = 5 * s;
#pragma omp parallel for schedule(static)
  for (idx k = 0; k < n; ++k) {
    const int digit = static_cast<int>((k / s) % 10);
    if (digit >= 5) continue;
    if (site_filter >= 0 && digit != site_filter) continue;
    const cplx a0 = a[k], a1 = a[k + flip];
    a[k] = u.m00 * a0 + u.m01 * a1;
    a[k + flip] = u.m10 * a0 + u.m11 * a1;
  }
}

void pair_split(cplx* a, std::size_t dim, std::size_t s_lo, std::size_t s_hi,
                int m_lo, int m_hi, int p_lo, int p_hi, double w_minus,
                double w_plus) {
  const idx n = static_cast<idx>(dim);
  const idx slo = static_cast<idx>(s_lo), shi = static_cast<idx>(s_hi);
#pragma omp parallel for schedule(static)
  for (idx k = 0; k < n; ++k) {
    if ((k / slo) % 5 != 0 || (k / shi) % 5 != 0) continue;
    const cplx src = a[k];
    if (src == cplx{}) continue;
    a[k + m_lo * slo + m_hi * shi] = w_minus * src;
    a[k + p_lo * slo + p_hi * shi] = w_plus * src;
    a[k] = cplx{};
  }
}

void pair_merge(cplx* a, std::size_t dim, std::size_t s_lo, std::size_t s_hi,
                int m_lo, int m_hi, int p_lo, int p_hi, double w_minus,
                double w_plus) {
  const idx n = static_cast<idx>(dim);
  const idx slo = static_cast<idx>(s_lo), shi = static_cast<idx>(s_hi);
#pragma omp parallel for schedule(static)
  for (idx k = 0; k < n; ++k) {
    if ((k / slo) % 5 != 0 || (k / shi) % 5 != 0) continue;
    const idx km = k + m_lo * slo + m_hi * shi;
    const idx kp = k + p_lo * slo + p_hi * shi;
    a[k] = w_minus * a[km] + w_plus * a[kp];
    a[km] = cplx{};
    a[kp] = cplx{};
  }
}

void pair_phase(cplx* a, std::size_t dim, std::size_t s_lo, std::size_t s_hi,
                int m_lo, int m_hi, int p_lo, int p_hi, cplx f_minus,
                cplx f_plus) {
  const idx n = static_cast<idx>(dim);
  const idx slo = static_cast<idx>(s_lo), shi = static_cast<idx>(s_hi);
#pragma omp parallel for schedule(static)
  for (idx k = 0; k < n; ++k) {
    const int site_lo = static_cast<int>((k / slo) % 5);
    const int site_hi = static_cast<int>((k / shi) % 5);
    if (site_lo == m_lo && site_hi == m_hi)
      a[k] *= f_minus;
    else if (site_lo == p_lo && site_hi == p_hi)
      a[k] *= f_plus;
  }
}

void single_split(cplx* a, std::size_t dim, std::size_t stride, int d1, int d2,
                  bool spin1_only) {
  constexpr double inv_sqrt2 = 0.7071067811865475244;
  const idx n = static_cast<idx>(dim);
  const idx s = static_cast<idx>(stride);
#pragma omp parallel for schedule(static)
  for (idx k = 0; k < n; ++k) {
    const int digit = static_cast<int>((k / s) % 10);
    if (digit % 5 != 0) continue;
    if (spin1_only && digit < 5) continue;
    const cplx src = a[k];
    if (src == cplx{}) continue;
    a[k + d1 * s] = inv_sqrt2 * src;
    a[k + d2 * s] = inv_sqrt2 * src;
    a[k] = cplx{};
  }
}

void phase_flip(cplx* a, std::size_t dim, std::size_t stride) {
  const idx n = static_cast<idx>(dim);
  const idx s = static_cast<idx>(stride);
#pragma omp parallel for schedule(static)
  for (idx k = 0; k < n; ++k)
    if ((k / s) % 10 >= 5) a[k] = -a[k];
}

void decay_jump(cplx* a, std::size_t dim, std::size_t stride) {
  const idx n = static_cast<idx>(dim);
  const idx s = static_cast<idx>(stride);
  const idx flip = 5 * s;
#pragma omp parallel for schedule(static)
  for (idx k = 0; k < n; ++k) {
    if ((k / s) % 10 < 5) continue;
    a[k - flip] = a[k];
    a[k] = cplx{};
  }
}

void scale(cplx* a, std::size_t dim, cplx factor) {
  const idx n = static_cast<idx>(dim);
#pragma omp parallel for schedule(static)
  for (idx k = 0; k < n; ++k) a[k] *= factor;
}

void project_spin(cplx* a, std::size_t dim, std::size_t stride, int outcome,
                  double factor) {
  const idx n = static_cast<idx>(dim);
  const idx s = static_cast<idx>(stride);
#pragma omp parallel for schedule(static)
  for (idx k = 0; k < n; ++k) {
    const int spin = static_cast<int>((k / s) % 10) / 5;
    a[k] = (spin == outcome) ? factor * a[k] : cplx{};
  }
}

double norm_sq(const cplx* a, std::size_t dim) {
  const idx n = static_cast<idx>(dim);
  std::vector<double> partial(reduction_blocks, 0.0);
#pragma omp parallel for schedule(static)
  for (idx b = 0; b < reduction_blocks; ++b) {
    double s = 0;
    for (idx k = block_begin(n, b); k < block_begin(n, b + 1); ++k)
      s += std::norm(a[k]);
    partial[b] = s;
  }
  double total = 0;
  for (double s : partial) total += s;
  return total;
}

cplx inner(const cplx* a, const cplx* b, std::size_t dim) {
  const idx n = static_cast<idx>(dim);
  std::vector<cplx> partial(reduction_blocks, cplx{});
#pragma omp parallel for schedule(static)
  for (idx blk = 0; blk < reduction_blocks; ++blk) {
    cplx s{};
    for (idx k = block_begin(n, blk); k < block_begin(n, blk + 1); ++k)
      s += std::conj(a[k]) * b[k];
    partial[blk] = s;
  }
  cplx total{};
  for (const cplx& s : partial) total += s;
  return total;
}

double spin1_mass(const cplx* a, std::size_t dim, std::size_t stride) {
  const idx n = static_cast<idx>(dim);
  const idx s = static_cast<idx>(stride);
  std::vector<double> partial(reduction_blocks, 0.0);
#pragma omp parallel for schedule(static)
  for (idx b = 0; b < reduction_blocks; ++b) {
    double acc = 0;
    for (idx k = block_begin(n, b); k < block_begin(n, b + 1); ++k)
      if ((k / s) % 10 >= 5) acc += std::norm(a[k]);
    partial[b] = acc;
  }
  double total = 0;
  for (double v : partial) total += v;
  return total;
}

double off_q_mass(const cplx* a, std::size_t dim, std::size_t stride) {
  const idx n = static_cast<idx>(dim);
  const idx s = static_cast<idx>(stride);
  std::vector<double> partial(reduction_blocks, 0.0);
#pragma omp parallel for schedule(static)
  for (idx b = 0; b < reduction_blocks; ++b) {
    double acc = 0;
    for (idx k = block_begin(n, b); k < block_begin(n, b + 1); ++k)
      if ((k / s) % 5 != 0) acc += std::norm(a[k]);
    partial[b] = acc;
  }
  double total = 0;
  for (double v : partial) total += v;
  return total;
}

void reduced_pair_density(const cplx* a, std::size_t dim, std::size_t s_a,
                          std::size_t s_b, cplx out[16]) {
  const idx n = static_cast<idx>(dim);
  const idx sa_s = static_cast<idx>(s_a), sb_s = static_cast<idx>(s_b);
  const idx fa = 5 * sa_s, fb = 5 * sb_s;
  std::vector<std::array<cplx, 16>> partial(reduction_blocks);
#pragma omp parallel for schedule(static)
  for (idx b = 0; b < reduction_blocks; ++b) {
    std::array<cplx, 16> acc{};
    for (idx k = block_begin(n, b); k < block_begin(n, b + 1); ++k) {
      if (a[k] == cplx{}) continue;
      const int sa = static_cast<int>((k / sa_s) % 10) / 5;
      const int sb = static_cast<int>((k / sb_s) % 10) / 5;
      const int row = sa * 2 + sb;
      const idx base = k - sa * fa - sb * fb;
      for (int col = 0; col < 4; ++col) {
        const idx kc = base + (col >> 1) * fa + (col & 1) * fb;
        acc[row * 4 + col] += a[k] * std::conj(a[kc]);
      }
    }
    partial[b] = acc;
  }
  for (int i = 0; i < 16; ++i) out[i] = cplx{};
  for (const auto& acc : partial)
    for (int i = 0; i < 16; ++i) out[i] += acc[i];
}

}  // namespace qcell::kernels::par
