#include "qcell/kernels.hpp"

// Reference implementation: straight loops, no threading. The OpenMP kernels
// in kernels_par.cpp are tested against these.

namespace qcell::kernels::serial {

void apply_spin_mat(cplx* a, std::size_t dim, std::size_t stride,
                    const Mat2& u, int site_filter) {
  const std::size_t flip = 5 * stride;
  for (std::size_t k = 0; k < dim; ++k) {
    const int digit = static_cast<int>((k / stride) % 10);
    if (digit >= 5) continue;                            // visit spin-0 member only
    if (site_filter >= 0 && digit != site_filter) continue;
    const cplx a0 = a[k], a1 = a[k + flip];
    a[k] = u.m00 * a0 + u.m01 * a1;
    a[k + flip] = u.m10 * a0 + u.m11 * a1;
  }
}

void pair_split(cplx* a, std::size_t dim, std::size_t s_lo, std::size_t s_hi,
                int m_lo, int m_hi, int p_lo, int p_hi, double w_minus,
                double w_plus) {
  for (std::size_t k = 0; k < dim; ++k) {
    if ((k / s_lo) % 5 != 0 || (k / s_hi) % 5 != 0) continue;  // site Q on both
    const cplx src = a[k];
    if (src == cplx{}) continue;
    a[k + m_lo * s_lo + m_hi * s_hi] = w_minus * src;
    a[k + p_lo * s_lo + p_hi * s_hi] = w_plus * src;
    a[k] = cplx{};
  }
}

void pair_merge(cplx* a, std::size_t dim, std::size_t s_lo, std::size_t s_hi,
                int m_lo, int m_hi, int p_lo, int p_hi, double w_minus,
                double w_plus) {
  for (std::size_t k = 0; k < dim; ++k) {
    if ((k / s_lo) % 5 != 0 || (k / s_hi) % 5 != 0) continue;
    const std::size_t km = k + m_lo * s_lo + m_hi * s_hi;
    const std::size_t kp = k + p_lo * s_lo + p_hi * s_hi;
    a[k] = w_minus * a[km] + w_plus * a[kp];
    a[km] = cplx{};
    a[kp] = cplx{};
  }
}

void pair_phase(cplx* a, std::size_t dim, std::size_t s_lo, std::size_t s_hi,
                int m_lo, int m_hi, int p_lo, int p_hi, cplx f_minus,
                cplx f_plus) {
  for (std::size_t k = 0; k < dim; ++k) {
    const int site_lo = static_cast<int>((k / s_lo) % 5);
    const int site_hi = static_cast<int>((k / s_hi) % 5);
    if (site_lo == m_lo && site_hi == m_hi)
      a[k] *= f_minus;
    else if (site_lo == p_lo && site_hi == p_hi)
      a[k] *= f_plus;
  }
}

void single_split(cplx* a, std::size_t dim, std::size_t stride, int d1, int d2,
                  bool spin1_only) {
  constexpr double inv_sqrt2 = 0.7071067811865475244;
  for (std::size_t k = 0; k < dim; ++k) {
    const int digit = static_cast<int>((k / stride) % 10);
    if (digit % 5 != 0) continue;
    if (spin1_only && digit < 5) continue;
    const cplx src = a[k];
    if (src == cplx{}) continue;
    a[k + d1 * stride] = inv_sqrt2 * src;
    a[k + d2 * stride] = inv_sqrt2 * src;
    a[k] = cplx{};
  }
}

void phase_flip(cplx* a, std::size_t dim, std::size_t stride) {
  for (std::size_t k = 0; k < dim; ++k)
    if ((k / stride) % 10 >= 5) a[k] = -a[k];
}

void decay_jump(cplx* a, std::size_t dim, std::size_t stride) {
  const std::size_t flip = 5 * stride;
  for (std::size_t k = 0; k < dim; ++k) {
    if ((k / stride) % 10 < 5) continue;
    a[k - flip] = a[k];
    a[k] = cplx{};
  }
}

void scale(cplx* a, std::size_t dim, cplx factor) {
  for (std::size_t k = 0; k < dim; ++k) a[k] *= factor;
}

void project_spin(cplx* a, std::size_t dim, std::size_t stride, int outcome,
                  double factor) {
  for (std::size_t k = 0; k < dim; ++k) {
    const int spin = static_cast<int>((k / stride) % 10) / 5;
    a[k] = (spin == outcome) ? factor * a[k] : cplx{};
  }
}

double norm_sq(const cplx* a, std::size_t dim) {
  double s = 0;
  for (std::size_t k = 0; k < dim; ++k) s += std::norm(a[k]);
  return s;
}

cplx inner(const cplx* a, const cplx* b, std::size_t dim) {
  cplx s{};
  for (std::size_t k = 0; k < dim; ++k) s += std::conj(a[k]) * b[k];
  return s;
}

double spin1_mass(const cplx* a, std::size_t dim, std::size_t stride) {
  double s = 0;
  for (std::size_t k = 0; k < dim; ++k)
    if ((k / stride) % 10 >= 5) s += std::norm(a[k]);
  return s;
}

double off_q_mass(const cplx* a, std::size_t dim, std::size_t stride) {
  double s = 0;
  for (std::size_t k = 0; k < dim; ++k)
    if ((k / stride) % 5 != 0) s += std::norm(a[k]);
  return s;
}

void reduced_pair_density(const cplx* a, std::size_t dim, std::size_t s_a,
                          std::size_t s_b, cplx out[16]) {
  for (int i = 0; i < 16; ++i) out[i] = cplx{};
  const std::size_t fa = 5 * s_a, fb = 5 * s_b;
  for (std::size_t k = 0; k < dim; ++k) {
    if (a[k] == cplx{}) continue;
    const int sa = static_cast<int>((k / s_a) % 10) / 5;
    const int sb = static_cast<int>((k / s_b) % 10) / 5;
    const int row = sa * 2 + sb;
    const std::size_t base = k - sa * fa - sb * fb;
    for (int col = 0; col < 4; ++col) {
      const std::size_t kc = base + (col >> 1) * fa + (col & 1) * fb;
      out[row * 4 + col] += a[k] * std::conj(a[kc]);
    }
  }
}

}  // namespace qcell::kernels::serial
