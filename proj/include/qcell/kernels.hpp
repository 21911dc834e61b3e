#pragma once

#include <cstddef>
#include <cstdint>

#include "qcell/types.hpp"

namespace qcell::kernels {

/// Kernel selection. Auto picks the OpenMP path once the register is large
/// enough for the fork/join cost to pay off; tests and the benchmark pin one
/// implementation explicitly. The QCELL_KERNELS environment variable
/// (serial | parallel | auto) overrides the initial policy.
enum class Policy { Auto, ForceSerial, ForceParallel };

Policy policy();
void set_policy(Policy p);

/// Amplitude count above which Auto dispatches to the OpenMP kernels.
inline constexpr std::size_t auto_parallel_threshold = 1 << 15;

struct Mat2 {
  cplx m00, m01, m10, m11;
};

// All kernels address a dense amplitude array of length 10^n. For a cell with
// stride s = 10^(n-1-cell), digit(k) = (k / s) % 10, spin = digit / 5,
// site = digit % 5. Sites are numbered as in DotSite (Q=0, A..D=1..4).
//
// serial:: holds the plain reference implementation, par:: the OpenMP one.
// Both produce identical results; reductions use a fixed block partition so
// the parallel results do not depend on the thread count.

#define QCELL_KERNEL_DECLS                                                     \
  /* Mix the two spin amplitudes of one cell; site_filter < 0 applies to     \
     every site, otherwise only where the electron sits on that site. */      \
  void apply_spin_mat(cplx* a, std::size_t dim, std::size_t stride,           \
                      const Mat2& u, int site_filter);                        \
  /* |Q,Q> -> w_minus |minus> + w_plus |plus> on a cell pair. */              \
  void pair_split(cplx* a, std::size_t dim, std::size_t s_lo,                 \
                  std::size_t s_hi, int m_lo, int m_hi, int p_lo, int p_hi,   \
                  double w_minus, double w_plus);                             \
  /* Adjoint of pair_split: branches recombine at |Q,Q> (unnormalized). */    \
  void pair_merge(cplx* a, std::size_t dim, std::size_t s_lo,                 \
                  std::size_t s_hi, int m_lo, int m_hi, int p_lo, int p_hi,   \
                  double w_minus, double w_plus);                             \
  /* Multiply the minus/plus branches by the given phase factors. */          \
  void pair_phase(cplx* a, std::size_t dim, std::size_t s_lo,                 \
                  std::size_t s_hi, int m_lo, int m_hi, int p_lo, int p_hi,   \
                  cplx f_minus, cplx f_plus);                                 \
  /* |Q> -> (|d1> + |d2>)/sqrt(2) on one cell, optionally only for spin 1. */ \
  void single_split(cplx* a, std::size_t dim, std::size_t stride, int d1,     \
                    int d2, bool spin1_only);                                 \
  /* sigma_z on one cell's spin. */                                           \
  void phase_flip(cplx* a, std::size_t dim, std::size_t stride);              \
  /* |1><1| -> |0> jump (unnormalized); caller rescales. */                   \
  void decay_jump(cplx* a, std::size_t dim, std::size_t stride);              \
  void scale(cplx* a, std::size_t dim, cplx factor);                          \
  /* Zero the opposite spin branch and rescale the kept one. */               \
  void project_spin(cplx* a, std::size_t dim, std::size_t stride,             \
                    int outcome, double factor);                              \
  double norm_sq(const cplx* a, std::size_t dim);                             \
  cplx inner(const cplx* a, const cplx* b, std::size_t dim);                  \
  /* Total weight on spin 1 of one cell. */                                   \
  double spin1_mass(const cplx* a, std::size_t dim, std::size_t stride);      \
  /* Total weight off the qubit dot of one cell. */                           \
  double off_q_mass(const cplx* a, std::size_t dim, std::size_t stride);      \
  /* Spin density of a cell pair (row-major 4x4, basis |s_a s_b>),           \
     traced over everything else. */                                          \
  void reduced_pair_density(const cplx* a, std::size_t dim, std::size_t s_a,  \
                            std::size_t s_b, cplx out[16]);

namespace serial {
QCELL_KERNEL_DECLS
}
namespace par {
QCELL_KERNEL_DECLS
}

// Dispatching wrappers (declared via the same macro, defined in kernels.cpp).
QCELL_KERNEL_DECLS

#undef QCELL_KERNEL_DECLS

}  // namespace qcell::kernels
