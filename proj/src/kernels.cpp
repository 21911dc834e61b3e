#include <atomic>
#include <cstdlib>
#include <cstring>

#include "qcell/kernels.hpp"

namespace qcell::kernels {

namespace {

Policy initial_policy() {
  const char* env = std::getenv("QCELL_KERNELS");
  if (env != nullptr) {
    if (std::strcmp(env, "serial") == 0) return Policy::ForceSerial;
    if (std::strcmp(env, "parallel") == 0) return Policy::ForceParallel;
  }
  return Policy::Auto;
}

std::atomic<Policy> g_policy{initial_policy()};

inline bool use_parallel(std::size_t dim) {
  switch (g_policy.load(std::memory_order_relaxed)) {
    case Policy::ForceSerial: return false;
    case Policy::ForceParallel: return true;
    case Policy::Auto: default: return dim >= auto_parallel_threshold;
  }
}

}  // namespace

Policy policy() { return g_policy.load(std::memory_order_relaxed); }
void set_policy(Policy p) { g_policy.store(p, std::memory_order_relaxed); }

void apply_spin_mat(cplx* a, std::size_t dim, std::size_t stride,
                    const Mat2& u, int site_filter) {
  use_parallel(dim) ? par::apply_spin_mat(a, dim, stride, u, site_filter)
                    : serial::apply_spin_mat(a, dim, stride, u, site_filter);
}

void pair_split(cplx* a, std::size_t dim, std::size_t s_lo, std::size_t s_hi,
                int m_lo, int m_hi, int p_lo, int p_hi, double w_minus,
                double w_plus) {
  use_parallel(dim)
      ? par::pair_split(a, dim, s_lo, s_hi, m_lo, m_hi, p_lo, p_hi, w_minus, w_plus)
      : serial::pair_split(a, dim, s_lo, s_hi, m_lo, m_hi, p_lo, p_hi, w_minus, w_plus);
}

void pair_merge(cplx* a, std::size_t dim, std::size_t s_lo, std::size_t s_hi,
                int m_lo, int m_hi, int p_lo, int p_hi, double w_minus,
                double w_plus) {
  use_parallel(dim)
      ? par::pair_merge(a, dim, s_lo, s_hi, m_lo, m_hi, p_lo, p_hi, w_minus, w_plus)
      : serial::pair_merge(a, dim, s_lo, s_hi, m_lo, m_hi, p_lo, p_hi, w_minus, w_plus);
}

void pair_phase(cplx* a, std::size_t dim, std::size_t s_lo, std::size_t s_hi,
                int m_lo, int m_hi, int p_lo, int p_hi, cplx f_minus,
                cplx f_plus) {
  use_parallel(dim)
      ? par::pair_phase(a, dim, s_lo, s_hi, m_lo, m_hi, p_lo, p_hi, f_minus, f_plus)
      : serial::pair_phase(a, dim, s_lo, s_hi, m_lo, m_hi, p_lo, p_hi, f_minus, f_plus);
}

void single_split(cplx* a, std::size_t dim, std::size_t stride, int d1, int d2,
                  bool spin1_only) {
  use_parallel(dim) ? par::single_split(a, dim, stride, d1, d2, spin1_only)
                    : serial::single_split(a, dim, stride, d1, d2, spin1_only);
}

void phase_flip(cplx* a, std::size_t dim, std::size_t stride) {
  use_parallel(dim) ? par::phase_flip(a, dim, stride)
                    : serial::phase_flip(a, dim, stride);
}

void decay_jump(cplx* a, std::size_t dim, std::size_t stride) {
  use_parallel(dim) ? par::decay_jump(a, dim, stride)
                    : serial::decay_jump(a, dim, stride);
}

void scale(cplx* a, std::size_t dim, cplx factor) {
  use_parallel(dim) ? par::scale(a, dim, factor)
                    : serial::scale(a, dim, factor);
}

void project_spin(cplx* a, std::size_t dim, std::size_t stride, int outcome,
                  double factor) {
  use_parallel(dim) ? par::project_spin(a, dim, stride, outcome, factor)
                    : serial::project_spin(a, dim, stride, outcome, factor);
}

double norm_sq(const cplx* a, std::size_t dim) {
  return use_parallel(dim) ? par::norm_sq(a, dim) : serial::norm_sq(a, dim);
}

cplx inner(const cplx* a, const cplx* b, std::size_t dim) {
  return use_parallel(dim) ? par::inner(a, b, dim) : serial::inner(a, b, dim);
}

double spin1_mass(const cplx* a, std::size_t dim, std::size_t stride) {
  return use_parallel(dim) ? par::spin1_mass(a, dim, stride)
                           : serial::spin1_mass(a, dim, stride);
}

double off_q_mass(const cplx* a, std::size_t dim, std::size_t stride) {
  return use_parallel(dim) ? par::off_q_mass(a, dim, stride)
                           : serial::off_q_mass(a, dim, stride);
}

void reduced_pair_density(const cplx* a, std::size_t dim, std::size_t s_a,
                          std::size_t s_b, cplx out[16]) {
  use_parallel(dim) ? par::reduced_pair_density(a, dim, s_a, s_b, out)
                    : serial::reduced_pair_density(a, dim, s_a, s_b, out);
}

}  // namespace qcell::kernels
