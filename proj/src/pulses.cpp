#include "qcell/pulses.hpp"

#include <cmath>

#include "qcell/kernels.hpp"

namespace qcell {

namespace {

void branch_weights(double imbalance, double& w_minus, double& w_plus) {
  if (!(imbalance >= -1.0 && imbalance <= 1.0))
    fail(ErrorCode::InvalidNoiseParams,
         "split amplitude imbalance must lie in [-1, 1]");
  w_minus = std::sqrt((1.0 + imbalance) / 2.0);
  w_plus = std::sqrt((1.0 - imbalance) / 2.0);
}

void require_charge_at_q(const RegisterState& state, int cell) {
  if (charge_off_q(state, cell) > tol::norm)
    fail(ErrorCode::ChargeNotAtQubitDot,
         "cell " + std::to_string(cell) + " has weight off its qubit dot");
}

kernels::Mat2 rotation_matrix(Axis axis, double angle) {
  const double c = std::cos(angle / 2), s = std::sin(angle / 2);
  switch (axis) {
    case Axis::X: return {c, cplx(0, -s), cplx(0, -s), c};
    case Axis::Y: return {c, -s, s, c};
    case Axis::Z: default:
      return {cplx(c, -s), 0, 0, cplx(c, s)};
  }
}

}  // namespace

void qca_split(RegisterState& state, int i, int j, Direction dir,
               double amplitude_imbalance) {
  QcaPair pair = make_qca_pair(state.grid(), i, j);
  if (pair.dir != dir)
    fail(ErrorCode::NotAdjacent,
         "cells are not neighbours in the requested direction");
  if (state.find_pair(i, j) != nullptr)
    fail(ErrorCode::QcaAlreadyActive, "pair already has an active window");
  require_charge_at_q(state, i);
  require_charge_at_q(state, j);
  double w_minus, w_plus;
  branch_weights(amplitude_imbalance, w_minus, w_plus);
  kernels::pair_split(state.amplitudes().data(), state.dim(),
                      state.stride(pair.cell_lo), state.stride(pair.cell_hi),
                      static_cast<int>(pair.minus_state[0]),
                      static_cast<int>(pair.minus_state[1]),
                      static_cast<int>(pair.plus_state[0]),
                      static_cast<int>(pair.plus_state[1]), w_minus, w_plus);
  state.add_pair(pair);
}

double qca_merge(RegisterState& state, int i, int j, MergeMode mode,
                 double amplitude_imbalance) {
  const QcaPair* pair = state.find_pair(i, j);
  if (pair == nullptr)
    fail(ErrorCode::PairNotActive, "no active window on this pair");
  double w_minus, w_plus;
  branch_weights(amplitude_imbalance, w_minus, w_plus);
  const double before = kernels::norm_sq(state.amplitudes().data(), state.dim());
  kernels::pair_merge(state.amplitudes().data(), state.dim(),
                      state.stride(pair->cell_lo), state.stride(pair->cell_hi),
                      static_cast<int>(pair->minus_state[0]),
                      static_cast<int>(pair->minus_state[1]),
                      static_cast<int>(pair->plus_state[0]),
                      static_cast<int>(pair->plus_state[1]), w_minus, w_plus);
  state.remove_pair(i, j);
  const double after = kernels::norm_sq(state.amplitudes().data(), state.dim());
  const double success = before > 0 ? after / before : 0.0;
  if (mode == MergeMode::Strict && std::abs(success - 1.0) > tol::merge)
    fail(ErrorCode::NonUnitaryMerge,
         "branches recombined with success probability " +
             std::to_string(success));
  if (success <= tol::norm)
    fail(ErrorCode::NonUnitaryMerge,
         "branches cancelled completely; nothing to post-select on");
  kernels::scale(state.amplitudes().data(), state.dim(),
                 1.0 / std::sqrt(after));
  return success;
}

void spin_rotate(RegisterState& state, int cell, Axis axis, double angle) {
  state.check_cell(cell);
  kernels::apply_spin_mat(state.amplitudes().data(), state.dim(),
                          state.stride(cell), rotation_matrix(axis, angle), -1);
}

void spin_rotate_conditional(RegisterState& state, int cell, Axis axis,
                             double angle, DotSite dot) {
  state.check_cell(cell);
  if (dot == DotSite::Q)
    fail(ErrorCode::QubitDotCondition,
         "rotations cannot be conditioned on the qubit dot");
  kernels::apply_spin_mat(state.amplitudes().data(), state.dim(),
                          state.stride(cell), rotation_matrix(axis, angle),
                          static_cast<int>(dot));
}

void polarization_pulse(RegisterState& state, int i, int j, double phi) {
  const QcaPair* pair = state.find_pair(i, j);
  if (pair == nullptr)
    fail(ErrorCode::PairNotActive,
         "polarization pulse needs an active window on the pair");
  kernels::pair_phase(state.amplitudes().data(), state.dim(),
                      state.stride(pair->cell_lo), state.stride(pair->cell_hi),
                      static_cast<int>(pair->minus_state[0]),
                      static_cast<int>(pair->minus_state[1]),
                      static_cast<int>(pair->plus_state[0]),
                      static_cast<int>(pair->plus_state[1]),
                      std::polar(1.0, phi / 2), std::polar(1.0, -phi / 2));
}

std::array<DotSite, 2> bias_target_dots(Direction dir, Sign sign) {
  if (dir == Direction::LR)
    return sign == Sign::Plus ? std::array{DotSite::C, DotSite::D}
                              : std::array{DotSite::A, DotSite::B};
  return sign == Sign::Plus ? std::array{DotSite::B, DotSite::D}
                            : std::array{DotSite::A, DotSite::C};
}

void single_cell_split(RegisterState& state, int cell, Direction dir, Sign sign,
                       bool spin_selective) {
  state.check_cell(cell);
  auto dots = bias_target_dots(dir, sign);
  if (const QcaPair* pair = state.pair_of_cell(cell)) {
    DotSite busy0 = cell == pair->cell_lo ? pair->minus_state[0] : pair->minus_state[1];
    DotSite busy1 = cell == pair->cell_lo ? pair->plus_state[0] : pair->plus_state[1];
    for (DotSite d : dots)
      if (d == busy0 || d == busy1)
        fail(ErrorCode::DotsInUse,
             "dot " + std::string(1, site_letter(d)) + " belongs to an active window");
  }
  require_charge_at_q(state, cell);
  kernels::single_split(state.amplitudes().data(), state.dim(),
                        state.stride(cell), static_cast<int>(dots[0]),
                        static_cast<int>(dots[1]), spin_selective);
}

}  // namespace qcell
