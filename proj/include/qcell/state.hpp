#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "qcell/types.hpp"

namespace qcell {

/// An active inter-cell charge coupling. While a pair is active the two
/// electrons occupy the diagonals of the square formed by the facing corner
/// dots; minus_state/plus_state name the (lo-cell, hi-cell) sites of the two
/// polarization branches.
struct QcaPair {
  int cell_lo = 0;
  int cell_hi = 0;
  Direction dir = Direction::LR;
  std::array<DotSite, 2> minus_state{DotSite::C, DotSite::B};
  std::array<DotSite, 2> plus_state{DotSite::D, DotSite::A};
  friend bool operator==(const QcaPair&, const QcaPair&) = default;
};

/// Builds the canonical pair for two adjacent cells (order-insensitive).
/// LR: minus = (C_lo, B_hi), plus = (D_lo, A_hi).
/// TB: minus = (B_lo, C_hi), plus = (D_lo, A_hi), lo being the upper cell.
QcaPair make_qca_pair(const Grid& grid, int i, int j);

/// Dense state vector over n cells. Each cell contributes a 10-valued digit
/// d = spin * 5 + site (site order Q, A, B, C, D); the amplitude index is
/// the base-10 number whose most significant digit belongs to cell 0:
///   index = sum_c digit_c * 10^(n-1-c).
/// The register also tracks which QCA pairs are currently active.
class RegisterState {
 public:
  static constexpr int max_cells = 7;  // 10^7 amplitudes, ~160 MB

  /// All spins 0, all electrons on their qubit dots.
  RegisterState(int n_cells, Grid grid);

  /// Convenience: 1 x n row.
  explicit RegisterState(int n_cells);

  int n_cells() const { return n_cells_; }
  const Grid& grid() const { return grid_; }
  std::size_t dim() const { return amps_.size(); }
  std::size_t stride(int cell) const;

  const std::vector<cplx>& amplitudes() const { return amps_; }
  std::vector<cplx>& amplitudes() { return amps_; }

  /// Amplitude of one basis state; the label must list every cell in order.
  cplx amplitude(std::span<const CellBasisLabel> label) const;

  /// Low-level state surgery for diagnostics and tests. No normalization or
  /// physicality checks are performed.
  void set_amplitude(std::span<const CellBasisLabel> label, cplx value);

  std::size_t index_of(std::span<const CellBasisLabel> label) const;

  // Brace-friendly forms: state.amplitude({{0, DotSite::Q}, {1, DotSite::Q}})
  cplx amplitude(std::initializer_list<CellBasisLabel> label) const {
    return amplitude(std::span<const CellBasisLabel>(label.begin(), label.size()));
  }
  void set_amplitude(std::initializer_list<CellBasisLabel> label, cplx value) {
    set_amplitude(std::span<const CellBasisLabel>(label.begin(), label.size()),
                  value);
  }
  std::size_t index_of(std::initializer_list<CellBasisLabel> label) const {
    return index_of(std::span<const CellBasisLabel>(label.begin(), label.size()));
  }

  double norm() const;
  void normalize();

  const std::vector<QcaPair>& active_pairs() const { return pairs_; }
  /// The active pair covering both cells, if any.
  const QcaPair* find_pair(int i, int j) const;
  /// Any active pair involving the cell, if any.
  const QcaPair* pair_of_cell(int cell) const;

  void add_pair(const QcaPair& pair);
  void remove_pair(int i, int j);

  void check_cell(int cell) const;

  friend bool operator==(const RegisterState&, const RegisterState&) = default;

 private:
  int n_cells_;
  Grid grid_;
  std::vector<cplx> amps_;
  std::vector<QcaPair> pairs_;
};

/// |<a|b>|^2. Register layouts must match.
double fidelity(const RegisterState& a, const RegisterState& b);

cplx inner_product(const RegisterState& a, const RegisterState& b);

/// Weight currently off the qubit dot of one cell.
double charge_off_q(const RegisterState& state, int cell);

/// JSON state dump: {"n_cells": n, "grid": [rows, cols],
/// "amplitudes": [[re, im], ...]} in index order.
std::string dump_state_json(const RegisterState& state);
RegisterState load_state_json(const std::string& text);

}  // namespace qcell
