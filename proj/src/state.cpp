#include "qcell/state.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "qcell/kernels.hpp"

namespace qcell {

namespace {
constexpr int max_cells = RegisterState::max_cells;

std::size_t pow10(int n) {
  std::size_t v = 1;
  for (int i = 0; i < n; ++i) v *= 10;
  return v;
}
}  // namespace

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::ZeroCells: return "ZeroCells";
    case ErrorCode::RegisterTooLarge: return "RegisterTooLarge";
    case ErrorCode::GridMismatch: return "GridMismatch";
    case ErrorCode::LabelLengthMismatch: return "LabelLengthMismatch";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::DuplicateIndex: return "DuplicateIndex";
    case ErrorCode::NotADensityMatrix: return "NotADensityMatrix";
    case ErrorCode::NotAdjacent: return "NotAdjacent";
    case ErrorCode::SameCell: return "SameCell";
    case ErrorCode::ChargeNotAtQubitDot: return "ChargeNotAtQubitDot";
    case ErrorCode::QcaAlreadyActive: return "QcaAlreadyActive";
    case ErrorCode::PairNotActive: return "PairNotActive";
    case ErrorCode::NonUnitaryMerge: return "NonUnitaryMerge";
    case ErrorCode::QubitDotCondition: return "QubitDotCondition";
    case ErrorCode::DotsInUse: return "DotsInUse";
    case ErrorCode::OverlappingWindows: return "OverlappingWindows";
    case ErrorCode::ChargeLeakage: return "ChargeLeakage";
    case ErrorCode::NonUnitarySchedule: return "NonUnitarySchedule";
    case ErrorCode::NegativeDuration: return "NegativeDuration";
    case ErrorCode::ActiveWindow: return "ActiveWindow";
    case ErrorCode::MissingCellsDecl: return "MissingCellsDecl";
    case ErrorCode::RotationOutsideWindow: return "RotationOutsideWindow";
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::SemanticError: return "SemanticError";
    case ErrorCode::InvalidNoiseParams: return "InvalidNoiseParams";
    case ErrorCode::BadConfig: return "BadConfig";
    case ErrorCode::BadCircuit: return "BadCircuit";
    case ErrorCode::UnknownReference: return "UnknownReference";
  }
  return "Error";
}

QcaPair make_qca_pair(const Grid& grid, int i, int j) {
  if (i == j) fail(ErrorCode::SameCell, "pair needs two distinct cells");
  if (!grid.contains(i) || !grid.contains(j))
    fail(ErrorCode::IndexOutOfRange, "cell index outside grid");
  auto dir = grid.edge(i, j);
  if (!dir)
    fail(ErrorCode::NotAdjacent,
         "cells " + std::to_string(i) + " and " + std::to_string(j) +
             " are not grid neighbours");
  QcaPair pair;
  pair.cell_lo = std::min(i, j);  // left (LR) or top (TB) cell in row-major order
  pair.cell_hi = std::max(i, j);
  pair.dir = *dir;
  if (pair.dir == Direction::LR) {
    pair.minus_state = {DotSite::C, DotSite::B};
    pair.plus_state = {DotSite::D, DotSite::A};
  } else {
    pair.minus_state = {DotSite::B, DotSite::C};
    pair.plus_state = {DotSite::D, DotSite::A};
  }
  return pair;
}

RegisterState::RegisterState(int n_cells, Grid grid)
    : n_cells_(n_cells), grid_(grid) {
  if (n_cells < 1) fail(ErrorCode::ZeroCells, "register needs at least one cell");
  if (n_cells > max_cells)
    fail(ErrorCode::RegisterTooLarge,
         "register capped at " + std::to_string(max_cells) + " cells");
  if (grid.rows < 1 || grid.cols < 1 || grid.cells() != n_cells)
    fail(ErrorCode::GridMismatch,
         "grid " + std::to_string(grid.rows) + "x" + std::to_string(grid.cols) +
             " does not hold " + std::to_string(n_cells) + " cells");
  amps_.assign(pow10(n_cells), cplx{});
  amps_[0] = 1.0;
}

RegisterState::RegisterState(int n_cells)
    : RegisterState(n_cells, Grid{1, n_cells}) {}

std::size_t RegisterState::stride(int cell) const {
  return pow10(n_cells_ - 1 - cell);
}

void RegisterState::check_cell(int cell) const {
  if (cell < 0 || cell >= n_cells_)
    fail(ErrorCode::IndexOutOfRange,
         "cell " + std::to_string(cell) + " outside register of " +
             std::to_string(n_cells_));
}

std::size_t RegisterState::index_of(std::span<const CellBasisLabel> label) const {
  if (static_cast<int>(label.size()) != n_cells_)
    fail(ErrorCode::LabelLengthMismatch,
         "label has " + std::to_string(label.size()) + " cells, register has " +
             std::to_string(n_cells_));
  std::size_t idx = 0;
  for (const CellBasisLabel& c : label) {
    if (c.spin != 0 && c.spin != 1)
      fail(ErrorCode::IndexOutOfRange, "spin must be 0 or 1");
    idx = idx * 10 + c.spin * 5 + static_cast<int>(c.site);
  }
  return idx;
}

cplx RegisterState::amplitude(std::span<const CellBasisLabel> label) const {
  return amps_[index_of(label)];
}

void RegisterState::set_amplitude(std::span<const CellBasisLabel> label,
                                  cplx value) {
  amps_[index_of(label)] = value;
}

double RegisterState::norm() const {
  return std::sqrt(kernels::norm_sq(amps_.data(), amps_.size()));
}

void RegisterState::normalize() {
  double n = norm();
  if (n == 0.0) fail(ErrorCode::DimensionMismatch, "cannot normalize null state");
  kernels::scale(amps_.data(), amps_.size(), 1.0 / n);
}

const QcaPair* RegisterState::find_pair(int i, int j) const {
  int lo = std::min(i, j), hi = std::max(i, j);
  for (const QcaPair& p : pairs_)
    if (p.cell_lo == lo && p.cell_hi == hi) return &p;
  return nullptr;
}

const QcaPair* RegisterState::pair_of_cell(int cell) const {
  for (const QcaPair& p : pairs_)
    if (p.cell_lo == cell || p.cell_hi == cell) return &p;
  return nullptr;
}

void RegisterState::add_pair(const QcaPair& pair) { pairs_.push_back(pair); }

void RegisterState::remove_pair(int i, int j) {
  int lo = std::min(i, j), hi = std::max(i, j);
  std::erase_if(pairs_, [&](const QcaPair& p) {
    return p.cell_lo == lo && p.cell_hi == hi;
  });
}

cplx inner_product(const RegisterState& a, const RegisterState& b) {
  if (a.n_cells() != b.n_cells() || !(a.grid() == b.grid()))
    fail(ErrorCode::DimensionMismatch, "registers have different layouts");
  return kernels::inner(a.amplitudes().data(), b.amplitudes().data(), a.dim());
}

double fidelity(const RegisterState& a, const RegisterState& b) {
  return std::norm(inner_product(a, b));
}

double charge_off_q(const RegisterState& state, int cell) {
  state.check_cell(cell);
  return kernels::off_q_mass(state.amplitudes().data(), state.dim(),
                             state.stride(cell));
}

std::string dump_state_json(const RegisterState& state) {
  nlohmann::ordered_json j;
  j["n_cells"] = state.n_cells();
  j["grid"] = {state.grid().rows, state.grid().cols};
  auto amps = nlohmann::ordered_json::array();
  for (const cplx& a : state.amplitudes())
    amps.push_back({a.real(), a.imag()});
  j["amplitudes"] = std::move(amps);
  return j.dump();
}

RegisterState load_state_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  int n = j.at("n_cells").get<int>();
  Grid grid{j.at("grid").at(0).get<int>(), j.at("grid").at(1).get<int>()};
  RegisterState state(n, grid);
  const auto& amps = j.at("amplitudes");
  if (amps.size() != state.dim())
    fail(ErrorCode::DimensionMismatch, "amplitude list has wrong length");
  for (std::size_t k = 0; k < state.dim(); ++k)
    state.amplitudes()[k] =
        cplx{amps.at(k).at(0).get<double>(), amps.at(k).at(1).get<double>()};
  return state;
}

}  // namespace qcell
