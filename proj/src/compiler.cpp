#include "qcell/compiler.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>

#include <json.hpp>

#include "qcell/dsl.hpp"
#include "qcell/executor.hpp"

namespace qcell {
namespace {

constexpr double kPi = M_PI;

double wrap_angle(double x) {
  double r = std::remainder(x, 2 * kPi);
  if (r <= -kPi) r += 2 * kPi;
  return r;
}

void check_cell_index(int cell, int n_cells) {
  if (cell < 0 || cell >= n_cells)
    fail(ErrorCode::IndexOutOfRange,
         "cell " + std::to_string(cell) + " out of range");
}

struct BranchDots {
  DotSite minus_dot_lo, minus_dot_hi;
  DotSite plus_dot_lo, plus_dot_hi;
};

// Must agree with make_qca_pair's branch states.
BranchDots branch_dots(Direction dir) {
  if (dir == Direction::LR)
    return {DotSite::C, DotSite::B, DotSite::D, DotSite::A};
  return {DotSite::B, DotSite::C, DotSite::D, DotSite::A};
}

}  // namespace

namespace {
void check_cell_count(int n_cells, int minimum) {
  if (n_cells < minimum)
    fail(ErrorCode::ZeroCells,
         "need at least " + std::to_string(minimum) + " cells");
  if (n_cells > RegisterState::max_cells)
    fail(ErrorCode::RegisterTooLarge,
         "at most " + std::to_string(RegisterState::max_cells) +
             " cells supported");
}
}  // namespace

Schedule compile_single(int n_cells, int cell, Axis axis, double angle) {
  check_cell_count(n_cells, 1);
  check_cell_index(cell, n_cells);
  Schedule sched;
  sched.n_cells = n_cells;
  sched.events.push_back({RotationEvent{cell, axis, angle, std::nullopt},
                          std::nullopt});
  return sched;
}

Schedule compile_bell(BellKind kind, int cell_a, int cell_b, Direction dir,
                      int n_cells) {
  check_cell_count(n_cells, 2);
  check_cell_index(cell_a, n_cells);
  check_cell_index(cell_b, n_cells);
  if (cell_a == cell_b)
    fail(ErrorCode::SameCell, "bell pair needs two distinct cells");
  int lo = std::min(cell_a, cell_b);
  int hi = std::max(cell_a, cell_b);
  BranchDots dots = branch_dots(dir);

  Schedule sched;
  sched.n_cells = n_cells;
  bool psi = kind == BellKind::PsiPlus || kind == BellKind::PsiMinus;
  bool plus = kind == BellKind::PhiPlus || kind == BellKind::PsiPlus;
  if (psi) {
    // Start the second spin flipped; Rx(pi) = -i X, so the schedule's
    // output carries a -pi/2 phase relative to the textbook state.
    sched.events.push_back(
        {RotationEvent{hi, Axis::X, kPi, std::nullopt}, std::nullopt});
    sched.meta.global_phase = -kPi / 2;
  }
  sched.events.push_back({BiasOnEvent{lo, hi, dir}, std::nullopt});
  sched.events.push_back(
      {RotationEvent{lo, Axis::X, kPi, dots.plus_dot_lo}, std::nullopt});
  sched.events.push_back(
      {RotationEvent{hi, Axis::X, plus ? 3 * kPi : kPi, dots.plus_dot_hi},
       std::nullopt});
  sched.events.push_back({BiasOffEvent{lo, hi, dir}, std::nullopt});
  return sched;
}

Schedule compile_cnot(int control, int target, Direction dir, int n_cells) {
  check_cell_count(n_cells, 2);
  check_cell_index(control, n_cells);
  check_cell_index(target, n_cells);
  if (control == target)
    fail(ErrorCode::SameCell, "cnot needs two distinct cells");
  int lo = std::min(control, target);
  int hi = std::max(control, target);
  BranchDots dots = branch_dots(dir);
  auto minus_dot = [&](int cell) {
    return cell == lo ? dots.minus_dot_lo : dots.minus_dot_hi;
  };
  auto plus_dot = [&](int cell) {
    return cell == lo ? dots.plus_dot_lo : dots.plus_dot_hi;
  };

  Schedule sched;
  sched.n_cells = n_cells;
  sched.meta.mirrored = control > target;
  sched.events.push_back({BiasOnEvent{lo, hi, dir}, std::nullopt});
  sched.events.push_back({PolarizationEvent{lo, hi, kPi / 2}, std::nullopt});
  sched.events.push_back(
      {RotationEvent{control, Axis::Z, kPi / 2, minus_dot(control)},
       std::nullopt});
  sched.events.push_back(
      {RotationEvent{control, Axis::Z, 3 * kPi / 2, plus_dot(control)},
       std::nullopt});
  sched.events.push_back(
      {RotationEvent{target, Axis::X, kPi / 2, minus_dot(target)},
       std::nullopt});
  sched.events.push_back(
      {RotationEvent{target, Axis::X, 3 * kPi / 2, plus_dot(target)},
       std::nullopt});
  sched.events.push_back({BiasOffEvent{lo, hi, dir}, std::nullopt});
  return sched;
}

Schedule compile_circuit(const Circuit& circuit) {
  check_cell_count(circuit.n_cells, 1);
  Grid grid = circuit.grid;
  if (grid.cols == 0) grid = Grid{1, circuit.n_cells};
  if (grid.rows * grid.cols < circuit.n_cells)
    fail(ErrorCode::GridMismatch, "grid smaller than the cell count");

  Schedule sched;
  sched.n_cells = circuit.n_cells;
  double phase = 0.0;
  auto rot = [&](int cell, Axis axis, double angle) {
    check_cell_index(cell, circuit.n_cells);
    sched.events.push_back(
        {RotationEvent{cell, axis, angle, std::nullopt}, std::nullopt});
  };

  for (const Gate& gate : circuit.gates) {
    switch (gate.kind) {
      case Gate::Kind::Rx:
        rot(gate.target, Axis::X, gate.angle);
        break;
      case Gate::Kind::Ry:
        rot(gate.target, Axis::Y, gate.angle);
        break;
      case Gate::Kind::Rz:
        rot(gate.target, Axis::Z, gate.angle);
        break;
      case Gate::Kind::H:
        // Rz(pi/2) Rx(pi/2) Rz(pi/2) = exp(-i pi/2) H
        rot(gate.target, Axis::Z, kPi / 2);
        rot(gate.target, Axis::X, kPi / 2);
        rot(gate.target, Axis::Z, kPi / 2);
        phase -= kPi / 2;
        break;
      case Gate::Kind::X:
        rot(gate.target, Axis::X, kPi);
        phase -= kPi / 2;
        break;
      case Gate::Kind::Y:
        rot(gate.target, Axis::Y, kPi);
        phase -= kPi / 2;
        break;
      case Gate::Kind::Z:
        rot(gate.target, Axis::Z, kPi);
        phase -= kPi / 2;
        break;
      case Gate::Kind::S:
        rot(gate.target, Axis::Z, kPi / 2);
        phase -= kPi / 4;
        break;
      case Gate::Kind::Sdg:
        rot(gate.target, Axis::Z, -kPi / 2);
        phase += kPi / 4;
        break;
      case Gate::Kind::T:
        rot(gate.target, Axis::Z, kPi / 4);
        phase -= kPi / 8;
        break;
      case Gate::Kind::Tdg:
        rot(gate.target, Axis::Z, -kPi / 4);
        phase += kPi / 8;
        break;
      case Gate::Kind::Cnot: {
        check_cell_index(gate.target, circuit.n_cells);
        check_cell_index(gate.control, circuit.n_cells);
        auto dir = grid.edge(gate.control, gate.target);
        if (!dir)
          fail(ErrorCode::NotAdjacent,
               "cnot cells " + std::to_string(gate.control) + " and " +
                   std::to_string(gate.target) +
                   " are not adjacent in the grid");
        Schedule window =
            compile_cnot(gate.control, gate.target, *dir, circuit.n_cells);
        for (auto& event : window.events)
          sched.events.push_back(std::move(event));
        break;
      }
    }
  }
  sched.meta.global_phase = wrap_angle(phase);
  return sched;
}

Circuit parse_circuit_json(std::string_view json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::BadCircuit, std::string("bad circuit json: ") + e.what());
  }

  Circuit circuit;
  const nlohmann::json* gates = nullptr;
  if (doc.is_array()) {
    gates = &doc;
  } else if (doc.is_object()) {
    if (!doc.contains("gates") || !doc["gates"].is_array())
      fail(ErrorCode::BadCircuit, "circuit object needs a \"gates\" array");
    gates = &doc["gates"];
    if (doc.contains("cells")) {
      if (!doc["cells"].is_number_integer())
        fail(ErrorCode::BadCircuit, "\"cells\" must be an integer");
      circuit.n_cells = doc["cells"].get<int>();
    }
    if (doc.contains("grid")) {
      const auto& g = doc["grid"];
      if (!g.is_array() || g.size() != 2 || !g[0].is_number_integer() ||
          !g[1].is_number_integer())
        fail(ErrorCode::BadCircuit, "\"grid\" must be [rows, cols]");
      circuit.grid = Grid{g[0].get<int>(), g[1].get<int>()};
    }
  } else {
    fail(ErrorCode::BadCircuit, "circuit must be an array or object");
  }

  auto gate_int = [](const nlohmann::json& g, const char* key) {
    if (!g.contains(key) || !g[key].is_number_integer())
      fail(ErrorCode::BadCircuit,
           std::string("gate needs integer \"") + key + "\"");
    return g[key].get<int>();
  };

  int max_cell = -1;
  for (const auto& g : *gates) {
    if (!g.is_object() || !g.contains("gate") || !g["gate"].is_string())
      fail(ErrorCode::BadCircuit, "each gate needs a \"gate\" name");
    std::string name = g["gate"].get<std::string>();
    Gate gate;
    gate.target = gate_int(g, "target");
    max_cell = std::max(max_cell, gate.target);
    if (name == "rx" || name == "ry" || name == "rz") {
      gate.kind = name == "rx"   ? Gate::Kind::Rx
                  : name == "ry" ? Gate::Kind::Ry
                                 : Gate::Kind::Rz;
      if (!g.contains("angle"))
        fail(ErrorCode::BadCircuit, "rotation gate needs \"angle\"");
      if (g["angle"].is_number())
        gate.angle = g["angle"].get<double>();
      else if (g["angle"].is_string())
        try {
          gate.angle = parse_angle_token(g["angle"].get<std::string>());
        } catch (const Error&) {
          fail(ErrorCode::BadCircuit,
               "bad angle '" + g["angle"].get<std::string>() + "'");
        }
      else
        fail(ErrorCode::BadCircuit, "\"angle\" must be a number or string");
    } else if (name == "cnot" || name == "cx") {
      gate.kind = Gate::Kind::Cnot;
      gate.control = gate_int(g, "control");
      max_cell = std::max(max_cell, gate.control);
    } else if (name == "h") {
      gate.kind = Gate::Kind::H;
    } else if (name == "x") {
      gate.kind = Gate::Kind::X;
    } else if (name == "y") {
      gate.kind = Gate::Kind::Y;
    } else if (name == "z") {
      gate.kind = Gate::Kind::Z;
    } else if (name == "s") {
      gate.kind = Gate::Kind::S;
    } else if (name == "sdg") {
      gate.kind = Gate::Kind::Sdg;
    } else if (name == "t") {
      gate.kind = Gate::Kind::T;
    } else if (name == "tdg") {
      gate.kind = Gate::Kind::Tdg;
    } else {
      fail(ErrorCode::BadCircuit, "unknown gate '" + name + "'");
    }
    circuit.gates.push_back(gate);
  }

  if (circuit.n_cells == 0) circuit.n_cells = max_cell + 1;
  if (circuit.grid.cols == 0) circuit.grid = Grid{1, circuit.n_cells};
  if (circuit.n_cells < 1)
    fail(ErrorCode::BadCircuit, "circuit has no cells");
  return circuit;
}

ScheduleUnitary unitary_of_schedule(const Schedule& schedule,
                                    const Grid& grid) {
  validate_schedule(schedule);
  for (const auto& event : schedule.events)
    if (std::holds_alternative<MeasureEvent>(event.what))
      fail(ErrorCode::NonUnitarySchedule,
           "schedules with measurements have no unitary action");

  const int n = schedule.n_cells;
  const int dim = 1 << n;
  RunOptions opts;
  opts.merge_mode = MergeMode::PostSelected;
  opts.grid = grid;

  Eigen::MatrixXcd matrix(dim, dim);
  double p0 = 0.0;
  for (int b = 0; b < dim; ++b) {
    RegisterState initial(n, grid);
    std::fill(initial.amplitudes().begin(), initial.amplitudes().end(),
              cplx{0.0, 0.0});
    std::vector<CellBasisLabel> label(n);
    for (int c = 0; c < n; ++c)
      label[c] = {(b >> (n - 1 - c)) & 1, DotSite::Q};
    initial.set_amplitude(label, 1.0);

    Rng rng(0);
    std::optional<TrajectoryResult> traj;
    try {
      traj.emplace(run_schedule(schedule, initial, opts, rng));
    } catch (const Error& e) {
      if (e.code() == ErrorCode::NonUnitaryMerge)
        fail(ErrorCode::NonUnitarySchedule,
             "a merge annihilates basis state " + std::to_string(b));
      throw;
    }

    double p = traj->postselect_prob;
    if (p <= tol::norm)
      fail(ErrorCode::NonUnitarySchedule,
           "basis state " + std::to_string(b) + " does not survive");
    if (b == 0)
      p0 = p;
    else if (std::abs(std::sqrt(p) - std::sqrt(p0)) > 1e-9)
      fail(ErrorCode::NonUnitarySchedule,
           "schedule scales basis states unequally");

    for (int r = 0; r < dim; ++r) {
      for (int c = 0; c < n; ++c)
        label[c] = {(r >> (n - 1 - c)) & 1, DotSite::Q};
      matrix(r, b) = traj->state.amplitude(label);
    }
  }

  ScheduleUnitary result;
  result.postselect_prob = p0;
  result.global_phase = cplx{1.0, 0.0};
  for (int r = 0; r < dim; ++r) {
    if (std::abs(matrix(r, 0)) > 1e-9) {
      result.global_phase = matrix(r, 0) / std::abs(matrix(r, 0));
      break;
    }
  }
  matrix /= result.global_phase;
  result.isometry_defect =
      (matrix.adjoint() * matrix - Eigen::MatrixXcd::Identity(dim, dim))
          .cwiseAbs()
          .maxCoeff();
  result.matrix = std::move(matrix);
  return result;
}

}  // namespace qcell
