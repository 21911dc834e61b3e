#pragma once

#include <Eigen/Dense>
#include <string_view>
#include <vector>

#include "qcell/schedule.hpp"

namespace qcell {

enum class BellKind { PhiPlus, PhiMinus, PsiPlus, PsiMinus };

/// One gate of a logical circuit. `angle` is used by the rotation kinds,
/// `control` only by Cnot.
struct Gate {
  enum class Kind { Rx, Ry, Rz, H, X, Y, Z, S, Sdg, T, Tdg, Cnot };
  Kind kind = Kind::Rx;
  int target = 0;
  int control = -1;
  double angle = 0.0;
};

struct Circuit {
  int n_cells = 0;
  Grid grid{1, 0};
  std::vector<Gate> gates;
};

/// A single unconditional spin rotation.
Schedule compile_single(int n_cells, int cell, Axis axis, double angle);

/// Entangling window on an adjacent cell pair. Starting from both spins in
/// |0> the schedule leaves the pair in the requested Bell state; the psi
/// kinds prepend a spin flip on the higher-indexed cell and record the
/// resulting -pi/2 global phase in the metadata.
Schedule compile_bell(BellKind kind, int cell_a = 0, int cell_b = 1,
                      Direction dir = Direction::LR, int n_cells = 2);

/// CNOT window: pi/2 polarization plus conditional z rotations on the
/// control's branch dots and x rotations on the target's. `mirrored` is set
/// in the metadata when control > target.
Schedule compile_cnot(int control, int target, Direction dir = Direction::LR,
                      int n_cells = 2);

/// Lowers a circuit gate-by-gate. Cnot requires the two cells to be adjacent
/// in the circuit grid. Discrete gates are realized as rotations up to a
/// global phase, which is accumulated in the schedule metadata.
Schedule compile_circuit(const Circuit& circuit);

/// Accepts either a bare JSON array of gates or an object
/// {"cells": N, "grid": [rows, cols], "gates": [...]}. A gate is
/// {"gate": "h"|"x"|"y"|"z"|"s"|"sdg"|"t"|"tdg"|"rx"|"ry"|"rz"|"cnot",
///  "target": int, "control": int, "angle": number|string}. String angles
/// use the schedule text syntax (e.g. "3pi/2").
Circuit parse_circuit_json(std::string_view json_text);

struct ScheduleUnitary {
  Eigen::MatrixXcd matrix;      // action on the spin space, phase-stripped
  cplx global_phase{1.0, 0.0};  // stripped factor: action = phase * matrix
  double postselect_prob = 1.0; // branch survival probability per column
  double isometry_defect = 0.0; // max |U^H U - I|
};

/// Reconstructs the spin-space action of a schedule by running it on every
/// spin basis state (merges post-selected). Cell 0 is the most significant
/// qubit. Throws NonUnitarySchedule if the schedule measures, loses a basis
/// state entirely, or scales basis states unequally.
ScheduleUnitary unitary_of_schedule(const Schedule& schedule, const Grid& grid);

inline ScheduleUnitary unitary_of_schedule(const Schedule& schedule) {
  return unitary_of_schedule(schedule, Grid{1, schedule.n_cells});
}

}  // namespace qcell
