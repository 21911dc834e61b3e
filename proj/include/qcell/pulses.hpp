#pragma once

#include "qcell/state.hpp"

namespace qcell {

/// Behaviour of qca_merge when the recombined state loses norm. Strict
/// demands unit success probability (the schedule's branch operations must
/// recombine unitarily); PostSelected renormalizes and reports the loss.
enum class MergeMode { Strict, PostSelected };

/// Bias-on across two adjacent cells: both electrons leave their qubit dots
/// and the pair charge state becomes the equal superposition of the two
/// square diagonals, (|minus> + |plus>)/sqrt(2). A nonzero amplitude
/// imbalance eps skews the branch weights to sqrt((1+eps)/2), sqrt((1-eps)/2).
/// The pair is recorded as active.
void qca_split(RegisterState& state, int i, int j, Direction dir,
               double amplitude_imbalance = 0.0);

/// Bias-off: adjoint of the split isometry. Each diagonal branch maps back to
/// |Q,Q> with its split weight and the spin amplitudes of the two branches
/// add. Returns the success probability (squared norm of the recombined
/// state). Strict mode raises NonUnitaryMerge unless that probability is 1
/// within tol::merge; both modes return a normalized state. The pair is
/// deactivated.
double qca_merge(RegisterState& state, int i, int j, MergeMode mode,
                 double amplitude_imbalance = 0.0);

/// Single-spin rotation exp(-i angle sigma_axis / 2), applied to one cell's
/// spin regardless of where its electron sits.
void spin_rotate(RegisterState& state, int cell, Axis axis, double angle);

/// Rotation applied only on the branch where the cell's electron occupies
/// the given ancilla dot (identity elsewhere). Conditioning on Q is refused.
void spin_rotate_conditional(RegisterState& state, int cell, Axis axis,
                             double angle, DotSite dot);

/// Polarization-conditioned phase on an active pair:
/// |minus> gains e^{+i phi/2}, |plus> gains e^{-i phi/2}.
void polarization_pulse(RegisterState& state, int i, int j, double phi);

/// Intra-cell bias pulse: |Q> -> (|d1> + |d2>)/sqrt(2) where (d1, d2) are the
/// two dots selected by direction and sign (LR+: C,D; LR-: A,B; TB+: B,D;
/// TB-: A,C). With spin_selective only the spin-1 component moves, which is
/// the spin-to-charge conversion used for readout.
void single_cell_split(RegisterState& state, int cell, Direction dir, Sign sign,
                       bool spin_selective);

/// Dot pair addressed by an intra-cell bias of the given direction and sign.
std::array<DotSite, 2> bias_target_dots(Direction dir, Sign sign);

}  // namespace qcell
