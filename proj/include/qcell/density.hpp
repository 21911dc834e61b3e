#pragma once

#include <Eigen/Dense>

#include "qcell/state.hpp"

namespace qcell {

/// Two-cell reduced spin density matrix, traced over all charge positions and
/// every other cell. Basis |s_a s_b> with s_a the major bit, so the matrix is
/// 4x4 with row index s_a*2 + s_b.
Eigen::Matrix4cd reduced_spin_density(const RegisterState& state, int a, int b);

/// Entanglement of formation measure for a two-qubit density matrix via the
/// spin-flip spectrum: C = max(0, l1 - l2 - l3 - l4), where l_i are the
/// decreasing square roots of the eigenvalues of rho (Y x Y) rho* (Y x Y).
/// Validates Hermiticity, unit trace and positivity (NotADensityMatrix).
double concurrence(const Eigen::Matrix4cd& rho);

double concurrence(const RegisterState& state, int a, int b);

}  // namespace qcell
