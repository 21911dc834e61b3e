#pragma once

#include <string_view>

#include "qcell/compiler.hpp"
#include "qcell/state.hpp"

namespace qcell {

/// Spin basis state with charge at every qubit dot; one character per cell,
/// cell 0 first, e.g. "01" = cell 0 up, cell 1 down.
RegisterState basis_state(std::string_view bits);

/// Two-cell Bell state in the spin sector, charge at the qubit dots.
RegisterState bell_state(BellKind kind);

/// By-name lookup used by the CLI: "bell_phi_plus", "bell_phi_minus",
/// "bell_psi_plus", "bell_psi_minus", or "basis_<bits>". Throws
/// UnknownReference otherwise.
RegisterState reference_state(std::string_view name);

}  // namespace qcell
