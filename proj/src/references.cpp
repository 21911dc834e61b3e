#include "qcell/references.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace qcell {

RegisterState basis_state(std::string_view bits) {
  if (bits.empty()) fail(ErrorCode::ZeroCells, "empty basis label");
  std::vector<CellBasisLabel> label(bits.size());
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] != '0' && bits[i] != '1')
      fail(ErrorCode::UnknownReference,
           "basis label must be 0s and 1s, got '" + std::string(bits) + "'");
    label[i] = {bits[i] - '0', DotSite::Q};
  }
  RegisterState state(static_cast<int>(bits.size()));
  std::fill(state.amplitudes().begin(), state.amplitudes().end(),
            cplx{0.0, 0.0});
  state.set_amplitude(label, 1.0);
  return state;
}

RegisterState bell_state(BellKind kind) {
  RegisterState state(2);
  std::fill(state.amplitudes().begin(), state.amplitudes().end(),
            cplx{0.0, 0.0});
  const double r = 1.0 / std::sqrt(2.0);
  auto set = [&](int s0, int s1, double value) {
    state.set_amplitude({{s0, DotSite::Q}, {s1, DotSite::Q}}, value);
  };
  switch (kind) {
    case BellKind::PhiPlus:
      set(0, 0, r);
      set(1, 1, r);
      break;
    case BellKind::PhiMinus:
      set(0, 0, r);
      set(1, 1, -r);
      break;
    case BellKind::PsiPlus:
      set(0, 1, r);
      set(1, 0, r);
      break;
    case BellKind::PsiMinus:
      set(0, 1, r);
      set(1, 0, -r);
      break;
  }
  return state;
}

RegisterState reference_state(std::string_view name) {
  if (name == "bell_phi_plus") return bell_state(BellKind::PhiPlus);
  if (name == "bell_phi_minus") return bell_state(BellKind::PhiMinus);
  if (name == "bell_psi_plus") return bell_state(BellKind::PsiPlus);
  if (name == "bell_psi_minus") return bell_state(BellKind::PsiMinus);
  constexpr std::string_view kBasisPrefix = "basis_";
  if (name.substr(0, kBasisPrefix.size()) == kBasisPrefix)
    return basis_state(name.substr(kBasisPrefix.size()));
  fail(ErrorCode::UnknownReference,
       "unknown reference state '" + std::string(name) + "'");
}

}  // namespace qcell
