#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace qcell {

using cplx = std::complex<double>;

/// Numerical tolerances used across the library. Values are part of the
/// public contract: tests assert against exactly these constants.
namespace tol {
inline constexpr double norm = 1e-12;       // state normalization / amplitude checks
inline constexpr double unitary = 1e-10;    // reconstructed-unitary deviation
inline constexpr double density = 1e-9;     // Hermiticity / trace / PSD of density matrices
inline constexpr double merge = 1e-9;       // strict bias-off success-probability window
}  // namespace tol

/// The five charge sites of a unit cell. Q is the qubit dot at the centre;
/// A..D are the ancilla dots at the corners:
///   A = top-left, B = bottom-left, C = top-right, D = bottom-right.
enum class DotSite : std::uint8_t { Q = 0, A = 1, B = 2, C = 3, D = 4 };

enum class Axis : std::uint8_t { X, Y, Z };

/// Orientation of a bias pulse / QCA pair: LR couples horizontal neighbours,
/// TB vertical ones.
enum class Direction : std::uint8_t { LR, TB };

enum class Sign : std::uint8_t { Plus, Minus };

/// Spin value of one cell together with the site its electron occupies.
/// Spin 0 is "up" (the qubit ground state), spin 1 is "down".
struct CellBasisLabel {
  int spin = 0;
  DotSite site = DotSite::Q;
  friend bool operator==(const CellBasisLabel&, const CellBasisLabel&) = default;
};

/// Row-major rectangular arrangement of cells. Cell index = row * cols + col.
struct Grid {
  int rows = 1;
  int cols = 0;

  int cells() const { return rows * cols; }
  bool contains(int cell) const { return cell >= 0 && cell < cells(); }
  int row_of(int cell) const { return cell / cols; }
  int col_of(int cell) const { return cell % cols; }

  /// Direction of the edge between two adjacent cells, nullopt otherwise.
  std::optional<Direction> edge(int i, int j) const {
    if (!contains(i) || !contains(j) || i == j) return std::nullopt;
    int ri = row_of(i), ci = col_of(i), rj = row_of(j), cj = col_of(j);
    if (ri == rj && (ci - cj == 1 || cj - ci == 1)) return Direction::LR;
    if (ci == cj && (ri - rj == 1 || rj - ri == 1)) return Direction::TB;
    return std::nullopt;
  }
  friend bool operator==(const Grid&, const Grid&) = default;
};

enum class ErrorCode {
  ZeroCells,
  RegisterTooLarge,
  GridMismatch,
  LabelLengthMismatch,
  DimensionMismatch,
  IndexOutOfRange,
  DuplicateIndex,
  NotADensityMatrix,
  NotAdjacent,
  SameCell,
  ChargeNotAtQubitDot,
  QcaAlreadyActive,
  PairNotActive,
  NonUnitaryMerge,
  QubitDotCondition,
  DotsInUse,
  OverlappingWindows,
  ChargeLeakage,
  NonUnitarySchedule,
  NegativeDuration,
  ActiveWindow,
  MissingCellsDecl,
  RotationOutsideWindow,
  SyntaxError,
  SemanticError,
  InvalidNoiseParams,
  BadConfig,
  BadCircuit,
  UnknownReference,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
        code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

inline char site_letter(DotSite site) {
  return "QABCD"[static_cast<int>(site)];
}

inline char axis_letter(Axis axis) { return "xyz"[static_cast<int>(axis)]; }

}  // namespace qcell
