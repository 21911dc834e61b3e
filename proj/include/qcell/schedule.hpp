#pragma once

#include <array>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "qcell/types.hpp"

namespace qcell {

// A schedule is the pulse-level program: an ordered list of events over a
// declared number of cells. Grid geometry is not part of the schedule; cell
// adjacency is checked when the schedule is bound to a register. Within a
// schedule the window pair (lo, hi) is always ordered by cell index.

struct BiasOnEvent {
  int lo = 0, hi = 0;
  Direction dir = Direction::LR;
  friend bool operator==(const BiasOnEvent&, const BiasOnEvent&) = default;
};

struct BiasOffEvent {
  int lo = 0, hi = 0;
  Direction dir = Direction::LR;
  friend bool operator==(const BiasOffEvent&, const BiasOffEvent&) = default;
};

struct RotationEvent {
  int cell = 0;
  Axis axis = Axis::X;
  double angle = 0;
  std::optional<DotSite> dot;  // engaged = conditional rotation
  friend bool operator==(const RotationEvent&, const RotationEvent&) = default;
};

struct PolarizationEvent {
  int lo = 0, hi = 0;
  double angle = 0;
  friend bool operator==(const PolarizationEvent&, const PolarizationEvent&) = default;
};

struct WaitEvent {
  double duration = 0;  // seconds
  friend bool operator==(const WaitEvent&, const WaitEvent&) = default;
};

struct MeasureEvent {
  int cell = 0;
  std::string name;
  friend bool operator==(const MeasureEvent&, const MeasureEvent&) = default;
};

using EventPayload = std::variant<BiasOnEvent, BiasOffEvent, RotationEvent,
                                  PolarizationEvent, WaitEvent, MeasureEvent>;

struct Event {
  EventPayload what;
  /// Explicit duration override in seconds; otherwise the device defaults
  /// apply (window length for BiasOn, pulse lengths for rotations etc.).
  std::optional<double> duration;
  friend bool operator==(const Event&, const Event&) = default;
};

/// Compiler annotations. Not serialized; excluded from structural equality.
struct ScheduleMeta {
  double global_phase = 0;  // radians accumulated by preparation pulses
  bool mirrored = false;    // gate compiled with operands against grid order
};

struct Schedule {
  int n_cells = 0;
  std::vector<Event> events;
  ScheduleMeta meta;

  friend bool operator==(const Schedule& a, const Schedule& b) {
    return a.n_cells == b.n_cells && a.events == b.events;
  }
};

/// Static well-formedness checks, independent of any grid:
///  - cell indices within range, window pairs distinct;
///  - every BiasOn matched by a later BiasOff on the same pair, no window
///    left open, no double activation, no two concurrent windows sharing a
///    cell (OverlappingWindows);
///  - conditional rotations only inside a window of their cell and only on
///    that window's active dots (RotationOutsideWindow);
///  - polarization pulses only on the pair of an open window;
///  - no measurement of a cell with an open window (ActiveWindow);
///  - durations nonnegative (NegativeDuration).
void validate_schedule(const Schedule& schedule);

/// The two dots of `cell` that participate in a window of the given
/// direction, assuming the cell is the lo (left/top) or hi member.
std::array<DotSite, 2> window_dots(Direction dir, bool is_lo);

}  // namespace qcell
