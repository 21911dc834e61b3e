#include "qcell/schedule.hpp"

#include <algorithm>

namespace qcell {

std::array<DotSite, 2> window_dots(Direction dir, bool is_lo) {
  if (dir == Direction::LR)
    return is_lo ? std::array{DotSite::C, DotSite::D}
                 : std::array{DotSite::A, DotSite::B};
  return is_lo ? std::array{DotSite::B, DotSite::D}
               : std::array{DotSite::A, DotSite::C};
}

namespace {

struct OpenWindow {
  int lo, hi;
  Direction dir;
};

void check_cell_index(int cell, int n_cells) {
  if (cell < 0 || cell >= n_cells)
    fail(ErrorCode::IndexOutOfRange,
         "cell " + std::to_string(cell) + " outside 'cells " +
             std::to_string(n_cells) + "'");
}

}  // namespace

void validate_schedule(const Schedule& schedule) {
  if (schedule.n_cells < 0)
    fail(ErrorCode::ZeroCells, "negative cell count");
  std::vector<OpenWindow> open;

  auto window_of_cell = [&](int cell) -> const OpenWindow* {
    for (const OpenWindow& w : open)
      if (w.lo == cell || w.hi == cell) return &w;
    return nullptr;
  };

  for (const Event& event : schedule.events) {
    if (event.duration && *event.duration < 0)
      fail(ErrorCode::NegativeDuration, "event duration must be nonnegative");

    if (const auto* on = std::get_if<BiasOnEvent>(&event.what)) {
      check_cell_index(on->lo, schedule.n_cells);
      check_cell_index(on->hi, schedule.n_cells);
      if (on->lo == on->hi) fail(ErrorCode::SameCell, "window needs two cells");
      if (on->lo > on->hi)
        fail(ErrorCode::SemanticError, "window pair must be ordered lo < hi");
      for (const OpenWindow& w : open) {
        if (w.lo == on->lo && w.hi == on->hi)
          fail(ErrorCode::QcaAlreadyActive, "window already open on this pair");
        if (w.lo == on->lo || w.lo == on->hi || w.hi == on->lo || w.hi == on->hi)
          fail(ErrorCode::OverlappingWindows,
               "cell already inside another open window");
      }
      open.push_back({on->lo, on->hi, on->dir});
    } else if (const auto* off = std::get_if<BiasOffEvent>(&event.what)) {
      auto it = std::find_if(open.begin(), open.end(), [&](const OpenWindow& w) {
        return w.lo == off->lo && w.hi == off->hi && w.dir == off->dir;
      });
      if (it == open.end())
        fail(ErrorCode::PairNotActive, "bias off without a matching bias on");
      open.erase(it);
    } else if (const auto* rot = std::get_if<RotationEvent>(&event.what)) {
      check_cell_index(rot->cell, schedule.n_cells);
      if (rot->dot) {
        if (*rot->dot == DotSite::Q)
          fail(ErrorCode::QubitDotCondition,
               "rotations cannot be conditioned on the qubit dot");
        const OpenWindow* w = window_of_cell(rot->cell);
        if (w == nullptr)
          fail(ErrorCode::RotationOutsideWindow,
               "conditional rotation outside any open window");
        auto dots = window_dots(w->dir, rot->cell == w->lo);
        if (*rot->dot != dots[0] && *rot->dot != dots[1])
          fail(ErrorCode::RotationOutsideWindow,
               "dot " + std::string(1, site_letter(*rot->dot)) +
                   " is not active in this window");
      }
    } else if (const auto* pol = std::get_if<PolarizationEvent>(&event.what)) {
      check_cell_index(pol->lo, schedule.n_cells);
      check_cell_index(pol->hi, schedule.n_cells);
      bool matches = std::any_of(open.begin(), open.end(), [&](const OpenWindow& w) {
        return w.lo == pol->lo && w.hi == pol->hi;
      });
      if (!matches)
        fail(ErrorCode::PairNotActive,
             "polarization pulse outside an open window on its pair");
    } else if (const auto* wait = std::get_if<WaitEvent>(&event.what)) {
      if (wait->duration < 0)
        fail(ErrorCode::NegativeDuration, "wait duration must be nonnegative");
    } else if (const auto* meas = std::get_if<MeasureEvent>(&event.what)) {
      check_cell_index(meas->cell, schedule.n_cells);
      if (window_of_cell(meas->cell) != nullptr)
        fail(ErrorCode::ActiveWindow,
             "cannot measure a cell inside an open window");
    }
  }
  if (!open.empty())
    fail(ErrorCode::SemanticError, "window left open at end of schedule");
}

}  // namespace qcell
