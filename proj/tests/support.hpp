#pragma once

// Helpers shared between the unit tests and the acceptance runner.

#include <cmath>
#include <string>
#include <vector>

#include "qcell/noise.hpp"
#include "qcell/schedule.hpp"
#include "qcell/state.hpp"

namespace qcell::testing {

// Angles that survive text round-trips bit-exactly: pi fractions are
// regenerated as k*pi/d by the parser, decimals via shortest to_chars.
inline double random_angle(Rng& rng) {
  switch (rng.raw() % 5) {
    case 0:
      return M_PI;
    case 1: {
      long long d = 1 + static_cast<long long>(rng.raw() % 12);
      long long k = 1 + static_cast<long long>(rng.raw() % 24);
      return static_cast<double>(k) * M_PI / static_cast<double>(d);
    }
    case 2:
      return -static_cast<double>(1 + rng.raw() % 7) * M_PI /
             static_cast<double>(1 + rng.raw() % 12);
    case 3:
      return static_cast<double>(rng.raw() % 10000) / 1024.0;
    default:
      return -static_cast<double>(rng.raw() % 10000) / 4096.0;
  }
}

// Durations with an integral femtosecond count round-trip exactly.
inline double random_duration(Rng& rng) {
  static constexpr double kScales[] = {1e-15, 1e-12, 1e-9};
  double scale = kScales[rng.raw() % 3];
  return static_cast<double>(1 + rng.raw() % 2000) * scale;
}

inline Axis random_axis(Rng& rng) {
  switch (rng.raw() % 3) {
    case 0:
      return Axis::X;
    case 1:
      return Axis::Y;
    default:
      return Axis::Z;
  }
}

// Random well-formed schedule over a 1 x n row, LR windows on adjacent
// pairs. With `strict_safe` every emitted construct keeps the merge exactly
// unitary: branch-conditional rotations always come in matched pairs on both
// dots of one cell, polarization angles are multiples of 4*pi, and nothing
// measures. Without it, lone conditional rotations, arbitrary polarization
// angles and measurements may appear (still parseable and runnable).
inline Schedule random_schedule(Rng& rng, bool strict_safe,
                                bool allow_measure = true) {
  Schedule sched;
  sched.n_cells = 2 + static_cast<int>(rng.raw() % 3);
  struct Open {
    int lo, hi;
  };
  std::vector<Open> open;
  auto covering = [&](int cell) -> const Open* {
    for (const auto& w : open)
      if (w.lo == cell || w.hi == cell) return &w;
    return nullptr;
  };
  auto maybe_duration = [&](double) -> std::optional<double> {
    if (rng.raw() % 4 == 0) return random_duration(rng);
    return std::nullopt;
  };

  int budget = 2 + static_cast<int>(rng.raw() % 10);
  for (int step = 0; step < budget; ++step) {
    switch (rng.raw() % 6) {
      case 0: {  // open a window on a free adjacent pair
        std::vector<int> free_lo;
        for (int lo = 0; lo + 1 < sched.n_cells; ++lo)
          if (!covering(lo) && !covering(lo + 1)) free_lo.push_back(lo);
        if (free_lo.empty()) break;
        int lo = free_lo[rng.raw() % free_lo.size()];
        open.push_back({lo, lo + 1});
        sched.events.push_back({BiasOnEvent{lo, lo + 1, Direction::LR},
                                maybe_duration(300e-12)});
        break;
      }
      case 1: {  // close a window
        if (open.empty()) break;
        std::size_t i = rng.raw() % open.size();
        sched.events.push_back(
            {BiasOffEvent{open[i].lo, open[i].hi, Direction::LR},
             std::nullopt});
        open.erase(open.begin() + static_cast<std::ptrdiff_t>(i));
        break;
      }
      case 2: {  // unconditional rotation
        int cell = static_cast<int>(
            rng.raw() % static_cast<std::uint64_t>(sched.n_cells));
        sched.events.push_back(
            {RotationEvent{cell, random_axis(rng), random_angle(rng),
                           std::nullopt},
             maybe_duration(1e-12)});
        break;
      }
      case 3: {  // conditional rotation(s) inside a window
        if (open.empty()) break;
        const Open& w = open[rng.raw() % open.size()];
        bool pick_lo = rng.raw() % 2 == 0;
        int cell = pick_lo ? w.lo : w.hi;
        auto dots = window_dots(Direction::LR, pick_lo);
        Axis axis = random_axis(rng);
        double angle = random_angle(rng);
        if (strict_safe) {
          sched.events.push_back(
              {RotationEvent{cell, axis, angle, dots[0]}, std::nullopt});
          sched.events.push_back(
              {RotationEvent{cell, axis, angle, dots[1]}, std::nullopt});
        } else {
          sched.events.push_back(
              {RotationEvent{cell, axis, angle, dots[rng.raw() % 2]},
               std::nullopt});
        }
        break;
      }
      case 4: {  // polarization; 2*pi*k puts the same factor on both branches
        if (open.empty()) break;
        const Open& w = open[rng.raw() % open.size()];
        double angle = strict_safe
                           ? 2 * M_PI * static_cast<double>(1 + rng.raw() % 3)
                           : random_angle(rng);
        sched.events.push_back({PolarizationEvent{w.lo, w.hi, angle},
                                maybe_duration(50e-12)});
        break;
      }
      default: {  // wait, or measure when allowed
        if (!strict_safe && allow_measure && rng.raw() % 3 == 0) {
          int cell = static_cast<int>(rng.raw() % sched.n_cells);
          if (!covering(cell)) {
            sched.events.push_back(
                {MeasureEvent{cell, "m" + std::to_string(step)},
                 std::nullopt});
            break;
          }
        }
        sched.events.push_back({WaitEvent{random_duration(rng)},
                                std::nullopt});
        break;
      }
    }
  }
  for (auto it = open.rbegin(); it != open.rend(); ++it)
    sched.events.push_back(
        {BiasOffEvent{it->lo, it->hi, Direction::LR}, std::nullopt});
  return sched;
}

// Uniform random spin state over the register's spin sector (charge at Q).
inline RegisterState random_spin_state(int n_cells, Rng& rng) {
  RegisterState state(n_cells);
  std::fill(state.amplitudes().begin(), state.amplitudes().end(),
            cplx{0.0, 0.0});
  std::vector<CellBasisLabel> label(n_cells);
  double norm_sq = 0;
  std::vector<std::pair<std::vector<CellBasisLabel>, cplx>> entries;
  for (int b = 0; b < (1 << n_cells); ++b) {
    for (int c = 0; c < n_cells; ++c)
      label[c] = {(b >> (n_cells - 1 - c)) & 1, DotSite::Q};
    cplx v{rng.uniform() * 2 - 1, rng.uniform() * 2 - 1};
    norm_sq += std::norm(v);
    entries.emplace_back(label, v);
  }
  for (auto& [lab, v] : entries)
    state.set_amplitude(lab, v / std::sqrt(norm_sq));
  return state;
}

}  // namespace qcell::testing
