#include "qcell/executor.hpp"

#include <algorithm>
#include <cmath>

#include "qcell/kernels.hpp"

namespace qcell {
namespace {

struct LiveWindow {
  int lo, hi;
  Direction dir;
  double duration;
};

struct NoiseStep {
  const RunOptions* opts;
  Rng* rng;

  // Per touched cell: one phase-flip draw and one decay draw, taken
  // unconditionally so the draw count does not depend on parameters.
  void touch(RegisterState& state, int cell, double seconds) const {
    if (!opts->apply_noise) return;
    double u_phase = rng->uniform();
    double u_decay = rng->uniform();
    std::size_t stride = state.stride(cell);
    cplx* a = state.amplitudes().data();
    if (u_phase < dephasing_prob(seconds, opts->noise.t2))
      kernels::phase_flip(a, state.dim(), stride);
    double t1 = opts->noise.t1;
    if (std::isfinite(t1) && u_decay < 1.0 - std::exp(-seconds / t1)) {
      double total = kernels::norm_sq(a, state.dim());
      double mass = kernels::spin1_mass(a, state.dim(), stride);
      if (mass > tol::norm * total) {
        kernels::decay_jump(a, state.dim(), stride);
        kernels::scale(a, state.dim(), std::sqrt(total / mass));
      }
    }
  }
};

}  // namespace

TrajectoryResult run_schedule(const Schedule& schedule,
                              const RegisterState& initial,
                              const RunOptions& opts, Rng& rng) {
  validate_schedule(schedule);
  if (initial.n_cells() != schedule.n_cells)
    fail(ErrorCode::DimensionMismatch,
         "schedule is for " + std::to_string(schedule.n_cells) +
             " cells but the state has " + std::to_string(initial.n_cells()));
  if (!initial.active_pairs().empty())
    fail(ErrorCode::ActiveWindow, "initial state must be idle");
  validate_params(opts.device, opts.noise);
  Grid grid = opts.grid;
  if (grid.cols == 0) grid = Grid{1, schedule.n_cells};
  if (grid.rows * grid.cols < schedule.n_cells)
    fail(ErrorCode::GridMismatch, "grid smaller than the cell count");

  TrajectoryResult result{initial, {}, 1.0, {}};
  RegisterState& state = result.state;
  double imbalance = opts.apply_noise ? opts.noise.imbalance : 0.0;
  NoiseStep noise{&opts, &rng};
  std::vector<LiveWindow> windows;
  auto window_of = [&](int cell) -> const LiveWindow* {
    for (const auto& w : windows)
      if (w.lo == cell || w.hi == cell) return &w;
    return nullptr;
  };

  for (const auto& event : schedule.events) {
    std::visit(
        [&](const auto& ev) {
          using T = std::decay_t<decltype(ev)>;
          if constexpr (std::is_same_v<T, BiasOnEvent>) {
            qca_split(state, ev.lo, ev.hi, ev.dir, imbalance);
            windows.push_back(
                {ev.lo, ev.hi, ev.dir,
                 event.duration.value_or(opts.device.window_duration)});
            noise.touch(state, ev.lo, 0.0);
            noise.touch(state, ev.hi, 0.0);
          } else if constexpr (std::is_same_v<T, BiasOffEvent>) {
            auto it = std::find_if(windows.begin(), windows.end(),
                                   [&](const LiveWindow& w) {
                                     return w.lo == ev.lo && w.hi == ev.hi &&
                                            w.dir == ev.dir;
                                   });
            double seconds = it->duration;
            windows.erase(it);
            double success = qca_merge(state, ev.lo, ev.hi, opts.merge_mode,
                                       imbalance);
            result.merge_successes.push_back(success);
            result.postselect_prob *= success;
            noise.touch(state, ev.lo, seconds);
            noise.touch(state, ev.hi, seconds);
          } else if constexpr (std::is_same_v<T, RotationEvent>) {
            double angle = ev.angle;
            if (opts.apply_noise)
              angle += opts.noise.angle_jitter * standard_normal(rng);
            if (ev.dot)
              spin_rotate_conditional(state, ev.cell, ev.axis, angle, *ev.dot);
            else
              spin_rotate(state, ev.cell, ev.axis, angle);
            double seconds =
                window_of(ev.cell)
                    ? 0.0
                    : event.duration.value_or(opts.device.rotation_duration);
            noise.touch(state, ev.cell, seconds);
          } else if constexpr (std::is_same_v<T, PolarizationEvent>) {
            polarization_pulse(state, ev.lo, ev.hi, ev.angle);
            noise.touch(state, ev.lo, 0.0);
            noise.touch(state, ev.hi, 0.0);
          } else if constexpr (std::is_same_v<T, WaitEvent>) {
            for (int c = 0; c < schedule.n_cells; ++c)
              noise.touch(state, c, ev.duration);
          } else if constexpr (std::is_same_v<T, MeasureEvent>) {
            result.measurements.push_back(
                measure_z(state, ev.cell, rng, ev.name));
            noise.touch(state, ev.cell,
                        event.duration.value_or(opts.device.window_duration));
          }
        },
        event.what);
  }

  for (int c = 0; c < schedule.n_cells; ++c)
    if (charge_off_q(state, c) > tol::norm)
      fail(ErrorCode::ChargeLeakage,
           "charge left outside the qubit dots after the schedule");
  return result;
}

TrajectoryResult run_schedule(const Schedule& schedule, const RunOptions& opts,
                              std::uint64_t seed) {
  RegisterState initial(schedule.n_cells,
                        opts.grid.cols == 0 ? Grid{1, schedule.n_cells}
                                            : opts.grid);
  Rng rng(seed);
  return run_schedule(schedule, initial, opts, rng);
}

ShotSummary sample_shots(const Schedule& schedule, std::size_t shots,
                         std::uint64_t master_seed, const RunOptions& opts) {
  Schedule effective = schedule;
  bool has_measure = std::any_of(
      schedule.events.begin(), schedule.events.end(), [](const Event& e) {
        return std::holds_alternative<MeasureEvent>(e.what);
      });
  if (!has_measure) {
    for (int c = 0; c < schedule.n_cells; ++c)
      effective.events.push_back(
          {MeasureEvent{c, "c" + std::to_string(c)}, std::nullopt});
  }

  Grid grid = opts.grid.cols == 0 ? Grid{1, schedule.n_cells} : opts.grid;
  RegisterState initial(schedule.n_cells, grid);
  ShotSummary summary;
  summary.shots = shots;
  double postselect_sum = 0.0;
  for (std::size_t k = 0; k < shots; ++k) {
    Rng rng(trajectory_seed(master_seed, k));
    TrajectoryResult traj = run_schedule(effective, initial, opts, rng);
    std::string key;
    key.reserve(traj.measurements.size());
    for (const auto& m : traj.measurements)
      key.push_back(static_cast<char>('0' + m.outcome));
    ++summary.histogram[key];
    postselect_sum += traj.postselect_prob;
  }
  summary.mean_postselect_prob =
      shots == 0 ? 1.0 : postselect_sum / static_cast<double>(shots);
  return summary;
}

McInfidelity mc_infidelity(const Schedule& schedule,
                           const RegisterState& input,
                           const RegisterState& ideal_output,
                           std::size_t trajectories,
                           std::uint64_t master_seed, RunOptions opts) {
  opts.apply_noise = true;
  double sum = 0.0, sum_sq = 0.0;
  for (std::size_t k = 0; k < trajectories; ++k) {
    Rng rng(trajectory_seed(master_seed, k));
    TrajectoryResult traj = run_schedule(schedule, input, opts, rng);
    double infid = 1.0 - fidelity(traj.state, ideal_output);
    sum += infid;
    sum_sq += infid * infid;
  }
  McInfidelity out;
  out.trajectories = trajectories;
  if (trajectories == 0) return out;
  double n = static_cast<double>(trajectories);
  out.mean_infidelity = sum / n;
  double var = std::max(0.0, sum_sq / n - out.mean_infidelity * out.mean_infidelity);
  out.std_error = std::sqrt(var / n);
  return out;
}

}  // namespace qcell
