#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "qcell/noise.hpp"
#include "qcell/pulses.hpp"
#include "qcell/readout.hpp"
#include "qcell/schedule.hpp"

namespace qcell {

struct RunOptions {
  MergeMode merge_mode = MergeMode::PostSelected;
  Grid grid{1, 0};  // cols == 0 binds a 1 x n_cells row at run time
  DeviceConfig device;
  NoiseParams noise;
  bool apply_noise = false;
};

struct TrajectoryResult {
  RegisterState state;
  std::vector<double> merge_successes;   // one entry per closed window
  double postselect_prob = 1.0;          // product of merge successes
  std::vector<MeasurementRecord> measurements;
};

/// Executes a schedule on a copy of `initial` (idle, same cell count).
/// Merges follow opts.merge_mode. With apply_noise set, every event draws a
/// fixed number of variates per touched cell (phase-flip, decay, and for
/// rotations an angle perturbation), so a given seed yields the same
/// trajectory shape as noise parameters vary.
TrajectoryResult run_schedule(const Schedule& schedule,
                              const RegisterState& initial,
                              const RunOptions& opts, Rng& rng);

/// Same, starting from all spins up with charge at the qubit dots.
TrajectoryResult run_schedule(const Schedule& schedule,
                              const RunOptions& opts = {},
                              std::uint64_t seed = 0);

struct ShotSummary {
  std::size_t shots = 0;
  std::map<std::string, std::size_t> histogram;  // outcome bits, event order
  double mean_postselect_prob = 1.0;
};

/// Repeats the schedule `shots` times from the all-up state, one rng stream
/// per shot via trajectory_seed(master_seed, k). Schedules without measure
/// events get an implicit final Z measurement of every cell in index order.
ShotSummary sample_shots(const Schedule& schedule, std::size_t shots,
                         std::uint64_t master_seed,
                         const RunOptions& opts = {});

/// Noisy Monte Carlo: runs `trajectories` noisy executions of the schedule
/// from `input` and averages the fidelity against `ideal_output`.
struct McInfidelity {
  double mean_infidelity = 0.0;
  double std_error = 0.0;
  std::size_t trajectories = 0;
};
McInfidelity mc_infidelity(const Schedule& schedule,
                           const RegisterState& input,
                           const RegisterState& ideal_output,
                           std::size_t trajectories,
                           std::uint64_t master_seed, RunOptions opts);

}  // namespace qcell
