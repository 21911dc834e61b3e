#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "qcell/schedule.hpp"

namespace qcell {

/// Physical device parameters. Energies are in eV, durations in seconds.
/// The energy scales are reported and validated but do not enter the error
/// model directly; timing does.
struct DeviceConfig {
  double epsilon = 1e-3;                // dot detuning
  double zeeman = 115.8e-6;             // spin splitting
  double optical_field_bound = 20.0;    // max effective field, tesla
  double rotation_duration = 1e-12;
  double window_duration = 300e-12;
  double polarization_duration = 50e-12;
};

struct NoiseParams {
  double t2 = 50e-6;        // dephasing time, seconds
  double t1 = std::numeric_limits<double>::infinity();
  double angle_jitter = 0.0;  // std dev of rotation angle error, radians
  double imbalance = 0.0;     // charge splitting weight asymmetry
};

/// Throws InvalidNoiseParams unless t2 > 0, t1 >= t2/2, jitter >= 0 and
/// |imbalance| <= 1; throws BadConfig on nonpositive device durations.
void validate_params(const DeviceConfig& device, const NoiseParams& noise);

/// Probability that a spin idling for `duration` picks up a phase flip:
/// 1 - exp(-duration / t2).
double dephasing_prob(double duration, double t2);

/// Exposure of each cell to dephasing over a schedule. Spins inside an open
/// window are charge-encoded and protected, so window time is charged once
/// per participating cell when the window closes; unconditional rotations
/// charge their own duration; waits charge every cell; a measurement
/// occupies its cell for one window duration. Explicit event durations
/// override the device defaults.
struct ExposureLedger {
  std::vector<std::pair<std::string, double>> exposures;  // (kind, seconds) per cell-event
  std::map<std::string, double> seconds_by_kind;          // summed over cells
  double total_seconds = 0.0;
};
ExposureLedger exposure_of_schedule(const Schedule& schedule,
                                    const DeviceConfig& device);

/// First-order error estimate: sum of dephasing probabilities over every
/// (cell, exposure) pair in the schedule.
struct GateErrorEstimate {
  double total = 0.0;
  std::map<std::string, double> by_kind;
};
GateErrorEstimate estimate_gate_error(const Schedule& schedule,
                                      const DeviceConfig& device,
                                      const NoiseParams& noise);

/// Deterministic per-trajectory seeding: trajectory k of a run with master
/// seed s gets splitmix64(s + GOLDEN_GAMMA * (k + 1)), so trajectories are
/// independent of each other and of how many run.
std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t trajectory_seed(std::uint64_t master_seed, std::uint64_t k);

/// Uniform double in [0, 1) from the top 53 bits of one engine draw.
double uniform01(std::uint64_t raw);

/// All stochastic code draws through this wrapper so draw counts (and hence
/// reproducibility under a fixed seed) are easy to audit.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  std::uint64_t raw() { return engine_(); }
  double uniform() { return uniform01(engine_()); }

 private:
  std::mt19937_64 engine_;
};

/// Standard normal via Box-Muller; consumes exactly two engine draws.
double standard_normal(Rng& rng);

/// Key=value configuration (# comments). Durations take fs/ps/ns/us
/// suffixes, energies eV/meV/ueV/neV, and t1 accepts "inf". Keys: t2, t1,
/// jitter, imbalance, epsilon, zeeman, optical_field_bound,
/// rotation_duration, window_duration, polarization_duration.
struct Config {
  DeviceConfig device;
  NoiseParams noise;
};
Config parse_config_text(std::string_view text);
Config load_config_file(const std::string& path);

}  // namespace qcell
