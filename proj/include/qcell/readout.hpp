#pragma once

#include <cstddef>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "qcell/noise.hpp"
#include "qcell/state.hpp"

namespace qcell {

struct MeasurementRecord {
  int cell = 0;
  std::string name;
  int outcome = 0;
  double probability = 0.0;  // Born probability of the observed outcome
};

/// Projective Z measurement of one cell's spin. The cell must be idle: not
/// part of an open bias window (ActiveWindow) and with its charge at the
/// qubit dot (ChargeNotAtQubitDot). Consumes one rng draw, projects and
/// renormalizes.
MeasurementRecord measure_z(RegisterState& state, int cell, Rng& rng,
                            std::string name = {});

/// Simulated charge-sensor current trace. `current[i]` is the reading at
/// time i * sample_period; a spin-down outcome shows as a rectangular dip
/// of `depth` below `baseline` spanning [dip_begin, dip_end).
struct QpcTrace {
  double sample_period = 1e-9;  // seconds
  double baseline = 1.0;
  double depth = 0.2;
  std::vector<double> current;
  std::size_t dip_begin = 0;  // ground truth, zero-length when outcome is 0
  std::size_t dip_end = 0;
};

QpcTrace synthesize_trace(int outcome, Rng& rng, double noise_sigma = 0.02,
                          std::size_t n_samples = 400,
                          double baseline = 1.0, double depth = 0.2);

/// Half-depth threshold detector on a box-smoothed trace. Returns the
/// [begin, end) sample range of the longest below-threshold run if that run
/// is at least min_run samples long.
std::optional<std::pair<std::size_t, std::size_t>> detect_dip_window(
    const QpcTrace& trace, std::size_t min_run = 20);

/// 1 if a dip was detected, else 0.
int classify_trace(const QpcTrace& trace);

/// Two columns, "time,current", one row per sample, time in seconds.
void write_trace_csv(std::ostream& out, const QpcTrace& trace);

}  // namespace qcell
