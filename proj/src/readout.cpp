#include "qcell/readout.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "qcell/kernels.hpp"

namespace qcell {

MeasurementRecord measure_z(RegisterState& state, int cell, Rng& rng,
                            std::string name) {
  state.check_cell(cell);
  if (state.pair_of_cell(cell))
    fail(ErrorCode::ActiveWindow,
         "cell " + std::to_string(cell) + " is inside an open bias window");
  std::size_t stride = state.stride(cell);
  cplx* a = state.amplitudes().data();
  double total = kernels::norm_sq(a, state.dim());
  if (total <= tol::norm)
    fail(ErrorCode::NotADensityMatrix, "cannot measure a null state");
  double off_q = kernels::off_q_mass(a, state.dim(), stride) / total;
  if (off_q > tol::norm)
    fail(ErrorCode::ChargeNotAtQubitDot,
         "cell " + std::to_string(cell) + " charge is away from the qubit dot");
  double p1 = kernels::spin1_mass(a, state.dim(), stride) / total;
  double u = rng.uniform();
  int outcome = u < p1 ? 1 : 0;
  double p = outcome == 1 ? p1 : 1.0 - p1;
  kernels::project_spin(a, state.dim(), stride, outcome,
                        1.0 / std::sqrt(std::max(p * total, 1e-300)));
  MeasurementRecord record;
  record.cell = cell;
  record.name = std::move(name);
  record.outcome = outcome;
  record.probability = p;
  return record;
}

QpcTrace synthesize_trace(int outcome, Rng& rng, double noise_sigma,
                          std::size_t n_samples, double baseline,
                          double depth) {
  QpcTrace trace;
  trace.baseline = baseline;
  trace.depth = depth;
  trace.current.resize(n_samples);
  if (outcome == 1) {
    trace.dip_begin = n_samples * 3 / 10;
    trace.dip_end = n_samples * 6 / 10;
  }
  for (std::size_t i = 0; i < n_samples; ++i) {
    double level = baseline;
    if (i >= trace.dip_begin && i < trace.dip_end) level -= depth;
    trace.current[i] = level + noise_sigma * standard_normal(rng);
  }
  return trace;
}

std::optional<std::pair<std::size_t, std::size_t>> detect_dip_window(
    const QpcTrace& trace, std::size_t min_run) {
  const std::size_t n = trace.current.size();
  if (n == 0) return std::nullopt;
  // Box smoothing (width 9) knocks the per-sample noise down ~3x before
  // thresholding at half depth.
  const std::size_t half = 4;
  std::vector<double> smooth(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t lo = i > half ? i - half : 0;
    std::size_t hi = std::min(n, i + half + 1);
    double sum = 0;
    for (std::size_t j = lo; j < hi; ++j) sum += trace.current[j];
    smooth[i] = sum / static_cast<double>(hi - lo);
  }
  const double threshold = trace.baseline - trace.depth / 2;
  std::size_t best_begin = 0, best_len = 0, run_begin = 0, run_len = 0;
  for (std::size_t i = 0; i <= n; ++i) {
    if (i < n && smooth[i] < threshold) {
      if (run_len == 0) run_begin = i;
      ++run_len;
    } else {
      if (run_len > best_len) {
        best_len = run_len;
        best_begin = run_begin;
      }
      run_len = 0;
    }
  }
  if (best_len < min_run) return std::nullopt;
  return std::make_pair(best_begin, best_begin + best_len);
}

int classify_trace(const QpcTrace& trace) {
  return detect_dip_window(trace).has_value() ? 1 : 0;
}

void write_trace_csv(std::ostream& out, const QpcTrace& trace) {
  out << "time,current\n";
  char buf[64];
  for (std::size_t i = 0; i < trace.current.size(); ++i) {
    double t = static_cast<double>(i) * trace.sample_period;
    auto [p1, ec1] = std::to_chars(buf, buf + sizeof(buf), t);
    out.write(buf, p1 - buf);
    out.put(',');
    auto [p2, ec2] = std::to_chars(buf, buf + sizeof(buf), trace.current[i]);
    out.write(buf, p2 - buf);
    out.put('\n');
  }
}

}  // namespace qcell
