#include "qcell/noise.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "qcell/dsl.hpp"

namespace qcell {

void validate_params(const DeviceConfig& device, const NoiseParams& noise) {
  if (!(noise.t2 > 0))
    fail(ErrorCode::InvalidNoiseParams, "t2 must be positive");
  if (!(noise.t1 >= noise.t2 / 2))
    fail(ErrorCode::InvalidNoiseParams, "t1 must be at least t2/2");
  if (!(noise.angle_jitter >= 0))
    fail(ErrorCode::InvalidNoiseParams, "jitter must be nonnegative");
  if (!(std::abs(noise.imbalance) <= 1))
    fail(ErrorCode::InvalidNoiseParams, "imbalance must lie in [-1, 1]");
  if (!(device.rotation_duration > 0) || !(device.window_duration > 0) ||
      !(device.polarization_duration > 0))
    fail(ErrorCode::BadConfig, "device durations must be positive");
  if (!(device.epsilon > 0) || !(device.zeeman > 0) ||
      !(device.optical_field_bound > 0))
    fail(ErrorCode::BadConfig, "device energy scales must be positive");
}

double dephasing_prob(double duration, double t2) {
  if (duration < 0)
    fail(ErrorCode::NegativeDuration, "duration must be nonnegative");
  if (!(t2 > 0)) fail(ErrorCode::InvalidNoiseParams, "t2 must be positive");
  return 1.0 - std::exp(-duration / t2);
}

ExposureLedger exposure_of_schedule(const Schedule& schedule,
                                    const DeviceConfig& device) {
  validate_schedule(schedule);
  ExposureLedger ledger;
  auto charge = [&](const char* kind, double seconds, int cells) {
    for (int i = 0; i < cells; ++i)
      ledger.exposures.emplace_back(kind, seconds);
    ledger.seconds_by_kind[kind] += seconds * cells;
    ledger.total_seconds += seconds * cells;
  };

  struct Window {
    int lo, hi;
    Direction dir;
    double duration;
  };
  std::vector<Window> open;
  auto in_window = [&](int cell) {
    return std::any_of(open.begin(), open.end(), [&](const Window& w) {
      return w.lo == cell || w.hi == cell;
    });
  };

  for (const auto& event : schedule.events) {
    std::visit(
        [&](const auto& ev) {
          using T = std::decay_t<decltype(ev)>;
          if constexpr (std::is_same_v<T, BiasOnEvent>) {
            open.push_back({ev.lo, ev.hi, ev.dir,
                            event.duration.value_or(device.window_duration)});
          } else if constexpr (std::is_same_v<T, BiasOffEvent>) {
            auto it = std::find_if(open.begin(), open.end(),
                                   [&](const Window& w) {
                                     return w.lo == ev.lo && w.hi == ev.hi &&
                                            w.dir == ev.dir;
                                   });
            charge("window", it->duration, 2);
            open.erase(it);
          } else if constexpr (std::is_same_v<T, RotationEvent>) {
            if (!in_window(ev.cell))
              charge("rotation",
                     event.duration.value_or(device.rotation_duration), 1);
          } else if constexpr (std::is_same_v<T, WaitEvent>) {
            charge("wait", ev.duration, schedule.n_cells);
          } else if constexpr (std::is_same_v<T, MeasureEvent>) {
            charge("measure", event.duration.value_or(device.window_duration),
                   1);
          }
          // Polarization happens inside a window; the charge basis is
          // insensitive to dephasing there, so nothing accrues.
        },
        event.what);
  }
  return ledger;
}

GateErrorEstimate estimate_gate_error(const Schedule& schedule,
                                      const DeviceConfig& device,
                                      const NoiseParams& noise) {
  validate_params(device, noise);
  ExposureLedger ledger = exposure_of_schedule(schedule, device);
  GateErrorEstimate estimate;
  for (const auto& [kind, seconds] : ledger.exposures) {
    double p = dephasing_prob(seconds, noise.t2);
    estimate.total += p;
    estimate.by_kind[kind] += p;
  }
  return estimate;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t trajectory_seed(std::uint64_t master_seed, std::uint64_t k) {
  return splitmix64(master_seed + 0x9E3779B97F4A7C15ULL * (k + 1));
}

double uniform01(std::uint64_t raw) {
  return std::ldexp(static_cast<double>(raw >> 11), -53);
}

double standard_normal(Rng& rng) {
  double u1 = std::max(rng.uniform(), 1e-300);
  double u2 = rng.uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

namespace {

double parse_config_value(const std::string& key, const std::string& value) {
  if (value == "inf") return std::numeric_limits<double>::infinity();
  static constexpr struct {
    const char* suffix;
    double scale;
  } kEnergy[] = {{"neV", 1e-9}, {"ueV", 1e-6}, {"meV", 1e-3}, {"eV", 1.0}};
  for (const auto& u : kEnergy) {
    std::string_view suf = u.suffix;
    std::string_view v = value;
    if (v.size() > suf.size() && v.substr(v.size() - suf.size()) == suf) {
      double x = 0;
      auto [ptr, ec] =
          std::from_chars(v.data(), v.data() + v.size() - suf.size(), x);
      if (ec == std::errc{} && ptr == v.data() + v.size() - suf.size())
        return x * u.scale;
    }
  }
  if (value.size() > 2) {
    std::string_view tail = std::string_view(value).substr(value.size() - 2);
    if (tail == "fs" || tail == "ps" || tail == "ns" || tail == "us")
      return parse_si_time(value);
  }
  double x = 0;
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), x);
  if (ec != std::errc{} || ptr != value.data() + value.size())
    fail(ErrorCode::BadConfig,
         "bad value '" + value + "' for config key '" + key + "'");
  return x;
}

}  // namespace

Config parse_config_text(std::string_view text) {
  Config config;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos)
      line.erase(hash);
    auto trim = [](std::string s) {
      auto issp = [](unsigned char c) { return std::isspace(c); };
      while (!s.empty() && issp(s.front())) s.erase(s.begin());
      while (!s.empty() && issp(s.back())) s.pop_back();
      return s;
    };
    std::string stripped = trim(line);
    if (stripped.empty()) continue;
    auto eq = stripped.find('=');
    if (eq == std::string::npos)
      fail(ErrorCode::BadConfig, "config line " + std::to_string(line_no) +
                                     ": expected key = value");
    std::string key = trim(stripped.substr(0, eq));
    std::string value = trim(stripped.substr(eq + 1));
    double x = parse_config_value(key, value);
    if (key == "t2")
      config.noise.t2 = x;
    else if (key == "t1")
      config.noise.t1 = x;
    else if (key == "jitter")
      config.noise.angle_jitter = x;
    else if (key == "imbalance")
      config.noise.imbalance = x;
    else if (key == "epsilon")
      config.device.epsilon = x;
    else if (key == "zeeman")
      config.device.zeeman = x;
    else if (key == "optical_field_bound")
      config.device.optical_field_bound = x;
    else if (key == "rotation_duration")
      config.device.rotation_duration = x;
    else if (key == "window_duration")
      config.device.window_duration = x;
    else if (key == "polarization_duration")
      config.device.polarization_duration = x;
    else
      fail(ErrorCode::BadConfig, "unknown config key '" + key + "'");
  }
  validate_params(config.device, config.noise);
  return config;
}

Config load_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::BadConfig, "cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

}  // namespace qcell
