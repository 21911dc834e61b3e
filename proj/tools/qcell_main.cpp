#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qcell/compiler.hpp"
#include "qcell/density.hpp"
#include "qcell/dsl.hpp"
#include "qcell/executor.hpp"
#include "qcell/kernels.hpp"
#include "qcell/noise.hpp"
#include "qcell/readout.hpp"
#include "qcell/references.hpp"

namespace {

using nlohmann::ordered_json;
using namespace qcell;

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::BadConfig, "cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void emit(const std::string& path, const std::string& payload) {
  if (path == "-") {
    std::cout << payload;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::BadConfig, "cannot write '" + path + "'");
  out << payload;
}

void emit_json(const std::string& path, const ordered_json& doc) {
  emit(path, doc.dump(2) + "\n");
}

Grid parse_grid_arg(const std::string& text) {
  auto x = text.find('x');
  if (x == std::string::npos)
    fail(ErrorCode::BadConfig, "--grid expects ROWSxCOLS, e.g. 2x3");
  try {
    return Grid{std::stoi(text.substr(0, x)), std::stoi(text.substr(x + 1))};
  } catch (const std::exception&) {
    fail(ErrorCode::BadConfig, "--grid expects ROWSxCOLS, e.g. 2x3");
  }
}

BellKind parse_bell_kind(const std::string& kind) {
  if (kind == "phi+") return BellKind::PhiPlus;
  if (kind == "phi-") return BellKind::PhiMinus;
  if (kind == "psi+") return BellKind::PsiPlus;
  if (kind == "psi-") return BellKind::PsiMinus;
  fail(ErrorCode::BadConfig, "unknown bell kind '" + kind + "'");
}

std::string bits_of(int value, int n) {
  std::string s(n, '0');
  for (int i = 0; i < n; ++i)
    if (value >> (n - 1 - i) & 1) s[i] = '1';
  return s;
}

struct CommonOpts {
  std::string config_path;
  std::string json_out;
  std::string csv_out;
  std::uint64_t seed = 0;
  std::string merge_mode = "postselected";
  std::string grid_arg;
  bool noise = false;

  RunOptions run_options() const {
    RunOptions opts;
    if (!config_path.empty()) {
      Config config = load_config_file(config_path);
      opts.device = config.device;
      opts.noise = config.noise;
    }
    if (merge_mode == "strict")
      opts.merge_mode = MergeMode::Strict;
    else if (merge_mode == "postselected")
      opts.merge_mode = MergeMode::PostSelected;
    else
      fail(ErrorCode::BadConfig,
           "--merge-mode must be strict or postselected");
    if (!grid_arg.empty()) opts.grid = parse_grid_arg(grid_arg);
    opts.apply_noise = noise;
    return opts;
  }
};

void add_common(CLI::App* cmd, CommonOpts& common, bool with_noise = true) {
  cmd->add_option("--config", common.config_path,
                  "device/noise configuration file");
  cmd->add_option("--json-out", common.json_out,
                  "write a JSON report to this path ('-' for stdout)");
  cmd->add_option("--seed", common.seed, "master rng seed");
  cmd->add_option("--merge-mode", common.merge_mode,
                  "strict or postselected");
  cmd->add_option("--grid", common.grid_arg, "cell layout as ROWSxCOLS");
  if (with_noise)
    cmd->add_flag("--noise", common.noise, "sample the noise model");
}

int cmd_run(const std::string& file, std::size_t shots, bool dump_state,
            const CommonOpts& common) {
  Schedule schedule = parse_schedule(slurp(file));
  RunOptions opts = common.run_options();
  ordered_json report;
  report["schema"] = 1;
  report["command"] = "run";
  report["file"] = file;
  report["cells"] = schedule.n_cells;
  report["events"] = schedule.events.size();
  report["seed"] = common.seed;
  report["merge_mode"] = common.merge_mode;
  report["noise"] = common.noise;

  if (shots > 0) {
    ShotSummary summary = sample_shots(schedule, shots, common.seed, opts);
    std::cout << "shots " << summary.shots << "\n";
    ordered_json hist = ordered_json::object();
    std::ostringstream csv;
    csv << "outcome,count,frequency\n";
    for (const auto& [bits, count] : summary.histogram) {
      double freq = static_cast<double>(count) / static_cast<double>(shots);
      std::cout << bits << " " << count << " " << freq << "\n";
      hist[bits] = count;
      csv << bits << "," << count << "," << freq << "\n";
    }
    std::cout << "mean_postselect_prob " << summary.mean_postselect_prob
              << "\n";
    report["shots"] = summary.shots;
    report["histogram"] = hist;
    report["mean_postselect_prob"] = summary.mean_postselect_prob;
    if (!common.csv_out.empty()) emit(common.csv_out, csv.str());
  } else {
    Rng rng(common.seed);
    RegisterState initial(schedule.n_cells,
                          opts.grid.cols == 0 ? Grid{1, schedule.n_cells}
                                              : opts.grid);
    TrajectoryResult traj = run_schedule(schedule, initial, opts, rng);
    std::cout << "cells " << schedule.n_cells << "\n";
    for (double s : traj.merge_successes)
      std::cout << "merge_success " << s << "\n";
    std::cout << "postselect_prob " << traj.postselect_prob << "\n";
    for (const auto& m : traj.measurements)
      std::cout << "measure " << (m.name.empty() ? "_" : m.name) << " = "
                << m.outcome << " (p=" << m.probability << ")\n";
    std::cout << "norm " << traj.state.norm() << "\n";
    report["merge_successes"] = traj.merge_successes;
    report["postselect_prob"] = traj.postselect_prob;
    ordered_json meas = ordered_json::array();
    for (const auto& m : traj.measurements)
      meas.push_back({{"cell", m.cell},
                      {"name", m.name},
                      {"outcome", m.outcome},
                      {"probability", m.probability}});
    report["measurements"] = meas;
    if (dump_state)
      report["state"] = ordered_json::parse(dump_state_json(traj.state));
  }
  if (!common.json_out.empty()) emit_json(common.json_out, report);
  return 0;
}

int cmd_bell(const std::string& kind_name, const CommonOpts& common) {
  BellKind kind = parse_bell_kind(kind_name);
  Schedule schedule = compile_bell(kind);
  RunOptions opts = common.run_options();
  Rng rng(common.seed);
  RegisterState initial(2, opts.grid.cols == 0 ? Grid{1, 2} : opts.grid);
  TrajectoryResult traj = run_schedule(schedule, initial, opts, rng);
  RegisterState reference = bell_state(kind);
  double fid = fidelity(traj.state, reference);
  double conc = concurrence(traj.state, 0, 1);

  std::cout << "kind " << kind_name << "\n"
            << "postselect_prob " << traj.postselect_prob << "\n"
            << "fidelity " << fid << "\n"
            << "concurrence " << conc << "\n";
  if (!common.json_out.empty()) {
    ordered_json report;
    report["schema"] = 1;
    report["command"] = "bell";
    report["kind"] = kind_name;
    report["postselect_prob"] = traj.postselect_prob;
    report["fidelity"] = fid;
    report["concurrence"] = conc;
    report["global_phase"] = schedule.meta.global_phase;
    emit_json(common.json_out, report);
  }
  return 0;
}

int cmd_cnot_table(const std::string& dir_name, const CommonOpts& common) {
  Direction dir = dir_name == "TB" ? Direction::TB : Direction::LR;
  Schedule schedule = compile_cnot(0, 1, dir);
  Grid grid = dir == Direction::TB ? Grid{2, 1} : Grid{1, 2};
  ScheduleUnitary unitary = unitary_of_schedule(schedule, grid);

  std::cout << "input -> output\n";
  ordered_json table = ordered_json::object();
  for (int b = 0; b < 4; ++b) {
    int best = 0;
    double best_mag = 0;
    for (int r = 0; r < 4; ++r) {
      double mag = std::abs(unitary.matrix(r, b));
      if (mag > best_mag) {
        best_mag = mag;
        best = r;
      }
    }
    std::cout << bits_of(b, 2) << " -> " << bits_of(best, 2) << "\n";
    table[bits_of(b, 2)] = bits_of(best, 2);
  }
  std::cout << "postselect_prob " << unitary.postselect_prob << "\n"
            << "isometry_defect " << unitary.isometry_defect << "\n";
  if (!common.json_out.empty()) {
    ordered_json report;
    report["schema"] = 1;
    report["command"] = "cnot-table";
    report["direction"] = dir == Direction::TB ? "TB" : "LR";
    report["table"] = table;
    report["postselect_prob"] = unitary.postselect_prob;
    report["isometry_defect"] = unitary.isometry_defect;
    emit_json(common.json_out, report);
  }
  return 0;
}

int cmd_noise_sweep(double t2_from, double t2_to, int points, std::size_t mc,
                    const CommonOpts& common) {
  if (points < 2 || t2_from <= 0 || t2_to <= t2_from)
    fail(ErrorCode::BadConfig, "need points >= 2 and 0 < t2-from < t2-to");
  RunOptions base = common.run_options();
  Schedule schedule = compile_cnot(0, 1);

  RegisterState input(2);
  std::fill(input.amplitudes().begin(), input.amplitudes().end(),
            cplx{0.0, 0.0});
  const double r = 1.0 / std::sqrt(2.0);
  input.set_amplitude({{0, DotSite::Q}, {0, DotSite::Q}}, r);
  input.set_amplitude({{1, DotSite::Q}, {0, DotSite::Q}}, r);
  RegisterState ideal = bell_state(BellKind::PhiPlus);

  std::ostringstream csv;
  csv << "t2,estimate";
  if (mc > 0) csv << ",mc_infidelity,mc_std_error";
  csv << "\n";
  ordered_json rows = ordered_json::array();
  std::cout << "t2 estimate" << (mc > 0 ? " mc_infidelity mc_std_error" : "")
            << "\n";
  for (int i = 0; i < points; ++i) {
    double log_t2 = std::log(t2_from) +
                    (std::log(t2_to) - std::log(t2_from)) * i / (points - 1);
    double t2 = std::exp(log_t2);
    RunOptions opts = base;
    opts.noise.t2 = t2;
    if (opts.noise.t1 < t2 / 2) opts.noise.t1 = t2 / 2;
    GateErrorEstimate estimate =
        estimate_gate_error(schedule, opts.device, opts.noise);
    ordered_json row;
    row["t2"] = t2;
    row["estimate"] = estimate.total;
    std::cout << t2 << " " << estimate.total;
    csv << t2 << "," << estimate.total;
    if (mc > 0) {
      McInfidelity result =
          mc_infidelity(schedule, input, ideal, mc, common.seed, opts);
      row["mc_infidelity"] = result.mean_infidelity;
      row["mc_std_error"] = result.std_error;
      std::cout << " " << result.mean_infidelity << " " << result.std_error;
      csv << "," << result.mean_infidelity << "," << result.std_error;
    }
    std::cout << "\n";
    csv << "\n";
    rows.push_back(row);
  }
  if (!common.csv_out.empty()) emit(common.csv_out, csv.str());
  if (!common.json_out.empty()) {
    ordered_json report;
    report["schema"] = 1;
    report["command"] = "noise-sweep";
    report["trajectories"] = mc;
    report["seed"] = common.seed;
    report["rows"] = rows;
    emit_json(common.json_out, report);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pulse-level simulator for tunneling-driven spin-qubit cells"};
  app.require_subcommand(1);
  std::string kernels_arg;
  app.add_option("--kernels", kernels_arg,
                 "kernel dispatch: serial, parallel or auto")
      ->check(CLI::IsMember({"serial", "parallel", "auto"}));

  // run
  auto* run = app.add_subcommand("run", "execute a schedule file");
  std::string run_file;
  std::size_t run_shots = 0;
  bool run_dump = false;
  CommonOpts run_common;
  run->add_option("file", run_file, "schedule (.qsp)")->required();
  run->add_option("--shots", run_shots, "sample this many shots");
  run->add_flag("--dump-state", run_dump,
                "include final amplitudes in the JSON report");
  run->add_option("--csv-out", run_common.csv_out,
                  "write the shot histogram as CSV");
  add_common(run, run_common);

  // compile
  auto* compile = app.add_subcommand("compile", "emit schedules for gates");
  compile->require_subcommand(1);
  std::string out_path = "-";
  int cells_arg = 2;
  std::string dir_arg = "LR";
  compile->add_option("-o,--out", out_path, "output path ('-' for stdout)");
  compile->add_option("--cells", cells_arg, "register size");
  compile->add_option("--dir", dir_arg, "window orientation")
      ->check(CLI::IsMember({"LR", "TB"}));
  auto* compile_bell_cmd = compile->add_subcommand("bell", "bell pair window");
  std::string bell_kind_arg;
  compile_bell_cmd->add_option("kind", bell_kind_arg, "phi+ phi- psi+ psi-")
      ->required()
      ->check(CLI::IsMember({"phi+", "phi-", "psi+", "psi-"}));
  auto* compile_cnot_cmd = compile->add_subcommand("cnot", "cnot window");
  int control_arg = 0, target_arg = 1;
  compile_cnot_cmd->add_option("control", control_arg, "control cell");
  compile_cnot_cmd->add_option("target", target_arg, "target cell");
  auto* compile_circuit_cmd =
      compile->add_subcommand("circuit", "lower a JSON circuit");
  std::string circuit_file;
  compile_circuit_cmd->add_option("file", circuit_file, "circuit JSON")
      ->required();

  // parse-check
  auto* parse_check =
      app.add_subcommand("parse-check", "validate a schedule file");
  std::string check_file;
  parse_check->add_option("file", check_file, "schedule (.qsp)")->required();

  // bell
  auto* bell = app.add_subcommand("bell", "prepare and score a bell state");
  std::string bell_kind;
  CommonOpts bell_common;
  bell->add_option("kind", bell_kind, "phi+ phi- psi+ psi-")
      ->required()
      ->check(CLI::IsMember({"phi+", "phi-", "psi+", "psi-"}));
  add_common(bell, bell_common, /*with_noise=*/false);

  // cnot-table
  auto* cnot_table =
      app.add_subcommand("cnot-table", "truth table of the cnot window");
  std::string table_dir = "LR";
  CommonOpts table_common;
  cnot_table->add_option("--dir", table_dir, "window orientation")
      ->check(CLI::IsMember({"LR", "TB"}));
  add_common(cnot_table, table_common, /*with_noise=*/false);

  // noise-sweep
  auto* sweep = app.add_subcommand("noise-sweep",
                                   "cnot error estimate across t2 values");
  double t2_from = 1e-6, t2_to = 1e-3;
  int sweep_points = 7;
  std::size_t sweep_mc = 0;
  CommonOpts sweep_common;
  sweep->add_option("--t2-from", t2_from, "sweep start, seconds");
  sweep->add_option("--t2-to", t2_to, "sweep end, seconds");
  sweep->add_option("--points", sweep_points, "log-spaced sample count");
  sweep->add_option("--mc", sweep_mc, "monte carlo trajectories per point");
  sweep->add_option("--csv-out", sweep_common.csv_out, "write sweep CSV");
  add_common(sweep, sweep_common, /*with_noise=*/false);

  CLI11_PARSE(app, argc, argv);

  try {
    if (!kernels_arg.empty()) {
      if (kernels_arg == "serial")
        kernels::set_policy(kernels::Policy::ForceSerial);
      else if (kernels_arg == "parallel")
        kernels::set_policy(kernels::Policy::ForceParallel);
      else
        kernels::set_policy(kernels::Policy::Auto);
    }

    if (run->parsed()) return cmd_run(run_file, run_shots, run_dump, run_common);
    if (compile->parsed()) {
      Schedule schedule;
      if (compile_bell_cmd->parsed()) {
        schedule = compile_bell(parse_bell_kind(bell_kind_arg), 0, 1,
                                dir_arg == "TB" ? Direction::TB : Direction::LR,
                                cells_arg);
      } else if (compile_cnot_cmd->parsed()) {
        schedule = compile_cnot(control_arg, target_arg,
                                dir_arg == "TB" ? Direction::TB : Direction::LR,
                                cells_arg);
      } else {
        schedule = compile_circuit(parse_circuit_json(slurp(circuit_file)));
      }
      emit(out_path, serialize_schedule(schedule));
      if (schedule.meta.global_phase != 0.0)
        std::cerr << "note: output differs from the ideal gate by phase "
                  << schedule.meta.global_phase << " rad\n";
      return 0;
    }
    if (parse_check->parsed()) {
      Schedule schedule = parse_schedule(slurp(check_file));
      std::cout << "ok: " << schedule.n_cells << " cells, "
                << schedule.events.size() << " events\n";
      return 0;
    }
    if (bell->parsed()) return cmd_bell(bell_kind, bell_common);
    if (cnot_table->parsed()) return cmd_cnot_table(table_dir, table_common);
    if (sweep->parsed())
      return cmd_noise_sweep(t2_from, t2_to, sweep_points, sweep_mc,
                             sweep_common);
  } catch (const ParseError& e) {
    const std::string& file = parse_check->parsed() ? check_file : run_file;
    std::cerr << file << ":" << e.span().line << ":" << e.span().column
              << ": error: " << e.message() << "\n";
    return 1;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
