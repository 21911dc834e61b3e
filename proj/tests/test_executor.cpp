#include <doctest.h>

#include <cmath>
#include <fstream>
#include <sstream>

#include "qcell/compiler.hpp"
#include "qcell/dsl.hpp"
#include "qcell/executor.hpp"
#include "qcell/references.hpp"
#include "support.hpp"

using namespace qcell;

namespace {

bool throws_code(ErrorCode want, auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code() == want;
  }
  return false;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

TEST_CASE("golden bell schedule run from |01> yields the singlet") {
  Schedule sched = parse_schedule(
      slurp(QCELL_TEST_DIR "/golden/bell_psi_minus_window.qsp"));
  RunOptions opts;
  Rng rng(1);
  auto result = run_schedule(sched, basis_state("01"), opts, rng);
  REQUIRE(result.merge_successes.size() == 1);
  CHECK(result.merge_successes[0] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(result.postselect_prob == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(fidelity(result.state, bell_state(BellKind::PsiMinus)) ==
        doctest::Approx(1.0).epsilon(1e-10));
  CHECK(result.measurements.empty());
  CHECK(std::abs(result.state.norm() - 1.0) < 1e-12);
}

TEST_CASE("empty window closes with certainty") {
  Schedule sched =
      parse_schedule("cells 2\nbias on 0:+ 1:- LR\nbias off 0 1 LR\n");
  RunOptions opts;
  opts.merge_mode = MergeMode::Strict;
  Rng rng(1);
  auto result = run_schedule(sched, basis_state("00"), opts, rng);
  REQUIRE(result.merge_successes.size() == 1);
  CHECK(result.merge_successes[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(fidelity(result.state, basis_state("00")) ==
        doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("strict mode rejects a post-selecting window") {
  Schedule sched = compile_bell(BellKind::PhiMinus);
  RunOptions opts;
  opts.merge_mode = MergeMode::Strict;
  Rng rng(1);
  CHECK(throws_code(ErrorCode::NonUnitaryMerge, [&] {
    run_schedule(sched, basis_state("00"), opts, rng);
  }));
}

TEST_CASE("run_schedule validates its inputs") {
  Schedule sched = compile_bell(BellKind::PhiMinus);
  RunOptions opts;
  Rng rng(1);
  CHECK(throws_code(ErrorCode::DimensionMismatch, [&] {
    run_schedule(sched, basis_state("000"), opts, rng);
  }));

  // initial state with an open window is rejected
  auto busy = basis_state("00");
  qca_split(busy, 0, 1, Direction::LR);
  CHECK(throws_code(ErrorCode::ActiveWindow, [&] {
    run_schedule(sched, busy, opts, rng);
  }));

  // grid must cover the schedule's cells
  RunOptions small;
  small.grid = Grid{1, 1};
  CHECK(throws_code(ErrorCode::GridMismatch, [&] {
    run_schedule(sched, basis_state("00"), small, rng);
  }));

  // TB window on a row grid
  Schedule tb = compile_bell(BellKind::PhiMinus, 0, 1, Direction::TB);
  CHECK(throws_code(ErrorCode::NotAdjacent, [&] {
    run_schedule(tb, basis_state("00"), opts, rng);
  }));

  RunOptions bad_noise;
  bad_noise.noise.t2 = -1.0;
  CHECK(throws_code(ErrorCode::InvalidNoiseParams, [&] {
    run_schedule(sched, basis_state("00"), bad_noise, rng);
  }));
}

TEST_CASE("wait and measure events are executed in order") {
  Schedule sched = parse_schedule(
      "cells 2\n"
      "rot x pi @ 1\n"
      "wait 5ns\n"
      "measure 0 -> a\n"
      "measure 1 -> b\n");
  RunOptions opts;
  Rng rng(7);
  auto result = run_schedule(sched, basis_state("00"), opts, rng);
  REQUIRE(result.measurements.size() == 2);
  CHECK(result.measurements[0].name == "a");
  CHECK(result.measurements[0].outcome == 0);
  CHECK(result.measurements[0].probability == doctest::Approx(1.0));
  CHECK(result.measurements[1].name == "b");
  CHECK(result.measurements[1].outcome == 1);
  CHECK(result.measurements[1].probability == doctest::Approx(1.0));
  // post-measurement state is the projected basis state
  CHECK(fidelity(result.state, basis_state("01")) ==
        doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("measurement collapse is sampled from the Born rule") {
  Schedule sched = parse_schedule(
      "cells 1\n"
      "rot x pi/2 @ 0\n"
      "measure 0 -> m\n");
  RunOptions opts;
  int ones = 0;
  const int n = 4000;
  for (int k = 0; k < n; ++k) {
    Rng rng(trajectory_seed(11, static_cast<std::uint64_t>(k)));
    auto result = run_schedule(sched, basis_state("0"), opts, rng);
    CHECK(result.measurements[0].probability == doctest::Approx(0.5));
    ones += result.measurements[0].outcome;
  }
  // 3 sigma around n/2
  const double sigma = std::sqrt(0.25 * n);
  CHECK(std::abs(ones - n / 2.0) < 3 * sigma);
}

TEST_CASE("seed-based overload starts from all spins up") {
  Schedule sched = parse_schedule("cells 2\nrot x pi @ 0\n");
  auto result = run_schedule(sched, RunOptions{}, 3);
  CHECK(fidelity(result.state, basis_state("10")) ==
        doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("sample_shots adds implicit measurements and is deterministic") {
  Schedule sched = parse_schedule(
      slurp(QCELL_TEST_DIR "/golden/bell_psi_minus_window.qsp"));
  ShotSummary summary = sample_shots(sched, 600, 2024);
  CHECK(summary.shots == 600);
  CHECK(summary.mean_postselect_prob == doctest::Approx(0.5).epsilon(1e-12));
  // the window run from all-up gives (|00> - |11>)/sqrt(2): bits always agree
  std::size_t total = 0;
  for (const auto& [bits, count] : summary.histogram) {
    CHECK((bits == "00" || bits == "11"));
    total += count;
  }
  CHECK(total == 600);
  // both outcomes occur (probability of a miss is 2^-600)
  CHECK(summary.histogram.count("00") == 1);
  CHECK(summary.histogram.count("11") == 1);

  ShotSummary again = sample_shots(sched, 600, 2024);
  CHECK(again.histogram == summary.histogram);
}

TEST_CASE("explicit measure statements set the histogram key order") {
  Schedule sched = parse_schedule(
      "cells 2\n"
      "rot x pi @ 0\n"
      "measure 1 -> later\n"
      "measure 0 -> first\n");
  ShotSummary summary = sample_shots(sched, 10, 1);
  REQUIRE(summary.histogram.size() == 1);
  // key follows event order: cell 1 result then cell 0 result
  CHECK(summary.histogram.begin()->first == "01");
  CHECK(summary.histogram.begin()->second == 10);
}

TEST_CASE("noiseless monte carlo reports zero infidelity") {
  Schedule sched = compile_bell(BellKind::PhiPlus);
  RunOptions opts;
  opts.noise.t2 = 1e9;  // effectively no dephasing even with noise applied
  auto mc = mc_infidelity(sched, basis_state("00"),
                          bell_state(BellKind::PhiPlus), 200, 5, opts);
  CHECK(mc.trajectories == 200);
  CHECK(mc.mean_infidelity < 1e-9);
  CHECK(mc.std_error < 1e-9);
}

TEST_CASE("noise flips are visible at short dephasing times") {
  // t2 equal to the window duration: each cell flips with p = 1 - 1/e at
  // bias-off. A lone flip turns phi+ into the orthogonal phi-; a double
  // flip is invisible, so the expected infidelity is 2p(1-p) ~ 0.465.
  Schedule sched = compile_bell(BellKind::PhiPlus);
  RunOptions opts;
  opts.noise.t2 = 300e-12;
  auto mc = mc_infidelity(sched, basis_state("00"),
                          bell_state(BellKind::PhiPlus), 400, 5, opts);
  const double p = 1.0 - std::exp(-1.0);
  const double expect = 2 * p * (1 - p);
  CHECK(mc.mean_infidelity > expect - 4 * mc.std_error - 1e-9);
  CHECK(mc.mean_infidelity < expect + 4 * mc.std_error + 1e-9);
  CHECK(mc.std_error > 0.0);
}

TEST_CASE("trajectory noise is reproducible for a fixed seed") {
  Schedule sched = compile_cnot(0, 1);
  RunOptions opts;
  opts.apply_noise = true;
  opts.noise.t2 = 1e-9;
  opts.noise.angle_jitter = 0.01;
  Rng a(99), b(99);
  auto ra = run_schedule(sched, basis_state("10"), opts, a);
  auto rb = run_schedule(sched, basis_state("10"), opts, b);
  CHECK(ra.state == rb.state);
  CHECK(ra.merge_successes == rb.merge_successes);
  Rng c(100);
  auto rc = run_schedule(sched, basis_state("10"), opts, c);
  CHECK(ra.state != rc.state);  // jitter draws differ
}

TEST_CASE("angle jitter perturbs rotations") {
  Schedule sched = parse_schedule("cells 1\nrot x pi @ 0\n");
  RunOptions opts;
  opts.apply_noise = true;
  opts.noise.t2 = 1e9;  // isolate the jitter term
  opts.noise.angle_jitter = 0.2;
  double worst = 1.0;
  for (int k = 0; k < 50; ++k) {
    Rng rng(trajectory_seed(7, static_cast<std::uint64_t>(k)));
    auto result = run_schedule(sched, basis_state("0"), opts, rng);
    worst = std::min(worst, fidelity(result.state, basis_state("1")));
  }
  CHECK(worst < 1.0 - 1e-6);  // some draw moved the angle off pi
  CHECK(worst > 0.9);         // but jitter of 0.2 rad stays close
}

TEST_CASE("imbalance is only applied when noise is on") {
  // an empty window recombines exactly even when tilted: the merge undoes
  // the split with the same weights
  Schedule empty =
      parse_schedule("cells 2\nbias on 0:+ 1:- LR\nbias off 0 1 LR\n");
  RunOptions opts;
  opts.noise.imbalance = 0.3;
  opts.noise.t2 = 1e9;
  opts.apply_noise = true;
  Rng rng(1);
  auto clean = run_schedule(empty, basis_state("00"), opts, rng);
  CHECK(clean.merge_successes[0] == doctest::Approx(1.0).epsilon(1e-12));

  // branch-asymmetric evolution exposes the tilt: orthogonal branches give
  // success = w-^4 + w+^4 = (1 + d^2) / 2
  Schedule bell = compile_bell(BellKind::PhiMinus);
  const double d = 0.3;
  Rng rng2(1);
  auto skewed = run_schedule(bell, basis_state("00"), opts, rng2);
  CHECK(skewed.merge_successes[0] ==
        doctest::Approx((1 + d * d) / 2).epsilon(1e-9));

  // with noise off the same options leave the window balanced
  opts.apply_noise = false;
  Rng rng3(1);
  auto balanced = run_schedule(bell, basis_state("00"), opts, rng3);
  CHECK(balanced.merge_successes[0] == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("random strict-safe schedules preserve the norm") {
  Rng rng(777);
  for (int trial = 0; trial < 100; ++trial) {
    Schedule sched = testing::random_schedule(rng, /*strict_safe=*/true);
    RunOptions opts;
    opts.merge_mode = MergeMode::Strict;
    auto result = run_schedule(sched, opts, trial);
    CHECK(std::abs(result.state.norm() - 1.0) < 1e-12);
    for (double s : result.merge_successes)
      CHECK(s == doctest::Approx(1.0).epsilon(1e-9));
  }
}
