#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <complex>

#include "qcell/compiler.hpp"
#include "qcell/density.hpp"
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

Eigen::Matrix2cd rot2(Axis axis, double angle) {
  const double c = std::cos(angle / 2), s = std::sin(angle / 2);
  Eigen::Matrix2cd u;
  switch (axis) {
    case Axis::X: u << c, cplx(0, -s), cplx(0, -s), c; break;
    case Axis::Y: u << c, -s, s, c; break;
    case Axis::Z: u << cplx(c, -s), 0.0, 0.0, cplx(c, s); break;
  }
  return u;
}

Eigen::Matrix4cd cnot_matrix(bool control_is_cell0) {
  Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
  if (control_is_cell0) {
    m(0, 0) = m(1, 1) = m(3, 2) = m(2, 3) = 1;
  } else {
    m(0, 0) = m(2, 2) = m(3, 1) = m(1, 3) = 1;
  }
  return m;
}

RegisterState run_noiseless(const Schedule& sched, const RegisterState& init) {
  RunOptions opts;
  Rng rng(1);
  return run_schedule(sched, init, opts, rng).state;
}

}  // namespace

TEST_CASE("compile_single produces one rotation event") {
  Schedule s = compile_single(3, 2, Axis::Y, 0.4);
  REQUIRE(s.events.size() == 1);
  CHECK(s.n_cells == 3);
  auto& r = std::get<RotationEvent>(s.events[0].what);
  CHECK(r.cell == 2);
  CHECK(r.axis == Axis::Y);
  CHECK(r.angle == 0.4);
  CHECK(!r.dot.has_value());
}

TEST_CASE("compiled bell schedules produce all four bell states") {
  for (auto kind : {BellKind::PhiPlus, BellKind::PhiMinus, BellKind::PsiPlus,
                    BellKind::PsiMinus}) {
    Schedule sched = compile_bell(kind);
    RunOptions opts;
    Rng rng(1);
    auto result = run_schedule(sched, basis_state("00"), opts, rng);
    CHECK(result.postselect_prob == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(fidelity(result.state, bell_state(kind)) ==
          doctest::Approx(1.0).epsilon(1e-10));
    CHECK(concurrence(result.state, 0, 1) ==
          doctest::Approx(1.0).epsilon(1e-9));
    // recorded global phase matches the actual amplitude ratio
    cplx overlap = inner_product(bell_state(kind), result.state);
    CHECK(std::abs(overlap - std::polar(1.0, sched.meta.global_phase)) <
          1e-10);
  }
  // psi kinds need the extra spin flip and pick up its phase
  CHECK(compile_bell(BellKind::PhiPlus).meta.global_phase == 0.0);
  CHECK(compile_bell(BellKind::PsiMinus).meta.global_phase ==
        doctest::Approx(-M_PI / 2));
  CHECK(compile_bell(BellKind::PhiMinus).events.size() == 4);
  CHECK(compile_bell(BellKind::PsiMinus).events.size() == 5);
}

TEST_CASE("bell schedule works on other pairs and orientations") {
  Schedule sched = compile_bell(BellKind::PhiMinus, 1, 2, Direction::LR, 3);
  CHECK(sched.n_cells == 3);
  RunOptions opts;
  opts.grid = Grid{1, 3};
  Rng rng(1);
  auto result = run_schedule(sched, basis_state("000"), opts, rng);
  CHECK(concurrence(result.state, 1, 2) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(result.state.amplitude({{0, DotSite::Q}, {0, DotSite::Q}, {0, DotSite::Q}})
            .real() == doctest::Approx(1 / std::sqrt(2.0)).epsilon(1e-12));

  Schedule tb = compile_bell(BellKind::PhiMinus, 0, 1, Direction::TB);
  RunOptions tb_opts;
  tb_opts.grid = Grid{2, 1};
  // the state's own grid drives adjacency, so build it as a column
  RegisterState column(2, Grid{2, 1});
  auto tb_result = run_schedule(tb, column, tb_opts, rng);
  const double w = 1 / std::sqrt(2.0);
  CHECK(std::abs(tb_result.state.amplitude({{0, DotSite::Q}, {0, DotSite::Q}}) -
                 cplx{w, 0}) < 1e-10);
  CHECK(std::abs(tb_result.state.amplitude({{1, DotSite::Q}, {1, DotSite::Q}}) -
                 cplx{-w, 0}) < 1e-10);
  CHECK(concurrence(tb_result.state, 0, 1) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("cnot schedule matches the canonical window") {
  Schedule sched = compile_cnot(0, 1);
  REQUIRE(sched.events.size() == 7);
  CHECK(std::get<PolarizationEvent>(sched.events[1].what).angle ==
        doctest::Approx(M_PI / 2));
  CHECK(!sched.meta.mirrored);
  CHECK(compile_cnot(1, 0).meta.mirrored);

  // control rotations are z on the control's branch dots, x on the target's
  auto& rz_minus = std::get<RotationEvent>(sched.events[2].what);
  CHECK(rz_minus.cell == 0);
  CHECK(rz_minus.axis == Axis::Z);
  CHECK(rz_minus.angle == doctest::Approx(M_PI / 2));
  CHECK(rz_minus.dot == DotSite::C);
  auto& rx_plus = std::get<RotationEvent>(sched.events[5].what);
  CHECK(rx_plus.cell == 1);
  CHECK(rx_plus.axis == Axis::X);
  CHECK(rx_plus.angle == doctest::Approx(3 * M_PI / 2));
  CHECK(rx_plus.dot == DotSite::A);
}

TEST_CASE("cnot truth table in every orientation") {
  struct Case {
    int control, target;
    Direction dir;
    Grid grid;
  };
  for (const Case& c : {Case{0, 1, Direction::LR, Grid{1, 2}},
                        Case{1, 0, Direction::LR, Grid{1, 2}},
                        Case{0, 1, Direction::TB, Grid{2, 1}},
                        Case{1, 0, Direction::TB, Grid{2, 1}}}) {
    Schedule sched = compile_cnot(c.control, c.target, c.dir);
    ScheduleUnitary u = unitary_of_schedule(sched, c.grid);
    CHECK(u.postselect_prob == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(u.isometry_defect < 1e-10);
    Eigen::Matrix4cd expect = cnot_matrix(c.control == 0);
    CHECK((u.matrix - expect).cwiseAbs().maxCoeff() < 1e-10);
    CHECK(std::abs(u.global_phase - cplx{1.0, 0.0}) < 1e-10);
  }
}

TEST_CASE("cnot window equals the two-branch oracle") {
  // minus branch: e^{i pi/4} Rz(pi/2) x Rx(pi/2)
  // plus branch:  e^{-i pi/4} Rz(3pi/2) x Rx(3pi/2)
  Eigen::Matrix4cd a = Eigen::Matrix4cd::Zero(), b = Eigen::Matrix4cd::Zero();
  Eigen::Matrix2cd z1 = rot2(Axis::Z, M_PI / 2), x1 = rot2(Axis::X, M_PI / 2);
  Eigen::Matrix2cd z3 = rot2(Axis::Z, 3 * M_PI / 2),
                   x3 = rot2(Axis::X, 3 * M_PI / 2);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      a.block<2, 2>(2 * i, 2 * j) = z1(i, j) * x1;
      b.block<2, 2>(2 * i, 2 * j) = z3(i, j) * x3;
    }
  Eigen::Matrix4cd composite =
      (std::polar(1.0, M_PI / 4) * a + std::polar(1.0, -M_PI / 4) * b) / 2.0;
  // the branch sum is CNOT / sqrt(2): the post-selected window is exact
  Eigen::Matrix4cd scaled = std::sqrt(2.0) * composite;
  CHECK((scaled - cnot_matrix(true)).cwiseAbs().maxCoeff() < 1e-12);

  ScheduleUnitary u = unitary_of_schedule(compile_cnot(0, 1));
  CHECK((u.global_phase * u.matrix - scaled).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("unitary_of_schedule on trivial schedules") {
  // split followed by merge with no rotations is the identity
  Schedule s = parse_schedule("cells 2\nbias on 0:+ 1:- LR\nbias off 0 1 LR\n");
  ScheduleUnitary u = unitary_of_schedule(s);
  CHECK(u.postselect_prob == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(u.isometry_defect < 1e-12);
  CHECK((u.matrix - Eigen::Matrix4cd::Identity()).cwiseAbs().maxCoeff() <
        1e-12);

  // a 2pi z rotation is minus the identity; the sign lands in the phase
  Schedule z = parse_schedule("cells 1\nrot z 2pi @ 0\n");
  ScheduleUnitary uz = unitary_of_schedule(z);
  CHECK((uz.matrix - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff() <
        1e-12);
  CHECK(std::abs(uz.global_phase - cplx{-1.0, 0.0}) < 1e-12);
}

TEST_CASE("unitary_of_schedule rejects non-unitary schedules") {
  Schedule measured = parse_schedule("cells 1\nmeasure 0 -> m\n");
  CHECK(throws_code(ErrorCode::NonUnitarySchedule,
                    [&] { unitary_of_schedule(measured); }));

  // polarization plus a single-branch z rotation scales |0> and |1> unequally
  Schedule lopsided = parse_schedule(
      "cells 2\nbias on 0:+ 1:- LR\npol pi/2 @ 0 1\nrot z pi/2 @ 0.C\n"
      "bias off 0 1 LR\n");
  CHECK(throws_code(ErrorCode::NonUnitarySchedule,
                    [&] { unitary_of_schedule(lopsided); }));

  // a 2pi rotation on one branch makes the two branches cancel exactly
  Schedule dead = parse_schedule(
      "cells 2\nbias on 0:+ 1:- LR\nrot z 2pi @ 0.C\nbias off 0 1 LR\n");
  CHECK(throws_code(ErrorCode::NonUnitarySchedule,
                    [&] { unitary_of_schedule(dead); }));
}

TEST_CASE("discrete gates lower to rotations with the recorded phase") {
  struct Entry {
    Gate::Kind kind;
    double angle;  // for rotation kinds
    Eigen::Matrix2cd ideal;
  };
  Eigen::Matrix2cd h, x, y, z, sgate, sdg, t, tdg;
  h << 1, 1, 1, -1;
  h /= std::sqrt(2.0);
  x << 0, 1, 1, 0;
  y << 0.0, cplx(0, -1), cplx(0, 1), 0.0;
  z << 1, 0, 0, -1;
  sgate << 1, 0, 0, cplx(0, 1);
  sdg << 1, 0, 0, cplx(0, -1);
  t << 1, 0, 0, std::polar(1.0, M_PI / 4);
  tdg << 1, 0, 0, std::polar(1.0, -M_PI / 4);

  for (const Entry& e :
       {Entry{Gate::Kind::H, 0, h}, Entry{Gate::Kind::X, 0, x},
        Entry{Gate::Kind::Y, 0, y}, Entry{Gate::Kind::Z, 0, z},
        Entry{Gate::Kind::S, 0, sgate}, Entry{Gate::Kind::Sdg, 0, sdg},
        Entry{Gate::Kind::T, 0, t}, Entry{Gate::Kind::Tdg, 0, tdg},
        Entry{Gate::Kind::Rx, 1.1, rot2(Axis::X, 1.1)},
        Entry{Gate::Kind::Ry, -0.7, rot2(Axis::Y, -0.7)},
        Entry{Gate::Kind::Rz, 2.2, rot2(Axis::Z, 2.2)}}) {
    Circuit circ;
    circ.n_cells = 1;
    circ.grid = Grid{1, 1};
    circ.gates.push_back(Gate{e.kind, 0, -1, e.angle});
    Schedule sched = compile_circuit(circ);
    ScheduleUnitary u = unitary_of_schedule(sched);
    CHECK((u.matrix * u.global_phase -
           std::polar(1.0, sched.meta.global_phase) * e.ideal)
              .cwiseAbs()
              .maxCoeff() < 1e-10);
    CHECK(u.isometry_defect < 1e-10);
  }
}

TEST_CASE("compile_circuit chains gates and accumulates phase") {
  Circuit circ;
  circ.n_cells = 2;
  circ.grid = Grid{1, 2};
  circ.gates.push_back(Gate{Gate::Kind::H, 0, -1, 0});
  circ.gates.push_back(Gate{Gate::Kind::Cnot, 1, 0, 0});
  Schedule sched = compile_circuit(circ);
  CHECK(sched.meta.global_phase == doctest::Approx(-M_PI / 2));

  auto result = run_noiseless(sched, basis_state("00"));
  CHECK(fidelity(result, bell_state(BellKind::PhiPlus)) ==
        doctest::Approx(1.0).epsilon(1e-10));
  cplx overlap = inner_product(bell_state(BellKind::PhiPlus), result);
  CHECK(std::abs(overlap - std::polar(1.0, sched.meta.global_phase)) < 1e-10);
}

TEST_CASE("cnot lowering needs adjacent cells") {
  Circuit circ;
  circ.n_cells = 3;
  circ.grid = Grid{1, 3};
  circ.gates.push_back(Gate{Gate::Kind::Cnot, 2, 0, 0});
  CHECK(throws_code(ErrorCode::NotAdjacent, [&] { compile_circuit(circ); }));
}

TEST_CASE("circuit json forms") {
  Circuit bare = parse_circuit_json(
      R"([{"gate": "h", "target": 0},
          {"gate": "cnot", "control": 0, "target": 1}])");
  CHECK(bare.n_cells == 2);
  REQUIRE(bare.gates.size() == 2);
  CHECK(bare.gates[0].kind == Gate::Kind::H);
  CHECK(bare.gates[1].kind == Gate::Kind::Cnot);
  CHECK(bare.gates[1].control == 0);
  CHECK(bare.gates[1].target == 1);

  Circuit full = parse_circuit_json(
      R"({"cells": 4, "grid": [2, 2],
          "gates": [{"gate": "rz", "target": 3, "angle": "3pi/2"},
                    {"gate": "cx", "control": 2, "target": 3},
                    {"gate": "ry", "target": 0, "angle": 0.25}]})");
  CHECK(full.n_cells == 4);
  CHECK(full.grid == Grid{2, 2});
  CHECK(full.gates[0].angle == doctest::Approx(3 * M_PI / 2));
  CHECK(full.gates[1].kind == Gate::Kind::Cnot);
  CHECK(full.gates[2].angle == 0.25);

  CHECK(throws_code(ErrorCode::BadCircuit,
                    [] { parse_circuit_json("not json at all"); }));
  CHECK(throws_code(ErrorCode::BadCircuit,
                    [] { parse_circuit_json(R"([{"target": 0}])"); }));
  CHECK(throws_code(ErrorCode::BadCircuit, [] {
    parse_circuit_json(R"([{"gate": "frobnicate", "target": 0}])");
  }));
  CHECK(throws_code(ErrorCode::BadCircuit, [] {
    parse_circuit_json(R"([{"gate": "rx", "target": 0, "angle": "pie"}])");
  }));
  // index range is checked when the circuit is lowered, not at parse time
  Circuit overflow = parse_circuit_json(
      R"({"cells": 1, "gates": [{"gate": "x", "target": 5}]})");
  CHECK(throws_code(ErrorCode::IndexOutOfRange,
                    [&] { compile_circuit(overflow); }));
}

TEST_CASE("compiled circuit matches the gate-by-gate matrix oracle") {
  Rng rng(314);
  for (int trial = 0; trial < 10; ++trial) {
    Circuit circ;
    circ.n_cells = 2;
    circ.grid = Grid{1, 2};
    Eigen::Matrix4cd ideal = Eigen::Matrix4cd::Identity();
    int n_gates = 2 + static_cast<int>(rng.raw() % 3);
    for (int g = 0; g < n_gates; ++g) {
      if (rng.raw() % 3 == 0) {
        bool flip = rng.raw() % 2 == 0;
        circ.gates.push_back(
            Gate{Gate::Kind::Cnot, flip ? 0 : 1, flip ? 1 : 0, 0});
        ideal = cnot_matrix(!flip) * ideal;
      } else {
        Axis ax = testing::random_axis(rng);
        double angle = testing::random_angle(rng);
        int cell = static_cast<int>(rng.raw() % 2);
        auto kind = ax == Axis::X   ? Gate::Kind::Rx
                    : ax == Axis::Y ? Gate::Kind::Ry
                                    : Gate::Kind::Rz;
        circ.gates.push_back(Gate{kind, cell, -1, angle});
        Eigen::Matrix2cd u = rot2(ax, angle);
        Eigen::Matrix4cd lifted = Eigen::Matrix4cd::Zero();
        for (int i = 0; i < 2; ++i)
          for (int j = 0; j < 2; ++j)
            if (cell == 0)
              lifted.block<2, 2>(2 * i, 2 * j) =
                  u(i, j) * Eigen::Matrix2cd::Identity();
            else
              lifted.block<2, 2>(2 * i, 2 * j) =
                  (i == j ? 1.0 : 0.0) * u;
        ideal = lifted * ideal;
      }
    }
    Schedule sched = compile_circuit(circ);
    ScheduleUnitary u = unitary_of_schedule(sched);
    Eigen::Matrix4cd got =
        u.global_phase * u.matrix /
        std::polar(1.0, sched.meta.global_phase);
    CHECK((got - ideal).cwiseAbs().maxCoeff() < 1e-9);
  }
}
