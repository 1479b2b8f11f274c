#include "doctest.h"
#include "pdas/isotonic.hpp"
#include "pdas/oracles.hpp"
#include "pdas/trend_filter.hpp"
#include "support.hpp"

using namespace pdas;
using namespace pdas::oracle;

TEST_CASE("isotonic dual oracle") {
  auto r = dual_cd_ir(IRProblem({1, 2}));
  CHECK(r.z == Vector{0});
  CHECK(r.theta == Vector{1, 2});

  r = dual_cd_ir(IRProblem({2, 1}));
  CHECK(r.z[0] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(testing::max_abs_diff(r.theta, Vector{1.5, 1.5}) <= 1e-9);

  r = dual_cd_ir(IRProblem({6, 4, 2, 9, 11, 4}));
  CHECK(testing::max_abs_diff(r.theta, Vector{4, 4, 4, 8, 8, 8}) <= 1e-9);

  CHECK_THROWS_AS(dual_cd_ir(IRProblem({1})), ValidationError);
}

TEST_CASE("isotonic dual uses the full tridiagonal gram") {
  // w = (1, 4): diagonal 1/w1 + 1/w2 = 1.25, so z = (y1 - y2)/1.25 = 0.8.
  const auto r = dual_cd_ir(IRProblem({2, 1}, {1, 4}));
  CHECK(r.z[0] == doctest::Approx(0.8).epsilon(1e-12));
  CHECK(testing::max_abs_diff(r.theta, Vector{1.2, 1.2}) <= 1e-9);
}

TEST_CASE("trend filtering dual oracle") {
  auto r = dual_cd_tf(TFProblem({0, 10}, 1.0, 1, Penalty::L1));
  CHECK(testing::max_abs_diff(r.theta, Vector{1, 9}) <= 1e-9);
  CHECK(r.z[0] == doctest::Approx(-1.0));

  const Vector y{3, 1, 4, 1, 5, 9, 2, 6};
  r = dual_cd_tf(TFProblem(y, 1e4, 1, Penalty::L1));
  for (double t : r.theta) CHECK(t == doctest::Approx(31.0 / 8).epsilon(1e-9));

  CHECK_THROWS_AS(dual_cd_tf(TFProblem(y, 1.0, 1, Penalty::L1), OracleConfig{0, 1e-9, 50}), ValidationError);
  CHECK_THROWS_AS(dual_cd_tf(TFProblem(y, 1.0, 2, Penalty::L1), OracleConfig{1, 1e-9, 0}), NotConverged);
}

TEST_CASE("exhaustive enumeration") {
  const TFProblem cyc({603, 996, 502, 19, 56, 139}, 100.0, 2, Penalty::L1);
  const auto e = exhaustive_tf(cyc);
  const auto c = dual_cd_tf(cyc);
  CHECK(testing::rel_gap(objective_tf(cyc, e.theta), objective_tf(cyc, c.theta)) <= 1e-8);

  const TFProblem iso({1, 2, 3}, 0.1, 1, Penalty::L1Pos);
  const auto i = exhaustive_tf(iso);
  CHECK(i.theta == Vector{1, 2, 3});
  CHECK(i.z == Vector{0, 0});

  CHECK_THROWS_AS(exhaustive_tf(TFProblem(Vector(14, 1.0), 1.0, 1, Penalty::L1)), ValidationError);
}

TEST_CASE("exhaustive enumeration agrees with sf2 on small second order instances") {
  Rng rng(44);
  for (int seed = 0; seed < 100; ++seed) {
    const TFProblem p(testing::uniform_data(rng, 8), rng.uniform(0.1, 5.0), 2,
                      seed % 2 ? Penalty::L1 : Penalty::L1Pos);
    const auto e = exhaustive_tf(p);
    const auto s = tf_solve_sf2(p);
    CAPTURE(seed);
    REQUIRE(s.report.status == SolveStatus::Optimal);
    REQUIRE(testing::rel_gap(s.report.objective, objective_tf(p, e.theta)) <= 1e-8);
    REQUIRE(testing::rel_gap(objective_tf(p, dual_cd_tf(p).theta), objective_tf(p, e.theta)) <= 1e-8);
  }
}

TEST_CASE("kkt_check_ir accepts optimal points") {
  const IRProblem p({6, 4, 2, 9, 11, 4});
  CHECK(kkt_check_ir(p, Vector{4, 4, 4, 8, 8, 8}, Vector{2, 2, 0, 1, 4}, 1e-8));
  CHECK(kkt_check_ir(IRProblem({1, 2, 5}), Vector{1, 2, 5}, Vector{0, 0}, 1e-8));
  Rng rng(2);
  for (int trial = 0; trial < 50; ++trial) {
    const IRProblem q = testing::random_ir(rng, testing::draw_size(rng, 2, 80));
    const auto s = pdas_ir_solve(q);
    CHECK(kkt_check_ir(q, pav_solve(q).theta, s.z, 1e-8));
  }
}

TEST_CASE("kkt_check_ir rejects constructed violations") {
  const IRProblem six({6, 4, 2, 9, 11, 4});
  const Vector th{4, 4, 4, 8, 8, 8};
  // Nonzero multiplier on a boundary where θ increases.
  CHECK_FALSE(kkt_check_ir(six, th, Vector{2, 2, 1, 1, 4}, 1e-8));
  // Negative multiplier with stationarity intact.
  CHECK_FALSE(kkt_check_ir(IRProblem({0.5, 1.5}), Vector{1, 1}, Vector{-0.5}, 1e-8));
  // Decreasing fit with stationarity intact.
  CHECK_FALSE(kkt_check_ir(IRProblem({2, 1}), Vector{2, 1}, Vector{0}, 1e-8));
  // Stationarity off by a constant shift.
  CHECK_FALSE(kkt_check_ir(IRProblem({1, 2, 3}), Vector{1.1, 2.1, 3.1}, Vector{0, 0}, 1e-8));
  // Complementarity alone: z > 0 across a strict increase.
  CHECK_FALSE(kkt_check_ir(IRProblem({0, 3}), Vector{-1, 4}, Vector{1}, 1e-8));
  // Unweighted mean under nonuniform weights.
  CHECK_FALSE(kkt_check_ir(IRProblem({2, 1}, {2, 1}), Vector{1.5, 1.5}, Vector{0.5}, 1e-8));
  // Multiplier mismatch at an interior index.
  CHECK_FALSE(kkt_check_ir(IRProblem({1, 2, 3}), Vector{1, 2, 3}, Vector{0, 0.5}, 1e-8));
  // Non-finite entries.
  CHECK_FALSE(kkt_check_ir(six, Vector{4, 4, NAN, 8, 8, 8}, Vector{2, 2, 0, 1, 4}, 1e-8));
  CHECK_FALSE(kkt_check_ir(six, th, Vector{2, 2, 0, 1, INFINITY}, 1e-8));
  // Perturbation just above tolerance.
  CHECK_FALSE(kkt_check_ir(six, Vector{4, 4, 4, 8, 8, 8 + 1e-6}, Vector{2, 2, 0, 1, 4}, 1e-8));
  CHECK_THROWS_AS(kkt_check_ir(six, th, Vector{2, 2, 0, 1}, 1e-8), ValidationError);
}

TEST_CASE("dense helpers") {
  DenseMatrix a(2, 2);
  a(0, 0) = 0;
  a(0, 1) = 2;
  a(1, 0) = 3;
  a(1, 1) = 1;
  const Vector x = dense_solve(a, {4, 5});
  CHECK(x[0] == doctest::Approx(1.0));
  CHECK(x[1] == doctest::Approx(2.0));
  DenseMatrix s(2, 2);
  s(0, 0) = s(0, 1) = s(1, 0) = s(1, 1) = 1;
  CHECK_THROWS_AS(dense_solve(s, {1, 1}), NumericalError);
  const DenseMatrix t = a.transpose();
  CHECK(t(0, 1) == 3);
  const DenseMatrix p = a * t;
  CHECK(p(0, 0) == 4);
  CHECK(p(1, 1) == 10);
}
