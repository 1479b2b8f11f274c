#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "pdas/bench.hpp"
#include "pdas/generate.hpp"

using namespace pdas;

TEST_CASE("rng transforms are fixed") {
  Rng a(1), b(1);
  for (int i = 0; i < 10; ++i) CHECK(a.next() == b.next());
  Rng u(5);
  for (int i = 0; i < 1000; ++i) {
    const double v = u.uniform01();
    REQUIRE(v >= 0.0);
    REQUIRE(v < 1.0);
  }
  CHECK(derive_seed(0, 1, 2) != derive_seed(0, 2, 1));
  CHECK(derive_seed(3, 4, 5) == derive_seed(3, 4, 5));
}

TEST_CASE("generators are deterministic and have the documented moments") {
  const GenSpec lin{GenKind::LinearNoise, 5, 42};
  const Vector a = generate(lin);
  CHECK(a == generate(lin));
  for (std::size_t i = 0; i < 5; ++i) CHECK(std::abs(a[i] - static_cast<double>(i + 1)) <= 6.0);

  const Vector big = generate({GenKind::LinearNoise, 200000, 1});
  double s = 0.0, s2 = 0.0;
  for (std::size_t i = 0; i < big.size(); ++i) {
    const double e = big[i] - static_cast<double>(i + 1);
    s += e;
    s2 += e * e;
  }
  CHECK(std::abs(s / 200000) < 0.03);
  CHECK(std::abs(s2 / 200000 - 4.0) < 0.1);

  const Vector u = generate({GenKind::Uniform, 100000, 2});
  double mean = 0.0;
  for (double v : u) {
    REQUIRE(v >= 0.0);
    REQUIRE(v < 10.0);
    mean += v / 100000;
  }
  CHECK(std::abs(mean - 5.0) < 0.05);

  const Vector p = generate({GenKind::Perturb, 1000000, 3});
  double pm = 0.0, pv = 0.0;
  for (double v : p) {
    pm += v / 1e6;
    pv += v * v / 1e6;
  }
  CHECK(std::abs(pm) < 1e-3);
  CHECK(std::abs(pv - 1e-2) < 1e-4);

  const Vector base{1, 2, 3};
  const Vector q = generate({GenKind::Perturb, 3, 4}, base);
  for (std::size_t i = 0; i < 3; ++i) CHECK(std::abs(q[i] - base[i]) < 0.6);
  CHECK_THROWS_AS(generate({GenKind::Perturb, 4, 4}, base), ValidationError);
  CHECK_THROWS_AS(generate({GenKind::Uniform, 0, 4}), ValidationError);
  CHECK(parse_gen_kind("uniform") == GenKind::Uniform);
  CHECK_THROWS_AS(parse_gen_kind("gamma"), ValidationError);
}

TEST_CASE("median") {
  CHECK(median({}) == 0.0);
  CHECK(median({3, 1, 2}) == 2.0);
  CHECK(median({4, 1, 3, 2}) == 2.5);
}

TEST_CASE("single cell grid") {
  ExperimentGrid g;
  g.sizes = {200};
  g.repeats = 1;
  g.variants = {TfVariant::Sf2};
  g.penalties = {Penalty::L1};
  g.orders = {1};
  const auto rows = run_grid(g);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].success == 1.0);
  CHECK(rows[0].med_time_s > 0.0);
  const std::string csv = format_grid_csv(rows);
  CHECK(csv.rfind("n,penalty,order,variant,success,med_time_s,med_iters\n200,l1,1,sf2,1,", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 2);
}

TEST_CASE("grid rows are ordered and independent of the worker count") {
  ExperimentGrid g;
  g.sizes = {150};
  g.repeats = 3;
  auto a = run_grid(g);
  g.jobs = 3;
  auto b = run_grid(g);
  REQUIRE(a.size() == 12);
  REQUIRE(b.size() == 12);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].order == b[i].order);
    CHECK(a[i].penalty == b[i].penalty);
    CHECK(a[i].variant == b[i].variant);
    CHECK(a[i].success == b[i].success);
    CHECK(a[i].med_iters == b[i].med_iters);
    CHECK(a[i].success >= 0.0);
    CHECK(a[i].success <= 1.0);
  }
  CHECK(a[0].order == 1);
  CHECK(a[0].penalty == Penalty::L1Pos);
  CHECK(a[0].variant == TfVariant::Plain);
  CHECK(a[11].order == 2);
  CHECK(a[11].penalty == Penalty::L1);
  CHECK(a[11].variant == TfVariant::Sf2);
}

TEST_CASE("grid validation") {
  ExperimentGrid g;
  g.repeats = 0;
  CHECK_THROWS_AS(g.validate(), ValidationError);
  g = {};
  g.sizes = {2};
  CHECK_THROWS_AS(g.validate(), ValidationError);
  g = {};
  g.variants.clear();
  CHECK_THROWS_AS(g.validate(), ValidationError);
}
