#include <numeric>

#include "doctest.h"
#include "pdas/diff_op.hpp"
#include "pdas/oracles.hpp"
#include "support.hpp"

using namespace pdas;

namespace {

oracle::DenseMatrix dense_of(const DiffOp& op) {
  oracle::DenseMatrix m(op.rows(), op.cols());
  Vector e(op.cols(), 0.0);
  for (std::size_t c = 0; c < op.cols(); ++c) {
    e[c] = 1.0;
    const Vector col = op.apply(e);
    for (std::size_t r = 0; r < op.rows(); ++r) m(r, c) = col[r];
    e[c] = 0.0;
  }
  return m;
}

std::vector<std::vector<double>> rows_of(const oracle::DenseMatrix& m) {
  std::vector<std::vector<double>> out(m.rows(), std::vector<double>(m.cols()));
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) out[r][c] = m(r, c);
  return out;
}

}  // namespace

TEST_CASE("difference operator rows") {
  using Rows = std::vector<std::vector<double>>;
  CHECK(rows_of(dense_of(DiffOp(1, 3))) == Rows{{1, -1, 0}, {0, 1, -1}});
  CHECK(rows_of(dense_of(DiffOp(2, 4))) == Rows{{1, -2, 1, 0}, {0, 1, -2, 1}});
  CHECK(rows_of(dense_of(DiffOp(3, 5))) == Rows{{1, -3, 3, -1, 0}, {0, 1, -3, 3, -1}});
  CHECK_THROWS_AS(DiffOp(2, 2), ValidationError);
  CHECK_THROWS_AS(DiffOp(0, 5), ValidationError);
}

TEST_CASE("stencil construction equals the recursion") {
  for (int d = 1; d <= 3; ++d) {
    for (std::size_t n = static_cast<std::size_t>(d) + 1; n <= 30; ++n) {
      CAPTURE(d);
      CAPTURE(n);
      REQUIRE(rows_of(dense_of(DiffOp(d, n))) == rows_of(oracle::difference_matrix(d, n)));
    }
  }
}

TEST_CASE("apply and transpose") {
  CHECK(DiffOp(1, 3).apply(Vector{1, 2, 4}) == Vector{-1, -2});
  CHECK(DiffOp(1, 2).apply_transpose(Vector{1}) == Vector{1, -1});
  CHECK(DiffOp(2, 5).apply_row(1, Vector{1, 4, 9, 16, 25}) == 2.0);
  CHECK_THROWS_AS(DiffOp(1, 3).apply(Vector{1, 2}), ValidationError);
  CHECK_THROWS_AS(DiffOp(1, 3).apply_transpose(Vector{1, 2, 3}), ValidationError);
}

TEST_CASE("transpose is the adjoint") {
  Rng rng(11);
  for (int d = 1; d <= 3; ++d) {
    const DiffOp op(d, 50);
    const Vector theta = testing::uniform_data(rng, 50, -5, 5);
    const Vector z = testing::uniform_data(rng, op.rows(), -1, 1);
    const Vector dt = op.apply(theta);
    const Vector dtz = op.apply_transpose(z);
    const double lhs = std::inner_product(dt.begin(), dt.end(), z.begin(), 0.0);
    const double rhs = std::inner_product(theta.begin(), theta.end(), dtz.begin(), 0.0);
    CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, std::abs(lhs)));
  }
}

TEST_CASE("gram entries") {
  const DiffOp d1(1, 3);
  CHECK(d1.gram_entry(0, 0) == 2.0);
  CHECK(d1.gram_entry(0, 1) == -1.0);
  CHECK(d1.gram_entry(1, 0) == -1.0);
  const DiffOp d2(2, 8);
  CHECK(d2.gram_entry(3, 3) == 6.0);
  CHECK(d2.gram_entry(3, 4) == -4.0);
  CHECK(d2.gram_entry(3, 5) == 1.0);
  CHECK(d2.gram_entry(3, 6) == 0.0);
}

TEST_CASE("gram_solve small cases") {
  const DiffOp op(1, 2);
  const RowSelection s({0}, 1);
  CHECK(gram_solve(op, s, Vector{-2})[0] == doctest::Approx(-1.0).epsilon(1e-15));
  CHECK_THROWS_AS(gram_solve(op, RowSelection({}, 1), Vector{}), ValidationError);
  CHECK_THROWS_AS(gram_solve(op, s, Vector{1, 2}), ValidationError);
  CHECK_THROWS_AS(gram_solve(op, s, Vector{NAN}), ValidationError);
  CHECK_THROWS_AS(RowSelection({1, 0}, 3), ValidationError);
  CHECK_THROWS_AS(RowSelection({1, 1}, 3), ValidationError);
  CHECK_THROWS_AS(RowSelection({3}, 3), ValidationError);
}

TEST_CASE("gram_solve reproduces the active duals of the cycling example") {
  // P = {3}, A = {1,2,4} (1-based); z_P = 1.
  const Vector y{603, 996, 502, 19, 56, 139};
  const double lambda = 100.0;
  const DiffOp op(2, 6);
  Vector zi(4, 0.0);
  zi[2] = 1.0;
  const Vector dtz = op.apply_transpose(zi);
  Vector r(6);
  for (std::size_t i = 0; i < 6; ++i) r[i] = (y[i] - lambda * dtz[i]) / lambda;
  const Vector dr = op.apply(r);
  const RowSelection s({0, 1, 3}, 4);
  const Vector za = gram_solve(op, s, Vector{dr[0], dr[1], dr[3]});
  CHECK(za[0] == doctest::Approx(-5293.0 / 2280).epsilon(1e-12));
  CHECK(za[1] == doctest::Approx(-482.0 / 475).epsilon(1e-12));
  CHECK(za[2] == doctest::Approx(5201.0 / 5700).epsilon(1e-12));
}

// The Gram condition number grows like n^(2d); at d = 3, n = 200 neither
// solver is accurate to 1e-10, so third order gets its own tolerance.
TEST_CASE("gram_solve matches dense elimination on random row sets") {
  Rng rng(5);
  for (int trial = 0; trial < 300; ++trial) {
    const int d = 1 + trial % 3;
    const std::size_t n = testing::draw_size(rng, static_cast<std::size_t>(d) + 1, 200);
    const DiffOp op(d, n);
    std::vector<std::size_t> rows;
    const double keep = rng.uniform(0.05, 1.0);
    for (std::size_t j = 0; j < op.rows(); ++j)
      if (rng.uniform01() < keep) rows.push_back(j);
    if (rows.empty()) rows.push_back(0);
    const RowSelection s(rows, op.rows());
    const Vector rhs = testing::uniform_data(rng, rows.size(), -10, 10);

    oracle::DenseMatrix g(rows.size(), rows.size());
    const oracle::DenseMatrix dm = oracle::difference_matrix(d, n);
    for (std::size_t a = 0; a < rows.size(); ++a)
      for (std::size_t b = 0; b < rows.size(); ++b)
        for (std::size_t c = 0; c < n; ++c) g(a, b) += dm(rows[a], c) * dm(rows[b], c);
    const Vector expect = oracle::dense_solve(g, rhs);
    const Vector got = gram_solve(op, s, rhs);
    double scale = 0.0;
    for (double v : expect) scale = std::max(scale, std::abs(v));
    CAPTURE(trial);
    const double tol = d <= 2 ? 1e-10 : 1e-8;
    REQUIRE(testing::max_abs_diff(got, expect) <= tol * std::max(1.0, scale));
  }
}
