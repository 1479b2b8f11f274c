// Slow reference solvers and KKT checkers used to validate the fast solvers.
//
// The coordinate-descent oracles share no code with the fast solvers: the
// duals are assembled as dense matrices from the difference recursion and
// linear solves use Gaussian elimination. Only exhaustive_tf reuses ssm(),
// since its independence lies in the enumeration.
#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "pdas/core.hpp"

namespace pdas::oracle {

struct OracleConfig {
  std::size_t max_sweeps = 2'000'000;
  /// Stop once no coordinate moves by more than this in a sweep. Results
  /// are certified by the KKT checks at 10·tol.
  double tol = 1e-9;
  /// Every this many sweeps, try to finish exactly on the face the iterate
  /// has identified. 0 disables the attempt.
  std::size_t polish_every = 50;

  void validate() const;
};

struct OracleResult {
  Vector theta;
  Vector z;
  std::size_t sweeps = 0;
  /// True when the result came from an exact solve on an identified face.
  bool polished = false;
};

/// Row-major dense matrix, only as large as the desk-scale oracles need.
class DenseMatrix {
 public:
  DenseMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols) {}
  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  double& operator()(std::size_t r, std::size_t c) { return a_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return a_[r * cols_ + c]; }
  DenseMatrix operator*(const DenseMatrix& rhs) const;
  DenseMatrix transpose() const;

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> a_;
};

/// D^(k,n) assembled by the recursion D^(k,n) = D^(1,n−k+1) D^(k−1,n).
DenseMatrix difference_matrix(int order, std::size_t n);

/// Gaussian elimination with partial pivoting. Throws NumericalError when
/// singular to working precision.
Vector dense_solve(DenseMatrix a, Vector b);

/// Projected coordinate descent on the isotonic dual
/// min_{z ≥ 0} ½ zᵀ D W⁻¹ Dᵀ z − yᵀ Dᵀ z, then θ = y − W⁻¹ Dᵀ z.
OracleResult dual_cd_ir(const IRProblem& problem, const OracleConfig& config = {});

/// Projected coordinate descent on the trend-filtering dual
/// min_{z ∈ box} ½‖y − λDᵀz‖², box = [−1,1] (L1) or [0,1] (L1Pos).
OracleResult dual_cd_tf(const TFProblem& problem, const OracleConfig& config = {});

/// Runs the subspace minimizer on all 3^(n−d) sign partitions and returns
/// the first optimal one. Requires n − d ≤ 12.
OracleResult exhaustive_tf(const TFProblem& problem);

/// Isotonic KKT: θ nondecreasing, z ≥ 0, wᵢ(yᵢ − θᵢ) = zᵢ − zᵢ₋₁ with
/// z₀ = zₙ = 0, and zᵢ(θᵢ₊₁ − θᵢ) ≤ tol.
bool kkt_check_ir(const IRProblem& problem, std::span<const double> theta,
                  std::span<const double> z, double tol);

}  // namespace pdas::oracle
