// k-th order difference operators and their banded Gram systems.
#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "pdas/core.hpp"

namespace pdas {

/// D^(d,n): (n−d)×n, row j holds the stencil (−1)^k·C(d,k) at columns j..j+d.
/// Never materialized; apply and apply_transpose cost O(n·d).
class DiffOp {
 public:
  DiffOp(int order, std::size_t n);

  int order() const noexcept { return order_; }
  std::size_t cols() const noexcept { return n_; }
  std::size_t rows() const noexcept { return n_ - static_cast<std::size_t>(order_); }
  std::span<const double> stencil() const noexcept { return stencil_; }

  Vector apply(std::span<const double> theta) const;
  void apply(std::span<const double> theta, std::span<double> out) const;
  double apply_row(std::size_t row, std::span<const double> theta) const;

  Vector apply_transpose(std::span<const double> z) const;
  void apply_transpose(std::span<const double> z, std::span<double> out) const;

  /// (D Dᵀ) entry for rows r, s: Σₖ cₖ c_{k+|r−s|}, zero when |r−s| > d.
  double gram_entry(std::size_t r, std::size_t s) const noexcept;

 private:
  int order_;
  std::size_t n_;
  std::vector<double> stencil_;
};

/// Sorted, duplicate-free subset of operator rows.
class RowSelection {
 public:
  RowSelection() = default;
  /// Throws ValidationError if unsorted, duplicated or ≥ `rows`.
  RowSelection(std::vector<std::size_t> rows, std::size_t total_rows);

  std::size_t size() const noexcept { return rows_.size(); }
  bool empty() const noexcept { return rows_.empty(); }
  std::span<const std::size_t> rows() const noexcept { return rows_; }
  std::size_t operator[](std::size_t p) const noexcept { return rows_[p]; }

 private:
  std::vector<std::size_t> rows_;
};

/// Banded Cholesky factor of D_S D_Sᵀ. Positional bandwidth is at most d:
/// sorted rows more than d apart have disjoint stencils.
class GramFactor {
 public:
  /// Throws NumericalError on a non-positive pivot.
  GramFactor(const DiffOp& op, const RowSelection& rows);

  std::size_t size() const noexcept { return size_; }
  void solve_in_place(std::span<double> rhs) const;

 private:
  std::size_t size_;
  std::size_t band_;
  // l_[i*(band+1) + k] = L(i, i−k); k = 0 is the diagonal.
  std::vector<double> l_;
};

/// Solves (D_S D_Sᵀ) z = rhs for z indexed by position within S.
Vector gram_solve(const DiffOp& op, const RowSelection& rows, std::span<const double> rhs);

}  // namespace pdas
