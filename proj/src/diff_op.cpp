#include "pdas/diff_op.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace pdas {

DiffOp::DiffOp(int order, std::size_t n) : order_(order), n_(n) {
  if (order < 1) throw ValidationError("difference order must be >= 1");
  if (n <= static_cast<std::size_t>(order)) {
    throw ValidationError("difference operator needs n > d (n = " + std::to_string(n) +
                          ", d = " + std::to_string(order) + ")");
  }
  // Alternating binomial row: (1, −d, …, (−1)^d).
  stencil_.assign(static_cast<std::size_t>(order) + 1, 0.0);
  double c = 1.0;
  for (int k = 0; k <= order; ++k) {
    stencil_[static_cast<std::size_t>(k)] = (k % 2 == 0) ? c : -c;
    c = c * (order - k) / (k + 1);
  }
}

double DiffOp::apply_row(std::size_t row, std::span<const double> theta) const {
  double s = 0.0;
  for (std::size_t k = 0; k < stencil_.size(); ++k) s += stencil_[k] * theta[row + k];
  return s;
}

void DiffOp::apply(std::span<const double> theta, std::span<double> out) const {
  if (theta.size() != n_ || out.size() != rows()) {
    throw ValidationError("DiffOp::apply dimension mismatch");
  }
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = apply_row(j, theta);
}

Vector DiffOp::apply(std::span<const double> theta) const {
  if (theta.size() != n_) throw ValidationError("DiffOp::apply dimension mismatch");
  Vector out(rows());
  apply(theta, out);
  return out;
}

void DiffOp::apply_transpose(std::span<const double> z, std::span<double> out) const {
  if (z.size() != rows() || out.size() != n_) {
    throw ValidationError("DiffOp::apply_transpose dimension mismatch");
  }
  std::fill(out.begin(), out.end(), 0.0);
  for (std::size_t j = 0; j < z.size(); ++j) {
    const double zj = z[j];
    if (zj == 0.0) continue;
    for (std::size_t k = 0; k < stencil_.size(); ++k) out[j + k] += stencil_[k] * zj;
  }
}

Vector DiffOp::apply_transpose(std::span<const double> z) const {
  if (z.size() != rows()) throw ValidationError("DiffOp::apply_transpose dimension mismatch");
  Vector out(n_);
  apply_transpose(z, out);
  return out;
}

double DiffOp::gram_entry(std::size_t r, std::size_t s) const noexcept {
  const std::size_t gap = r > s ? r - s : s - r;
  if (gap >= stencil_.size()) return 0.0;
  double v = 0.0;
  for (std::size_t k = 0; k + gap < stencil_.size(); ++k) v += stencil_[k] * stencil_[k + gap];
  return v;
}

// ---------------------------------------------------------------------------

RowSelection::RowSelection(std::vector<std::size_t> rows, std::size_t total_rows)
    : rows_(std::move(rows)) {
  for (std::size_t p = 0; p < rows_.size(); ++p) {
    if (rows_[p] >= total_rows) throw ValidationError("row selection index out of range");
    if (p > 0 && rows_[p] <= rows_[p - 1]) {
      throw ValidationError("row selection must be sorted and duplicate-free");
    }
  }
}

GramFactor::GramFactor(const DiffOp& op, const RowSelection& rows)
    : size_(rows.size()), band_(static_cast<std::size_t>(op.order())) {
  const std::size_t w = band_ + 1;
  l_.assign(size_ * w, 0.0);
  auto L = [&](std::size_t i, std::size_t k) -> double& { return l_[i * w + k]; };

  for (std::size_t i = 0; i < size_; ++i) {
    const std::size_t kmax = std::min(band_, i);
    // Off-diagonal entries L(i, j) for j = i−k, from farthest to nearest.
    for (std::size_t k = kmax; k >= 1; --k) {
      const std::size_t j = i - k;
      double v = op.gram_entry(rows[i], rows[j]);
      // Σ_{c < j} L(i,c) L(j,c), limited to the band of both rows.
      for (std::size_t c = (i >= band_ ? i - band_ : 0); c < j; ++c) {
        v -= L(i, i - c) * L(j, j - c);
      }
      L(i, k) = v / L(j, 0);
    }
    double d = op.gram_entry(rows[i], rows[i]);
    for (std::size_t k = 1; k <= kmax; ++k) d -= L(i, k) * L(i, k);
    if (!(d > 0.0) || !std::isfinite(d)) {
      throw NumericalError("banded Cholesky breakdown at position " + std::to_string(i) +
                           " (pivot " + std::to_string(d) + ")");
    }
    L(i, 0) = std::sqrt(d);
  }
}

void GramFactor::solve_in_place(std::span<double> rhs) const {
  if (rhs.size() != size_) throw ValidationError("gram_solve: rhs length mismatch");
  const std::size_t w = band_ + 1;
  auto L = [&](std::size_t i, std::size_t k) { return l_[i * w + k]; };
  // L x = b
  for (std::size_t i = 0; i < size_; ++i) {
    double v = rhs[i];
    const std::size_t kmax = std::min(band_, i);
    for (std::size_t k = 1; k <= kmax; ++k) v -= L(i, k) * rhs[i - k];
    rhs[i] = v / L(i, 0);
  }
  // Lᵀ z = x
  for (std::size_t ii = size_; ii-- > 0;) {
    double v = rhs[ii];
    for (std::size_t k = 1; k <= band_ && ii + k < size_; ++k) v -= L(ii + k, k) * rhs[ii + k];
    rhs[ii] = v / L(ii, 0);
  }
}

Vector gram_solve(const DiffOp& op, const RowSelection& rows, std::span<const double> rhs) {
  if (rows.empty()) throw ValidationError("gram_solve needs a nonempty row selection");
  if (rhs.size() != rows.size()) throw ValidationError("gram_solve: rhs length mismatch");
  for (double v : rhs) {
    if (!std::isfinite(v)) throw ValidationError("gram_solve: rhs is not finite");
  }
  const GramFactor factor(op, rows);
  Vector z(rhs.begin(), rhs.end());
  factor.solve_in_place(z);
  return z;
}

}  // namespace pdas
