#include "pdas/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "pdas/trend_filter.hpp"

namespace pdas::oracle {

void OracleConfig::validate() const {
  if (!(tol > 0.0)) throw ValidationError("oracle tol must be > 0");
  if (max_sweeps == 0) throw ValidationError("oracle max_sweeps must be >= 1");
}

DenseMatrix DenseMatrix::operator*(const DenseMatrix& rhs) const {
  if (cols_ != rhs.rows_) throw ValidationError("dense product dimension mismatch");
  DenseMatrix out(rows_, rhs.cols_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t k = 0; k < cols_; ++k) {
      const double a = (*this)(i, k);
      if (a == 0.0) continue;
      for (std::size_t j = 0; j < rhs.cols_; ++j) out(i, j) += a * rhs(k, j);
    }
  }
  return out;
}

DenseMatrix DenseMatrix::transpose() const {
  DenseMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  }
  return t;
}

namespace {

DenseMatrix first_difference(std::size_t n) {
  DenseMatrix d(n - 1, n);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    d(i, i) = 1.0;
    d(i, i + 1) = -1.0;
  }
  return d;
}

}  // namespace

DenseMatrix difference_matrix(int order, std::size_t n) {
  if (order < 1 || n <= static_cast<std::size_t>(order)) {
    throw ValidationError("difference_matrix needs n > order >= 1");
  }
  DenseMatrix d = first_difference(n);
  for (int k = 2; k <= order; ++k) d = first_difference(n - static_cast<std::size_t>(k) + 1) * d;
  return d;
}

Vector dense_solve(DenseMatrix a, Vector b) {
  const std::size_t n = a.rows();
  if (a.cols() != n || b.size() != n) throw ValidationError("dense_solve dimension mismatch");
  double scale = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) scale = std::max(scale, std::abs(a(i, j)));
  }
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r) {
      if (std::abs(a(r, col)) > std::abs(a(piv, col))) piv = r;
    }
    if (std::abs(a(piv, col)) <= 1e-14 * scale) throw NumericalError("dense_solve: singular matrix");
    if (piv != col) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(col, j), a(piv, j));
      std::swap(b[col], b[piv]);
    }
    for (std::size_t r = col + 1; r < n; ++r) {
      const double f = a(r, col) / a(col, col);
      if (f == 0.0) continue;
      for (std::size_t j = col; j < n; ++j) a(r, j) -= f * a(col, j);
      b[r] -= f * b[col];
    }
  }
  Vector x(n);
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    for (std::size_t j = i + 1; j < n; ++j) s -= a(i, j) * x[j];
    x[i] = s / a(i, i);
  }
  return x;
}

namespace {

/// min ½ zᵀGz − bᵀz over lo ≤ z ≤ hi, G symmetric positive definite with
/// half-bandwidth `band`.
struct BoxQp {
  DenseMatrix g;
  Vector b;
  double lo;
  double hi;
  std::size_t band;
};

/// Exact minimizer on the face where coordinates sitting on a bound stay
/// there. Returns false if the face solve leaves the box.
bool polish(const BoxQp& qp, Vector& z) {
  const std::size_t m = z.size();
  std::vector<std::size_t> free;
  for (std::size_t j = 0; j < m; ++j) {
    if (z[j] != qp.lo && z[j] != qp.hi) free.push_back(j);
  }
  if (!free.empty()) {
    DenseMatrix a(free.size(), free.size());
    Vector rhs(free.size());
    for (std::size_t p = 0; p < free.size(); ++p) {
      const std::size_t j = free[p];
      double r = qp.b[j];
      for (std::size_t k = 0; k < m; ++k) {
        if (z[k] == qp.lo || z[k] == qp.hi) r -= qp.g(j, k) * z[k];
      }
      rhs[p] = r;
      for (std::size_t q = 0; q < free.size(); ++q) a(p, q) = qp.g(j, free[q]);
    }
    Vector zf;
    try {
      zf = dense_solve(std::move(a), std::move(rhs));
    } catch (const NumericalError&) {
      return false;
    }
    for (std::size_t p = 0; p < free.size(); ++p) {
      if (zf[p] < qp.lo || zf[p] > qp.hi) return false;
      z[free[p]] = zf[p];
    }
  }
  return true;
}

/// Projected cyclic coordinate descent. `certify` decides whether a
/// candidate z is optimal for the caller's problem.
template <class Certify>
std::pair<Vector, bool> coordinate_descent(const BoxQp& qp, const OracleConfig& config,
                                           std::size_t& sweeps, Certify&& certify) {
  const std::size_t m = qp.b.size();
  Vector z(m, 0.0);
  if (qp.lo > 0.0) std::fill(z.begin(), z.end(), qp.lo);
  if (qp.hi < 0.0) std::fill(z.begin(), z.end(), qp.hi);
  // grad = Gz − b
  Vector grad(m);
  for (std::size_t j = 0; j < m; ++j) {
    double s = -qp.b[j];
    for (std::size_t k = 0; k < m; ++k) s += qp.g(j, k) * z[k];
    grad[j] = s;
  }

  auto try_finish = [&](bool& polished) -> bool {
    if (config.polish_every > 0) {
      Vector zp = z;
      if (polish(qp, zp) && certify(zp)) {
        z = std::move(zp);
        polished = true;
        return true;
      }
    }
    polished = false;
    return certify(z);
  };

  for (sweeps = 1; sweeps <= config.max_sweeps; ++sweeps) {
    double change = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      const double gjj = qp.g(j, j);
      const double zn = std::clamp(z[j] - grad[j] / gjj, qp.lo, qp.hi);
      const double delta = zn - z[j];
      if (delta == 0.0) continue;
      z[j] = zn;
      change = std::max(change, std::abs(delta));
      const std::size_t k0 = j >= qp.band ? j - qp.band : 0;
      const std::size_t k1 = std::min(m - 1, j + qp.band);
      for (std::size_t k = k0; k <= k1; ++k) grad[k] += qp.g(k, j) * delta;
    }
    const bool converged = change < config.tol;
    const bool checkpoint = config.polish_every > 0 && sweeps % config.polish_every == 0;
    if (converged || checkpoint) {
      bool polished = false;
      if (try_finish(polished)) return {z, polished};
      if (change == 0.0) break;
    }
  }
  throw NotConverged("coordinate descent did not reach a certified optimum after " +
                     std::to_string(sweeps) + " sweeps");
}

}  // namespace

OracleResult dual_cd_ir(const IRProblem& problem, const OracleConfig& config) {
  config.validate();
  const std::size_t n = problem.size();
  if (n < 2) throw ValidationError("dual_cd_ir needs n >= 2");
  auto y = problem.y();
  auto w = problem.weights();

  const DenseMatrix d = difference_matrix(1, n);
  DenseMatrix dw = d;  // D W⁻¹
  for (std::size_t i = 0; i < d.rows(); ++i) {
    for (std::size_t j = 0; j < n; ++j) dw(i, j) = d(i, j) / w[j];
  }
  BoxQp qp{dw * d.transpose(), Vector(n - 1, 0.0), 0.0, std::numeric_limits<double>::infinity(), 1};
  for (std::size_t i = 0; i < n - 1; ++i) {
    for (std::size_t j = 0; j < n; ++j) qp.b[i] += d(i, j) * y[j];
  }

  auto recover = [&](const Vector& z) {
    Vector theta(y.begin(), y.end());
    for (std::size_t i = 0; i < n - 1; ++i) {
      for (std::size_t j = 0; j < n; ++j) theta[j] -= dw(i, j) * z[i];
    }
    return theta;
  };
  const double check_tol = 10.0 * config.tol;
  OracleResult out;
  auto [z, polished] = coordinate_descent(qp, config, out.sweeps, [&](const Vector& cand) {
    return kkt_check_ir(problem, recover(cand), cand, check_tol);
  });
  out.theta = recover(z);
  out.z = std::move(z);
  out.polished = polished;
  return out;
}

OracleResult dual_cd_tf(const TFProblem& problem, const OracleConfig& config) {
  config.validate();
  const std::size_t n = problem.size();
  const double lambda = problem.lambda();
  auto y = problem.y();

  const DenseMatrix d = difference_matrix(problem.order(), n);
  const std::size_t m = d.rows();
  DenseMatrix g = d * d.transpose();
  BoxQp qp{DenseMatrix(m, m), Vector(m, 0.0), dual_lower(problem.penalty()), dual_upper,
           static_cast<std::size_t>(problem.order())};
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) qp.g(i, j) = lambda * lambda * g(i, j);
    for (std::size_t j = 0; j < n; ++j) qp.b[i] += lambda * d(i, j) * y[j];
  }

  auto recover = [&](const Vector& z) {
    Vector theta(y.begin(), y.end());
    for (std::size_t i = 0; i < m; ++i) {
      if (z[i] == 0.0) continue;
      for (std::size_t j = 0; j < n; ++j) theta[j] -= lambda * d(i, j) * z[i];
    }
    return theta;
  };
  const double check_tol = 10.0 * config.tol;
  OracleResult out;
  auto [z, polished] = coordinate_descent(qp, config, out.sweeps, [&](const Vector& cand) {
    return optimality_check_tf(problem, PrimalDualPoint{recover(cand), cand}, check_tol);
  });
  out.theta = recover(z);
  out.z = std::move(z);
  out.polished = polished;
  return out;
}

OracleResult exhaustive_tf(const TFProblem& problem) {
  const std::size_t m = problem.rows();
  if (m > 12) throw ValidationError("exhaustive_tf requires n - d <= 12");
  const DiffOp op(problem.order(), problem.size());
  std::vector<Label> labels(m, Label::P);
  constexpr Label next_label[] = {Label::N, Label::A, Label::P};

  std::size_t total = 1;
  for (std::size_t j = 0; j < m; ++j) total *= 3;
  for (std::size_t count = 0; count < total; ++count) {
    const SignPartition part(labels);
    SsmResult res = ssm(problem, op, part);
    if (optimality_check_tf(problem, res.point, 1e-9)) {
      return OracleResult{std::move(res.point.theta), std::move(res.point.z), count + 1, true};
    }
    // Base-3 increment over the labels.
    for (std::size_t j = 0; j < m; ++j) {
      labels[j] = next_label[static_cast<int>(labels[j])];
      if (labels[j] != Label::P) break;
    }
  }
  throw InternalError("exhaustive_tf: no sign partition passed the optimality check");
}

bool kkt_check_ir(const IRProblem& problem, std::span<const double> theta,
                  std::span<const double> z, double tol) {
  const std::size_t n = problem.size();
  if (theta.size() != n || z.size() != n - 1) throw ValidationError("kkt_check_ir: dimension mismatch");
  auto finite = [](double v) { return std::isfinite(v); };
  if (!std::ranges::all_of(theta, finite) || !std::ranges::all_of(z, finite)) return false;
  auto y = problem.y();
  auto w = problem.weights();
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double step = theta[i + 1] - theta[i];
    if (step < -tol) return false;
    if (z[i] < -tol) return false;
    if (z[i] * step > tol) return false;
  }
  for (std::size_t i = 0; i < n; ++i) {
    const double zi = i + 1 < n ? z[i] : 0.0;
    const double zprev = i > 0 ? z[i - 1] : 0.0;
    if (std::abs(w[i] * (y[i] - theta[i]) - (zi - zprev)) > tol) return false;
  }
  return true;
}

}  // namespace pdas::oracle
