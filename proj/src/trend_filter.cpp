#include "pdas/trend_filter.hpp"

#include <algorithm>
#include <cassert>
#include <chrono>
#include <cmath>
#include <unordered_map>

namespace pdas {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

bool contains(const std::vector<std::size_t>& sorted, std::size_t j) {
  return std::binary_search(sorted.begin(), sorted.end(), j);
}

SignPartition checked_initial(const TFProblem& problem, const std::optional<SignPartition>& initial) {
  if (!initial) return SignPartition::all_active(problem.rows());
  if (initial->size() != problem.rows()) {
    throw ValidationError("initial sign partition has m = " + std::to_string(initial->size()) +
                          " but the problem has n - d = " + std::to_string(problem.rows()));
  }
  return *initial;
}

/// Amount by which row j violates its constraint.
double violation_magnitude(const TFProblem& problem, const SsmResult& res, const SignPartition& part,
                           std::size_t j) {
  const double zj = res.point.z[j];
  switch (part.label(j)) {
    case Label::P:
    case Label::N: return problem.lambda() * std::abs(res.d_theta[j]);
    case Label::A:
      return zj > dual_upper ? zj - dual_upper : dual_lower(problem.penalty()) - zj;
  }
  return 0.0;
}

void finish(const TFProblem& problem, TfSolution& sol, Clock::time_point t0) {
  sol.report.objective = objective_tf(problem, sol.point.theta);
  sol.report.wall_time = seconds_since(t0);
}

}  // namespace

std::vector<std::size_t> Violations::all() const {
  std::vector<std::size_t> out;
  out.reserve(count());
  out.insert(out.end(), vp.begin(), vp.end());
  out.insert(out.end(), vn.begin(), vn.end());
  out.insert(out.end(), vap.begin(), vap.end());
  out.insert(out.end(), van.begin(), van.end());
  std::sort(out.begin(), out.end());
  return out;
}

double dual_lower(Penalty p) noexcept { return p == Penalty::L1 ? -1.0 : 0.0; }

std::string to_string(TfVariant v) {
  switch (v) {
    case TfVariant::Plain: return "plain";
    case TfVariant::Sf1: return "sf1";
    case TfVariant::Sf2: return "sf2";
  }
  return "?";
}

TfVariant parse_variant(const std::string& s) {
  if (s == "plain") return TfVariant::Plain;
  if (s == "sf1") return TfVariant::Sf1;
  if (s == "sf2") return TfVariant::Sf2;
  throw ValidationError("unknown variant '" + s + "' (expected plain, sf1 or sf2)");
}

void Sf2Config::validate() const {
  if (m < 1) throw ValidationError("SF2 queue capacity m must be >= 1");
  if (!(delta_s > 0.0 && delta_s < 1.0)) throw ValidationError("SF2 delta_s must lie in (0,1)");
  if (!(delta_e > 1.0)) throw ValidationError("SF2 delta_e must exceed 1");
  if (!(p0 > 0.0 && p0 <= 1.0)) throw ValidationError("SF2 p0 must lie in (0,1]");
}

// ---------------------------------------------------------------------------

SsmResult ssm(const TFProblem& problem, const DiffOp& op, const SignPartition& partition) {
  const std::size_t m = problem.rows();
  if (partition.size() != m) throw ValidationError("ssm: partition size does not match n - d");
  const double lambda = problem.lambda();
  const double lower = dual_lower(problem.penalty());
  auto y = problem.y();

  SsmResult res;
  Vector& z = res.point.z;
  z.assign(m, 0.0);
  std::vector<std::size_t> active;
  for (std::size_t j = 0; j < m; ++j) {
    switch (partition.label(j)) {
      case Label::P: z[j] = dual_upper; break;
      case Label::N: z[j] = lower; break;
      case Label::A: active.push_back(j); break;
    }
  }

  Vector& theta = res.point.theta;
  theta.resize(problem.size());
  if (!active.empty()) {
    // D_A D_Aᵀ z_A = D_A (y − λ D_Iᵀ z_I) / λ
    op.apply_transpose(z, theta);
    for (std::size_t i = 0; i < theta.size(); ++i) theta[i] = y[i] - lambda * theta[i];
    Vector rhs(active.size());
    for (std::size_t p = 0; p < active.size(); ++p) rhs[p] = op.apply_row(active[p], theta) / lambda;
    const Vector za = gram_solve(op, RowSelection(active, m), rhs);
    for (std::size_t p = 0; p < active.size(); ++p) z[active[p]] = za[p];
  }
  op.apply_transpose(z, theta);
  for (std::size_t i = 0; i < theta.size(); ++i) theta[i] = y[i] - lambda * theta[i];

  res.d_theta = op.apply(theta);
#ifndef NDEBUG
  for (auto j : active) assert(std::abs(res.d_theta[j]) <= 1e-6 * (1.0 + std::abs(theta[j])));
#endif

  Violations& v = res.violations;
  for (std::size_t j = 0; j < m; ++j) {
    switch (partition.label(j)) {
      case Label::P:
        if (res.d_theta[j] < 0.0) v.vp.push_back(j);
        break;
      case Label::N:
        if (res.d_theta[j] > 0.0) v.vn.push_back(j);
        break;
      case Label::A:
        if (z[j] > dual_upper) {
          v.vap.push_back(j);
        } else if (z[j] < lower) {
          v.van.push_back(j);
        }
        break;
    }
  }
  return res;
}

SsmResult ssm(const TFProblem& problem, const SignPartition& partition) {
  return ssm(problem, DiffOp(problem.order(), problem.size()), partition);
}

SignPartition partition_update_standard(const SignPartition& partition,
                                        const Violations& violations) {
  SignPartition next = partition;
  for (auto j : violations.vp) next.set(j, Label::A);
  for (auto j : violations.vn) next.set(j, Label::A);
  for (auto j : violations.vap) next.set(j, Label::P);
  for (auto j : violations.van) next.set(j, Label::N);
  return next;
}

SignPartition partition_update_rows(const SignPartition& partition, const Violations& violations,
                                    std::span<const std::size_t> rows) {
  SignPartition next = partition;
  for (auto j : rows) {
    if (contains(violations.vp, j) || contains(violations.vn, j)) {
      next.set(j, Label::A);
    } else if (contains(violations.vap, j)) {
      next.set(j, Label::P);
    } else if (contains(violations.van, j)) {
      next.set(j, Label::N);
    } else {
      throw ValidationError("partition_update_rows: row " + std::to_string(j + 1) +
                            " is not violated");
    }
  }
  return next;
}

bool optimality_check_tf(const TFProblem& problem, const PrimalDualPoint& point, double tol) {
  if (point.theta.size() != problem.size() || point.z.size() != problem.rows()) {
    throw ValidationError("optimality_check_tf: dimension mismatch");
  }
  auto finite = [](double v) { return std::isfinite(v); };
  if (!std::ranges::all_of(point.theta, finite) || !std::ranges::all_of(point.z, finite)) return false;
  const DiffOp op(problem.order(), problem.size());
  const double lambda = problem.lambda();
  const double lower = dual_lower(problem.penalty());
  auto y = problem.y();

  const Vector dtz = op.apply_transpose(point.z);
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (std::abs(point.theta[i] - (y[i] - lambda * dtz[i])) > tol) return false;
  }
  const Vector dtheta = op.apply(point.theta);
  for (std::size_t j = 0; j < dtheta.size(); ++j) {
    const double zj = point.z[j];
    if (zj < lower - tol || zj > dual_upper + tol) return false;
    if (dtheta[j] > tol && std::abs(zj - dual_upper) > tol) return false;
    if (dtheta[j] < -tol && std::abs(zj - lower) > tol) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------

TfSolution tf_solve_plain(const TFProblem& problem, const std::optional<SignPartition>& initial,
                          std::size_t max_iter, const TfObserver& observer) {
  if (max_iter < 1) throw ValidationError("max_iter must be >= 1");
  const auto t0 = Clock::now();
  const DiffOp op(problem.order(), problem.size());
  SignPartition part = checked_initial(problem, initial);

  TfSolution sol;
  sol.report.status = SolveStatus::IterationLimit;
  std::unordered_map<std::string, std::size_t> visited;
  for (std::size_t it = 0; it < max_iter; ++it) {
    auto [seen, fresh] = visited.try_emplace(part.key(), it);
    if (!fresh) {
      sol.report.status = SolveStatus::Cycled;
      sol.report.cycle_period = it - seen->second;
      break;
    }
    SsmResult res = ssm(problem, op, part);
    const std::size_t nv = res.violations.count();
    sol.report.violation_trajectory.push_back(nv);
    sol.report.iterations = it + 1;

    TfIterate trace{it, &part, &res, false, std::nullopt, std::nullopt, 0};
    if (nv == 0) {
      if (observer) observer(trace);
      sol.report.status = SolveStatus::Optimal;
      sol.point = std::move(res.point);
      sol.partition = std::move(part);
      finish(problem, sol, t0);
      return sol;
    }
    SignPartition next = partition_update_standard(part, res.violations);
    trace.moved = nv;
    if (observer) observer(trace);
    sol.point = std::move(res.point);
    sol.partition = std::move(part);
    part = std::move(next);
  }
  finish(problem, sol, t0);
  return sol;
}

TfSolution tf_solve_sf1(const TFProblem& problem, const std::optional<SignPartition>& initial,
                        const Sf1Config& config, std::size_t max_iter, const TfObserver& observer) {
  if (max_iter < 1) throw ValidationError("max_iter must be >= 1");
  if (config.t_max < 0) throw ValidationError("t_max must be >= 0");
  const auto t0 = Clock::now();
  const DiffOp op(problem.order(), problem.size());
  SignPartition part = checked_initial(problem, initial);
  Sf1State state;

  TfSolution sol;
  sol.report.status = SolveStatus::IterationLimit;
  for (std::size_t it = 0; it < max_iter; ++it) {
    SsmResult res = ssm(problem, op, part);
    const std::size_t nv = res.violations.count();
    sol.report.violation_trajectory.push_back(nv);
    sol.report.iterations = it + 1;

    TfIterate trace{it, &part, &res, false, std::nullopt, std::nullopt, 0};
    if (nv == 0) {
      trace.sf1 = state;
      if (observer) observer(trace);
      sol.report.status = SolveStatus::Optimal;
      sol.point = std::move(res.point);
      sol.partition = std::move(part);
      finish(problem, sol, t0);
      return sol;
    }

    SignPartition next;
    if (nv < state.v_best) {
      state.t = 0;
      state.v_best = nv;
      next = partition_update_standard(part, res.violations);
      trace.moved = nv;
    } else {
      ++state.t;
      if (state.t <= config.t_max) {
        next = partition_update_standard(part, res.violations);
        trace.moved = nv;
      } else {
        const std::size_t j = res.violations.all().front();
        next = partition_update_rows(part, res.violations, std::span<const std::size_t>(&j, 1));
        trace.fallback = true;
        trace.moved = 1;
      }
    }
    trace.sf1 = state;
    if (observer) observer(trace);
    sol.point = std::move(res.point);
    sol.partition = std::move(part);
    part = std::move(next);
  }
  finish(problem, sol, t0);
  return sol;
}

TfSolution tf_solve_sf2(const TFProblem& problem, const std::optional<SignPartition>& initial,
                        const Sf2Config& config, std::size_t max_iter, const TfObserver& observer) {
  if (max_iter < 1) throw ValidationError("max_iter must be >= 1");
  config.validate();
  const auto t0 = Clock::now();
  const DiffOp op(problem.order(), problem.size());
  SignPartition part = checked_initial(problem, initial);
  Sf2State state;
  state.p = config.p0;

  auto push = [&](std::size_t v) {
    if (state.queue.size() == config.m) state.queue.pop_front();
    state.queue.push_back(v);
  };

  TfSolution sol;
  sol.report.status = SolveStatus::IterationLimit;
  std::vector<std::pair<double, std::size_t>> ranked;
  for (std::size_t it = 0; it < max_iter; ++it) {
    SsmResult res = ssm(problem, op, part);
    const std::size_t nv = res.violations.count();
    sol.report.violation_trajectory.push_back(nv);
    sol.report.iterations = it + 1;

    TfIterate trace{it, &part, &res, false, std::nullopt, std::nullopt, 0};
    if (nv == 0) {
      trace.sf2 = state;
      if (observer) observer(trace);
      sol.report.status = SolveStatus::Optimal;
      sol.point = std::move(res.point);
      sol.partition = std::move(part);
      finish(problem, sol, t0);
      return sol;
    }

    const double inv = 1.0 / static_cast<double>(nv);
    if (state.queue.empty()) {
      push(nv);
    } else {
      const auto [mn, mx] = std::minmax_element(state.queue.begin(), state.queue.end());
      // |V| not below the reference value: shrink p and leave the queue alone.
      if (nv >= *mx) {
        state.p = std::max(config.delta_s * state.p, inv);
      } else if (nv < *mn) {
        push(nv);
        state.p = std::min(config.delta_e * state.p, 1.0);
      } else {
        push(nv);
      }
    }
    // A shrinking |V| can leave p below 1/|V|; at least one row always moves.
    state.p = std::max(state.p, inv);
    const auto take = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::floor(state.p * static_cast<double>(nv))));

    ranked.clear();
    for (auto j : res.violations.all()) {
      ranked.emplace_back(violation_magnitude(problem, res, part, j), j);
    }
    std::stable_sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
      return a.first > b.first || (a.first == b.first && a.second < b.second);
    });
    std::vector<std::size_t> rows;
    rows.reserve(take);
    for (std::size_t k = 0; k < std::min(take, ranked.size()); ++k) rows.push_back(ranked[k].second);
    SignPartition next = partition_update_rows(part, res.violations, rows);

    trace.sf2 = state;
    trace.moved = rows.size();
    if (observer) observer(trace);
    sol.point = std::move(res.point);
    sol.partition = std::move(part);
    part = std::move(next);
  }
  finish(problem, sol, t0);
  return sol;
}

TfSolution tf_solve(const TFProblem& problem, const TfSolverConfig& config,
                    const std::optional<SignPartition>& initial, const TfObserver& observer) {
  switch (config.variant) {
    case TfVariant::Plain: return tf_solve_plain(problem, initial, config.max_iter, observer);
    case TfVariant::Sf1:
      return tf_solve_sf1(problem, initial, config.sf1, config.max_iter, observer);
    case TfVariant::Sf2:
      return tf_solve_sf2(problem, initial, config.sf2, config.max_iter, observer);
  }
  throw ValidationError("unknown solver variant");
}

}  // namespace pdas
