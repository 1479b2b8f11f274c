// Primal-dual active-set solvers for ℓ1 and positive-part ℓ1 trend filtering.
//
// Every solver iterates subspace minimization → termination check →
// partition update. The plain variant applies the standard update to all
// violated rows; the safeguarded variants throttle it when |V| stalls.
#pragma once

#include <cstddef>
#include <deque>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "pdas/core.hpp"
#include "pdas/diff_op.hpp"

namespace pdas {

/// Rows whose primal sign or dual bound is violated by a subspace minimizer.
struct Violations {
  std::vector<std::size_t> vp;   // in P with (Dθ)_j < 0
  std::vector<std::size_t> vn;   // in N with (Dθ)_j > 0
  std::vector<std::size_t> vap;  // in A with z_j above its upper bound
  std::vector<std::size_t> van;  // in A with z_j below its lower bound

  std::size_t count() const noexcept { return vp.size() + vn.size() + vap.size() + van.size(); }
  bool empty() const noexcept { return count() == 0; }
  /// V, sorted ascending.
  std::vector<std::size_t> all() const;
};

struct SsmResult {
  PrimalDualPoint point;
  Vector d_theta;  // Dθ
  Violations violations;
};

/// Dual box of a row: [−1, 1] for L1, [0, 1] for L1Pos.
double dual_lower(Penalty p) noexcept;
inline constexpr double dual_upper = 1.0;

/// Subspace minimizer of a sign partition: z fixed on P ∪ N, z_A from the
/// banded Gram system, θ = y − λDᵀz.
SsmResult ssm(const TFProblem& problem, const DiffOp& op, const SignPartition& partition);
SsmResult ssm(const TFProblem& problem, const SignPartition& partition);

/// P ← (P∖V_P) ∪ V_AP, N ← (N∖V_N) ∪ V_AN, A ← (A∖(V_AP ∪ V_AN)) ∪ V_P ∪ V_N.
SignPartition partition_update_standard(const SignPartition& partition,
                                        const Violations& violations);

/// The standard update restricted to `rows` ⊆ V: each row moves to the set
/// its violation points at.
SignPartition partition_update_rows(const SignPartition& partition, const Violations& violations,
                                    std::span<const std::size_t> rows);

/// KKT test: stationarity θ = y − λDᵀz, the dual box, and complementarity
/// between the sign of (Dθ)_j and z_j, all within `tol`.
bool optimality_check_tf(const TFProblem& problem, const PrimalDualPoint& point, double tol);

// ---------------------------------------------------------------------------

struct Sf1Config {
  int t_max = 5;
};

struct Sf1State {
  std::size_t v_best = static_cast<std::size_t>(-1);
  int t = 0;
};

struct Sf2Config {
  std::size_t m = 5;
  double delta_s = 0.9;
  double delta_e = 1.1;
  double p0 = 1.0;

  void validate() const;
};

struct Sf2State {
  std::deque<std::size_t> queue;
  double p = 1.0;
};

/// What a solver did in one iteration, for tracing and invariant checks.
struct TfIterate {
  std::size_t iteration = 0;
  const SignPartition* partition = nullptr;  // partition fed to the SSM
  const SsmResult* ssm = nullptr;
  /// SF1: true when the single-row fallback was used.
  bool fallback = false;
  std::optional<Sf1State> sf1;
  /// SF2: state after the queue/proportion update and the proportion used.
  std::optional<Sf2State> sf2;
  /// Rows moved by the update (0 on the terminating iteration).
  std::size_t moved = 0;
};

using TfObserver = std::function<void(const TfIterate&)>;

enum class TfVariant : std::uint8_t { Plain, Sf1, Sf2 };

std::string to_string(TfVariant v);
TfVariant parse_variant(const std::string& s);

struct TfSolution {
  PrimalDualPoint point;
  /// Partition of the last subspace minimizer; warm-starts related problems.
  SignPartition partition;
  SolveReport report;
};

inline constexpr std::size_t default_max_iter = 800;

/// Plain active-set iteration. Stops with Cycled when a partition repeats.
TfSolution tf_solve_plain(const TFProblem& problem,
                          const std::optional<SignPartition>& initial = std::nullopt,
                          std::size_t max_iter = default_max_iter,
                          const TfObserver& observer = {});

/// Falls back to moving the smallest violated row after t_max consecutive
/// iterations without a new best |V|.
TfSolution tf_solve_sf1(const TFProblem& problem,
                        const std::optional<SignPartition>& initial = std::nullopt,
                        const Sf1Config& config = {}, std::size_t max_iter = default_max_iter,
                        const TfObserver& observer = {});

/// Moves only the ⌊p|V|⌋ largest violations, adapting p against the maximum
/// of a FIFO queue of recent |V| values.
TfSolution tf_solve_sf2(const TFProblem& problem,
                        const std::optional<SignPartition>& initial = std::nullopt,
                        const Sf2Config& config = {}, std::size_t max_iter = default_max_iter,
                        const TfObserver& observer = {});

struct TfSolverConfig {
  TfVariant variant = TfVariant::Sf2;
  Sf1Config sf1;
  Sf2Config sf2;
  std::size_t max_iter = default_max_iter;
};

TfSolution tf_solve(const TFProblem& problem, const TfSolverConfig& config,
                    const std::optional<SignPartition>& initial = std::nullopt,
                    const TfObserver& observer = {});

}  // namespace pdas
