// Isotonic regression solvers: pool adjacent violators and the primal-dual
// active-set method with warm starts and simultaneous run merges.
#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "pdas/core.hpp"

namespace pdas {

struct IrSolution {
  Vector theta;
  /// Multipliers of θᵢ ≤ θᵢ₊₁, length n−1.
  Vector z;
  BlockPartition partition;
  SolveReport report;
};

/// Pool adjacent violators from the singleton partition, with α/β caching.
IrSolution pav_solve(const IRProblem& problem);

/// Dual multipliers implied by a partition: within each block
/// zᵢ = Σ_{k=lo..i} wₖ(yₖ − μ_B), and zero at block boundaries.
Vector ir_dual(const IRProblem& problem, const BlockPartition& partition);

/// A maximal strictly decreasing run of block means. `first`/`last` are
/// opaque block handles of the owning IRState; `lo` is the first index.
struct MergeRun {
  std::size_t first = 0;
  std::size_t last = 0;
  std::size_t lo = 0;
};

/// Working state of the active-set method. Blocks live in a doubly linked
/// list so a merge costs O(1) regardless of how many blocks remain.
class IRState {
 public:
  std::size_t n() const noexcept { return n_; }
  std::size_t block_count() const noexcept { return live_; }
  std::size_t merge_count() const noexcept { return merges_; }
  std::size_t split_count() const noexcept { return splits_; }
  std::size_t division_count() const noexcept { return divisions_; }

  /// Snapshot of the current blocks in order.
  BlockPartition partition() const;

  /// Runs that the next pass merges, sorted by `lo`. Only the neighbourhood
  /// of blocks touched by the previous pass is scanned: every other adjacent
  /// pair was already nondecreasing.
  std::vector<MergeRun> find_runs() const;

  /// Merges exactly the runs returned by find_runs(), in the order given.
  /// The runs are disjoint, so every order yields the same partition.
  void merge_runs(std::span<const MergeRun> runs);

 private:
  friend IRState pdas_ir_init(const IRProblem&, const BlockPartition&);
  friend IRState pdas_ir_init(const IRProblem&);

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  void reserve(std::size_t slots);
  void push_block(const Block& b);
  void seal();

  std::size_t n_ = 0;
  std::size_t live_ = 0;
  std::size_t head_ = npos;
  std::size_t merges_ = 0;
  std::size_t splits_ = 0;
  std::size_t divisions_ = 0;

  // Per-slot block storage.
  std::vector<std::size_t> lo_, hi_, prev_, next_;
  std::vector<double> alpha_, beta_, mu_;
  std::vector<char> alive_;
  // Left blocks of adjacent pairs that may have become decreasing.
  std::vector<std::size_t> candidates_;
  // Scratch marks for find_runs(); a slot is visited when stamp == epoch.
  mutable std::vector<std::size_t> stamp_;
  mutable std::size_t epoch_ = 0;
};

/// Builds the initial state from J0: per-block means, duals by the running
/// sum rule, then every block is cut after each index with zᵢ < 0.
IRState pdas_ir_init(const IRProblem& problem, const BlockPartition& initial);
/// Same as starting from BlockPartition::singletons(problem).
IRState pdas_ir_init(const IRProblem& problem);

/// One simultaneous merge pass. Returns false when no run was found.
bool pdas_merge_pass(IRState& state);

using IrPassObserver = std::function<void(std::size_t pass, const IRState&)>;

/// Active-set solve; `initial` defaults to singletons. The observer, when
/// set, sees the state after initialization (pass 0) and after every pass
/// that merged something.
IrSolution pdas_ir_solve(const IRProblem& problem,
                         const std::optional<BlockPartition>& initial = std::nullopt,
                         const IrPassObserver& observer = {});

}  // namespace pdas
