// Problem definitions, partitions and solve reports shared by every solver.
//
// Indices are 0-based everywhere in the library. The file formats in io.hpp
// are 1-based and convert at the boundary.
#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace pdas {

using Vector = std::vector<double>;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input violates a documented precondition (sizes, weights, coverage).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Malformed input file. `line()` is 1-based, 0 when unknown.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line);
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// A factorization hit a non-positive pivot.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// An iterative reference solver ran out of sweeps.
class NotConverged : public Error {
 public:
  using Error::Error;
};

/// Should never happen; indicates a bug in a solver or checker.
class InternalError : public Error {
 public:
  using Error::Error;
};

// ---------------------------------------------------------------------------
// Problems
// ---------------------------------------------------------------------------

/// Weighted isotonic regression: min ½ Σ wᵢ(yᵢ − θᵢ)² s.t. θ₁ ≤ … ≤ θₙ.
class IRProblem {
 public:
  /// Unit weights.
  explicit IRProblem(Vector y);
  IRProblem(Vector y, Vector weights);

  std::size_t size() const noexcept { return y_.size(); }
  std::span<const double> y() const noexcept { return y_; }
  std::span<const double> weights() const noexcept { return w_; }

 private:
  Vector y_;
  Vector w_;
};

enum class Penalty : std::uint8_t {
  L1,     // ‖Dθ‖₁
  L1Pos,  // ‖(Dθ)₊‖₁
};

/// Trend filtering with unit weights: min ½‖y − θ‖² + λ g(Dθ), D of order d.
class TFProblem {
 public:
  TFProblem(Vector y, double lambda, int order, Penalty penalty);

  std::size_t size() const noexcept { return y_.size(); }
  /// Number of rows of the difference operator, n − d.
  std::size_t rows() const noexcept { return y_.size() - static_cast<std::size_t>(order_); }
  std::span<const double> y() const noexcept { return y_; }
  double lambda() const noexcept { return lambda_; }
  int order() const noexcept { return order_; }
  Penalty penalty() const noexcept { return penalty_; }

 private:
  Vector y_;
  double lambda_;
  int order_;
  Penalty penalty_;
};

std::string to_string(Penalty p);
Penalty parse_penalty(const std::string& s);

// ---------------------------------------------------------------------------
// Isotonic partitions
// ---------------------------------------------------------------------------

/// Inclusive index range [lo, hi].
struct BlockRange {
  std::size_t lo = 0;
  std::size_t hi = 0;
  friend bool operator==(const BlockRange&, const BlockRange&) = default;
};

/// Block layout without statistics; what partition files store.
struct BlockLayout {
  std::size_t n = 0;
  std::vector<BlockRange> ranges;

  /// Throws ValidationError unless the ranges tile 0..n-1 in order.
  void validate() const;
  friend bool operator==(const BlockLayout&, const BlockLayout&) = default;
};

/// One block with cached weighted sum α = Σwᵢyᵢ, weight β = Σwᵢ, mean μ = α/β.
struct Block {
  std::size_t lo = 0;
  std::size_t hi = 0;
  double alpha = 0.0;
  double beta = 0.0;
  double mu = 0.0;
};

/// Ordered consecutive blocks covering 0..n-1.
class BlockPartition {
 public:
  BlockPartition(const IRProblem& problem, const BlockLayout& layout);

  static BlockPartition singletons(const IRProblem& problem);
  static BlockPartition whole(const IRProblem& problem);
  /// Adopts precomputed blocks; validates coverage only.
  static BlockPartition from_blocks(std::size_t n, std::vector<Block> blocks);

  std::size_t n() const noexcept { return n_; }
  std::size_t block_count() const noexcept { return blocks_.size(); }
  std::span<const Block> blocks() const noexcept { return blocks_; }
  const Block& block(std::size_t b) const { return blocks_.at(b); }

  /// Replaces blocks first..last (inclusive) by their union.
  void merge(std::size_t first, std::size_t last);
  /// Splits block b after element index `at` (lo ≤ at < hi).
  void split(const IRProblem& problem, std::size_t b, std::size_t at);

  /// θᵢ = μ of the block containing i.
  Vector expand() const;
  BlockLayout layout() const;

 private:
  BlockPartition() = default;
  std::size_t n_ = 0;
  std::vector<Block> blocks_;
};

/// Statistics of y over [lo, hi] recomputed from scratch.
Block make_block(const IRProblem& problem, std::size_t lo, std::size_t hi);

// ---------------------------------------------------------------------------
// Trend filtering partitions
// ---------------------------------------------------------------------------

enum class Label : std::uint8_t { P, N, A };

/// Disjoint cover (P, N, A) of the operator rows 0..m-1. Stored as one label
/// per row so disjointness and coverage hold by construction.
class SignPartition {
 public:
  SignPartition() = default;
  explicit SignPartition(std::vector<Label> labels);
  /// Throws ValidationError if the sets overlap, miss a row or go out of range.
  SignPartition(std::size_t m, std::span<const std::size_t> P, std::span<const std::size_t> N,
                std::span<const std::size_t> A);

  static SignPartition all_active(std::size_t m);

  std::size_t size() const noexcept { return labels_.size(); }
  Label label(std::size_t j) const { return labels_.at(j); }
  void set(std::size_t j, Label l) { labels_.at(j) = l; }
  std::span<const Label> labels() const noexcept { return labels_; }

  std::vector<std::size_t> P() const { return collect(Label::P); }
  std::vector<std::size_t> N() const { return collect(Label::N); }
  std::vector<std::size_t> A() const { return collect(Label::A); }
  /// I = P ∪ N.
  std::vector<std::size_t> inactive() const;

  /// Compact key for hashing visited partitions.
  std::string key() const;

  friend bool operator==(const SignPartition&, const SignPartition&) = default;

 private:
  std::vector<std::size_t> collect(Label l) const;
  std::vector<Label> labels_;
};

// ---------------------------------------------------------------------------
// Solutions and reports
// ---------------------------------------------------------------------------

struct PrimalDualPoint {
  Vector theta;
  Vector z;
};

enum class SolveStatus : std::uint8_t { Optimal, IterationLimit, Cycled };

std::string to_string(SolveStatus s);
SolveStatus parse_status(const std::string& s);

struct SolveReport {
  SolveStatus status = SolveStatus::Optimal;
  std::size_t iterations = 0;
  std::size_t merge_count = 0;
  std::size_t split_count = 0;
  /// Block-mean divisions (isotonic solvers only).
  std::size_t division_count = 0;
  /// |V| per iteration (trend filtering only).
  std::vector<std::size_t> violation_trajectory;
  /// Distance between the repeated partitions when status is Cycled.
  std::size_t cycle_period = 0;
  double objective = 0.0;
  double wall_time = 0.0;

  friend bool operator==(const SolveReport&, const SolveReport&) = default;
};

/// ½ Σ wᵢ(yᵢ − θᵢ)².
double objective_ir(const IRProblem& problem, std::span<const double> theta);
/// ½‖y − θ‖² + λ g(Dθ).
double objective_tf(const TFProblem& problem, std::span<const double> theta);

/// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double x) noexcept;
  double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace pdas
