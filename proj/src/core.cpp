#include "pdas/core.hpp"

#include <algorithm>
#include <cmath>

#include "pdas/diff_op.hpp"

namespace pdas {

ParseError::ParseError(const std::string& what, std::size_t line)
    : Error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

namespace {

void require_finite(std::span<const double> v, const char* name) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v[i])) {
      throw ValidationError(std::string(name) + "[" + std::to_string(i) + "] is not finite");
    }
  }
}

void require_size(std::span<const double> v, std::size_t n, const char* what) {
  if (v.size() != n) {
    throw ValidationError(std::string(what) + ": expected length " + std::to_string(n) + ", got " +
                          std::to_string(v.size()));
  }
}

}  // namespace

IRProblem::IRProblem(Vector y) : IRProblem(y, Vector(y.size(), 1.0)) {}

IRProblem::IRProblem(Vector y, Vector weights) : y_(std::move(y)), w_(std::move(weights)) {
  if (y_.empty()) throw ValidationError("isotonic problem needs n >= 1");
  require_size(w_, y_.size(), "weights");
  require_finite(y_, "y");
  require_finite(w_, "weights");
  for (std::size_t i = 0; i < w_.size(); ++i) {
    if (!(w_[i] > 0.0)) throw ValidationError("weights[" + std::to_string(i) + "] must be > 0");
  }
}

TFProblem::TFProblem(Vector y, double lambda, int order, Penalty penalty)
    : y_(std::move(y)), lambda_(lambda), order_(order), penalty_(penalty) {
  if (order_ < 1) throw ValidationError("difference order must be >= 1");
  if (y_.size() <= static_cast<std::size_t>(order_)) {
    throw ValidationError("trend filtering needs n > order");
  }
  if (!(lambda_ > 0.0) || !std::isfinite(lambda_)) throw ValidationError("lambda must be > 0");
  require_finite(y_, "y");
}

std::string to_string(Penalty p) { return p == Penalty::L1 ? "l1" : "l1pos"; }

Penalty parse_penalty(const std::string& s) {
  if (s == "l1") return Penalty::L1;
  if (s == "l1pos") return Penalty::L1Pos;
  throw ValidationError("unknown penalty '" + s + "' (expected l1 or l1pos)");
}

std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal: return "Optimal";
    case SolveStatus::IterationLimit: return "IterationLimit";
    case SolveStatus::Cycled: return "Cycled";
  }
  return "?";
}

SolveStatus parse_status(const std::string& s) {
  if (s == "Optimal") return SolveStatus::Optimal;
  if (s == "IterationLimit") return SolveStatus::IterationLimit;
  if (s == "Cycled") return SolveStatus::Cycled;
  throw ValidationError("unknown status '" + s + "'");
}

// ---------------------------------------------------------------------------

void BlockLayout::validate() const {
  if (n == 0) throw ValidationError("partition must cover at least one index");
  if (ranges.empty()) throw ValidationError("partition has no blocks");
  std::size_t next = 0;
  for (const auto& r : ranges) {
    if (r.lo != next) {
      throw ValidationError("block [" + std::to_string(r.lo + 1) + "," + std::to_string(r.hi + 1) +
                            "] does not start at " + std::to_string(next + 1) +
                            " (gap or overlap)");
    }
    if (r.hi < r.lo) throw ValidationError("block with hi < lo");
    next = r.hi + 1;
  }
  if (next != n) {
    throw ValidationError("blocks cover 1.." + std::to_string(next) + " but n = " +
                          std::to_string(n));
  }
}

Block make_block(const IRProblem& problem, std::size_t lo, std::size_t hi) {
  auto y = problem.y();
  auto w = problem.weights();
  Block b{lo, hi, 0.0, 0.0, 0.0};
  for (std::size_t i = lo; i <= hi; ++i) {
    b.alpha += w[i] * y[i];
    b.beta += w[i];
  }
  b.mu = b.alpha / b.beta;
  return b;
}

BlockPartition::BlockPartition(const IRProblem& problem, const BlockLayout& layout) {
  layout.validate();
  if (layout.n != problem.size()) {
    throw ValidationError("partition covers n = " + std::to_string(layout.n) +
                          " but the problem has n = " + std::to_string(problem.size()));
  }
  n_ = layout.n;
  blocks_.reserve(layout.ranges.size());
  for (const auto& r : layout.ranges) blocks_.push_back(make_block(problem, r.lo, r.hi));
}

BlockPartition BlockPartition::singletons(const IRProblem& problem) {
  BlockPartition part;
  part.n_ = problem.size();
  part.blocks_.reserve(part.n_);
  auto y = problem.y();
  auto w = problem.weights();
  for (std::size_t i = 0; i < part.n_; ++i) {
    const double a = w[i] * y[i];
    part.blocks_.push_back({i, i, a, w[i], a / w[i]});
  }
  return part;
}

BlockPartition BlockPartition::whole(const IRProblem& problem) {
  BlockPartition part;
  part.n_ = problem.size();
  part.blocks_.push_back(make_block(problem, 0, part.n_ - 1));
  return part;
}

BlockPartition BlockPartition::from_blocks(std::size_t n, std::vector<Block> blocks) {
  BlockPartition part;
  part.n_ = n;
  part.blocks_ = std::move(blocks);
  part.layout().validate();
  return part;
}

void BlockPartition::merge(std::size_t first, std::size_t last) {
  if (first > last || last >= blocks_.size()) throw ValidationError("merge range out of bounds");
  Block& m = blocks_[first];
  for (std::size_t b = first + 1; b <= last; ++b) {
    m.alpha += blocks_[b].alpha;
    m.beta += blocks_[b].beta;
  }
  m.hi = blocks_[last].hi;
  m.mu = m.alpha / m.beta;
  blocks_.erase(blocks_.begin() + static_cast<std::ptrdiff_t>(first) + 1,
                blocks_.begin() + static_cast<std::ptrdiff_t>(last) + 1);
}

void BlockPartition::split(const IRProblem& problem, std::size_t b, std::size_t at) {
  if (b >= blocks_.size()) throw ValidationError("split block out of bounds");
  const Block old = blocks_[b];
  if (at < old.lo || at >= old.hi) throw ValidationError("split point must satisfy lo <= at < hi");
  blocks_[b] = make_block(problem, old.lo, at);
  blocks_.insert(blocks_.begin() + static_cast<std::ptrdiff_t>(b) + 1,
                 make_block(problem, at + 1, old.hi));
}

Vector BlockPartition::expand() const {
  Vector theta(n_);
  for (const auto& b : blocks_) std::fill(theta.begin() + b.lo, theta.begin() + b.hi + 1, b.mu);
  return theta;
}

BlockLayout BlockPartition::layout() const {
  BlockLayout out{n_, {}};
  out.ranges.reserve(blocks_.size());
  for (const auto& b : blocks_) out.ranges.push_back({b.lo, b.hi});
  return out;
}

// ---------------------------------------------------------------------------

SignPartition::SignPartition(std::vector<Label> labels) : labels_(std::move(labels)) {}

SignPartition::SignPartition(std::size_t m, std::span<const std::size_t> P,
                             std::span<const std::size_t> N, std::span<const std::size_t> A) {
  constexpr auto unset = static_cast<Label>(0xff);
  std::vector<Label> labels(m, unset);
  auto assign = [&](std::span<const std::size_t> set, Label l, const char* name) {
    for (auto j : set) {
      if (j >= m) {
        throw ValidationError(std::string("index ") + std::to_string(j + 1) + " in " + name +
                              " exceeds m = " + std::to_string(m));
      }
      if (labels[j] != unset) {
        throw ValidationError(std::string("index ") + std::to_string(j + 1) +
                              " appears in more than one set (" + name + ")");
      }
      labels[j] = l;
    }
  };
  assign(P, Label::P, "P");
  assign(N, Label::N, "N");
  assign(A, Label::A, "A");
  for (std::size_t j = 0; j < m; ++j) {
    if (labels[j] == unset) {
      throw ValidationError("index " + std::to_string(j + 1) + " is in none of P, N, A");
    }
  }
  labels_ = std::move(labels);
}

SignPartition SignPartition::all_active(std::size_t m) {
  return SignPartition(std::vector<Label>(m, Label::A));
}

std::vector<std::size_t> SignPartition::collect(Label l) const {
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < labels_.size(); ++j) {
    if (labels_[j] == l) out.push_back(j);
  }
  return out;
}

std::vector<std::size_t> SignPartition::inactive() const {
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < labels_.size(); ++j) {
    if (labels_[j] != Label::A) out.push_back(j);
  }
  return out;
}

std::string SignPartition::key() const {
  std::string k(labels_.size(), 'A');
  for (std::size_t j = 0; j < labels_.size(); ++j) {
    k[j] = labels_[j] == Label::P ? 'P' : (labels_[j] == Label::N ? 'N' : 'A');
  }
  return k;
}

// ---------------------------------------------------------------------------

void CompensatedSum::add(double x) noexcept {
  const double t = sum_ + x;
  if (std::abs(sum_) >= std::abs(x)) {
    comp_ += (sum_ - t) + x;
  } else {
    comp_ += (x - t) + sum_;
  }
  sum_ = t;
}

double objective_ir(const IRProblem& problem, std::span<const double> theta) {
  require_size(theta, problem.size(), "objective_ir theta");
  auto y = problem.y();
  auto w = problem.weights();
  CompensatedSum s;
  for (std::size_t i = 0; i < theta.size(); ++i) {
    const double r = y[i] - theta[i];
    s.add(w[i] * r * r);
  }
  return 0.5 * s.value();
}

double objective_tf(const TFProblem& problem, std::span<const double> theta) {
  require_size(theta, problem.size(), "objective_tf theta");
  auto y = problem.y();
  CompensatedSum fit;
  for (std::size_t i = 0; i < theta.size(); ++i) {
    const double r = y[i] - theta[i];
    fit.add(r * r);
  }
  const DiffOp op(problem.order(), problem.size());
  const Vector dtheta = op.apply(theta);
  CompensatedSum reg;
  for (double v : dtheta) {
    if (problem.penalty() == Penalty::L1) {
      reg.add(std::abs(v));
    } else if (v > 0.0) {
      reg.add(v);
    }
  }
  return 0.5 * fit.value() + problem.lambda() * reg.value();
}

}  // namespace pdas
