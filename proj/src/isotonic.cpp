#include "pdas/isotonic.hpp"

#include <algorithm>
#include <chrono>

namespace pdas {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

}  // namespace

IrSolution pav_solve(const IRProblem& problem) {
  const auto t0 = Clock::now();
  const std::size_t n = problem.size();
  auto y = problem.y();
  auto w = problem.weights();

  // The stack holds the pooled blocks left of the cursor; its top is C.
  std::vector<Block> stack;
  stack.reserve(n);
  SolveReport report;
  for (std::size_t i = 0; i < n; ++i) {
    const double a = w[i] * y[i];
    stack.push_back({i, i, a, w[i], a / w[i]});
    bool pooled = false;
    while (stack.size() >= 2 && stack[stack.size() - 2].mu > stack.back().mu) {
      const Block top = stack.back();
      stack.pop_back();
      Block& c = stack.back();
      c.alpha += top.alpha;
      c.beta += top.beta;
      c.hi = top.hi;
      c.mu = c.alpha / c.beta;
      ++report.merge_count;
      ++report.division_count;
      pooled = true;
    }
    if (pooled) ++report.iterations;
  }

  auto partition = BlockPartition::from_blocks(n, std::move(stack));
  IrSolution sol{partition.expand(), ir_dual(problem, partition), std::move(partition), report};
  sol.report.status = SolveStatus::Optimal;
  sol.report.objective = objective_ir(problem, sol.theta);
  sol.report.wall_time = seconds_since(t0);
  return sol;
}

Vector ir_dual(const IRProblem& problem, const BlockPartition& partition) {
  if (partition.n() != problem.size()) throw ValidationError("ir_dual: partition size mismatch");
  const std::size_t n = problem.size();
  auto y = problem.y();
  auto w = problem.weights();
  Vector z(n - 1, 0.0);
  for (const auto& b : partition.blocks()) {
    double s = 0.0;
    for (std::size_t i = b.lo; i < b.hi; ++i) {
      s += w[i] * (y[i] - b.mu);
      z[i] = s;
    }
  }
  return z;
}

// ---------------------------------------------------------------------------

void IRState::reserve(std::size_t slots) {
  for (auto* v : {&lo_, &hi_, &prev_, &next_}) v->reserve(slots);
  for (auto* v : {&alpha_, &beta_, &mu_}) v->reserve(slots);
  alive_.reserve(slots);
}

void IRState::seal() {
  candidates_.resize(lo_.size());
  for (std::size_t id = 0; id < candidates_.size(); ++id) candidates_[id] = id;
  stamp_.assign(lo_.size(), 0);
}

void IRState::push_block(const Block& b) {
  const std::size_t id = lo_.size();
  lo_.push_back(b.lo);
  hi_.push_back(b.hi);
  alpha_.push_back(b.alpha);
  beta_.push_back(b.beta);
  mu_.push_back(b.mu);
  alive_.push_back(1);
  prev_.push_back(id == 0 ? npos : id - 1);
  next_.push_back(npos);
  if (id > 0) next_[id - 1] = id;
  if (head_ == npos) head_ = id;
  ++live_;
}

IRState pdas_ir_init(const IRProblem& problem, const BlockPartition& initial) {
  if (initial.n() != problem.size()) {
    throw ValidationError("initial partition covers n = " + std::to_string(initial.n()) +
                          " but the problem has n = " + std::to_string(problem.size()));
  }
  auto y = problem.y();
  auto w = problem.weights();
  IRState st;
  st.n_ = problem.size();
  st.reserve(st.n_);

  for (const auto& given : initial.blocks()) {
    // Statistics are recomputed: a warm-start partition may come from other data.
    const Block b = make_block(problem, given.lo, given.hi);
    double z = 0.0;
    std::size_t start = b.lo;
    for (std::size_t i = b.lo; i < b.hi; ++i) {
      z += w[i] * (y[i] - b.mu);
      if (z < 0.0) {
        st.push_block(make_block(problem, start, i));
        start = i + 1;
        ++st.splits_;
      }
    }
    st.push_block(make_block(problem, start, b.hi));
  }
  st.seal();
  return st;
}

IRState pdas_ir_init(const IRProblem& problem) {
  auto y = problem.y();
  auto w = problem.weights();
  IRState st;
  st.n_ = problem.size();
  st.reserve(st.n_);
  for (std::size_t i = 0; i < st.n_; ++i) {
    const double a = w[i] * y[i];
    st.push_block({i, i, a, w[i], a / w[i]});
  }
  st.seal();
  return st;
}

BlockPartition IRState::partition() const {
  std::vector<Block> blocks;
  blocks.reserve(live_);
  for (std::size_t id = head_; id != npos; id = next_[id]) {
    blocks.push_back({lo_[id], hi_[id], alpha_[id], beta_[id], mu_[id]});
  }
  return BlockPartition::from_blocks(n_, std::move(blocks));
}

std::vector<MergeRun> IRState::find_runs() const {
  ++epoch_;
  std::vector<MergeRun> runs;
  for (std::size_t c : candidates_) {
    if (!alive_[c] || stamp_[c] == epoch_) continue;
    const std::size_t nx = next_[c];
    if (nx == npos || !(mu_[c] > mu_[nx])) continue;
    std::size_t s = c;
    while (prev_[s] != npos && mu_[prev_[s]] > mu_[s]) s = prev_[s];
    std::size_t t = nx;
    while (next_[t] != npos && mu_[t] > mu_[next_[t]]) t = next_[t];
    for (std::size_t id = s;; id = next_[id]) {
      stamp_[id] = epoch_;
      if (id == t) break;
    }
    runs.push_back({s, t, lo_[s]});
  }
  // Candidates are kept in position order, so runs come out sorted already.
  auto by_lo = [](const MergeRun& a, const MergeRun& b) { return a.lo < b.lo; };
  if (!std::is_sorted(runs.begin(), runs.end(), by_lo)) std::sort(runs.begin(), runs.end(), by_lo);
  return runs;
}

void IRState::merge_runs(std::span<const MergeRun> runs) {
  for (const auto& run : runs) {
    const std::size_t f = run.first;
    double a = alpha_[f];
    double b = beta_[f];
    std::size_t absorbed = 0;
    for (std::size_t id = next_[f];; id = next_[id]) {
      a += alpha_[id];
      b += beta_[id];
      alive_[id] = 0;
      ++absorbed;
      if (id == run.last) break;
    }
    alpha_[f] = a;
    beta_[f] = b;
    mu_[f] = a / b;
    hi_[f] = hi_[run.last];
    next_[f] = next_[run.last];
    if (next_[f] != npos) prev_[next_[f]] = f;
    merges_ += absorbed;
    live_ -= absorbed;
    ++divisions_;
  }
  // Only pairs touching a merged block can be decreasing in the next pass.
  candidates_.clear();
  for (const auto& run : runs) {
    if (prev_[run.first] != npos) candidates_.push_back(prev_[run.first]);
    candidates_.push_back(run.first);
  }
}

bool pdas_merge_pass(IRState& state) {
  const auto runs = state.find_runs();
  if (runs.empty()) return false;
  state.merge_runs(runs);
  return true;
}

IrSolution pdas_ir_solve(const IRProblem& problem, const std::optional<BlockPartition>& initial,
                         const IrPassObserver& observer) {
  const auto t0 = Clock::now();
  IRState state = initial ? pdas_ir_init(problem, *initial) : pdas_ir_init(problem);
  if (observer) observer(0, state);
  std::size_t passes = 0;
  while (pdas_merge_pass(state)) {
    ++passes;
    if (observer) observer(passes, state);
  }

  auto partition = state.partition();
  IrSolution sol{partition.expand(), ir_dual(problem, partition), std::move(partition), {}};
  sol.report.status = SolveStatus::Optimal;
  sol.report.iterations = passes;
  sol.report.merge_count = state.merge_count();
  sol.report.split_count = state.split_count();
  sol.report.division_count = state.division_count();
  sol.report.objective = objective_ir(problem, sol.theta);
  sol.report.wall_time = seconds_since(t0);
  return sol;
}

}  // namespace pdas
