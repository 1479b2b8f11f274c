#include "pdas/bench.hpp"

#include <algorithm>
#include <atomic>
#include <thread>

#include "pdas/generate.hpp"
#include "pdas/io.hpp"

namespace pdas {

void ExperimentGrid::validate() const {
  if (sizes.empty() || variants.empty() || penalties.empty() || orders.empty()) {
    throw ValidationError("experiment grid has an empty dimension");
  }
  if (repeats < 1) throw ValidationError("repeats must be >= 1");
  if (max_iter < 1) throw ValidationError("max_iter must be >= 1");
  if (!(lambda > 0.0)) throw ValidationError("lambda must be > 0");
  for (int d : orders) {
    if (d < 1) throw ValidationError("orders must be >= 1");
    for (auto n : sizes) {
      if (n <= static_cast<std::size_t>(d)) throw ValidationError("every size must exceed the order");
    }
  }
  sf2.validate();
}

double median(std::vector<double> values) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  const std::size_t k = values.size() / 2;
  return values.size() % 2 ? values[k] : 0.5 * (values[k - 1] + values[k]);
}

Vector grid_instance(const ExperimentGrid& grid, std::size_t n, std::size_t repeat) {
  return generate({GenKind::Uniform, n, derive_seed(grid.seed, n, repeat)});
}

namespace {

struct RunOutcome {
  bool success = false;
  double time = 0.0;
  double iters = 0.0;
};

}  // namespace

std::vector<GridRow> run_grid(const ExperimentGrid& grid, const GridProgress& progress) {
  grid.validate();
  std::vector<GridRow> rows;
  for (auto n : grid.sizes) {
    for (int d : grid.orders) {
      for (auto pen : grid.penalties) {
        for (auto var : grid.variants) rows.push_back({n, pen, d, var, 0.0, 0.0, 0.0});
      }
    }
  }

  for (auto n : grid.sizes) {
    std::vector<Vector> data;
    for (std::size_t r = 0; r < grid.repeats; ++r) data.push_back(grid_instance(grid, n, r));

    std::vector<std::size_t> cells;
    for (std::size_t c = 0; c < rows.size(); ++c) {
      if (rows[c].n == n) cells.push_back(c);
    }
    std::vector<RunOutcome> outcomes(cells.size() * grid.repeats);
    auto run_task = [&](std::size_t task) {
      const GridRow& row = rows[cells[task / grid.repeats]];
      const std::size_t r = task % grid.repeats;
      RunOutcome& out = outcomes[task];
      try {
        const TFProblem problem(data[r], grid.lambda, row.order, row.penalty);
        TfSolverConfig cfg{row.variant, grid.sf1, grid.sf2, grid.max_iter};
        const TfSolution sol = tf_solve(problem, cfg);
        out.success = sol.report.status == SolveStatus::Optimal;
        out.time = sol.report.wall_time;
        out.iters = static_cast<double>(sol.report.iterations);
      } catch (const Error&) {
        out.success = false;
      }
    };

    const unsigned jobs = std::max(1u, grid.jobs);
    if (jobs == 1) {
      for (std::size_t t = 0; t < outcomes.size(); ++t) run_task(t);
    } else {
      std::atomic<std::size_t> next{0};
      std::vector<std::jthread> pool;
      for (unsigned k = 0; k < jobs; ++k) {
        pool.emplace_back([&] {
          for (std::size_t t = next++; t < outcomes.size(); t = next++) run_task(t);
        });
      }
    }

    for (std::size_t k = 0; k < cells.size(); ++k) {
      GridRow& row = rows[cells[k]];
      std::vector<double> times_ok, iters_ok, times_all, iters_all;
      std::size_t ok = 0;
      for (std::size_t r = 0; r < grid.repeats; ++r) {
        const RunOutcome& o = outcomes[k * grid.repeats + r];
        times_all.push_back(o.time);
        iters_all.push_back(o.iters);
        if (o.success) {
          ++ok;
          times_ok.push_back(o.time);
          iters_ok.push_back(o.iters);
        }
      }
      row.success = static_cast<double>(ok) / static_cast<double>(grid.repeats);
      row.med_time_s = median(ok ? times_ok : times_all);
      row.med_iters = median(ok ? iters_ok : iters_all);
      if (progress) progress(row);
    }
  }
  return rows;
}

std::string format_grid_csv(const std::vector<GridRow>& rows) {
  std::string out = std::string(grid_csv_header) + "\n";
  for (const auto& r : rows) {
    out += std::to_string(r.n) + "," + to_string(r.penalty) + "," + std::to_string(r.order) + "," +
           to_string(r.variant) + "," + io::format_double(r.success) + "," +
           io::format_double(r.med_time_s) + "," + io::format_double(r.med_iters) + "\n";
  }
  return out;
}

}  // namespace pdas
