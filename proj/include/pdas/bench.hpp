// Success-rate grids for the trend-filtering solver variants.
#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "pdas/core.hpp"
#include "pdas/trend_filter.hpp"

namespace pdas {

struct ExperimentGrid {
  std::vector<std::size_t> sizes{10'000};
  std::size_t repeats = 10;
  std::vector<TfVariant> variants{TfVariant::Plain, TfVariant::Sf1, TfVariant::Sf2};
  std::vector<Penalty> penalties{Penalty::L1Pos, Penalty::L1};
  std::vector<int> orders{1, 2};
  double lambda = 10.0;
  std::size_t max_iter = default_max_iter;
  std::uint64_t seed = 0;
  Sf1Config sf1;
  Sf2Config sf2;
  /// Worker threads; results never depend on it.
  unsigned jobs = 1;

  void validate() const;
};

struct GridRow {
  std::size_t n = 0;
  Penalty penalty = Penalty::L1;
  int order = 1;
  TfVariant variant = TfVariant::Plain;
  /// Fraction of repeats that reached Optimal within max_iter.
  double success = 0.0;
  /// Medians over the successful repeats (over all repeats if none succeeded).
  double med_time_s = 0.0;
  double med_iters = 0.0;
};

/// Uniform[0,10] instance for repeat r of size n; shared by every
/// penalty/order/variant so the variants see identical data.
Vector grid_instance(const ExperimentGrid& grid, std::size_t n, std::size_t repeat);

using GridProgress = std::function<void(const GridRow&)>;

/// Rows ordered by (n, order, penalty, variant) as listed in the grid.
/// A run that throws is recorded as a failure.
std::vector<GridRow> run_grid(const ExperimentGrid& grid, const GridProgress& progress = {});

inline constexpr const char* grid_csv_header = "n,penalty,order,variant,success,med_time_s,med_iters";
std::string format_grid_csv(const std::vector<GridRow>& rows);

double median(std::vector<double> values);

}  // namespace pdas
