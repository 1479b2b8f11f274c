// File formats: data CSV, partition JSON and solve-report JSON.
//
// Partition files use 1-based indices:
//   block partition  {"n": 6, "blocks": [[1,3],[4,6]]}
//   sign partition   {"m": 4, "P": [3], "N": [1], "A": [2,4]}
#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>

#include "pdas/core.hpp"

namespace pdas::io {

struct DataColumns {
  Vector y;
  /// Empty when the file has a single column.
  Vector weights;
};

/// One record per line, `y` or `y,w`. A non-numeric first line is a header.
DataColumns read_data_csv(const std::filesystem::path& path);
DataColumns parse_data_csv(std::istream& in);

/// One value per line, shortest round-trip decimal form.
void write_vector_csv(const std::filesystem::path& path, std::span<const double> values);
std::string format_double(double v);

BlockLayout read_block_layout(const std::filesystem::path& path);
BlockLayout parse_block_layout(const std::string& text);
std::string format_block_layout(const BlockLayout& layout);
void write_block_layout(const std::filesystem::path& path, const BlockLayout& layout);

SignPartition read_sign_partition(const std::filesystem::path& path);
SignPartition parse_sign_partition(const std::string& text);
std::string format_sign_partition(const SignPartition& partition);
void write_sign_partition(const std::filesystem::path& path, const SignPartition& partition);

std::string format_report(const SolveReport& report);
SolveReport parse_report(const std::string& text);
void write_report(const std::filesystem::path& path, const SolveReport& report);

std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace pdas::io
