#include "pdas/io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace pdas::io {

using nlohmann::json;

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

bool parse_double(const std::string& s, double& out) {
  if (s.empty()) return false;
  const char* first = s.data();
  if (*first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

std::size_t line_of_offset(const std::string& text, std::size_t offset) {
  offset = std::min(offset, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(),
                                                 text.begin() + static_cast<std::ptrdiff_t>(offset),
                                                 '\n'));
}

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    const std::size_t off = e.byte > 0 ? e.byte - 1 : 0;
    throw ParseError(std::string("malformed JSON: ") + e.what(), line_of_offset(text, off));
  }
}

std::vector<std::size_t> one_based_indices(const json& doc, const char* key, std::size_t limit) {
  if (!doc.contains(key) || !doc[key].is_array()) {
    throw ParseError(std::string("missing array \"") + key + "\"", 0);
  }
  std::vector<std::size_t> out;
  for (const auto& v : doc[key]) {
    if (!v.is_number_integer()) throw ParseError(std::string("non-integer index in ") + key, 0);
    const auto i = v.get<long long>();
    if (i < 1 || static_cast<std::size_t>(i) > limit) {
      throw ValidationError(std::string("index ") + std::to_string(i) + " in " + key +
                            " is outside 1.." + std::to_string(limit));
    }
    out.push_back(static_cast<std::size_t>(i - 1));
  }
  return out;
}

std::size_t require_count(const json& doc, const char* key) {
  if (!doc.is_object() || !doc.contains(key) || !doc[key].is_number_integer() ||
      doc[key].get<long long>() < 1) {
    throw ParseError(std::string("missing or invalid \"") + key + "\"", 0);
  }
  return doc[key].get<std::size_t>();
}

json indices_json(const std::vector<std::size_t>& idx) {
  json arr = json::array();
  for (auto i : idx) arr.push_back(i + 1);
  return arr;
}

}  // namespace

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
  if (!out) throw Error("write failed for " + path.string());
}

// ---------------------------------------------------------------------------

DataColumns parse_data_csv(std::istream& in) {
  DataColumns cols;
  std::string line;
  std::size_t lineno = 0;
  std::size_t width = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty()) continue;
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
      const auto comma = t.find(',', start);
      fields.push_back(trim(std::string_view(t).substr(start, comma - start)));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (fields.size() > 2) throw ParseError("expected 1 or 2 columns", lineno);
    std::vector<double> vals(fields.size());
    bool numeric = true;
    for (std::size_t k = 0; k < fields.size(); ++k) numeric = numeric && parse_double(fields[k], vals[k]);
    if (!numeric) {
      if (cols.y.empty() && width == 0) {
        width = fields.size();  // header
        continue;
      }
      throw ParseError("non-numeric value", lineno);
    }
    if (width == 0) width = fields.size();
    if (fields.size() != width) throw ParseError("inconsistent column count", lineno);
    cols.y.push_back(vals[0]);
    if (width == 2) cols.weights.push_back(vals[1]);
  }
  if (cols.y.empty()) throw ParseError("no data rows", lineno);
  return cols;
}

DataColumns read_data_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  return parse_data_csv(in);
}

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

void write_vector_csv(const std::filesystem::path& path, std::span<const double> values) {
  std::string text;
  text.reserve(values.size() * 20);
  for (double v : values) {
    text += format_double(v);
    text += '\n';
  }
  write_text(path, text);
}

// ---------------------------------------------------------------------------

BlockLayout parse_block_layout(const std::string& text) {
  const json doc = parse_json(text);
  BlockLayout layout;
  layout.n = require_count(doc, "n");
  if (!doc.contains("blocks") || !doc["blocks"].is_array()) {
    throw ParseError("missing array \"blocks\"", 0);
  }
  for (const auto& b : doc["blocks"]) {
    if (!b.is_array() || b.size() != 2 || !b[0].is_number_integer() || !b[1].is_number_integer()) {
      throw ParseError("each block must be [lo, hi]", 0);
    }
    const auto lo = b[0].get<long long>();
    const auto hi = b[1].get<long long>();
    if (lo < 1 || hi < lo) throw ValidationError("invalid block [" + std::to_string(lo) + "," +
                                                 std::to_string(hi) + "]");
    layout.ranges.push_back({static_cast<std::size_t>(lo - 1), static_cast<std::size_t>(hi - 1)});
  }
  layout.validate();
  return layout;
}

std::string format_block_layout(const BlockLayout& layout) {
  json blocks = json::array();
  for (const auto& r : layout.ranges) blocks.push_back({r.lo + 1, r.hi + 1});
  json doc;
  doc["n"] = layout.n;
  doc["blocks"] = std::move(blocks);
  return doc.dump() + "\n";
}

BlockLayout read_block_layout(const std::filesystem::path& path) {
  return parse_block_layout(read_text(path));
}

void write_block_layout(const std::filesystem::path& path, const BlockLayout& layout) {
  write_text(path, format_block_layout(layout));
}

SignPartition parse_sign_partition(const std::string& text) {
  const json doc = parse_json(text);
  const std::size_t m = require_count(doc, "m");
  const auto P = one_based_indices(doc, "P", m);
  const auto N = one_based_indices(doc, "N", m);
  const auto A = one_based_indices(doc, "A", m);
  return SignPartition(m, P, N, A);
}

std::string format_sign_partition(const SignPartition& partition) {
  json doc;
  doc["m"] = partition.size();
  doc["P"] = indices_json(partition.P());
  doc["N"] = indices_json(partition.N());
  doc["A"] = indices_json(partition.A());
  return doc.dump() + "\n";
}

SignPartition read_sign_partition(const std::filesystem::path& path) {
  return parse_sign_partition(read_text(path));
}

void write_sign_partition(const std::filesystem::path& path, const SignPartition& partition) {
  write_text(path, format_sign_partition(partition));
}

// ---------------------------------------------------------------------------

std::string format_report(const SolveReport& r) {
  json doc;
  doc["status"] = to_string(r.status);
  doc["iterations"] = r.iterations;
  doc["merge_count"] = r.merge_count;
  doc["split_count"] = r.split_count;
  doc["division_count"] = r.division_count;
  doc["violation_trajectory"] = r.violation_trajectory;
  doc["cycle_period"] = r.cycle_period;
  doc["objective"] = r.objective;
  doc["wall_time"] = r.wall_time;
  return doc.dump(2) + "\n";
}

SolveReport parse_report(const std::string& text) {
  const json doc = parse_json(text);
  SolveReport r;
  try {
    r.status = parse_status(doc.at("status").get<std::string>());
    r.iterations = doc.at("iterations").get<std::size_t>();
    r.merge_count = doc.at("merge_count").get<std::size_t>();
    r.split_count = doc.at("split_count").get<std::size_t>();
    r.division_count = doc.value("division_count", std::size_t{0});
    r.violation_trajectory = doc.at("violation_trajectory").get<std::vector<std::size_t>>();
    r.cycle_period = doc.value("cycle_period", std::size_t{0});
    r.objective = doc.at("objective").get<double>();
    r.wall_time = doc.at("wall_time").get<double>();
  } catch (const json::exception& e) {
    throw ParseError(std::string("invalid report: ") + e.what(), 0);
  }
  return r;
}

void write_report(const std::filesystem::path& path, const SolveReport& report) {
  write_text(path, format_report(report));
}

}  // namespace pdas::io
