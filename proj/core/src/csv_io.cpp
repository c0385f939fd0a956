#include "curvemetrics/csv_io.hpp"

#include <charconv>
#include <istream>
#include <ostream>
#include <string>

#include "curvemetrics/error.hpp"

namespace curvemetrics {
namespace {

auto trim(std::string_view s) -> std::string_view {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

auto parse_double(std::string_view s, std::size_t line) -> double {
  s = trim(s);
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
    throw ValidationError("line " + std::to_string(line) + ": not a number '" + std::string(s) + "'",
                          "csv");
  return v;
}

}  // namespace

auto read_dataset_csv(std::istream& in) -> Dataset {
  std::string line;
  std::size_t number = 0;
  bool header = false;
  std::vector<double> xs;
  std::vector<double> ys;
  while (std::getline(in, line)) {
    ++number;
    const auto row = trim(line);
    if (row.empty()) continue;
    const auto comma = row.find(',');
    if (comma == std::string_view::npos || row.find(',', comma + 1) != std::string_view::npos)
      throw ValidationError("line " + std::to_string(number) + ": expected two columns", "csv");
    if (!header) {
      if (trim(row.substr(0, comma)) != "x" || trim(row.substr(comma + 1)) != "y")
        throw ValidationError("header must be x,y", "csv");
      header = true;
      continue;
    }
    xs.push_back(parse_double(row.substr(0, comma), number));
    ys.push_back(parse_double(row.substr(comma + 1), number));
  }
  if (!header) throw ValidationError("empty dataset file", "csv");
  return Dataset::make(std::move(xs), std::move(ys));
}

void write_rank_table_csv(const RankTable& table, std::ostream& out) {
  out << "estimate";
  for (const auto& col : table.columns) out << ',' << col.label << "_value," << col.label << "_rank";
  out << '\n';
  for (std::size_t i = 0; i < table.estimates.size(); ++i) {
    out << table.estimates[i];
    for (const auto& col : table.columns) {
      const auto& cell = col.cells[i];
      out << ',' << (cell.error ? std::string("error") : cell.value.to_string()) << ',' << cell.rank;
    }
    out << '\n';
  }
}

}  // namespace curvemetrics
