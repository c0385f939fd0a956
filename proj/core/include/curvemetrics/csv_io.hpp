#pragma once

#include <iosfwd>

#include "curvemetrics/fitting.hpp"
#include "curvemetrics/study.hpp"

namespace curvemetrics {

/// Reads a dataset with header `x,y`. Blank lines are skipped; anything else
/// that does not parse raises ValidationError naming the line.
[[nodiscard]] auto read_dataset_csv(std::istream& in) -> Dataset;

/// One row per estimate; `<label>_value` and `<label>_rank` columns per
/// measure. Divergent values print as inf, -inf or undefined; failed cells
/// print `error`.
void write_rank_table_csv(const RankTable& table, std::ostream& out);

}  // namespace curvemetrics
