#pragma once

#include <vector>

#include "json.hpp"
#include "mz/grid.hpp"
#include "mz/operator.hpp"

namespace mz {

struct MomentRow {
  MultiIndex power;  // exponent per component
  double mean1 = 0.0;
  double mean2 = 0.0;
  double diff = 0.0;  // |mean1 - mean2|
};

struct MomentTable {
  std::vector<MomentRow> rows;
  double max_diff = 0.0;
  nlohmann::ordered_json to_json() const;
};

/// All exponent vectors over `components` values with 1 <= degree <= max_degree.
std::vector<MultiIndex> monomials_up_to(int components, int max_degree);

/// Spatial node averages of each monomial of the field values for both
/// fields. Degrees above 3 are rejected.
MomentTable young_measure_compare(const GridField& f1, const GridField& f2, const std::vector<MultiIndex>& moments);

}  // namespace mz
