#pragma once

#include <cmath>
#include <string>

#include "ern/errors.hpp"

namespace ern {

namespace detail {

inline void check_unit_range(double v, const char* field) {
  if (std::isnan(v) || v < 0.0 || v > 1.0)
    throw ValidationError(std::string(field) + " must be in [0,1], got " +
                          std::to_string(v));
}

}  // namespace detail

// Security-impact weight per vulnerability category. Category 1 is full
// administrative compromise, category 8 an unprivileged outsider.
inline double impact_category_weight(int category) {
  static constexpr double kTable[8] = {1.0, 0.8, 0.6, 0.5, 0.4, 0.2, 0.1, 0.0};
  if (category < 1 || category > 8)
    throw ValidationError("impact_category must be in [1,8], got " +
                          std::to_string(category));
  return kTable[category - 1];
}

// Risk weight of a vertex: arithmetic mean of the node's functional value,
// the exploit probability, and the tabulated impact weight. Always in [0,1].
inline double compute_weight(double function_value, double exploit_probability,
                             double impact_weight) {
  detail::check_unit_range(function_value, "function_value");
  detail::check_unit_range(exploit_probability, "exploit_probability");
  detail::check_unit_range(impact_weight, "impact_weight");
  return (function_value + exploit_probability + impact_weight) / 3.0;
}

}  // namespace ern
