#pragma once

#include <algorithm>
#include <span>
#include <string>
#include <vector>

#include "sad/errors.hpp"
#include "sad/types.hpp"

namespace sad {

enum class CombineStrategy { average, maximum, median };

/// Combines per-instance scores from several detectors into one score.
/// Stateless and pure. Raw scores of heterogeneous detectors are not
/// commensurable; calibrate or standardize per detector before averaging.
inline double combine(std::span<const double> scores, CombineStrategy strategy) {
  if (scores.empty()) {
    throw Error(ErrorKind::EmptyInput, "combine: no scores");
  }
  for (double s : scores) require_finite_scalar(s, "score");
  switch (strategy) {
    case CombineStrategy::average: {
      // sorted summation makes the result exactly permutation-invariant
      std::vector<double> v(scores.begin(), scores.end());
      std::sort(v.begin(), v.end());
      double sum = 0.0;
      for (double s : v) sum += s;
      return sum / static_cast<double>(v.size());
    }
    case CombineStrategy::maximum:
      return *std::max_element(scores.begin(), scores.end());
    case CombineStrategy::median: {
      std::vector<double> v(scores.begin(), scores.end());
      std::sort(v.begin(), v.end());
      const std::size_t n = v.size();
      return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
    }
  }
  throw Error(ErrorKind::BadParameter, "combine: unknown strategy");
}

inline std::string to_string(CombineStrategy s) {
  switch (s) {
    case CombineStrategy::average: return "average";
    case CombineStrategy::maximum: return "maximum";
    case CombineStrategy::median: return "median";
  }
  return "?";
}

}  // namespace sad
