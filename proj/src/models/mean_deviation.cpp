#include "sad/models/mean_deviation.hpp"

namespace sad {

double MeanDeviation::score_one(const Vector& x) const {
  if (moments_.count() == 0) return 0.0;
  const Vector std_floor =
      moments_.variance().cwiseSqrt().cwiseMax(kStdFloor);
  return ((x - moments_.mean()).cwiseAbs().cwiseQuotient(std_floor)).mean();
}

}  // namespace sad
