#include "sad/eval.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "sad/types.hpp"

namespace sad {

AurocMetric::AurocMetric(std::optional<std::size_t> window) : window_(window) {
  if (window_ && *window_ == 0) {
    throw Error(ErrorKind::BadParameter, "metric: window must be positive");
  }
}

void AurocMetric::update(int y_true, double score) {
  if (y_true != 0 && y_true != 1) {
    throw Error(ErrorKind::BadLabel,
                "label must be 0 or 1, got " + std::to_string(y_true));
  }
  require_finite_scalar(score, "score");
  pairs_.emplace_back(y_true, score);
  if (y_true == 1) ++positives_; else ++negatives_;
  if (window_ && pairs_.size() > *window_) {
    if (pairs_.front().first == 1) --positives_; else --negatives_;
    pairs_.pop_front();
  }
}

double AurocMetric::get() const {
  if (!defined()) {
    throw Error(ErrorKind::MetricUndefined,
                "AUROC needs at least one positive and one negative label");
  }
  const std::size_t n = pairs_.size();
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return pairs_[a].second < pairs_[b].second;
  });
  // average ranks across ties, then the Mann-Whitney identity
  double rank_sum_pos = 0.0;
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j < n && pairs_[order[j]].second == pairs_[order[i]].second) ++j;
    const double avg_rank = 0.5 * static_cast<double>(i + 1 + j);
    for (std::size_t t = i; t < j; ++t) {
      if (pairs_[order[t]].first == 1) rank_sum_pos += avg_rank;
    }
    i = j;
  }
  const double p = static_cast<double>(positives_);
  const double u = rank_sum_pos - p * (p + 1.0) / 2.0;
  return u / (p * static_cast<double>(negatives_));
}

}  // namespace sad
