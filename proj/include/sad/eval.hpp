#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <utility>

#include "sad/errors.hpp"

namespace sad {

/// Prequential area under the ROC curve: the probability that a random
/// positive outscores a random negative, ties counted half. Pairs are stored
/// exactly; an optional window keeps only the most recent W pairs for long
/// streams.
class AurocMetric {
 public:
  explicit AurocMetric(std::optional<std::size_t> window = std::nullopt);

  void update(int y_true, double score);

  /// Computed by average-rank sorting; equals the pairwise Mann-Whitney
  /// statistic. Requires at least one positive and one negative.
  double get() const;

  bool defined() const { return positives_ > 0 && negatives_ > 0; }
  std::uint64_t positives() const { return positives_; }
  std::uint64_t negatives() const { return negatives_; }
  std::size_t size() const { return pairs_.size(); }
  std::optional<std::size_t> window() const { return window_; }

 private:
  std::optional<std::size_t> window_;
  std::deque<std::pair<int, double>> pairs_;
  std::uint64_t positives_ = 0;
  std::uint64_t negatives_ = 0;
};

}  // namespace sad
