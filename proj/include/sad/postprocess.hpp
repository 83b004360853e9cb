#pragma once

#include <cstdint>
#include <deque>
#include <optional>

#include "sad/errors.hpp"
#include "sad/moments.hpp"

namespace sad {

/// Exponentially weighted moving average over a score stream:
/// out_1 = s_1, out_t = alpha * s_t + (1 - alpha) * out_{t-1}.
class Ewma {
 public:
  explicit Ewma(double alpha = 0.5);

  double apply(double s);

  double alpha() const { return alpha_; }
  std::optional<double> smoothed() const { return smoothed_; }

 private:
  double alpha_;
  std::optional<double> smoothed_;
};

/// Rank-based probability of anomalousness against a FIFO window of recent
/// raw scores: p = (#below + 0.5 * #equal) / |window|. The incoming score is
/// ranked first and inserted after, so it never certifies itself; an empty
/// window yields maximum uncertainty 0.5.
class ConformalCalibrator {
 public:
  explicit ConformalCalibrator(std::size_t window = 250);

  double calibrate(double s);

  std::size_t window_size() const { return window_; }
  std::size_t retained() const { return scores_.size(); }

 private:
  std::size_t window_;
  std::deque<double> scores_;
};

/// Gaussian tail fit over all scores so far: updates running moments with
/// the incoming score, then maps it through the standard normal CDF of its
/// z-score. First score (and any constant stream) calibrates to 0.5.
class GaussianTailCalibrator {
 public:
  GaussianTailCalibrator() = default;

  /// Test hook: preset running moments.
  static GaussianTailCalibrator with_moments(double mean, double variance,
                                             std::uint64_t count);

  double calibrate(double s);

  /// Probability at the current state without updating it.
  double evaluate(double s) const;

  static double normal_cdf(double z);

  std::uint64_t count() const { return moments_.count(); }

 private:
  static constexpr double kStdFloor = 1e-9;
  ScalarMeanVar moments_;
};

}  // namespace sad
