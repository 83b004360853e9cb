#include "sad/postprocess.hpp"

#include <cmath>

#include "sad/types.hpp"

namespace sad {

Ewma::Ewma(double alpha) : alpha_(alpha) {
  if (!(alpha > 0.0) || alpha > 1.0 || !std::isfinite(alpha)) {
    throw Error(ErrorKind::BadParameter, "ewma: alpha must be in (0, 1]");
  }
}

double Ewma::apply(double s) {
  require_finite_scalar(s, "score");
  smoothed_ = smoothed_ ? alpha_ * s + (1.0 - alpha_) * *smoothed_ : s;
  return *smoothed_;
}

ConformalCalibrator::ConformalCalibrator(std::size_t window) : window_(window) {
  if (window_ == 0) {
    throw Error(ErrorKind::BadParameter, "conformal: window must be positive");
  }
}

double ConformalCalibrator::calibrate(double s) {
  require_finite_scalar(s, "score");
  double p = 0.5;
  if (!scores_.empty()) {
    std::size_t below = 0;
    std::size_t equal = 0;
    for (double w : scores_) {
      if (w < s) ++below;
      else if (w == s) ++equal;
    }
    p = (static_cast<double>(below) + 0.5 * static_cast<double>(equal)) /
        static_cast<double>(scores_.size());
  }
  scores_.push_back(s);
  if (scores_.size() > window_) scores_.pop_front();
  return p;
}

GaussianTailCalibrator GaussianTailCalibrator::with_moments(
    double mean, double variance, std::uint64_t count) {
  GaussianTailCalibrator c;
  c.moments_ = ScalarMeanVar::preset(count, mean, variance);
  return c;
}

double GaussianTailCalibrator::normal_cdf(double z) {
  return 0.5 * std::erfc(-z / std::sqrt(2.0));
}

double GaussianTailCalibrator::evaluate(double s) const {
  const double std_floor =
      std::max(std::sqrt(moments_.variance()), kStdFloor);
  return normal_cdf((s - moments_.mean()) / std_floor);
}

double GaussianTailCalibrator::calibrate(double s) {
  require_finite_scalar(s, "score");
  moments_.observe(s);
  return evaluate(s);
}

}  // namespace sad
