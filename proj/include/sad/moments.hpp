#pragma once

#include <cstdint>

#include "sad/archive.hpp"
#include "sad/types.hpp"

namespace sad {

/// Welford single-pass running mean and population variance, per dimension.
class RunningMeanVar {
 public:
  void observe(const Eigen::Ref<const Vector>& x) {
    if (count_ == 0) {
      mean_ = Vector::Zero(x.size());
      m2_ = Vector::Zero(x.size());
    }
    ++count_;
    const Vector delta = x - mean_;
    mean_ += delta / static_cast<double>(count_);
    m2_ += delta.cwiseProduct(x - mean_);
  }

  std::uint64_t count() const { return count_; }
  const Vector& mean() const { return mean_; }

  /// Population variance (M2 / n); zero-sized before the first observation.
  Vector variance() const {
    if (count_ == 0) return Vector();
    return m2_ / static_cast<double>(count_);
  }

  void save(ArchiveWriter& w) const {
    w.put_u64(count_);
    w.put_vector(mean_);
    w.put_vector(m2_);
  }

  void load(ArchiveReader& r) {
    count_ = r.get_u64();
    mean_ = r.get_vector();
    m2_ = r.get_vector();
  }

 private:
  std::uint64_t count_ = 0;
  Vector mean_;
  Vector m2_;
};

/// Scalar flavor of the same recurrence, for running score statistics.
class ScalarMeanVar {
 public:
  static ScalarMeanVar preset(std::uint64_t count, double mean,
                              double variance) {
    ScalarMeanVar s;
    s.count_ = count;
    s.mean_ = mean;
    s.m2_ = variance * static_cast<double>(count);
    return s;
  }

  void observe(double x) {
    ++count_;
    const double delta = x - mean_;
    mean_ += delta / static_cast<double>(count_);
    m2_ += delta * (x - mean_);
  }

  std::uint64_t count() const { return count_; }
  double mean() const { return mean_; }
  double variance() const {
    return count_ == 0 ? 0.0 : m2_ / static_cast<double>(count_);
  }

 private:
  std::uint64_t count_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

}  // namespace sad
