#pragma once

#include "sad/detector.hpp"
#include "sad/moments.hpp"

namespace sad {

/// Reference detector: per-dimension running mean/variance, score is the
/// dimension-averaged |x - mean| / std. O(1) sufficient statistics, no raw
/// instances retained.
class MeanDeviation final : public Detector {
 public:
  explicit MeanDeviation(std::uint64_t seed = 0) : Detector(seed) {}

  std::string name() const override { return "meandev"; }
  std::size_t retained_instances() const override { return 0; }
  std::size_t memory_budget() const override { return 0; }
  std::unique_ptr<Detector> clone() const override {
    return std::make_unique<MeanDeviation>(*this);
  }

  const RunningMeanVar& moments() const { return moments_; }

 protected:
  void fit_one(const Vector& x) override { moments_.observe(x); }
  double score_one(const Vector& x) const override;
  void save_state(ArchiveWriter& w) const override { moments_.save(w); }
  void load_state(ArchiveReader& r) override { moments_.load(r); }

 private:
  static constexpr double kStdFloor = 1e-9;
  RunningMeanVar moments_;
};

}  // namespace sad
