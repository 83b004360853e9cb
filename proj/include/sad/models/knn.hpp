#pragma once

#include <deque>

#include "sad/detector.hpp"

namespace sad {

/// Distance-based detector over a FIFO window of the last `window` raw
/// instances. Score is the mean Euclidean distance to the min(k, |window|)
/// nearest stored instances; distance ties prefer older entries.
class SlidingWindowKnn final : public Detector {
 public:
  explicit SlidingWindowKnn(std::size_t window = 250, std::size_t neighbors = 5,
                            std::uint64_t seed = 0);

  std::string name() const override { return "knn"; }
  std::size_t retained_instances() const override { return buffer_.size(); }
  std::size_t memory_budget() const override { return window_; }
  std::unique_ptr<Detector> clone() const override {
    return std::make_unique<SlidingWindowKnn>(*this);
  }

  std::size_t window_size() const { return window_; }
  std::size_t neighbors() const { return neighbors_; }
  const std::deque<Vector>& window_contents() const { return buffer_; }

 protected:
  void fit_one(const Vector& x) override;
  double score_one(const Vector& x) const override;
  void save_state(ArchiveWriter& w) const override;
  void load_state(ArchiveReader& r) override;

 private:
  std::size_t window_;
  std::size_t neighbors_;
  std::deque<Vector> buffer_;  // oldest first
};

}  // namespace sad
