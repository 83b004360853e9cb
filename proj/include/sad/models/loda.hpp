#pragma once

#include <vector>

#include "sad/detector.hpp"

namespace sad {

/// Lightweight online detector: k sparse random projections, one equal-width
/// histogram per projection. The first `warmup` projected instances are
/// buffered; their min/max (widened 10% per side) fix the bin edges, after
/// which the buffer is absorbed and only O(k*bins) counts remain. Score is
/// the mean negative log of the Laplace-smoothed bin frequency, so rarely
/// populated regions score high.
class Loda final : public Detector {
 public:
  explicit Loda(int projections = 25, int bins = 100, int warmup = 256,
                std::uint64_t seed = 0);

  /// Test hook: fixed projection matrix and fixed [lo, hi) bin ranges for
  /// every projection; starts warmed with empty counts.
  static Loda with_fixed_histograms(const Matrix& projections, double lo,
                                    double hi, int bins);

  std::string name() const override { return "loda"; }
  std::size_t retained_instances() const override { return buffer_.size(); }
  std::size_t memory_budget() const override {
    return static_cast<std::size_t>(warmup_);
  }
  std::unique_ptr<Detector> clone() const override {
    return std::make_unique<Loda>(*this);
  }

  int projections() const { return k_; }
  int bins() const { return bins_; }
  int warmup() const { return warmup_; }
  bool warmed_up() const { return warmed_; }

  /// k x m sparse projection matrix; valid once the dimension is bound.
  const Matrix& projection_matrix() const { return w_; }
  const Vector& bin_lo() const { return lo_; }
  const Vector& bin_width() const { return width_; }

 protected:
  void fit_one(const Vector& x) override;
  double score_one(const Vector& x) const override;
  void bind_dimension(Eigen::Index m) override;
  void save_state(ArchiveWriter& w) const override;
  void load_state(ArchiveReader& r) override;

 private:
  Eigen::Index bin_index(int proj, double z) const;
  void absorb(const Vector& z);
  void finalize_bins();
  double score_from_buffer(const Vector& z) const;

  int k_;
  int bins_;
  int warmup_;
  bool fixed_histograms_ = false;
  bool warmed_ = false;
  Matrix w_;                                       // k x m
  Vector lo_, width_;                              // per projection
  std::vector<std::vector<std::uint64_t>> counts_; // k x bins
  std::vector<std::uint64_t> totals_;              // per projection
  std::vector<Vector> buffer_;                     // projected warmup values
};

}  // namespace sad
