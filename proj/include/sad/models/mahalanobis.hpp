#pragma once

#include "sad/detector.hpp"

namespace sad {

/// Running Mahalanobis distance: Welford mean plus an outer-product Welford
/// covariance accumulator. Score is sqrt((x-mu)^T (Cov + eps*I)^-1 (x-mu));
/// the epsilon ridge keeps the solve well-posed even on degenerate streams.
class Mahalanobis final : public Detector {
 public:
  explicit Mahalanobis(double epsilon = 1e-6, std::uint64_t seed = 0);

  std::string name() const override { return "mahalanobis"; }
  std::size_t retained_instances() const override { return 0; }
  std::size_t memory_budget() const override { return 0; }
  std::unique_ptr<Detector> clone() const override {
    return std::make_unique<Mahalanobis>(*this);
  }

  double epsilon() const { return epsilon_; }
  std::uint64_t count() const { return count_; }
  const Vector& mean() const { return mean_; }

  /// Population covariance estimate; zero matrix while count < 2.
  Matrix covariance() const;

  /// Test hook: distance under an explicitly supplied covariance, no ridge.
  double score_given_covariance(const Vector& x, const Matrix& cov) const;

 protected:
  void fit_one(const Vector& x) override;
  double score_one(const Vector& x) const override;
  void save_state(ArchiveWriter& w) const override;
  void load_state(ArchiveReader& r) override;

 private:
  double epsilon_;
  std::uint64_t count_ = 0;
  Vector mean_;
  Matrix m2_;
};

}  // namespace sad
