#pragma once

// Shared helpers and independent oracles for the test suites. Oracles are
// deliberately naive (brute force, two-pass) and share no code with the
// library paths they check.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

#include "sad/detector.hpp"
#include "sad/rng.hpp"
#include "sad/types.hpp"

namespace sad::test {

template <typename F>
ErrorKind thrown_kind(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  throw std::runtime_error("expected an Error");
}

inline bool exactly_equal(const Vector& a, const Vector& b) {
  return a.size() == b.size() && (a.array() == b.array()).all();
}

inline bool exactly_equal(const Matrix& a, const Matrix& b) {
  return a.rows() == b.rows() && a.cols() == b.cols() &&
         (a.array() == b.array()).all();
}

inline Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

inline StreamBatch batch(std::initializer_list<std::initializer_list<double>> rows) {
  StreamBatch b;
  std::int64_t i = 0;
  for (const auto& r : rows) b.push_back({vec(r), std::nullopt, i++});
  return b;
}

inline std::vector<Vector> random_instances(std::size_t n, Eigen::Index m,
                                            std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Vector> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    Vector v(m);
    for (Eigen::Index j = 0; j < m; ++j) v[j] = rng.normal();
    out.push_back(std::move(v));
  }
  return out;
}

// O(P*N) pairwise AUROC: mean over (positive, negative) pairs of
// 1 / 0.5 / 0 by score comparison.
inline double pairwise_auroc(const std::vector<std::pair<int, double>>& pairs) {
  double sum = 0.0;
  std::uint64_t count = 0;
  for (const auto& [yp, sp] : pairs) {
    if (yp != 1) continue;
    for (const auto& [yn, sn] : pairs) {
      if (yn != 0) continue;
      ++count;
      if (sp > sn) sum += 1.0;
      else if (sp == sn) sum += 0.5;
    }
  }
  return sum / static_cast<double>(count);
}

// Two-pass batch mean: sum then divide.
inline Vector two_pass_mean(const std::vector<Vector>& xs) {
  Vector mean = Vector::Zero(xs.front().size());
  for (const Vector& x : xs) mean += x;
  return mean / static_cast<double>(xs.size());
}

// Two-pass population variance per dimension.
inline Vector two_pass_variance(const std::vector<Vector>& xs) {
  const Vector mean = two_pass_mean(xs);
  Vector var = Vector::Zero(mean.size());
  for (const Vector& x : xs) var += (x - mean).cwiseAbs2();
  return var / static_cast<double>(xs.size());
}

// Two-pass population covariance.
inline Matrix two_pass_covariance(const std::vector<Vector>& xs) {
  const Vector mean = two_pass_mean(xs);
  Matrix cov = Matrix::Zero(mean.size(), mean.size());
  for (const Vector& x : xs) {
    const Vector d = x - mean;
    cov += d * d.transpose();
  }
  return cov / static_cast<double>(xs.size());
}

// All-pairs nearest-neighbor oracle over an explicit window.
inline double knn_oracle(const std::vector<Vector>& window, const Vector& x,
                         std::size_t k) {
  if (window.empty()) return 0.0;
  std::vector<double> dists;
  dists.reserve(window.size());
  for (const Vector& w : window) dists.push_back((x - w).norm());
  std::sort(dists.begin(), dists.end());
  const std::size_t take = std::min(k, dists.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < take; ++i) sum += dists[i];
  return sum / static_cast<double>(take);
}

// Histogram-count oracle for projected-value streams: recomputes bin edges
// from the first `warmup` values (10% widening per side) and counts from all
// values, then applies the Laplace-smoothed negative-log-frequency formula.
inline double loda_oracle(const std::vector<Vector>& projected_history,
                          const Vector& z, int bins, int warmup) {
  const auto k = static_cast<int>(z.size());
  const double total = static_cast<double>(projected_history.size());
  double sum = 0.0;
  for (int i = 0; i < k; ++i) {
    double mn = projected_history.front()[i];
    double mx = mn;
    for (int t = 0; t < warmup; ++t) {
      mn = std::min(mn, projected_history[static_cast<std::size_t>(t)][i]);
      mx = std::max(mx, projected_history[static_cast<std::size_t>(t)][i]);
    }
    const double range = mx - mn;
    const double lo = mn - 0.1 * range;
    const double width = 1.2 * range / bins;
    auto bin_of = [&](double v) {
      const double t = std::floor((v - lo) / width);
      return static_cast<int>(std::clamp(t, 0.0, static_cast<double>(bins - 1)));
    };
    const int target = bin_of(z[i]);
    double count = 0.0;
    for (const Vector& h : projected_history) {
      if (bin_of(h[i]) == target) count += 1.0;
    }
    sum += -std::log((count + 1.0) / (total + bins));
  }
  return sum / k;
}

// Kolmogorov-Smirnov distance to the uniform [0, 1] distribution.
inline double ks_uniform(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  const double n = static_cast<double>(values.size());
  double d = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double f = values[i];
    d = std::max(d, std::abs((static_cast<double>(i) + 1.0) / n - f));
    d = std::max(d, std::abs(f - static_cast<double>(i) / n));
  }
  return d;
}

// Detector emitting a fixed score sequence; exercises pipelines and the
// extension point without real model behavior.
class ScriptedDetector final : public Detector {
 public:
  explicit ScriptedDetector(std::vector<double> scores)
      : Detector(0), scores_(std::move(scores)) {}

  std::string name() const override { return "scripted"; }
  std::size_t retained_instances() const override { return 0; }
  std::size_t memory_budget() const override { return 0; }
  std::unique_ptr<Detector> clone() const override {
    return std::make_unique<ScriptedDetector>(*this);
  }

 protected:
  void fit_one(const Vector&) override { ++fits_; }
  double score_one(const Vector&) const override {
    return fits_ == 0 ? 0.0 : scores_.at(fits_ - 1);
  }
  void save_state(ArchiveWriter& w) const override { w.put_u64(fits_); }
  void load_state(ArchiveReader& r) override { fits_ = r.get_u64(); }

 private:
  std::vector<double> scores_;
  std::uint64_t fits_ = 0;
};

}  // namespace sad::test
