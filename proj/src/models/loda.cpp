#include "sad/models/loda.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "sad/rng.hpp"

namespace sad {

Loda::Loda(int projections, int bins, int warmup, std::uint64_t seed)
    : Detector(seed), k_(projections), bins_(bins), warmup_(warmup) {
  if (k_ < 1) throw Error(ErrorKind::BadParameter, "loda: k must be >= 1");
  if (bins_ < 1) throw Error(ErrorKind::BadParameter, "loda: bins must be >= 1");
  if (warmup_ < 1) throw Error(ErrorKind::BadParameter, "loda: warmup must be >= 1");
}

Loda Loda::with_fixed_histograms(const Matrix& projections, double lo,
                                 double hi, int bins) {
  if (!(hi > lo)) {
    throw Error(ErrorKind::BadParameter, "loda: fixed range must be nonempty");
  }
  Loda d(static_cast<int>(projections.rows()), bins, 1, 0);
  d.fixed_histograms_ = true;
  d.w_ = projections;
  d.lo_ = Vector::Constant(d.k_, lo);
  d.width_ = Vector::Constant(d.k_, (hi - lo) / bins);
  d.counts_.assign(d.k_, std::vector<std::uint64_t>(bins, 0));
  d.totals_.assign(d.k_, 0);
  d.warmed_ = true;
  d.force_bind(projections.cols());
  return d;
}

void Loda::bind_dimension(Eigen::Index m) {
  if (fixed_histograms_) {
    if (w_.cols() != m) {
      throw Error(ErrorKind::DimensionMismatch,
                  "loda: fixed projections built for dimension " +
                      std::to_string(w_.cols()));
    }
    return;
  }
  // sparse projections: ceil(sqrt(m)) nonzero standard-normal entries at
  // seeded positions, the rest zero
  const auto nonzero = static_cast<Eigen::Index>(
      std::ceil(std::sqrt(static_cast<double>(m))));
  Rng rng(seed());
  w_ = Matrix::Zero(k_, m);
  std::vector<Eigen::Index> idx(static_cast<std::size_t>(m));
  for (int i = 0; i < k_; ++i) {
    std::iota(idx.begin(), idx.end(), 0);
    for (Eigen::Index j = 0; j < nonzero; ++j) {
      const auto pick =
          j + static_cast<Eigen::Index>(rng.uniform_int(
                  static_cast<std::uint64_t>(m - j)));
      std::swap(idx[static_cast<std::size_t>(j)],
                idx[static_cast<std::size_t>(pick)]);
      w_(i, idx[static_cast<std::size_t>(j)]) = rng.normal();
    }
  }
}

Eigen::Index Loda::bin_index(int proj, double z) const {
  const double t = std::floor((z - lo_[proj]) / width_[proj]);
  if (t < 0.0) return 0;  // out-of-range values clamp to the edge bins
  if (t >= static_cast<double>(bins_)) return bins_ - 1;
  return static_cast<Eigen::Index>(t);
}

void Loda::absorb(const Vector& z) {
  for (int i = 0; i < k_; ++i) {
    ++counts_[static_cast<std::size_t>(i)]
             [static_cast<std::size_t>(bin_index(i, z[i]))];
    ++totals_[static_cast<std::size_t>(i)];
  }
}

void Loda::finalize_bins() {
  lo_.resize(k_);
  width_.resize(k_);
  for (int i = 0; i < k_; ++i) {
    double mn = buffer_.front()[i];
    double mx = mn;
    for (const Vector& z : buffer_) {
      mn = std::min(mn, z[i]);
      mx = std::max(mx, z[i]);
    }
    double range = mx - mn;
    double lo = mn - 0.1 * range;
    if (range <= 0.0) {  // degenerate warmup: all projected values equal
      lo = mn - 0.5;
      range = 1.0 / 1.2;
    }
    lo_[i] = lo;
    width_[i] = 1.2 * range / bins_;
  }
  counts_.assign(static_cast<std::size_t>(k_),
                 std::vector<std::uint64_t>(static_cast<std::size_t>(bins_), 0));
  totals_.assign(static_cast<std::size_t>(k_), 0);
  for (const Vector& z : buffer_) absorb(z);
  buffer_.clear();
  warmed_ = true;
}

void Loda::fit_one(const Vector& x) {
  const Vector z = w_ * x;
  if (!warmed_) {
    buffer_.push_back(z);
    if (buffer_.size() == static_cast<std::size_t>(warmup_)) finalize_bins();
    return;
  }
  absorb(z);
}

double Loda::score_from_buffer(const Vector& z) const {
  if (buffer_.size() < 2) return 0.0;
  const double total = static_cast<double>(buffer_.size());
  double sum = 0.0;
  for (int i = 0; i < k_; ++i) {
    double mn = buffer_.front()[i];
    double mx = mn;
    for (const Vector& b : buffer_) {
      mn = std::min(mn, b[i]);
      mx = std::max(mx, b[i]);
    }
    const double range = mx - mn;
    if (range <= 0.0) continue;  // single occupied bin, -log(1) = 0
    const double width = range / bins_;
    auto bin_of = [&](double v) {
      const double t = std::floor((v - mn) / width);
      if (t < 0.0) return Eigen::Index{0};
      if (t >= static_cast<double>(bins_))
        return static_cast<Eigen::Index>(bins_ - 1);
      return static_cast<Eigen::Index>(t);
    };
    const Eigen::Index target = bin_of(z[i]);
    std::uint64_t c = 0;
    for (const Vector& b : buffer_) {
      if (bin_of(b[i]) == target) ++c;
    }
    // floor at one count so unseen regions stay finite
    sum += -std::log(static_cast<double>(std::max<std::uint64_t>(c, 1)) / total);
  }
  return sum / k_;
}

double Loda::score_one(const Vector& x) const {
  if (w_.size() == 0) return 0.0;  // fresh state, dimension not bound yet
  const Vector z = w_ * x;
  if (!warmed_) return score_from_buffer(z);
  double sum = 0.0;
  for (int i = 0; i < k_; ++i) {
    const auto c = static_cast<double>(
        counts_[static_cast<std::size_t>(i)]
               [static_cast<std::size_t>(bin_index(i, z[i]))]);
    const auto total = static_cast<double>(totals_[static_cast<std::size_t>(i)]);
    sum += -std::log((c + 1.0) / (total + bins_));
  }
  return sum / k_;
}

void Loda::save_state(ArchiveWriter& w) const {
  w.put_u64(static_cast<std::uint64_t>(k_));
  w.put_u64(static_cast<std::uint64_t>(bins_));
  w.put_u64(static_cast<std::uint64_t>(warmup_));
  w.put_u8(fixed_histograms_ ? 1 : 0);
  w.put_u8(warmed_ ? 1 : 0);
  w.put_matrix(w_);
  w.put_vector(lo_);
  w.put_vector(width_);
  w.put_u64(counts_.size());
  for (const auto& c : counts_) w.put_u64_vector(c);
  w.put_u64_vector(totals_);
  w.put_u64(buffer_.size());
  for (const Vector& z : buffer_) w.put_vector(z);
}

void Loda::load_state(ArchiveReader& r) {
  k_ = static_cast<int>(r.get_u64());
  bins_ = static_cast<int>(r.get_u64());
  warmup_ = static_cast<int>(r.get_u64());
  fixed_histograms_ = r.get_u8() != 0;
  warmed_ = r.get_u8() != 0;
  w_ = r.get_matrix();
  lo_ = r.get_vector();
  width_ = r.get_vector();
  counts_.assign(r.get_u64(), {});
  for (auto& c : counts_) c = r.get_u64_vector();
  totals_ = r.get_u64_vector();
  buffer_.clear();
  const std::uint64_t n = r.get_u64();
  for (std::uint64_t i = 0; i < n; ++i) buffer_.push_back(r.get_vector());
}

}  // namespace sad
