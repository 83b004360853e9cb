#include "sad/models/knn.hpp"

#include <algorithm>

namespace sad {

SlidingWindowKnn::SlidingWindowKnn(std::size_t window, std::size_t neighbors,
                                   std::uint64_t seed)
    : Detector(seed), window_(window), neighbors_(neighbors) {
  if (window_ == 0) {
    throw Error(ErrorKind::BadParameter, "knn: window must be positive");
  }
  if (neighbors_ == 0) {
    throw Error(ErrorKind::BadParameter, "knn: k must be positive");
  }
}

void SlidingWindowKnn::fit_one(const Vector& x) {
  buffer_.push_back(x);
  if (buffer_.size() > window_) buffer_.pop_front();
}

double SlidingWindowKnn::score_one(const Vector& x) const {
  if (buffer_.empty()) return 0.0;
  std::vector<double> dists;
  dists.reserve(buffer_.size());
  for (const Vector& v : buffer_) dists.push_back((x - v).norm());
  const std::size_t take = std::min(neighbors_, dists.size());
  // stable sort keeps insertion (oldest-first) order among equal distances
  std::stable_sort(dists.begin(), dists.end());
  double sum = 0.0;
  for (std::size_t i = 0; i < take; ++i) sum += dists[i];
  return sum / static_cast<double>(take);
}

void SlidingWindowKnn::save_state(ArchiveWriter& w) const {
  w.put_u64(window_);
  w.put_u64(neighbors_);
  w.put_u64(buffer_.size());
  for (const Vector& v : buffer_) w.put_vector(v);
}

void SlidingWindowKnn::load_state(ArchiveReader& r) {
  window_ = r.get_u64();
  neighbors_ = r.get_u64();
  buffer_.clear();
  const std::uint64_t n = r.get_u64();
  for (std::uint64_t i = 0; i < n; ++i) buffer_.push_back(r.get_vector());
}

}  // namespace sad
