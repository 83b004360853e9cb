#include "sad/models/mahalanobis.hpp"

#include <Eigen/Cholesky>

namespace sad {

Mahalanobis::Mahalanobis(double epsilon, std::uint64_t seed)
    : Detector(seed), epsilon_(epsilon) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw Error(ErrorKind::BadParameter,
                "mahalanobis: epsilon must be positive and finite");
  }
}

void Mahalanobis::fit_one(const Vector& x) {
  if (count_ == 0) {
    mean_ = Vector::Zero(x.size());
    m2_ = Matrix::Zero(x.size(), x.size());
  }
  ++count_;
  const Vector before = x - mean_;
  mean_ += before / static_cast<double>(count_);
  const Vector after = x - mean_;
  // symmetrized rank-2 form keeps the accumulator exactly symmetric
  m2_ += 0.5 * (before * after.transpose() + after * before.transpose());
}

Matrix Mahalanobis::covariance() const {
  if (count_ < 2) {
    const Eigen::Index m = dim() > 0 ? dim() : 0;
    return Matrix::Zero(m, m);
  }
  return m2_ / static_cast<double>(count_);
}

double Mahalanobis::score_one(const Vector& x) const {
  if (count_ == 0) return 0.0;
  const Vector d = x - mean_;
  Matrix a = covariance();
  a.diagonal().array() += epsilon_;
  const Vector y = a.llt().solve(d);
  return std::sqrt(d.dot(y));
}

double Mahalanobis::score_given_covariance(const Vector& x,
                                           const Matrix& cov) const {
  const Vector d = count_ == 0 ? x : Vector(x - mean_);
  const Vector y = cov.llt().solve(d);
  return std::sqrt(d.dot(y));
}

void Mahalanobis::save_state(ArchiveWriter& w) const {
  w.put_f64(epsilon_);
  w.put_u64(count_);
  w.put_vector(mean_);
  w.put_matrix(m2_);
}

void Mahalanobis::load_state(ArchiveReader& r) {
  epsilon_ = r.get_f64();
  count_ = r.get_u64();
  mean_ = r.get_vector();
  m2_ = r.get_matrix();
}

}  // namespace sad
