#include "sad/transform.hpp"

namespace sad {

Vector RunningStandardizer::transform(const Eigen::Ref<const Vector>& x) {
  require_finite(x);
  if (moments_.count() > 0 && moments_.mean().size() != x.size()) {
    throw Error(ErrorKind::DimensionMismatch,
                "standardizer: expected dimension " +
                    std::to_string(moments_.mean().size()) + ", got " +
                    std::to_string(x.size()));
  }
  moments_.observe(x);
  const Vector std_floor = moments_.variance().cwiseSqrt().cwiseMax(kStdFloor);
  return (x - moments_.mean()).cwiseQuotient(std_floor);
}

namespace {

void check_projector_dims(Eigen::Index m, Eigen::Index d) {
  if (m < 1 || d < 1) {
    throw Error(ErrorKind::BadParameter,
                "projector: dimensions must be positive");
  }
}

}  // namespace

Projector Projector::gaussian(Eigen::Index m, Eigen::Index d,
                              std::uint64_t seed) {
  check_projector_dims(m, d);
  Rng rng(seed);
  Matrix p(d, m);
  const double scale = 1.0 / std::sqrt(static_cast<double>(d));
  for (Eigen::Index r = 0; r < d; ++r)
    for (Eigen::Index c = 0; c < m; ++c) p(r, c) = scale * rng.normal();
  return Projector(std::move(p));
}

Projector Projector::sparse(Eigen::Index m, Eigen::Index d,
                            std::uint64_t seed) {
  check_projector_dims(m, d);
  Rng rng(seed);
  Matrix p(d, m);
  const double v = std::sqrt(3.0 / static_cast<double>(d));
  for (Eigen::Index r = 0; r < d; ++r) {
    for (Eigen::Index c = 0; c < m; ++c) {
      const double u = rng.uniform01();
      p(r, c) = u < 1.0 / 6.0 ? v : (u < 1.0 / 3.0 ? -v : 0.0);
    }
  }
  return Projector(std::move(p));
}

Projector Projector::from_matrix(Matrix matrix) {
  check_projector_dims(matrix.cols(), matrix.rows());
  return Projector(std::move(matrix));
}

Vector Projector::apply(const Eigen::Ref<const Vector>& x) const {
  if (x.size() != matrix_.cols()) {
    throw Error(ErrorKind::DimensionMismatch,
                "projector: expected dimension " +
                    std::to_string(matrix_.cols()) + ", got " +
                    std::to_string(x.size()));
  }
  return matrix_ * x;
}

Projector make_projector(Eigen::Index m, Eigen::Index d, ProjectorKind kind,
                         std::uint64_t seed) {
  return kind == ProjectorKind::gaussian ? Projector::gaussian(m, d, seed)
                                         : Projector::sparse(m, d, seed);
}

}  // namespace sad
