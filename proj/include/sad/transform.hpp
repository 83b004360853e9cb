#pragma once

#include <cstdint>

#include "sad/errors.hpp"
#include "sad/moments.hpp"
#include "sad/rng.hpp"
#include "sad/types.hpp"

namespace sad {

/// Scales to unit Euclidean norm; the zero vector passes through unchanged.
/// Dimension-preserving, pure.
template <typename Derived>
Vector unit_norm(const Eigen::MatrixBase<Derived>& x) {
  Vector v = x;
  require_finite(v);
  const double n = v.norm();
  if (n == 0.0) return v;
  return v / n;
}

/// Streaming per-dimension standardizer. Each instance first updates the
/// running mean/variance, then is mapped to (x - mean) / max(std, 1e-9), so
/// no future information leaks into the transform.
class RunningStandardizer {
 public:
  Vector transform(const Eigen::Ref<const Vector>& x);

  std::uint64_t count() const { return moments_.count(); }
  const RunningMeanVar& moments() const { return moments_; }

 private:
  static constexpr double kStdFloor = 1e-9;
  RunningMeanVar moments_;
};

enum class PreprocessorKind { unit_norm, standardize };

enum class ProjectorKind { gaussian, sparse };

/// Fixed linear map to a d-dimensional space. The matrix is frozen at
/// construction; a drifting projector would make detector state
/// incomparable across time.
class Projector {
 public:
  /// Entries i.i.d. normal with mean 0, variance 1/d.
  static Projector gaussian(Eigen::Index m, Eigen::Index d, std::uint64_t seed);

  /// Achlioptas-style entries: sqrt(3/d) * {+1 w.p. 1/6, 0 w.p. 2/3,
  /// -1 w.p. 1/6}.
  static Projector sparse(Eigen::Index m, Eigen::Index d, std::uint64_t seed);

  /// Test hook: explicit matrix, no randomness.
  static Projector from_matrix(Matrix matrix);

  Vector apply(const Eigen::Ref<const Vector>& x) const;

  Eigen::Index input_dim() const { return matrix_.cols(); }
  Eigen::Index output_dim() const { return matrix_.rows(); }
  const Matrix& matrix() const { return matrix_; }

 private:
  explicit Projector(Matrix matrix) : matrix_(std::move(matrix)) {}
  Matrix matrix_;  // d x m
};

Projector make_projector(Eigen::Index m, Eigen::Index d, ProjectorKind kind,
                         std::uint64_t seed);

}  // namespace sad
