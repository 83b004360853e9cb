#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "sad/errors.hpp"

namespace sad {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// One stream element: feature vector x_t, optional binary label, arrival
/// position. Labels ride along for metrics; detectors never consume them.
struct Instance {
  Vector features;
  std::optional<int> label;
  std::int64_t index = 0;
};

/// Ordered instances sharing one dimension, indices 0..n-1.
using StreamBatch = std::vector<Instance>;

/// Builds a batch from matrix rows; one instance per row.
inline StreamBatch batch_from_rows(const Matrix& rows) {
  StreamBatch batch;
  batch.reserve(static_cast<std::size_t>(rows.rows()));
  for (Eigen::Index i = 0; i < rows.rows(); ++i) {
    batch.push_back({rows.row(i).transpose(), std::nullopt, i});
  }
  return batch;
}

inline void require_finite(const Eigen::Ref<const Vector>& x) {
  if (!x.allFinite()) {
    throw Error(ErrorKind::NonFiniteInput, "non-finite feature value");
  }
}

inline void require_finite_scalar(double v, const char* what) {
  if (!std::isfinite(v)) {
    throw Error(ErrorKind::NonFiniteInput, std::string("non-finite ") + what);
  }
}

/// Fixed 9-significant-digit formatting used by every output file.
inline std::string format_g9(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

}  // namespace sad
