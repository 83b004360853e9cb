#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "sad/types.hpp"

namespace sad {

/// Which CSV column carries the 0/1 label.
struct LabelColumn {
  struct None {};
  struct Last {};
  std::variant<None, Last, std::size_t> spec = Last{};

  static LabelColumn none() { return {None{}}; }
  static LabelColumn last() { return {Last{}}; }
  static LabelColumn at(std::size_t idx) { return {idx}; }
};

/// An ordered, replayable stream of instances with one fixed dimension.
struct StreamSource {
  enum class Kind { csv, synthetic };
  Kind kind = Kind::synthetic;
  Eigen::Index m = 0;
  bool has_labels = false;
  std::uint64_t seed = 0;
  std::vector<Instance> instances;

  std::size_t size() const { return instances.size(); }
};

/// Parses an RFC-4180-style numeric CSV into a stream source: one instance
/// per data row, features in column order with the label column (when
/// selected) excluded. Label cells must be exactly "0" or "1".
StreamSource read_csv_stream(const std::string& path,
                             LabelColumn label_column = LabelColumn::last(),
                             bool has_header = false);

/// Same parser over an in-memory document; `path` only flavors messages.
StreamSource parse_csv(const std::string& body, LabelColumn label_column,
                       bool has_header, const std::string& path = "<memory>");

/// Labeled synthetic stream: each instance is independently anomalous with
/// probability `anomaly_rate`; inliers are standard normal in R^m, anomalies
/// uniform on [-6, 6]^m. Byte-identical for equal (n, m, rate, seed).
StreamSource generate_synthetic(std::int64_t n, Eigen::Index m,
                                double anomaly_rate, std::uint64_t seed);

/// Yields every instance exactly once, re-indexed 0..n-1. With `shuffle`,
/// the order is a seeded uniform permutation; otherwise source order.
std::vector<Instance> iterate(const StreamSource& source, bool shuffle,
                              std::uint64_t seed);

}  // namespace sad
