#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace sad {

enum class ErrorKind {
  DimensionMismatch,
  NonFiniteInput,
  Io,
  RowParse,
  BadParameter,
  Config,
  EmptyInput,
  BadLabel,
  MetricUndefined,
  Serialize,
};

/// Library-wide error type. `index()` carries the offending stream index or
/// file line when one exists.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string message)
      : std::runtime_error(std::move(message)), kind_(kind) {}
  Error(ErrorKind kind, std::string message, std::uint64_t index)
      : std::runtime_error(std::move(message)), kind_(kind), index_(index) {}

  ErrorKind kind() const noexcept { return kind_; }
  std::optional<std::uint64_t> index() const noexcept { return index_; }

 private:
  ErrorKind kind_;
  std::optional<std::uint64_t> index_;
};

/// Raised by batch operations. State reflects instances before
/// `failed_index`; scores already produced remain available.
class BatchError : public Error {
 public:
  BatchError(const Error& cause, std::uint64_t failed_index,
             std::vector<double> partial_scores = {})
      : Error(cause.kind(),
              std::string(cause.what()) + " (batch index " +
                  std::to_string(failed_index) + ")",
              failed_index),
        partial_scores_(std::move(partial_scores)) {}

  const std::vector<double>& partial_scores() const noexcept {
    return partial_scores_;
  }

 private:
  std::vector<double> partial_scores_;
};

/// A failure inside a pipeline, annotated with the stage it came from.
/// The kind of the underlying error is preserved.
class StageError : public Error {
 public:
  StageError(std::string stage, const Error& cause)
      : Error(cause.kind(), "stage '" + stage + "': " + cause.what()),
        stage_(std::move(stage)) {}

  const std::string& stage() const noexcept { return stage_; }

 private:
  std::string stage_;
};

}  // namespace sad
