#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "sad/ensemble.hpp"
#include "sad/stream.hpp"
#include "sad/transform.hpp"

namespace sad {

struct CsvInputSpec {
  std::string path;
  LabelColumn label_column = LabelColumn::last();
  bool has_header = false;
};

struct SyntheticInputSpec {
  std::int64_t n = 1000;
  Eigen::Index m = 2;
  double rate = 0.05;
};

struct ProjectorSpec {
  Eigen::Index d = 2;
  ProjectorKind kind = ProjectorKind::gaussian;
};

struct LodaSpec {
  int k = 25;
  int bins = 100;
  int warmup = 256;
};

struct HstSpec {
  int trees = 25;
  int depth = 15;
  int window = 250;
};

struct KnnSpec {
  int window = 250;
  int k = 5;
};

struct MahalanobisSpec {
  double epsilon = 1e-6;
};

struct MeanDevSpec {};

using DetectorSpec =
    std::variant<LodaSpec, HstSpec, KnnSpec, MahalanobisSpec, MeanDevSpec>;

struct EwmaSpec {
  double alpha = 0.5;
};

struct ConformalSpec {
  std::size_t window = 250;
};

struct GaussianTailSpec {};

using CalibratorSpec = std::variant<ConformalSpec, GaussianTailSpec>;

struct MetricSpec {
  std::optional<std::size_t> window;  // absent = global AUROC
};

struct OutputSpec {
  std::string scores = "scores.csv";
  std::string report = "report.json";
};

/// Everything one reproducible run needs. Flags may override only the
/// input/output paths and the seed.
struct RunConfig {
  std::variant<CsvInputSpec, SyntheticInputSpec> input = SyntheticInputSpec{};
  std::optional<PreprocessorKind> preprocessor;
  std::optional<ProjectorSpec> projector;
  std::vector<DetectorSpec> detectors;
  std::optional<CombineStrategy> ensemble;
  std::vector<EwmaSpec> postprocessors;
  std::optional<CalibratorSpec> calibrator;
  MetricSpec metric;
  std::uint64_t seed = 0;
  bool shuffle = false;
  OutputSpec outputs;
};

/// Parses and validates a JSON config document; unknown keys are rejected
/// with the offending path in the message.
RunConfig parse_config(const std::string& json_text);

/// Reads, parses and validates a config file.
RunConfig load_config(const std::string& path);

/// Canonical JSON echo of a validated config, defaults filled, keys sorted.
std::string canonical_config(const RunConfig& config);

/// FNV-1a 64-bit digest of the canonical echo, as 16 hex characters.
std::string config_digest(const RunConfig& config);

struct CliOverrides {
  std::optional<std::string> csv_path;
  std::optional<std::string> scores_path;
  std::optional<std::string> report_path;
  std::optional<std::uint64_t> seed;
};

void apply_overrides(RunConfig& config, const CliOverrides& overrides);

}  // namespace sad
