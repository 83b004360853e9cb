#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "sad/config.hpp"
#include "sad/pipeline.hpp"

namespace sad {

/// Fixed tags for deriving per-component seeds from the run seed, so every
/// random choice in a run is a pure function of the config.
namespace seed_tags {
inline constexpr std::uint64_t source = 1;
inline constexpr std::uint64_t shuffle = 2;
inline constexpr std::uint64_t projector = 3;
inline constexpr std::uint64_t detector_base = 16;  // + detector position
}  // namespace seed_tags

struct RunResult {
  std::uint64_t instances = 0;
  std::optional<double> metric_value;
  double seconds = 0.0;
  std::string scores_path;
  std::string report_path;
};

/// Builds the configured source / pipeline with their derived seeds. Exposed
/// so a run can be reproduced loop-by-loop against the library. The source
/// supplies the projector's input dimension.
StreamSource build_source(const RunConfig& config);
Pipeline build_pipeline(const RunConfig& config, const StreamSource& source);

/// Replays the stream through the pipeline prequentially, updating the
/// metric on labeled instances, and writes the scores and report files.
/// The summary line goes to `out`. Throws `Error` on failure; scores written
/// so far are flushed first.
RunResult run(const RunConfig& config, std::ostream& out);

/// Maps an error to the process exit code: config 1, io 2, anything else 3.
int exit_code_for(const Error& error);

}  // namespace sad
