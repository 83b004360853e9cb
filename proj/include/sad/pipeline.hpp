#pragma once

#include <memory>
#include <optional>
#include <variant>
#include <vector>

#include "sad/detector.hpp"
#include "sad/ensemble.hpp"
#include "sad/postprocess.hpp"
#include "sad/transform.hpp"

namespace sad {

using Calibrator = std::variant<ConformalCalibrator, GaussianTailCalibrator>;

/// Declarative component chain driven one instance at a time:
/// preprocessor -> projector -> detectors (fit+score) -> ensembler ->
/// postprocessors -> calibrator. Every stage is optional; missing stages are
/// identities. `raw` is the ensembled detector score, `final` what the last
/// configured stage emits.
class Pipeline {
 public:
  struct StepResult {
    double raw = 0.0;
    double final_score = 0.0;
  };

  Pipeline() = default;
  Pipeline(Pipeline&&) = default;
  Pipeline& operator=(Pipeline&&) = default;
  Pipeline(const Pipeline& other);
  Pipeline& operator=(const Pipeline& other);

  void set_preprocessor(PreprocessorKind kind) { pre_ = kind; }
  void set_projector(Projector projector) { projector_ = std::move(projector); }
  void add_detector(std::unique_ptr<Detector> detector);
  void set_ensemble(CombineStrategy strategy) { strategy_ = strategy; }
  void add_postprocessor(Ewma smoother) { smoothers_.push_back(smoother); }
  void set_calibrator(Calibrator calibrator) { calibrator_ = std::move(calibrator); }

  /// Errors from any stage surface as StageError naming the stage.
  StepResult fit_score_partial(const Instance& inst);

  std::size_t detector_count() const { return detectors_.size(); }
  const Detector& detector(std::size_t i) const { return *detectors_.at(i); }
  Detector& detector(std::size_t i) { return *detectors_.at(i); }
  const std::optional<Calibrator>& calibrator() const { return calibrator_; }

 private:
  std::optional<PreprocessorKind> pre_;
  RunningStandardizer standardizer_;
  std::optional<Projector> projector_;
  std::vector<std::unique_ptr<Detector>> detectors_;
  std::optional<CombineStrategy> strategy_;
  std::vector<Ewma> smoothers_;
  std::optional<Calibrator> calibrator_;
};

}  // namespace sad
