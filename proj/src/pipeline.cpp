#include "sad/pipeline.hpp"

namespace sad {

namespace {

template <typename F>
auto run_stage(const char* stage, F&& f) {
  try {
    return f();
  } catch (const StageError&) {
    throw;
  } catch (const Error& e) {
    throw StageError(stage, e);
  }
}

}  // namespace

Pipeline::Pipeline(const Pipeline& other)
    : pre_(other.pre_),
      standardizer_(other.standardizer_),
      projector_(other.projector_),
      strategy_(other.strategy_),
      smoothers_(other.smoothers_),
      calibrator_(other.calibrator_) {
  detectors_.reserve(other.detectors_.size());
  for (const auto& d : other.detectors_) detectors_.push_back(d->clone());
}

Pipeline& Pipeline::operator=(const Pipeline& other) {
  if (this != &other) *this = Pipeline(other);
  return *this;
}

void Pipeline::add_detector(std::unique_ptr<Detector> detector) {
  if (!detector) {
    throw Error(ErrorKind::BadParameter, "pipeline: null detector");
  }
  detectors_.push_back(std::move(detector));
}

Pipeline::StepResult Pipeline::fit_score_partial(const Instance& inst) {
  if (detectors_.empty()) {
    throw Error(ErrorKind::BadParameter, "pipeline: no detectors configured");
  }
  if (detectors_.size() > 1 && !strategy_) {
    throw Error(ErrorKind::BadParameter,
                "pipeline: multiple detectors need an ensemble strategy");
  }

  Vector x = inst.features;
  if (pre_) {
    x = run_stage("preprocessor", [&] {
      return *pre_ == PreprocessorKind::unit_norm ? unit_norm(x)
                                                  : standardizer_.transform(x);
    });
  }
  if (projector_) {
    x = run_stage("projector", [&] { return projector_->apply(x); });
  }

  std::vector<double> scores;
  scores.reserve(detectors_.size());
  for (std::size_t i = 0; i < detectors_.size(); ++i) {
    scores.push_back(run_stage("detector", [&] {
      return detectors_[i]->fit_score_partial(x, inst.label);
    }));
  }

  StepResult result;
  result.raw = strategy_ ? run_stage("ensemble",
                                     [&] { return combine(scores, *strategy_); })
                         : scores.front();

  double s = result.raw;
  for (Ewma& smoother : smoothers_) {
    s = run_stage("postprocessor", [&] { return smoother.apply(s); });
  }
  if (calibrator_) {
    s = run_stage("calibrator", [&] {
      return std::visit([&](auto& c) { return c.calibrate(s); }, *calibrator_);
    });
  }
  result.final_score = s;
  return result;
}

}  // namespace sad
