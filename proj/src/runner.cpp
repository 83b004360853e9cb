#include "sad/runner.hpp"

#include <chrono>
#include <fstream>
#include <json.hpp>
#include <ostream>

#include "sad/eval.hpp"
#include "sad/models/half_space_trees.hpp"
#include "sad/models/knn.hpp"
#include "sad/models/loda.hpp"
#include "sad/models/mahalanobis.hpp"
#include "sad/models/mean_deviation.hpp"
#include "sad/rng.hpp"

namespace sad {

StreamSource build_source(const RunConfig& config) {
  if (const auto* csv = std::get_if<CsvInputSpec>(&config.input)) {
    return read_csv_stream(csv->path, csv->label_column, csv->has_header);
  }
  const auto& syn = std::get<SyntheticInputSpec>(config.input);
  return generate_synthetic(syn.n, syn.m, syn.rate,
                            derive_seed(config.seed, seed_tags::source));
}

namespace {

std::unique_ptr<Detector> build_detector(const DetectorSpec& spec,
                                         std::uint64_t seed) {
  if (const auto* d = std::get_if<LodaSpec>(&spec)) {
    return std::make_unique<Loda>(d->k, d->bins, d->warmup, seed);
  }
  if (const auto* d = std::get_if<HstSpec>(&spec)) {
    return std::make_unique<HalfSpaceTrees>(d->trees, d->depth, d->window, seed);
  }
  if (const auto* d = std::get_if<KnnSpec>(&spec)) {
    return std::make_unique<SlidingWindowKnn>(
        static_cast<std::size_t>(d->window), static_cast<std::size_t>(d->k), seed);
  }
  if (const auto* d = std::get_if<MahalanobisSpec>(&spec)) {
    return std::make_unique<Mahalanobis>(d->epsilon, seed);
  }
  return std::make_unique<MeanDeviation>(seed);
}

}  // namespace

Pipeline build_pipeline(const RunConfig& config, const StreamSource& source) {
  Pipeline p;
  if (config.preprocessor) p.set_preprocessor(*config.preprocessor);
  if (config.projector) {
    p.set_projector(make_projector(source.m, config.projector->d,
                                   config.projector->kind,
                                   derive_seed(config.seed, seed_tags::projector)));
  }
  for (std::size_t i = 0; i < config.detectors.size(); ++i) {
    p.add_detector(build_detector(
        config.detectors[i],
        derive_seed(config.seed, seed_tags::detector_base + i)));
  }
  if (config.ensemble) p.set_ensemble(*config.ensemble);
  for (const EwmaSpec& s : config.postprocessors) {
    p.add_postprocessor(Ewma(s.alpha));
  }
  if (config.calibrator) {
    if (const auto* c = std::get_if<ConformalSpec>(&*config.calibrator)) {
      p.set_calibrator(ConformalCalibrator(c->window));
    } else {
      p.set_calibrator(GaussianTailCalibrator());
    }
  }
  return p;
}

namespace {

void write_report(const RunConfig& config, std::uint64_t n,
                  std::optional<double> metric_value) {
  nlohmann::json j;
  j["n"] = n;
  j["metric_name"] = "auroc";
  if (metric_value) {
    // stored at the library-wide 9-significant-digit precision
    j["metric_value"] = std::stod(format_g9(*metric_value));
  } else {
    j["metric_value"] = "undefined";
  }
  // wall time is printed, not persisted: the report must be byte-identical
  // across reruns of one config
  j["seconds"] = nullptr;
  j["seed"] = config.seed;
  j["config_digest"] = config_digest(config);
  j["config"] = nlohmann::json::parse(canonical_config(config));
  std::ofstream file(config.outputs.report, std::ios::binary);
  if (!file) {
    throw Error(ErrorKind::Io, "cannot write report '" + config.outputs.report + "'");
  }
  file << j.dump(2) << '\n';
}

}  // namespace

RunResult run(const RunConfig& config, std::ostream& out) {
  const StreamSource source = build_source(config);
  const std::vector<Instance> stream =
      iterate(source, config.shuffle, derive_seed(config.seed, seed_tags::shuffle));
  Pipeline pipeline = build_pipeline(config, source);
  AurocMetric metric(config.metric.window);

  std::ofstream scores(config.outputs.scores, std::ios::binary);
  if (!scores) {
    throw Error(ErrorKind::Io, "cannot write scores '" + config.outputs.scores + "'");
  }
  scores << "index,raw_score,final_score,label\n";

  const auto t0 = std::chrono::steady_clock::now();
  std::uint64_t n = 0;
  try {
    for (const Instance& inst : stream) {
      const auto step = pipeline.fit_score_partial(inst);
      scores << inst.index << ',' << format_g9(step.raw) << ','
             << format_g9(step.final_score) << ',';
      if (inst.label) scores << *inst.label;
      scores << '\n';
      if (inst.label) metric.update(*inst.label, step.final_score);
      ++n;
    }
  } catch (...) {
    scores.flush();
    throw;
  }
  const auto t1 = std::chrono::steady_clock::now();

  RunResult result;
  result.instances = n;
  result.seconds = std::chrono::duration<double>(t1 - t0).count();
  result.scores_path = config.outputs.scores;
  result.report_path = config.outputs.report;
  if (metric.defined()) result.metric_value = metric.get();

  scores.flush();
  if (!scores) {
    throw Error(ErrorKind::Io, "write failure on '" + config.outputs.scores + "'");
  }
  write_report(config, n, result.metric_value);

  if (result.metric_value) {
    out << "Area under ROC metric is " << format_g9(*result.metric_value)
        << ".\n";
  } else {
    out << "Area under ROC metric is undefined (stream carries no labels).\n";
  }
  out << "Processed " << n << " instances in " << format_g9(result.seconds)
      << " s; scores: " << result.scores_path
      << ", report: " << result.report_path << "\n";
  return result;
}

int exit_code_for(const Error& error) {
  switch (error.kind()) {
    case ErrorKind::Config: return 1;
    case ErrorKind::Io: return 2;
    default: return 3;
  }
}

}  // namespace sad
