#include "sad/config.hpp"

#include <fstream>
#include <json.hpp>
#include <sstream>

namespace sad {

namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& path, const std::string& why) {
  throw Error(ErrorKind::Config, "config: " + path + ": " + why);
}

void reject_unknown(const json& obj, const std::string& path,
                    std::initializer_list<const char*> allowed) {
  for (const auto& [key, value] : obj.items()) {
    bool known = false;
    for (const char* a : allowed) {
      if (key == a) {
        known = true;
        break;
      }
    }
    if (!known) bad(path + "." + key, "unknown key");
  }
}

const json* find(const json& obj, const char* key) {
  const auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

double get_number(const json& v, const std::string& path) {
  if (!v.is_number()) bad(path, "expected a number");
  return v.get<double>();
}

std::int64_t get_int(const json& v, const std::string& path) {
  if (!v.is_number_integer()) bad(path, "expected an integer");
  return v.get<std::int64_t>();
}

std::string get_string(const json& v, const std::string& path) {
  if (!v.is_string()) bad(path, "expected a string");
  return v.get<std::string>();
}

bool get_bool(const json& v, const std::string& path) {
  if (!v.is_boolean()) bad(path, "expected a boolean");
  return v.get<bool>();
}

void parse_input(const json& v, RunConfig& cfg) {
  if (!v.is_object()) bad("input", "expected an object");
  const json* kind = find(v, "kind");
  if (!kind) bad("input.kind", "missing");
  const std::string k = get_string(*kind, "input.kind");
  if (k == "csv") {
    reject_unknown(v, "input", {"kind", "path", "label_column", "has_header"});
    CsvInputSpec spec;
    const json* path = find(v, "path");
    if (!path) bad("input.path", "missing");
    spec.path = get_string(*path, "input.path");
    if (const json* lc = find(v, "label_column")) {
      if (lc->is_string()) {
        const std::string s = lc->get<std::string>();
        if (s == "last") spec.label_column = LabelColumn::last();
        else if (s == "none") spec.label_column = LabelColumn::none();
        else bad("input.label_column", "expected \"last\", \"none\" or an index");
      } else if (lc->is_number_integer()) {
        const auto idx = lc->get<std::int64_t>();
        if (idx < 0) bad("input.label_column", "index must be >= 0");
        spec.label_column = LabelColumn::at(static_cast<std::size_t>(idx));
      } else {
        bad("input.label_column", "expected \"last\", \"none\" or an index");
      }
    }
    if (const json* h = find(v, "has_header")) {
      spec.has_header = get_bool(*h, "input.has_header");
    }
    cfg.input = spec;
  } else if (k == "synthetic") {
    reject_unknown(v, "input", {"kind", "n", "m", "rate"});
    SyntheticInputSpec spec;
    if (const json* n = find(v, "n")) spec.n = get_int(*n, "input.n");
    if (const json* m = find(v, "m"))
      spec.m = static_cast<Eigen::Index>(get_int(*m, "input.m"));
    if (const json* r = find(v, "rate")) spec.rate = get_number(*r, "input.rate");
    if (spec.n < 1) bad("input.n", "must be >= 1");
    if (spec.m < 1) bad("input.m", "must be >= 1");
    if (!(spec.rate >= 0.0 && spec.rate <= 1.0)) bad("input.rate", "must be in [0, 1]");
    cfg.input = spec;
  } else {
    bad("input.kind", "unknown input kind '" + k + "'");
  }
}

DetectorSpec parse_detector(const json& v, const std::string& path) {
  if (!v.is_object()) bad(path, "expected an object");
  const json* kind = find(v, "kind");
  if (!kind) bad(path + ".kind", "missing");
  const std::string k = get_string(*kind, path + ".kind");
  if (k == "loda") {
    reject_unknown(v, path, {"kind", "k", "bins", "warmup"});
    LodaSpec spec;
    if (const json* x = find(v, "k")) spec.k = static_cast<int>(get_int(*x, path + ".k"));
    if (const json* x = find(v, "bins")) spec.bins = static_cast<int>(get_int(*x, path + ".bins"));
    if (const json* x = find(v, "warmup")) spec.warmup = static_cast<int>(get_int(*x, path + ".warmup"));
    if (spec.k < 1) bad(path + ".k", "must be >= 1");
    if (spec.bins < 1) bad(path + ".bins", "must be >= 1");
    if (spec.warmup < 1) bad(path + ".warmup", "must be >= 1");
    return spec;
  }
  if (k == "hst") {
    reject_unknown(v, path, {"kind", "trees", "depth", "window"});
    HstSpec spec;
    if (const json* x = find(v, "trees")) spec.trees = static_cast<int>(get_int(*x, path + ".trees"));
    if (const json* x = find(v, "depth")) spec.depth = static_cast<int>(get_int(*x, path + ".depth"));
    if (const json* x = find(v, "window")) spec.window = static_cast<int>(get_int(*x, path + ".window"));
    if (spec.trees < 1) bad(path + ".trees", "must be >= 1");
    if (spec.depth < 0 || spec.depth > 60) bad(path + ".depth", "must be in [0, 60]");
    if (spec.window < 1) bad(path + ".window", "must be >= 1");
    return spec;
  }
  if (k == "knn") {
    reject_unknown(v, path, {"kind", "window", "k"});
    KnnSpec spec;
    if (const json* x = find(v, "window")) spec.window = static_cast<int>(get_int(*x, path + ".window"));
    if (const json* x = find(v, "k")) spec.k = static_cast<int>(get_int(*x, path + ".k"));
    if (spec.window < 1) bad(path + ".window", "must be >= 1");
    if (spec.k < 1) bad(path + ".k", "must be >= 1");
    return spec;
  }
  if (k == "mahalanobis") {
    reject_unknown(v, path, {"kind", "epsilon"});
    MahalanobisSpec spec;
    if (const json* x = find(v, "epsilon")) spec.epsilon = get_number(*x, path + ".epsilon");
    if (!(spec.epsilon > 0.0)) bad(path + ".epsilon", "must be > 0");
    return spec;
  }
  if (k == "meandev") {
    reject_unknown(v, path, {"kind"});
    return MeanDevSpec{};
  }
  bad(path + ".kind", "unknown detector '" + k + "'");
}

void parse_pipeline(const json& v, RunConfig& cfg) {
  if (!v.is_object()) bad("pipeline", "expected an object");
  reject_unknown(v, "pipeline",
                 {"preprocessor", "projector", "detectors", "ensemble",
                  "postprocessors", "calibrator"});
  if (const json* p = find(v, "preprocessor")) {
    const std::string s = get_string(*p, "pipeline.preprocessor");
    if (s == "unit_norm") cfg.preprocessor = PreprocessorKind::unit_norm;
    else if (s == "standardize") cfg.preprocessor = PreprocessorKind::standardize;
    else bad("pipeline.preprocessor", "unknown preprocessor '" + s + "'");
  }
  if (const json* p = find(v, "projector")) {
    if (!p->is_object()) bad("pipeline.projector", "expected an object");
    reject_unknown(*p, "pipeline.projector", {"d", "kind"});
    ProjectorSpec spec;
    const json* d = find(*p, "d");
    if (!d) bad("pipeline.projector.d", "missing");
    spec.d = static_cast<Eigen::Index>(get_int(*d, "pipeline.projector.d"));
    if (spec.d < 1) bad("pipeline.projector.d", "must be >= 1");
    if (const json* kd = find(*p, "kind")) {
      const std::string s = get_string(*kd, "pipeline.projector.kind");
      if (s == "gaussian") spec.kind = ProjectorKind::gaussian;
      else if (s == "sparse") spec.kind = ProjectorKind::sparse;
      else bad("pipeline.projector.kind", "unknown projector '" + s + "'");
    }
    cfg.projector = spec;
  }
  const json* dets = find(v, "detectors");
  if (!dets) bad("pipeline.detectors", "missing");
  if (!dets->is_array() || dets->empty()) {
    bad("pipeline.detectors", "expected a nonempty array");
  }
  for (std::size_t i = 0; i < dets->size(); ++i) {
    cfg.detectors.push_back(parse_detector(
        (*dets)[i], "pipeline.detectors[" + std::to_string(i) + "]"));
  }
  if (const json* e = find(v, "ensemble")) {
    if (!e->is_object()) bad("pipeline.ensemble", "expected an object");
    reject_unknown(*e, "pipeline.ensemble", {"strategy"});
    const json* s = find(*e, "strategy");
    if (!s) bad("pipeline.ensemble.strategy", "missing");
    const std::string name = get_string(*s, "pipeline.ensemble.strategy");
    if (name == "average") cfg.ensemble = CombineStrategy::average;
    else if (name == "maximum") cfg.ensemble = CombineStrategy::maximum;
    else if (name == "median") cfg.ensemble = CombineStrategy::median;
    else bad("pipeline.ensemble.strategy", "unknown strategy '" + name + "'");
  }
  if (cfg.detectors.size() > 1 && !cfg.ensemble) {
    bad("pipeline.ensemble", "required when more than one detector is configured");
  }
  if (const json* pp = find(v, "postprocessors")) {
    if (!pp->is_array()) bad("pipeline.postprocessors", "expected an array");
    for (std::size_t i = 0; i < pp->size(); ++i) {
      const std::string path = "pipeline.postprocessors[" + std::to_string(i) + "]";
      const json& item = (*pp)[i];
      if (!item.is_object()) bad(path, "expected an object");
      const json* kind = find(item, "kind");
      if (!kind) bad(path + ".kind", "missing");
      const std::string k = get_string(*kind, path + ".kind");
      if (k != "ewma") bad(path + ".kind", "unknown postprocessor '" + k + "'");
      reject_unknown(item, path, {"kind", "alpha"});
      EwmaSpec spec;
      if (const json* a = find(item, "alpha")) spec.alpha = get_number(*a, path + ".alpha");
      if (!(spec.alpha > 0.0 && spec.alpha <= 1.0)) bad(path + ".alpha", "must be in (0, 1]");
      cfg.postprocessors.push_back(spec);
    }
  }
  if (const json* c = find(v, "calibrator")) {
    if (!c->is_object()) bad("pipeline.calibrator", "expected an object");
    const json* kind = find(*c, "kind");
    if (!kind) bad("pipeline.calibrator.kind", "missing");
    const std::string k = get_string(*kind, "pipeline.calibrator.kind");
    if (k == "conformal") {
      reject_unknown(*c, "pipeline.calibrator", {"kind", "window"});
      ConformalSpec spec;
      if (const json* w = find(*c, "window")) {
        const auto win = get_int(*w, "pipeline.calibrator.window");
        if (win < 1) bad("pipeline.calibrator.window", "must be >= 1");
        spec.window = static_cast<std::size_t>(win);
      }
      cfg.calibrator = spec;
    } else if (k == "gaussian_tail") {
      reject_unknown(*c, "pipeline.calibrator", {"kind"});
      cfg.calibrator = GaussianTailSpec{};
    } else {
      bad("pipeline.calibrator.kind", "unknown calibrator '" + k + "'");
    }
  }
}

void parse_metric(const json& v, RunConfig& cfg) {
  if (!v.is_object()) bad("metric", "expected an object");
  reject_unknown(v, "metric", {"kind", "window"});
  if (const json* k = find(v, "kind")) {
    const std::string s = get_string(*k, "metric.kind");
    if (s != "auroc") bad("metric.kind", "unknown metric '" + s + "'");
  }
  if (const json* w = find(v, "window")) {
    const auto win = get_int(*w, "metric.window");
    if (win < 1) bad("metric.window", "must be >= 1");
    cfg.metric.window = static_cast<std::size_t>(win);
  }
}

void parse_outputs(const json& v, RunConfig& cfg) {
  if (!v.is_object()) bad("outputs", "expected an object");
  reject_unknown(v, "outputs", {"scores", "report"});
  if (const json* s = find(v, "scores")) cfg.outputs.scores = get_string(*s, "outputs.scores");
  if (const json* r = find(v, "report")) cfg.outputs.report = get_string(*r, "outputs.report");
}

json detector_to_json(const DetectorSpec& spec) {
  json j;
  if (const auto* d = std::get_if<LodaSpec>(&spec)) {
    j["kind"] = "loda";
    j["k"] = d->k;
    j["bins"] = d->bins;
    j["warmup"] = d->warmup;
  } else if (const auto* d = std::get_if<HstSpec>(&spec)) {
    j["kind"] = "hst";
    j["trees"] = d->trees;
    j["depth"] = d->depth;
    j["window"] = d->window;
  } else if (const auto* d = std::get_if<KnnSpec>(&spec)) {
    j["kind"] = "knn";
    j["window"] = d->window;
    j["k"] = d->k;
  } else if (const auto* d = std::get_if<MahalanobisSpec>(&spec)) {
    j["kind"] = "mahalanobis";
    j["epsilon"] = d->epsilon;
  } else {
    j["kind"] = "meandev";
  }
  return j;
}

}  // namespace

RunConfig parse_config(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::Config, std::string("config: invalid JSON: ") + e.what());
  }
  if (!root.is_object()) bad("<root>", "expected an object");
  reject_unknown(root, "<root>",
                 {"input", "pipeline", "metric", "seed", "shuffle", "outputs"});

  RunConfig cfg;
  const json* input = find(root, "input");
  if (!input) bad("input", "missing");
  parse_input(*input, cfg);

  const json* pipeline = find(root, "pipeline");
  if (!pipeline) bad("pipeline", "missing");
  parse_pipeline(*pipeline, cfg);

  if (const json* m = find(root, "metric")) parse_metric(*m, cfg);
  if (const json* s = find(root, "seed")) {
    const auto seed = get_int(*s, "seed");
    if (seed < 0) bad("seed", "must be >= 0");
    cfg.seed = static_cast<std::uint64_t>(seed);
  }
  if (const json* s = find(root, "shuffle")) cfg.shuffle = get_bool(*s, "shuffle");
  if (const json* o = find(root, "outputs")) parse_outputs(*o, cfg);
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) {
    throw Error(ErrorKind::Io, "cannot open config '" + path + "'");
  }
  std::ostringstream body;
  body << file.rdbuf();
  return parse_config(body.str());
}

std::string canonical_config(const RunConfig& config) {
  json j;
  if (const auto* csv = std::get_if<CsvInputSpec>(&config.input)) {
    j["input"]["kind"] = "csv";
    j["input"]["path"] = csv->path;
    if (std::holds_alternative<LabelColumn::None>(csv->label_column.spec)) {
      j["input"]["label_column"] = "none";
    } else if (std::holds_alternative<LabelColumn::Last>(csv->label_column.spec)) {
      j["input"]["label_column"] = "last";
    } else {
      j["input"]["label_column"] = std::get<std::size_t>(csv->label_column.spec);
    }
    j["input"]["has_header"] = csv->has_header;
  } else {
    const auto& syn = std::get<SyntheticInputSpec>(config.input);
    j["input"]["kind"] = "synthetic";
    j["input"]["n"] = syn.n;
    j["input"]["m"] = static_cast<std::int64_t>(syn.m);
    j["input"]["rate"] = syn.rate;
  }
  if (config.preprocessor) {
    j["pipeline"]["preprocessor"] =
        *config.preprocessor == PreprocessorKind::unit_norm ? "unit_norm"
                                                            : "standardize";
  }
  if (config.projector) {
    j["pipeline"]["projector"]["d"] = static_cast<std::int64_t>(config.projector->d);
    j["pipeline"]["projector"]["kind"] =
        config.projector->kind == ProjectorKind::gaussian ? "gaussian" : "sparse";
  }
  j["pipeline"]["detectors"] = json::array();
  for (const DetectorSpec& d : config.detectors) {
    j["pipeline"]["detectors"].push_back(detector_to_json(d));
  }
  if (config.ensemble) {
    j["pipeline"]["ensemble"]["strategy"] = to_string(*config.ensemble);
  }
  if (!config.postprocessors.empty()) {
    j["pipeline"]["postprocessors"] = json::array();
    for (const EwmaSpec& p : config.postprocessors) {
      j["pipeline"]["postprocessors"].push_back({{"kind", "ewma"}, {"alpha", p.alpha}});
    }
  }
  if (config.calibrator) {
    if (const auto* c = std::get_if<ConformalSpec>(&*config.calibrator)) {
      j["pipeline"]["calibrator"] = {{"kind", "conformal"}, {"window", c->window}};
    } else {
      j["pipeline"]["calibrator"] = {{"kind", "gaussian_tail"}};
    }
  }
  j["metric"]["kind"] = "auroc";
  if (config.metric.window) j["metric"]["window"] = *config.metric.window;
  j["seed"] = config.seed;
  j["shuffle"] = config.shuffle;
  j["outputs"]["scores"] = config.outputs.scores;
  j["outputs"]["report"] = config.outputs.report;
  return j.dump(2);
}

std::string config_digest(const RunConfig& config) {
  const std::string canon = canonical_config(config);
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : canon) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void apply_overrides(RunConfig& config, const CliOverrides& overrides) {
  if (overrides.csv_path) {
    auto* csv = std::get_if<CsvInputSpec>(&config.input);
    if (!csv) {
      throw Error(ErrorKind::Config,
                  "config: --input override requires a csv input");
    }
    csv->path = *overrides.csv_path;
  }
  if (overrides.scores_path) config.outputs.scores = *overrides.scores_path;
  if (overrides.report_path) config.outputs.report = *overrides.report_path;
  if (overrides.seed) config.seed = *overrides.seed;
}

}  // namespace sad
