#include "sad/stream.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <string_view>

#include "sad/rng.hpp"

namespace sad {

namespace {

double parse_cell(std::string_view cell, std::size_t line_no) {
  double v = 0.0;
  const auto* first = cell.data();
  const auto* last = cell.data() + cell.size();
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || ptr != last || cell.empty()) {
    throw Error(ErrorKind::RowParse,
                "line " + std::to_string(line_no) + ": cell '" +
                    std::string(cell) + "' is not a number",
                line_no);
  }
  return v;
}

std::vector<std::string_view> split_row(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      cells.push_back(line.substr(start));
      break;
    }
    cells.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return cells;
}

}  // namespace

StreamSource parse_csv(const std::string& body, LabelColumn label_column,
                       bool has_header, const std::string& path) {
  StreamSource source;
  source.kind = StreamSource::Kind::csv;
  source.has_labels = !std::holds_alternative<LabelColumn::None>(label_column.spec);

  std::istringstream in(body);
  std::string line;
  std::size_t line_no = 0;
  std::size_t n_cols = 0;
  std::size_t label_idx = 0;  // past-the-end of n_cols when no label
  bool skipped_header = false;

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (has_header && !skipped_header) {
      skipped_header = true;
      continue;
    }

    const auto cells = split_row(line);
    if (n_cols == 0) {
      n_cols = cells.size();
      label_idx = n_cols;
      if (std::holds_alternative<LabelColumn::Last>(label_column.spec)) {
        label_idx = n_cols - 1;
      } else if (const auto* at = std::get_if<std::size_t>(&label_column.spec)) {
        if (*at >= n_cols) {
          throw Error(ErrorKind::BadParameter,
                      path + ": label column " + std::to_string(*at) +
                          " out of range for " + std::to_string(n_cols) +
                          " columns");
        }
        label_idx = *at;
      }
      if (source.has_labels && n_cols < 2) {
        throw Error(ErrorKind::RowParse,
                    "line " + std::to_string(line_no) +
                        ": need at least one feature beside the label",
                    line_no);
      }
      source.m = static_cast<Eigen::Index>(source.has_labels ? n_cols - 1 : n_cols);
    }
    if (cells.size() != n_cols) {
      throw Error(ErrorKind::RowParse,
                  "line " + std::to_string(line_no) + ": expected " +
                      std::to_string(n_cols) + " columns, got " +
                      std::to_string(cells.size()),
                  line_no);
    }

    Instance inst;
    inst.features.resize(source.m);
    Eigen::Index f = 0;
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (c == label_idx) {
        if (cells[c] == "0") {
          inst.label = 0;
        } else if (cells[c] == "1") {
          inst.label = 1;
        } else {
          throw Error(ErrorKind::RowParse,
                      "line " + std::to_string(line_no) + ": label '" +
                          std::string(cells[c]) + "' must be 0 or 1",
                      line_no);
        }
        continue;
      }
      inst.features[f++] = parse_cell(cells[c], line_no);
    }
    inst.index = static_cast<std::int64_t>(source.instances.size());
    source.instances.push_back(std::move(inst));
  }
  return source;
}

StreamSource read_csv_stream(const std::string& path, LabelColumn label_column,
                             bool has_header) {
  std::ifstream file(path, std::ios::binary);
  if (!file) {
    throw Error(ErrorKind::Io, "cannot open '" + path + "'");
  }
  std::ostringstream body;
  body << file.rdbuf();
  if (file.bad()) {
    throw Error(ErrorKind::Io, "read failure on '" + path + "'");
  }
  return parse_csv(body.str(), label_column, has_header, path);
}

StreamSource generate_synthetic(std::int64_t n, Eigen::Index m,
                                double anomaly_rate, std::uint64_t seed) {
  if (n < 1) throw Error(ErrorKind::BadParameter, "synthetic: n must be >= 1");
  if (m < 1) throw Error(ErrorKind::BadParameter, "synthetic: m must be >= 1");
  if (!(anomaly_rate >= 0.0 && anomaly_rate <= 1.0)) {
    throw Error(ErrorKind::BadParameter,
                "synthetic: anomaly_rate must be in [0, 1]");
  }
  StreamSource source;
  source.kind = StreamSource::Kind::synthetic;
  source.m = m;
  source.has_labels = true;
  source.seed = seed;
  source.instances.reserve(static_cast<std::size_t>(n));
  Rng rng(seed);
  for (std::int64_t i = 0; i < n; ++i) {
    const bool anomalous = rng.uniform01() < anomaly_rate;
    Instance inst;
    inst.features.resize(m);
    for (Eigen::Index j = 0; j < m; ++j) {
      inst.features[j] = anomalous ? rng.uniform(-6.0, 6.0) : rng.normal();
    }
    inst.label = anomalous ? 1 : 0;
    inst.index = i;
    source.instances.push_back(std::move(inst));
  }
  return source;
}

std::vector<Instance> iterate(const StreamSource& source, bool shuffle,
                              std::uint64_t seed) {
  std::vector<Instance> out = source.instances;
  if (shuffle) {
    Rng rng(seed);
    for (std::size_t i = out.size(); i > 1; --i) {
      const std::size_t j = rng.uniform_int(i);
      std::swap(out[i - 1], out[j]);
    }
  }
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i].index = static_cast<std::int64_t>(i);
  }
  return out;
}

}  // namespace sad
