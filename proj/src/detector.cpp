#include "sad/detector.hpp"

#include "sad/models/half_space_trees.hpp"
#include "sad/models/knn.hpp"
#include "sad/models/loda.hpp"
#include "sad/models/mahalanobis.hpp"
#include "sad/models/mean_deviation.hpp"

namespace sad {

namespace {

constexpr std::string_view kMagic = "SADSTATE";
constexpr std::uint32_t kFormatVersion = 1;

void check_dimension(Eigen::Index bound, Eigen::Index got) {
  if (bound != 0 && bound != got) {
    throw Error(ErrorKind::DimensionMismatch,
                "expected dimension " + std::to_string(bound) + ", got " +
                    std::to_string(got));
  }
}

}  // namespace

void Detector::fit_partial(const Eigen::Ref<const Vector>& x,
                           std::optional<int> label) {
  (void)label;  // unsupervised: accepted, never consumed
  require_finite(x);
  check_dimension(dim_, x.size());
  if (dim_ == 0) {
    dim_ = x.size();
    bind_dimension(dim_);
  }
  fit_one(x);
  ++instances_seen_;
}

double Detector::score_partial(const Eigen::Ref<const Vector>& x) const {
  require_finite(x);
  check_dimension(dim_, x.size());
  return score_one(x);
}

double Detector::fit_score_partial(const Eigen::Ref<const Vector>& x,
                                   std::optional<int> label) {
  fit_partial(x, label);
  return score_partial(x);
}

void Detector::fit(const StreamBatch& batch) {
  for (std::size_t i = 0; i < batch.size(); ++i) {
    try {
      fit_partial(batch[i]);
    } catch (const Error& e) {
      throw BatchError(e, i);
    }
  }
}

std::vector<double> Detector::score(const StreamBatch& batch) const {
  std::vector<double> out;
  out.reserve(batch.size());
  for (std::size_t i = 0; i < batch.size(); ++i) {
    try {
      out.push_back(score_partial(batch[i]));
    } catch (const Error& e) {
      throw BatchError(e, i, std::move(out));
    }
  }
  return out;
}

std::vector<double> Detector::fit_score(const StreamBatch& batch) {
  std::vector<double> out;
  out.reserve(batch.size());
  for (std::size_t i = 0; i < batch.size(); ++i) {
    try {
      out.push_back(fit_score_partial(batch[i]));
    } catch (const Error& e) {
      throw BatchError(e, i, std::move(out));
    }
  }
  return out;
}

void Detector::force_bind(Eigen::Index m) {
  check_dimension(dim_, m);
  if (dim_ == 0) {
    dim_ = m;
    bind_dimension(dim_);
  }
}

std::string Detector::serialize() const {
  ArchiveWriter w;
  w.put_str(kMagic);
  w.put_u32(kFormatVersion);
  w.put_str(name());
  w.put_u32(state_version());
  w.put_u64(seed_);
  w.put_u64(instances_seen_);
  w.put_u64(static_cast<std::uint64_t>(dim_));
  save_state(w);
  return w.take();
}

void Detector::load_base(ArchiveReader& r) {
  seed_ = r.get_u64();
  instances_seen_ = r.get_u64();
  dim_ = static_cast<Eigen::Index>(r.get_u64());
}

std::unique_ptr<Detector> detail_make_for_load(const std::string& tag) {
  // Closed registry: explicit construction keeps static-library linking
  // free of self-registration pitfalls.
  if (tag == "meandev") return std::make_unique<MeanDeviation>();
  if (tag == "knn") return std::make_unique<SlidingWindowKnn>();
  if (tag == "mahalanobis") return std::make_unique<Mahalanobis>();
  if (tag == "loda") return std::make_unique<Loda>();
  if (tag == "hst") return std::make_unique<HalfSpaceTrees>();
  throw Error(ErrorKind::Serialize, "unknown detector tag '" + tag + "'");
}

std::unique_ptr<Detector> Detector::deserialize(std::string_view blob) {
  ArchiveReader r(blob);
  if (r.get_str() != kMagic) {
    throw Error(ErrorKind::Serialize, "bad state magic");
  }
  const std::uint32_t format = r.get_u32();
  if (format != kFormatVersion) {
    throw Error(ErrorKind::Serialize,
                "unsupported state format " + std::to_string(format));
  }
  const std::string tag = r.get_str();
  auto det = detail_make_for_load(tag);
  const std::uint32_t version = r.get_u32();
  if (version != det->state_version()) {
    throw Error(ErrorKind::Serialize, "unsupported " + tag + " state version " +
                                          std::to_string(version));
  }
  det->load_base(r);
  det->load_state(r);
  if (!r.exhausted()) {
    throw Error(ErrorKind::Serialize, "trailing bytes in state blob");
  }
  return det;
}

}  // namespace sad
