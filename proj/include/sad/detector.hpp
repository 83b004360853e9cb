#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "sad/archive.hpp"
#include "sad/errors.hpp"
#include "sad/types.hpp"

namespace sad {

/// Base contract every streaming detector honors.
///
/// The six-method interface: `fit_partial` / `score_partial` /
/// `fit_score_partial` work on single instances, `fit` / `score` /
/// `fit_score` are their sequential batch forms. Batch forms are defined as
/// loops over the partial forms, so the final state of `fit(batch)` is
/// bit-identical to driving `fit_partial` by hand.
///
/// Conventions:
///  - scores are finite doubles, higher = more anomalous;
///  - labels passed to fit calls are accepted and ignored (all shipped
///    detectors are unsupervised; labels exist for metrics);
///  - the input dimension is adopted from the first fitted instance and
///    enforced afterwards;
///  - scoring is read-only and a fresh detector scores everything 0;
///  - `fit_score_partial` fits first, then scores.
///
/// Concurrency: one writer per detector; concurrent `score_*` calls on a
/// quiescent detector are safe; distinct detectors are independent.
class Detector {
 public:
  virtual ~Detector() = default;

  void fit_partial(const Eigen::Ref<const Vector>& x,
                   std::optional<int> label = std::nullopt);
  void fit_partial(const Instance& inst) {
    fit_partial(inst.features, inst.label);
  }

  double score_partial(const Eigen::Ref<const Vector>& x) const;
  double score_partial(const Instance& inst) const {
    return score_partial(inst.features);
  }

  double fit_score_partial(const Eigen::Ref<const Vector>& x,
                           std::optional<int> label = std::nullopt);
  double fit_score_partial(const Instance& inst) {
    return fit_score_partial(inst.features, inst.label);
  }

  void fit(const StreamBatch& batch);
  std::vector<double> score(const StreamBatch& batch) const;
  std::vector<double> fit_score(const StreamBatch& batch);

  /// Dimension bound at the first fit; 0 while unbound.
  Eigen::Index dim() const { return dim_; }
  std::uint64_t instances_seen() const { return instances_seen_; }
  std::uint64_t seed() const { return seed_; }

  virtual std::string name() const = 0;

  /// Introspection hook backing the bounded-memory contract: raw instances
  /// currently retained, and the declared ceiling.
  virtual std::size_t retained_instances() const = 0;
  virtual std::size_t memory_budget() const = 0;

  virtual std::unique_ptr<Detector> clone() const = 0;

  /// Versioned self-describing blob; deserialize(serialize(s)) reproduces
  /// the state byte-for-byte.
  std::string serialize() const;
  static std::unique_ptr<Detector> deserialize(std::string_view blob);

 protected:
  explicit Detector(std::uint64_t seed) : seed_(seed) {}
  Detector(const Detector&) = default;
  Detector& operator=(const Detector&) = default;

  virtual void fit_one(const Vector& x) = 0;
  virtual double score_one(const Vector& x) const = 0;

  /// Called exactly once, when the dimension is adopted.
  virtual void bind_dimension(Eigen::Index m) { (void)m; }

  virtual void save_state(ArchiveWriter& w) const = 0;
  virtual void load_state(ArchiveReader& r) = 0;
  virtual std::uint32_t state_version() const { return 1; }

  /// Binds the dimension outside of fit; used by fixed-structure factories.
  void force_bind(Eigen::Index m);

 private:
  friend std::unique_ptr<Detector> detail_make_for_load(const std::string&);
  void load_base(ArchiveReader& r);

  Eigen::Index dim_ = 0;
  std::uint64_t instances_seen_ = 0;
  std::uint64_t seed_ = 0;
};

}  // namespace sad
