#pragma once

#include <unordered_map>
#include <vector>

#include "sad/detector.hpp"

namespace sad {

/// Streaming mass-based forest. Each tree halves a seeded random workspace:
/// every node splits a seeded random dimension at the midpoint of its
/// sub-range, down to a fixed depth. Structure is implicit in the seed, so
/// only visited nodes materialize (node id 1 = root, children 2i / 2i+1).
///
/// Fitting routes the instance root-to-leaf, bumping each node's latest-window
/// mass; every `window` instances the latest masses become the reference
/// masses. Scoring descends until the reference mass falls under 10% of the
/// window size (or the leaf) and takes mass * 2^depth there; the negated sum
/// over trees is the anomaly score, so sparse regions score high. Until the
/// first window completes, the accumulating masses stand in for the
/// reference.
class HalfSpaceTrees final : public Detector {
 public:
  struct NodeMass {
    std::uint64_t reference = 0;
    std::uint64_t latest = 0;
  };
  using MassMap = std::unordered_map<std::uint64_t, NodeMass>;

  explicit HalfSpaceTrees(int trees = 25, int depth = 15, int window = 250,
                          std::uint64_t seed = 0);

  /// Test hook: every tree gets the supplied workspace instead of a seeded
  /// random one.
  static HalfSpaceTrees with_workspace(int trees, int depth, int window,
                                       const Vector& lo, const Vector& hi,
                                       std::uint64_t seed = 0);

  std::string name() const override { return "hst"; }
  std::size_t retained_instances() const override { return 0; }
  std::size_t memory_budget() const override { return 0; }
  std::unique_ptr<Detector> clone() const override {
    return std::make_unique<HalfSpaceTrees>(*this);
  }

  int tree_count() const { return n_trees_; }
  int depth() const { return depth_; }
  int window_size() const { return window_; }
  std::uint64_t window_fill() const { return window_fill_; }
  bool has_reference() const { return has_reference_; }
  const MassMap& tree_masses(int tree) const { return trees_.at(tree).masses; }

 protected:
  void fit_one(const Vector& x) override;
  double score_one(const Vector& x) const override;
  void bind_dimension(Eigen::Index m) override;
  void save_state(ArchiveWriter& w) const override;
  void load_state(ArchiveReader& r) override;

 private:
  struct Tree {
    std::uint64_t seed = 0;
    Vector lo, hi;
    MassMap masses;
  };

  Eigen::Index split_dimension(const Tree& tree, std::uint64_t node_id) const;

  int n_trees_;
  int depth_;
  int window_;
  double size_limit_;  // early scoring stop: 10% of the window
  bool workspace_preset_ = false;
  Vector preset_lo_, preset_hi_;
  std::vector<Tree> trees_;
  std::uint64_t window_fill_ = 0;
  bool has_reference_ = false;
};

}  // namespace sad
