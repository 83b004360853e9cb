#include "sad/models/half_space_trees.hpp"

#include <algorithm>
#include <cmath>

#include "sad/rng.hpp"

namespace sad {

HalfSpaceTrees::HalfSpaceTrees(int trees, int depth, int window,
                               std::uint64_t seed)
    : Detector(seed), n_trees_(trees), depth_(depth), window_(window) {
  if (n_trees_ < 1) throw Error(ErrorKind::BadParameter, "hst: trees must be >= 1");
  if (depth_ < 0 || depth_ > 60) {
    throw Error(ErrorKind::BadParameter, "hst: depth must be in [0, 60]");
  }
  if (window_ < 1) throw Error(ErrorKind::BadParameter, "hst: window must be >= 1");
  size_limit_ = 0.1 * window_;
}

HalfSpaceTrees HalfSpaceTrees::with_workspace(int trees, int depth, int window,
                                              const Vector& lo,
                                              const Vector& hi,
                                              std::uint64_t seed) {
  if (lo.size() != hi.size() || lo.size() == 0 ||
      ((hi - lo).array() <= 0.0).any()) {
    throw Error(ErrorKind::BadParameter, "hst: invalid workspace bounds");
  }
  HalfSpaceTrees d(trees, depth, window, seed);
  d.workspace_preset_ = true;
  d.preset_lo_ = lo;
  d.preset_hi_ = hi;
  d.force_bind(lo.size());
  return d;
}

void HalfSpaceTrees::bind_dimension(Eigen::Index m) {
  Rng rng(seed());
  trees_.resize(static_cast<std::size_t>(n_trees_));
  for (Tree& tree : trees_) tree.seed = rng.next_u64();
  for (Tree& tree : trees_) {
    if (workspace_preset_) {
      if (preset_lo_.size() != m) {
        throw Error(ErrorKind::DimensionMismatch,
                    "hst: workspace built for dimension " +
                        std::to_string(preset_lo_.size()));
      }
      tree.lo = preset_lo_;
      tree.hi = preset_hi_;
      continue;
    }
    // Per-dimension perturbed workspace around a base range of [-3, 3]:
    // s +/- 2*max(s - lo, hi - s) always covers the base, so centered,
    // roughly unit-scale streams land inside it. Standardize wider streams
    // upfront.
    constexpr double base = 3.0;
    tree.lo.resize(m);
    tree.hi.resize(m);
    for (Eigen::Index j = 0; j < m; ++j) {
      const double s = rng.uniform(-base, base);
      const double half = 2.0 * std::max(s + base, base - s);
      tree.lo[j] = s - half;
      tree.hi[j] = s + half;
    }
  }
}

Eigen::Index HalfSpaceTrees::split_dimension(const Tree& tree,
                                             std::uint64_t node_id) const {
  const std::uint64_t h =
      splitmix64(tree.seed ^ (node_id * 0x9E3779B97F4A7C15ULL));
  return static_cast<Eigen::Index>(h % static_cast<std::uint64_t>(dim()));
}

void HalfSpaceTrees::fit_one(const Vector& x) {
  for (Tree& tree : trees_) {
    Vector lo = tree.lo;
    Vector hi = tree.hi;
    std::uint64_t id = 1;
    for (int d = 0;; ++d) {
      ++tree.masses[id].latest;
      if (d == depth_) break;
      const Eigen::Index q = split_dimension(tree, id);
      const double mid = 0.5 * (lo[q] + hi[q]);
      if (x[q] < mid) {
        id = 2 * id;
        hi[q] = mid;
      } else {
        id = 2 * id + 1;
        lo[q] = mid;
      }
    }
  }
  if (++window_fill_ == static_cast<std::uint64_t>(window_)) {
    for (Tree& tree : trees_) {
      for (auto it = tree.masses.begin(); it != tree.masses.end();) {
        it->second.reference = it->second.latest;
        it->second.latest = 0;
        if (it->second.reference == 0) {
          it = tree.masses.erase(it);
        } else {
          ++it;
        }
      }
    }
    window_fill_ = 0;
    has_reference_ = true;
  }
}

double HalfSpaceTrees::score_one(const Vector& x) const {
  if (trees_.empty()) return 0.0;  // fresh state, dimension not bound yet
  double mass = 0.0;
  for (const Tree& tree : trees_) {
    Vector lo = tree.lo;
    Vector hi = tree.hi;
    std::uint64_t id = 1;
    for (int d = 0;; ++d) {
      const auto it = tree.masses.find(id);
      double node_mass = 0.0;
      if (it != tree.masses.end()) {
        node_mass = static_cast<double>(has_reference_ ? it->second.reference
                                                       : it->second.latest);
      }
      if (d == depth_ || node_mass < size_limit_) {
        mass += node_mass * std::exp2(d);
        break;
      }
      const Eigen::Index q = split_dimension(tree, id);
      const double mid = 0.5 * (lo[q] + hi[q]);
      if (x[q] < mid) {
        id = 2 * id;
        hi[q] = mid;
      } else {
        id = 2 * id + 1;
        lo[q] = mid;
      }
    }
  }
  return -mass;  // higher = more anomalous
}

void HalfSpaceTrees::save_state(ArchiveWriter& w) const {
  w.put_u64(static_cast<std::uint64_t>(n_trees_));
  w.put_u64(static_cast<std::uint64_t>(depth_));
  w.put_u64(static_cast<std::uint64_t>(window_));
  w.put_u8(workspace_preset_ ? 1 : 0);
  w.put_vector(preset_lo_);
  w.put_vector(preset_hi_);
  w.put_u64(window_fill_);
  w.put_u8(has_reference_ ? 1 : 0);
  w.put_u64(trees_.size());
  for (const Tree& tree : trees_) {
    w.put_u64(tree.seed);
    w.put_vector(tree.lo);
    w.put_vector(tree.hi);
    std::vector<std::uint64_t> ids;
    ids.reserve(tree.masses.size());
    for (const auto& [id, m] : tree.masses) ids.push_back(id);
    std::sort(ids.begin(), ids.end());
    w.put_u64(ids.size());
    for (std::uint64_t id : ids) {
      const NodeMass& m = tree.masses.at(id);
      w.put_u64(id);
      w.put_u64(m.reference);
      w.put_u64(m.latest);
    }
  }
}

void HalfSpaceTrees::load_state(ArchiveReader& r) {
  n_trees_ = static_cast<int>(r.get_u64());
  depth_ = static_cast<int>(r.get_u64());
  window_ = static_cast<int>(r.get_u64());
  size_limit_ = 0.1 * window_;
  workspace_preset_ = r.get_u8() != 0;
  preset_lo_ = r.get_vector();
  preset_hi_ = r.get_vector();
  window_fill_ = r.get_u64();
  has_reference_ = r.get_u8() != 0;
  trees_.assign(r.get_u64(), Tree{});
  for (Tree& tree : trees_) {
    tree.seed = r.get_u64();
    tree.lo = r.get_vector();
    tree.hi = r.get_vector();
    const std::uint64_t n = r.get_u64();
    tree.masses.clear();
    tree.masses.reserve(n);
    for (std::uint64_t i = 0; i < n; ++i) {
      const std::uint64_t id = r.get_u64();
      NodeMass m;
      m.reference = r.get_u64();
      m.latest = r.get_u64();
      tree.masses.emplace(id, m);
    }
  }
}

}  // namespace sad
