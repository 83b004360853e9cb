#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "sad/models/half_space_trees.hpp"
#include "sad/models/knn.hpp"
#include "sad/models/loda.hpp"
#include "sad/models/mahalanobis.hpp"
#include "sad/models/mean_deviation.hpp"
#include "test_support.hpp"

using namespace sad;
using namespace sad::test;

// ---------------------------------------------------------------- MeanDev

TEST_CASE("meandev worked values") {
  MeanDeviation d;
  d.fit_partial(vec({1.0}));
  d.fit_partial(vec({3.0}));
  CHECK(d.score_partial(vec({2.0})) == 0.0);
  CHECK(d.score_partial(vec({4.0})) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(MeanDeviation().score_partial(vec({7.0})) == 0.0);
}

// ------------------------------------------------------------------ LODA

TEST_CASE("loda fixed-histogram hook reproduces hand counts") {
  Matrix identity(1, 1);
  identity << 1.0;
  // bins over [0, 10), b = 10, absorb {1, 1, 1}
  Loda d = Loda::with_fixed_histograms(identity, 0.0, 10.0, 10);
  d.fit_partial(vec({1.0}));
  d.fit_partial(vec({1.0}));
  d.fit_partial(vec({1.0}));

  CHECK(d.score_partial(vec({1.0})) ==
        doctest::Approx(-std::log(4.0 / 13.0)).epsilon(1e-12));
  CHECK(d.score_partial(vec({9.0})) ==
        doctest::Approx(-std::log(1.0 / 13.0)).epsilon(1e-12));
  // out-of-range values clamp into the edge bin
  CHECK(d.score_partial(vec({10.5})) == d.score_partial(vec({9.5})));
}

TEST_CASE("loda scores match the brute-force recompute after warmup") {
  const int warmup = 32;
  const int bins = 8;
  Loda d(4, bins, warmup, 123);
  const auto xs = random_instances(100, 3, 55);

  std::vector<Vector> projected;
  for (std::size_t t = 0; t < xs.size(); ++t) {
    const double s = d.fit_score_partial(xs[t]);
    projected.push_back(d.projection_matrix() * xs[t]);
    if (d.warmed_up()) {
      const double expected =
          loda_oracle(projected, projected.back(), bins, warmup);
      CHECK(s == doctest::Approx(expected).epsilon(1e-12));
    }
  }
  CHECK(d.warmed_up());
  CHECK(d.retained_instances() == 0);  // buffer absorbed
}

TEST_CASE("loda warmup scoring works from the live buffer") {
  Loda d(2, 10, 16, 9);
  CHECK(d.fit_score_partial(vec({1.0, 0.0})) == 0.0);  // single buffered value
  const double s = d.fit_score_partial(vec({5.0, 2.0}));
  CHECK(std::isfinite(s));
  CHECK_FALSE(d.warmed_up());
  CHECK(d.retained_instances() == 2);
}

TEST_CASE("loda projections have ceil(sqrt(m)) nonzero entries per row") {
  Loda d(6, 10, 4, 77);
  const auto xs = random_instances(4, 7, 3);
  for (const Vector& x : xs) d.fit_partial(x);
  const Matrix& w = d.projection_matrix();
  REQUIRE(w.rows() == 6);
  REQUIRE(w.cols() == 7);
  const auto expected_nonzero = static_cast<Eigen::Index>(std::ceil(std::sqrt(7.0)));
  for (Eigen::Index i = 0; i < w.rows(); ++i) {
    CHECK((w.row(i).array() != 0.0).count() == expected_nonzero);
  }
}

// ------------------------------------------------------------------- HST

TEST_CASE("hst depth 0 scores every instance the same") {
  HalfSpaceTrees d = HalfSpaceTrees::with_workspace(1, 0, 3, vec({0.0}), vec({1.0}));
  d.fit_partial(vec({0.1}));
  d.fit_partial(vec({0.5}));
  d.fit_partial(vec({0.9}));
  CHECK(d.score_partial(vec({0.2})) == d.score_partial(vec({0.8})));
}

TEST_CASE("hst worked mass example at depth 1") {
  // single tree over [0, 1], split at 0.5, reference window {0.1, 0.2, 0.9}
  HalfSpaceTrees d = HalfSpaceTrees::with_workspace(1, 1, 3, vec({0.0}), vec({1.0}));
  d.fit_partial(vec({0.1}));
  d.fit_partial(vec({0.2}));
  d.fit_partial(vec({0.9}));
  REQUIRE(d.has_reference());

  CHECK(d.score_partial(vec({0.3})) == -4.0);  // r=2 at depth 1
  CHECK(d.score_partial(vec({0.8})) == -2.0);  // r=1 at depth 1
  CHECK(d.score_partial(vec({0.8})) > d.score_partial(vec({0.3})));
}

TEST_CASE("hst window swap moves latest mass to reference") {
  HalfSpaceTrees d = HalfSpaceTrees::with_workspace(1, 2, 4, vec({0.0}), vec({1.0}));
  for (int i = 0; i < 4; ++i) d.fit_partial(vec({0.25 * i}));
  const auto& masses = d.tree_masses(0);
  REQUIRE(masses.contains(1));
  CHECK(masses.at(1).reference == 4);  // r at root equals the window size
  CHECK(masses.at(1).latest == 0);
  CHECK(d.window_fill() == 0);
}

TEST_CASE("hst leaf reference masses sum to the previous window") {
  HalfSpaceTrees d(3, 4, 25, 2025);
  const auto xs = random_instances(75, 2, 8);  // exactly three windows
  for (const Vector& x : xs) d.fit_partial(x);
  for (int tree = 0; tree < d.tree_count(); ++tree) {
    std::uint64_t leaf_total = 0;
    const std::uint64_t first_leaf = 1ULL << d.depth();
    for (const auto& [id, mass] : d.tree_masses(tree)) {
      if (id >= first_leaf) leaf_total += mass.reference;
    }
    CHECK(leaf_total == 25);
  }
}

TEST_CASE("hst child masses never exceed the parent") {
  HalfSpaceTrees d(2, 5, 30, 31);
  const auto xs = random_instances(90, 3, 12);
  for (const Vector& x : xs) d.fit_partial(x);
  for (int tree = 0; tree < d.tree_count(); ++tree) {
    const auto& masses = d.tree_masses(tree);
    for (const auto& [id, mass] : masses) {
      if (id == 1) continue;
      const auto parent = masses.find(id / 2);
      REQUIRE(parent != masses.end());
      CHECK(mass.reference <= parent->second.reference);
      CHECK(mass.latest <= parent->second.latest);
    }
  }
}

TEST_CASE("hst retains no raw instances") {
  HalfSpaceTrees d(4, 6, 10, 77);
  for (const Vector& x : random_instances(200, 2, 4)) d.fit_partial(x);
  CHECK(d.retained_instances() == 0);
  CHECK(d.memory_budget() == 0);
}

// ------------------------------------------------------------------- kNN

TEST_CASE("knn worked values") {
  SlidingWindowKnn d(10, 1);
  d.fit_partial(vec({0.0}));
  d.fit_partial(vec({10.0}));
  CHECK(d.score_partial(vec({4.0})) == 4.0);

  // duplicate in window scores zero
  CHECK(d.score_partial(vec({10.0})) == 0.0);

  // empty window scores zero
  SlidingWindowKnn fresh(10, 3);
  CHECK(fresh.score_partial(vec({123.0})) == 0.0);
}

TEST_CASE("knn matches the all-pairs oracle") {
  const std::size_t w = 16, k = 4;
  SlidingWindowKnn d(w, k, 1);
  const auto xs = random_instances(80, 3, 20);
  std::vector<Vector> window;
  for (const Vector& x : xs) {
    d.fit_partial(x);
    window.push_back(x);
    if (window.size() > w) window.erase(window.begin());
    const Vector probe = 0.5 * x;
    CHECK(d.score_partial(probe) ==
          doctest::Approx(knn_oracle(window, probe, k)).epsilon(1e-12));
  }
  CHECK(d.retained_instances() == w);
}

TEST_CASE("knn evicts oldest-first") {
  SlidingWindowKnn d(2, 1);
  d.fit_partial(vec({1.0}));
  d.fit_partial(vec({2.0}));
  d.fit_partial(vec({3.0}));
  REQUIRE(d.window_contents().size() == 2);
  CHECK(d.window_contents()[0][0] == 2.0);
  CHECK(d.window_contents()[1][0] == 3.0);
}

// ----------------------------------------------------------- Mahalanobis

TEST_CASE("mahalanobis worked values") {
  Mahalanobis d;
  d.fit_partial(vec({1.0}));
  d.fit_partial(vec({3.0}));
  CHECK(d.score_partial(vec({2.0})) == 0.0);  // x = mean
  // mean 2, population variance 1: |4-2| / sqrt(1 + eps)
  CHECK(d.score_partial(vec({4.0})) == doctest::Approx(2.0).epsilon(1e-5));
}

TEST_CASE("mahalanobis with identity covariance reduces to Euclidean") {
  Mahalanobis d;
  d.fit_partial(vec({1.0, 1.0}));
  d.fit_partial(vec({3.0, 5.0}));  // mean (2, 3)
  const Vector x = vec({5.0, 7.0});
  const double euclid = (x - d.mean()).norm();
  CHECK(d.score_given_covariance(x, Matrix::Identity(2, 2)) ==
        doctest::Approx(euclid).epsilon(1e-12));
}

TEST_CASE("mahalanobis covariance matches the two-pass oracle on prefixes") {
  Mahalanobis d;
  const auto xs = random_instances(60, 4, 40);
  std::vector<Vector> seen;
  for (const Vector& x : xs) {
    d.fit_partial(x);
    seen.push_back(x);
    if (seen.size() < 2) continue;
    const Matrix expected = two_pass_covariance(seen);
    const Matrix got = d.covariance();
    CHECK((got - expected).cwiseAbs().maxCoeff() < 1e-9);
    CHECK(exactly_equal(got, Matrix(got.transpose())));  // accumulator stays exactly symmetric
  }
}

TEST_CASE("mahalanobis fresh state scores zero, count<2 uses the ridge only") {
  Mahalanobis d;
  CHECK(d.score_partial(vec({9.0})) == 0.0);
  d.fit_partial(vec({1.0}));
  // covariance still zero: score = |x - mean| / sqrt(eps)
  CHECK(d.score_partial(vec({2.0})) == doctest::Approx(1.0 / std::sqrt(1e-6)).epsilon(1e-9));
}

TEST_CASE("loda serialization round-trips mid-warmup") {
  Loda d(3, 16, 32, 5);
  for (const Vector& x : random_instances(10, 2, 6)) d.fit_partial(x);
  REQUIRE_FALSE(d.warmed_up());
  const std::string blob = d.serialize();
  const auto restored = Detector::deserialize(blob);
  CHECK(restored->serialize() == blob);
  // both sides finish warmup identically
  auto finish = [](Detector& det) {
    for (const Vector& x : random_instances(40, 2, 7)) det.fit_partial(x);
    return det.serialize();
  };
  CHECK(finish(d) == finish(*restored));
}

TEST_CASE("hst preset workspace survives serialization") {
  HalfSpaceTrees d = HalfSpaceTrees::with_workspace(2, 3, 4, vec({0.0, 0.0}),
                                                    vec({1.0, 1.0}), 8);
  for (const Vector& x : random_instances(9, 2, 9)) d.fit_partial(x);
  const std::string blob = d.serialize();
  const auto restored = Detector::deserialize(blob);
  CHECK(restored->serialize() == blob);
  CHECK(restored->score_partial(vec({0.4, 0.6})) ==
        d.score_partial(vec({0.4, 0.6})));
}

// ---------------------------------------------------- cross-model contract

TEST_CASE("all detectors: sequential equivalence, determinism, budgets") {
  const auto make_all = [] {
    std::vector<std::unique_ptr<Detector>> out;
    out.push_back(std::make_unique<MeanDeviation>(1));
    out.push_back(std::make_unique<SlidingWindowKnn>(16, 3, 2));
    out.push_back(std::make_unique<Mahalanobis>(1e-6, 3));
    out.push_back(std::make_unique<Loda>(3, 12, 20, 4));
    out.push_back(std::make_unique<HalfSpaceTrees>(4, 5, 15, 5));
    return out;
  };

  const auto xs = random_instances(60, 2, 60);
  StreamBatch b;
  for (std::size_t i = 0; i < xs.size(); ++i)
    b.push_back({xs[i], std::nullopt, static_cast<std::int64_t>(i)});

  auto batch_side = make_all();
  auto loop_side = make_all();
  for (std::size_t d = 0; d < batch_side.size(); ++d) {
    CAPTURE(batch_side[d]->name());

    const auto batch_scores = batch_side[d]->fit_score(b);
    std::vector<double> loop_scores;
    for (const Instance& inst : b) {
      loop_scores.push_back(loop_side[d]->fit_score_partial(inst));
      CHECK(loop_side[d]->retained_instances() <= loop_side[d]->memory_budget());
    }
    CHECK(batch_scores == loop_scores);
    CHECK(batch_side[d]->serialize() == loop_side[d]->serialize());

    // purity: scoring leaves the serialized form unchanged
    const std::string before = batch_side[d]->serialize();
    batch_side[d]->score_partial(xs.front());
    CHECK(batch_side[d]->serialize() == before);

    // round-trip through the registry
    const auto restored = Detector::deserialize(before);
    CHECK(restored->serialize() == before);
  }
}
