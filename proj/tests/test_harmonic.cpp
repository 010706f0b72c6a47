#include <gtest/gtest.h>

#include <functional>
#include <random>
#include <set>

#include "sphc/harmonic.hpp"

namespace sphc {
namespace {

RatFunc c(int q, int v) { return RatFunc::constant(q, v); }

// Subspaces of F_2^dim of dimension d containing e_1, by brute force over
// spanning sets of bit vectors.
int subspaces_through_line(int dim, int d) {
  std::set<std::set<unsigned>> found;
  const unsigned top = 1u << dim;
  std::function<void(std::set<unsigned>, unsigned, int)> grow = [&](std::set<unsigned> span, unsigned from, int left) {
    if (left == 0) {
      found.insert(span);
      return;
    }
    for (unsigned v = from; v < top; ++v) {
      if (span.count(v)) continue;
      std::set<unsigned> next = span;
      for (unsigned s : span) next.insert(s ^ v);
      grow(next, v + 1, left - 1);
    }
  };
  grow({0u, 1u}, 1, d - 1);
  return static_cast<int>(found.size());
}

TEST(Cochain, UnknownValuesAndModulus) {
  const Ball b = ball(1, 2, 1);
  Cochain h(1, 1, 3);
  const auto edges = b.pointed_cells(1);
  EXPECT_FALSE(h.value(edges[0]).has_value());
  h.set(edges[0], -1);
  EXPECT_EQ(*h.value(edges[0]), 2);
  EXPECT_THROW(h.set(PointedCell::from_vertices({b.vertices[0]}), 1), std::invalid_argument);
  EXPECT_THROW(Cochain(1, 1, 1), std::invalid_argument);
  const auto j = h.to_json();
  EXPECT_EQ(j["values"].size(), 1u);
  EXPECT_EQ(j["mod"], 3);
}

TEST(Checkers, ZeroCochainPasses) {
  for (auto [n, q, r] : {std::tuple{1, 2, 2}, {1, 3, 2}, {2, 2, 1}}) {
    const Ball b = ball(n, q, r);
    for (int k = 0; k <= n; ++k) {
      Cochain h(n, k);
      for (const auto& s : b.pointed_cells(k)) h.set(s, 0);
      for (const auto& rep : check_all(h, b)) {
        EXPECT_NE(rep.status, Status::kFail) << to_json(rep).dump();
        if (k == 0 && (rep.check == "harmonic.hc2" || rep.check == "harmonic.hc3"))
          EXPECT_EQ(rep.status, Status::kSkipped);
      }
    }
  }
}

TEST(Checkers, ConstantVertexCochain) {
  // k = 0: HC4 is h(v_1) - h(v_0) = 0 on every edge, so constants pass.
  const Ball b = ball(2, 2, 1);
  Cochain h(2, 0);
  for (const auto& s : b.pointed_cells(0)) h.set(s, 7);
  const auto r = check_hc4(h, b);
  EXPECT_TRUE(r.passed());
  EXPECT_GT(r.counts.instances, 0);
  EXPECT_TRUE(check_hc1(h, b).passed());
}

TEST(Checkers, NegativeControls) {
  for (int q : {2, 3})
    for (const auto& r : harmonic_checker_controls(q)) EXPECT_TRUE(r.passed()) << to_json(r).dump();
  // h = 1 on the q + 1 = 3 outward edges at v_0.
  const Ball b = ball(1, 2, 1);
  Cochain h(1, 1);
  for (const auto& e : cells_at(b.vertices.front(), 1)) h.set(e, 1);
  const auto r = check_hc2(h, b);
  ASSERT_FALSE(r.passed());
  EXPECT_NE(r.witness->find("sum=3"), std::string::npos) << *r.witness;
  EXPECT_EQ(r.counts.instances, 1);
}

TEST(Checkers, RotationsCompose) {
  const Ball b = ball(2, 2, 1);
  for (int k = 0; k <= 2; ++k)
    for (const auto& s : b.pointed_cells(k)) {
      PointedCell r = s;
      for (int i = 0; i <= k; ++i) r = rotate_pointer(r);
      ASSERT_EQ(r, s);
    }
}

TEST(Measure, TwoPointMeasure) {
  const int q = 2;
  const Ball b = ball(1, q, 3);
  const BoundaryMeasure mu(q, {{BoundaryPoint::make(c(q, 1), c(q, 0)), 1}, {BoundaryPoint::make(c(q, 0), c(q, 1)), -1}});
  const LatticeClass v0 = b.vertices.front();
  MatK d = identity<RatFunc>(2, q);
  d(1, 1) = RatFunc::t(q);
  const LatticeClass v_toward = LatticeClass::from_generators(d);
  EXPECT_EQ(toward(v0, mu.atoms()[0].first), v_toward);
  const Cochain h = measure_cochain(mu, b);
  EXPECT_EQ(*h.value(PointedCell::from_vertices({v0, v_toward})), 1);
  EXPECT_EQ(*h.value(PointedCell::from_vertices({v_toward, v0})), -1);
  for (const auto& r : check_all(h, b)) EXPECT_TRUE(r.passed()) << to_json(r).dump();
  // Edges off the apartment carry nothing.
  std::int64_t nonzero = 0;
  for (const auto& e : b.pointed_cells(1)) nonzero += *h.value(e) != 0;
  EXPECT_EQ(nonzero, 12);  // six apartment edges, both orientations
}

TEST(Measure, ZeroAndLinearity) {
  const int q = 3;
  const Ball b = ball(1, q, 2);
  const Cochain z = measure_cochain(BoundaryMeasure(q, {}), b);
  for (const auto& e : b.pointed_cells(1)) EXPECT_EQ(*z.value(e), 0);
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    const auto a = random_measure(q, 6, rng), m = random_measure(q, 6, rng);
    const Cochain ha = measure_cochain(a, b), hm = measure_cochain(m, b), hs = measure_cochain(a + m, b);
    for (const auto& e : b.pointed_cells(1)) ASSERT_EQ(*hs.value(e), *ha.value(e) + *hm.value(e));
  }
  EXPECT_THROW(measure_cochain(BoundaryMeasure(2, {}), ball(2, 2, 1)), std::invalid_argument);
}

TEST(Measure, FixtureRoundTrip) {
  const int q = 3;
  const auto j = nlohmann::json::parse(R"j([["1", "t/(1+t)", 2], ["0", "t^2", -3], ["t", "1", 1]])j");
  const auto mu = BoundaryMeasure::from_json(q, j);
  ASSERT_EQ(mu.atoms().size(), 3u);
  EXPECT_EQ(mu.atoms()[1].first, BoundaryPoint::make(c(q, 0), c(q, 1)));
  EXPECT_EQ(mu.atoms()[2].first.x1, RatFunc::parse(q, "1/t"));
  EXPECT_EQ(BoundaryMeasure::from_json(q, mu.to_json()).to_json(), mu.to_json());
  EXPECT_THROW(BoundaryMeasure::from_json(q, nlohmann::json::parse(R"([["1", "0", 1]])")), std::invalid_argument);
  EXPECT_THROW(BoundaryMeasure::from_json(q, nlohmann::json::parse(R"([["1", "0", 1], ["t", "0", -1]])")),
               std::invalid_argument);
  std::mt19937_64 rng(2);
  for (int s = 0; s < 50; ++s) {
    const auto r = random_measure(2, 6, rng);
    std::int64_t total = 0;
    for (const auto& [p, w] : r.atoms()) {
      EXPECT_NE(w, 0);
      total += w;
    }
    EXPECT_EQ(total, 0);
    EXPECT_LE(r.atoms().size(), 6u);
    EXPECT_GE(r.atoms().size(), 2u);
  }
}

TEST(Measure, ModularCoefficients) {
  const Ball b = ball(1, 2, 3);
  std::mt19937_64 rng(4);
  const Cochain h = measure_cochain(random_measure(2, 6, rng), b, 5);
  for (const auto& r : check_all(h, b)) EXPECT_TRUE(r.passed()) << to_json(r).dump();
}

TEST(MainTheorem, TreeEndToEnd) {
  for (int q : {2, 3}) {
    const auto r = verify_maintheorem_tree(q, 4, 20, 42);
    EXPECT_TRUE(r.passed()) << to_json(r).dump();
    EXPECT_GT(r.metrics["hc_instances"]["harmonic.hc2"].get<std::int64_t>(), 0);
    EXPECT_EQ(r.metrics["iwahori_orbit_sizes"], nlohmann::json({1, q}));
  }
}

TEST(MainTheorem, CorruptionIsDetected) {
  for (int q : {2, 3}) {
    const auto r = harmonic_corruption_control(q, 4, 42);
    EXPECT_TRUE(r.passed()) << to_json(r).dump();
  }
}

TEST(ConditionHC3, SetIdentities) {
  for (auto [n, q] : {std::pair{1, 2}, {1, 3}, {2, 2}, {2, 3}}) {
    const auto r = verify_conditionhc3_all(n, q);
    EXPECT_TRUE(r.passed()) << to_json(r).dump();
  }
  const auto r = verify_conditionhc3(2, 2, IndexSet(2, {2}), 1, 1);
  ASSERT_TRUE(r.passed()) << to_json(r).dump();
  // Planes through a fixed line in F_2^3.
  EXPECT_EQ(r.metrics["m"], subspaces_through_line(3, 2));
  EXPECT_EQ(r.metrics["m"], 3);
  EXPECT_EQ(verify_conditionhc3(2, 2, IndexSet(2, {1}), 1, 1).metrics["m"], 1);
  EXPECT_EQ(verify_conditionhc3(2, 2, IndexSet::empty(2), 1, 2).metrics["m"], 1);
  EXPECT_THROW(verify_conditionhc3(2, 2, IndexSet::empty(2), 2, 1), std::invalid_argument);
}

TEST(MainTheorem, Reductions) {
  for (auto [n, q, k] : {std::tuple{1, 2, 1}, {1, 3, 1}, {2, 2, 1}, {2, 2, 2}}) {
    const auto r = verify_maintheorem1_reductions(n, q, k);
    EXPECT_TRUE(r.passed()) << to_json(r).dump();
    EXPECT_GT(r.metrics["prov53_instances"].get<std::int64_t>(), 0);
  }
  EXPECT_EQ(verify_maintheorem1_reductions(3, 2, 1).status, Status::kSkipped);
}

}  // namespace
}  // namespace sphc
