#include <gtest/gtest.h>

#include <chrono>
#include <map>
#include <set>

#include "sphc/cells.hpp"
#include "sphc/indexsets.hpp"

namespace sphc {
namespace {

std::vector<IndexSet> all_subsets(int n) {
  std::vector<IndexSet> out;
  for (unsigned m = 0; m < (1u << n); ++m) {
    std::vector<int> e;
    for (int i = 1; i <= n; ++i)
      if (m & (1u << (i - 1))) e.push_back(i);
    out.emplace_back(n, e);
  }
  return out;
}

// Naive set product, every pair multiplied.
std::set<FiniteGL::Code> naive_product(const FiniteGL& G, const CodeSet& a, const CodeSet& b) {
  std::set<FiniteGL::Code> out;
  for (auto x : a)
    for (auto y : b) out.insert(G.multiply(x, y));
  return out;
}

TEST(FiniteGL, GroupOrders) {
  EXPECT_EQ(FiniteGL(1, 2).order(), 6);
  EXPECT_EQ(FiniteGL(2, 2).order(), 168);
  EXPECT_EQ(FiniteGL(3, 2).order(), 20160);
  EXPECT_EQ(FiniteGL(2, 3).order(), 11232);
  for (auto [n, q] : {std::pair{1, 2}, {2, 2}, {2, 3}, {1, 5}, {1, 7}}) {
    const FiniteGL G(n, q);
    const auto all = enumerate_group(G);
    EXPECT_EQ(static_cast<std::int64_t>(all.size()), G.order()) << n << " " << q;
    for (auto g : all) ASSERT_NE(G.determinant(g), 0);
  }
}

TEST(FiniteGL, CodecAndMultiplication) {
  const FiniteGL G(2, 3);
  std::mt19937_64 rng(5);
  for (int s = 0; s < 50; ++s) {
    const MatFq a = random_fq_matrix(3, 3, 3, rng), b = random_fq_matrix(3, 3, 3, rng);
    const auto ca = G.from_matrix(a), cb = G.from_matrix(b);
    EXPECT_EQ(G.to_matrix(ca), a);
    EXPECT_EQ(G.to_matrix(G.multiply(ca, cb)), multiply(a, b));
  }
  EXPECT_EQ(G.multiply(G.identity(), G.elementary(0, 2, 2)), G.elementary(0, 2, 2));
  EXPECT_THROW(FiniteGL(7, 3), std::out_of_range);
}

TEST(FiniteGL, ParabolicOrders) {
  const FiniteGL G(2, 2);
  EXPECT_EQ(parabolic_kappa(G, IndexSet::empty(2)).size(), 8u);
  EXPECT_EQ(parabolic_kappa(G, IndexSet(2, {1})).size(), 24u);
  EXPECT_EQ(parabolic_kappa(G, IndexSet(2, {2})).size(), 24u);
  // Closure of the generators gives the same subgroup.
  for (const auto& I : all_subsets(3)) {
    const FiniteGL H(3, 2);
    const auto P = parabolic_kappa(H, I);
    std::set<FiniteGL::Code> closure{H.identity()};
    std::vector<FiniteGL::Code> frontier{H.identity()};
    const auto gens = parabolic_generators(H, I);
    while (!frontier.empty()) {
      std::vector<FiniteGL::Code> next;
      for (auto x : frontier)
        for (auto g : gens)
          if (closure.insert(H.multiply(x, g)).second) next.push_back(H.multiply(x, g));
      frontier = std::move(next);
    }
    EXPECT_EQ(CodeSet(closure.begin(), closure.end()), P) << I.to_string();
    for (auto x : P) ASSERT_TRUE(in_parabolic_kappa(H, I, x));
  }
}

TEST(FiniteGL, BruhatClassMatchesBruteForceOrbits) {
  const FiniteGL G(2, 2);
  const auto B = parabolic_kappa(G, IndexSet::empty(2));
  const auto all = enumerate_group(G);
  std::map<FiniteGL::Code, int> orbit;
  std::vector<std::size_t> sizes;
  for (auto g : all) {
    if (orbit.count(g)) continue;
    std::set<FiniteGL::Code> o;
    for (auto b1 : B)
      for (auto b2 : B) o.insert(G.multiply(G.multiply(b1, g), b2));
    for (auto x : o) orbit[x] = static_cast<int>(sizes.size());
    sizes.push_back(o.size());
  }
  ASSERT_EQ(sizes.size(), 6u);
  std::multiset<std::size_t> got(sizes.begin(), sizes.end());
  EXPECT_EQ(got, (std::multiset<std::size_t>{8, 16, 16, 32, 32, 64}));
  for (auto g : all) {
    const auto w = bruhat_class_kappa(G, g);
    EXPECT_EQ(orbit[g], orbit[G.permutation(w)]) << G.to_string(g);
  }
  EXPECT_EQ(bruhat_class_kappa(G, G.elementary(1, 0, 1)), WeylElement::simple_reflection(2, 1));
  EXPECT_EQ(bruhat_class_kappa(G, G.elementary(0, 1, 1)), WeylElement::from_one_line({1, 2, 3}));
}

TEST(FiniteGL, ClosureProductsMatchNaiveProducts) {
  const FiniteGL G(2, 2);
  for (const auto& I1 : all_subsets(2)) {
    for (const auto& I2 : all_subsets(2)) {
      const auto A = parabolic_kappa(G, I1), T = parabolic_kappa(G, I2);
      const auto naive = naive_product(G, A, T);
      EXPECT_EQ(left_product(G, A, T), CodeSet(naive.begin(), naive.end()));
      EXPECT_EQ(right_product(G, A, T), CodeSet(naive.begin(), naive.end()));
    }
  }
}

TEST(Cells, BruhatBijection) {
  for (const auto& I1 : all_subsets(2))
    for (const auto& I2 : all_subsets(2)) {
      const auto r = verify_bruhat_bijection(2, 2, I1, I2);
      EXPECT_TRUE(r.passed()) << to_json(r).dump();
    }
  for (auto [a, b] : {std::pair{std::vector<int>{}, std::vector<int>{}}, {{1}, {2}}, {{1, 2}, {}}}) {
    const auto r = verify_bruhat_bijection(2, 3, IndexSet(2, a), IndexSet(2, b));
    EXPECT_TRUE(r.passed()) << to_json(r).dump();
  }
  const auto r = verify_bruhat_bijection(3, 2, IndexSet(3, {1}), IndexSet(3, {2, 3}));
  EXPECT_TRUE(r.passed()) << to_json(r).dump();
  EXPECT_EQ(r.metrics["classes"], 3);
}

TEST(Cells, RemarkB) {
  EXPECT_TRUE(verify_remark_B(3, 2, IndexSet(3, {1}), IndexSet(3, {3})).passed());
  EXPECT_TRUE(verify_remark_B(2, 3, IndexSet(2, {}), IndexSet(2, {2})).passed());
  EXPECT_THROW(verify_remark_B(3, 2, IndexSet(3, {1}), IndexSet(3, {2})), std::invalid_argument);
}

TEST(Cells, ProductSetSizes) {
  const FiniteGL G(2, 2);
  // |P_{2} P_{1}| = 24 * 24 / 8.
  EXPECT_EQ(product_set_CI_kappa(G, IndexSet(2, {2})).size(), 72u);
  EXPECT_EQ(product_set_CI_kappa(G, IndexSet(2, {1})), parabolic_kappa(G, IndexSet(2, {1})));
  EXPECT_EQ(product_set_CI_kappa(FiniteGL(1, 2), IndexSet::empty(1)).size(), 2u);

  // Independent construction from the defining product with naive multiplication.
  for (const auto& I : all_subsets(2)) {
    const auto comp = I.complement();
    const int k = static_cast<int>(comp.size());
    if (k == 0) continue;
    auto acc = parabolic_kappa(G, J(2, k));
    std::vector<int> adds, rems;
    for (int m = 1; m <= k; ++m) {
      adds.push_back(2 - k + m);
      rems.push_back(comp[static_cast<std::size_t>(m - 1)]);
      const auto s = naive_product(G, parabolic_kappa(G, modified_set(J(2, k), adds, rems)), acc);
      acc = CodeSet(s.begin(), s.end());
    }
    EXPECT_EQ(product_set_CI_kappa(G, I), acc) << I.to_string();
  }
}

TEST(Cells, DecompositionOfCI) {
  for (int n : {1, 2, 3}) {
    for (const auto& I : all_subsets(n)) {
      if (static_cast<int>(I.size()) == n) continue;
      const auto r = verify_decomp_CI(n, 2, I);
      EXPECT_TRUE(r.passed()) << to_json(r).dump();
    }
  }
  for (const auto& I : all_subsets(2)) {
    if (I.size() == 2) continue;
    EXPECT_TRUE(verify_decomp_CI(2, 3, I).passed()) << I.to_string();
  }
  const auto r = verify_decomp_CI(2, 2, IndexSet(2, {2}));
  EXPECT_EQ(r.metrics["size"], 72);
  EXPECT_EQ(r.metrics["cell_sizes"], nlohmann::json({48, 24}));
  EXPECT_EQ(verify_decomp_CI(2, 2, IndexSet(2, {1})).metrics["cell_sizes"], nlohmann::json({24}));
}

TEST(Cells, ParahoricTranslates) {
  for (int n : {1, 2, 3}) {
    for (const auto& I : all_subsets(n)) {
      if (static_cast<int>(I.size()) == n) continue;
      const auto r = verify_parahoric_translates(n, 2, I);
      EXPECT_TRUE(r.passed()) << to_json(r).dump();
    }
  }
}

TEST(Iwasawa, SmallExamples) {
  const int q = 3;
  MatK g = identity<RatFunc>(2, q);
  g(1, 0) = RatFunc::t_power(q, -1);
  EXPECT_EQ(iwasawa_w(g), WeylElement::simple_reflection(1, 1));
  g(1, 0) = RatFunc::t(q);
  EXPECT_TRUE(iwasawa_w(g).is_identity());
  const auto f = iwasawa_class(g);
  EXPECT_TRUE(in_iwahori(f.b));
  EXPECT_EQ(multiply(multiply(f.b, permutation_matrix<RatFunc>(f.w, q)), f.p), g);
  MatK singular = MatK::Constant(2, 2, RatFunc::constant(q, 1));
  EXPECT_THROW(iwasawa_w(singular), std::domain_error);
}

TEST(Iwasawa, NormalFormProperties) {
  for (auto [n, q] : {std::pair{1, 2}, {2, 2}, {2, 3}, {3, 5}}) {
    const auto r = verify_iwasawa(n, q, 40, 10, 17);
    EXPECT_TRUE(r.passed()) << to_json(r).dump();
  }
}

TEST(Iwasawa, Bourbaki3Sampled) {
  for (const auto& I1 : all_subsets(2))
    for (const auto& I2 : all_subsets(2)) {
      const auto r = verify_bourbaki3_sampled(2, 3, I1, I2, 30, 3, 5);
      EXPECT_TRUE(r.passed()) << to_json(r).dump();
    }
}

TEST(Iwasawa, IllegalPerturbationIsDetected) {
  const auto r = iwasawa_illegal_perturbation(2, 2, 20, 9);
  EXPECT_FALSE(r.passed());
  EXPECT_TRUE(r.witness.has_value());
}

TEST(Iwasawa, Throughput) {
  const auto start = std::chrono::steady_clock::now();
  const auto r = verify_iwasawa(3, 7, 20, 100, 1);
  const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count();
  EXPECT_TRUE(r.passed());
  RecordProperty("ms_per_2020_eliminations", static_cast<int>(ms));
  std::printf("iwasawa n=3 q=7: %lld ms for 2020 eliminations\n", static_cast<long long>(ms));
}

TEST(Cells, NegativeControl) {
  const auto r = finite_short_box_control(2, 2, IndexSet(2, {2}));
  EXPECT_TRUE(r.passed()) << to_json(r).dump();
  EXPECT_THROW(finite_short_box_control(2, 2, IndexSet(2, {1})), std::invalid_argument);
}

}  // namespace
}  // namespace sphc
