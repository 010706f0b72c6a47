#include <gtest/gtest.h>

#include <algorithm>
#include <functional>
#include <map>
#include <queue>
#include <random>
#include <set>

#include "sphc/coxeter.hpp"

using namespace sphc;

namespace {

// Word length by breadth-first search in the Cayley graph.
std::map<WeylElement, int> cayley_lengths(int n) {
  std::map<WeylElement, int> dist;
  std::queue<WeylElement> q;
  dist[WeylElement(n)] = 0;
  q.push(WeylElement(n));
  while (!q.empty()) {
    auto w = q.front();
    q.pop();
    for (int i = 1; i <= n; ++i) {
      auto x = w * WeylElement::simple_reflection(n, i);
      if (!dist.count(x)) {
        dist[x] = dist[w] + 1;
        q.push(x);
      }
    }
  }
  return dist;
}

// Double coset W_I1 w W_I2 by explicit products.
std::set<WeylElement> brute_double_coset(const IndexSet& I1, const WeylElement& w, const IndexSet& I2) {
  std::set<WeylElement> out;
  for (const auto& a : parabolic_subgroup(I1))
    for (const auto& b : parabolic_subgroup(I2)) out.insert(a * w * b);
  return out;
}

WeylElement brute_min(const std::set<WeylElement>& s) {
  return *std::min_element(s.begin(), s.end(), [](const WeylElement& a, const WeylElement& b) {
    if (a.length() != b.length()) return a.length() < b.length();
    return a < b;
  });
}

TEST(Coxeter, NegativeControl) {
  for (int n = 2; n <= 5; ++n) EXPECT_TRUE(weyl_commutation_control(n).passed()) << n;
  // Rank 1 has no adjacent pair, so the inner check cannot fail.
  EXPECT_FALSE(weyl_commutation_control(1).passed());
}

}  // namespace

TEST(Coxeter, ProductAppliesRightFactorFirst) {
  auto u = WeylElement::from_one_line({2, 3, 1});
  auto v = WeylElement::from_one_line({1, 3, 2});
  auto uv = u * v;
  for (int j = 1; j <= 3; ++j) EXPECT_EQ(uv(j), u(v(j)));
}

TEST(Coxeter, LengthMatchesCayleyDistance) {
  for (int n = 1; n <= 4; ++n) {
    auto dist = cayley_lengths(n);
    ASSERT_EQ(dist.size(), all_elements(n).size());
    for (auto& [w, d] : dist) {
      EXPECT_EQ(w.length(), d) << w.to_string();
      EXPECT_EQ(WeylElement::from_word(n, w.reduced_word()), w);
    }
  }
}

TEST(Coxeter, WRangeEdgeCases) {
  EXPECT_TRUE(w_range(3, 3, 2).is_identity());
  EXPECT_TRUE(w_range(3, 1, 0).is_identity());
  EXPECT_EQ(w_range(3, 2, 3), WeylElement::from_word(3, {2, 3}));
  EXPECT_THROW(w_range(3, 3, 1), std::out_of_range);
  EXPECT_THROW(w_range(3, 1, 4), std::out_of_range);
  EXPECT_THROW(WeylElement(8), std::out_of_range);
  EXPECT_THROW(WeylElement::from_one_line({1, 1, 2}), std::invalid_argument);
}

TEST(Coxeter, RotationIsCyclicShift) {
  // w_1 = s_1 s_2 in S_3 sends 1 -> 2 -> 3 -> 1.
  EXPECT_EQ(w_rotation(2, 1).one_line(), (std::vector<int>{2, 3, 1}));
  EXPECT_EQ(w_rotation(2, 2).one_line(), (std::vector<int>{3, 1, 2}));
  EXPECT_TRUE(w_rotation(4, 0).is_identity());
}

TEST(Coxeter, ParabolicBlocks) {
  IndexSet I(4, {1, 2, 4});
  EXPECT_EQ(I.blocks(), (std::vector<std::pair<int, int>>{{1, 3}, {4, 5}}));
  EXPECT_EQ(parabolic_subgroup(I).size(), 12u);
  EXPECT_EQ(parabolic_subgroup(IndexSet::empty(3)).size(), 1u);
  EXPECT_EQ(parabolic_subgroup(IndexSet::full(3)).size(), 24u);
}

TEST(Coxeter, CosetRepresentativesMatchBruteForce) {
  for (int n = 1; n <= 3; ++n) {
    const int subsets = 1 << n;
    for (int m1 = 0; m1 < subsets; ++m1) {
      for (int m2 = 0; m2 < subsets; ++m2) {
        std::vector<int> e1, e2;
        for (int i = 1; i <= n; ++i) {
          if (m1 >> (i - 1) & 1) e1.push_back(i);
          if (m2 >> (i - 1) & 1) e2.push_back(i);
        }
        IndexSet I1(n, e1), I2(n, e2);
        auto dcs = double_cosets(I1, I2);
        std::size_t total = 0;
        for (const auto& dc : dcs) {
          auto brute = brute_double_coset(I1, dc.rep, I2);
          EXPECT_EQ(std::set<WeylElement>(dc.elements.begin(), dc.elements.end()), brute);
          EXPECT_EQ(brute_min(brute), dc.rep);
          total += dc.elements.size();
        }
        EXPECT_EQ(total, all_elements(n).size());
        for (const auto& w : all_elements(n)) {
          std::set<WeylElement> left, right;
          for (const auto& u : parabolic_subgroup(I2)) left.insert(w * u);
          for (const auto& u : parabolic_subgroup(I1)) right.insert(u * w);
          EXPECT_EQ(min_left_coset_rep(w, I2), brute_min(left));
          EXPECT_EQ(min_right_coset_rep(I1, w), brute_min(right));
        }
      }
    }
  }
}

// Double cosets of Young subgroups correspond to nonnegative integer matrices
// with the block sizes as margins.
static std::size_t contingency_count(std::vector<int> rows, std::vector<int> cols) {
  if (rows.empty()) return std::all_of(cols.begin(), cols.end(), [](int c) { return c == 0; }) ? 1 : 0;
  std::vector<int> rest(rows.begin() + 1, rows.end());
  std::size_t total = 0;
  std::vector<int> take(cols.size(), 0);
  // Enumerate the first row with sum rows[0] bounded by cols.
  std::function<void(std::size_t, int)> rec = [&](std::size_t c, int left) {
    if (c == cols.size()) {
      if (left != 0) return;
      std::vector<int> remaining(cols);
      for (std::size_t j = 0; j < cols.size(); ++j) remaining[j] -= take[j];
      total += contingency_count(rest, remaining);
      return;
    }
    for (int x = 0; x <= std::min(left, cols[c]); ++x) {
      take[c] = x;
      rec(c + 1, left - x);
    }
    take[c] = 0;
  };
  rec(0, rows[0]);
  return total;
}

static std::vector<int> block_sizes(const IndexSet& I) {
  std::vector<int> out;
  for (auto [a, b] : I.blocks()) out.push_back(b - a + 1);
  return out;
}

TEST(Coxeter, DoubleCosetCountsMatchContingencyOracle) {
  for (int n = 1; n <= 4; ++n) {
    for (int m1 = 0; m1 < (1 << n); ++m1) {
      for (int m2 = 0; m2 < (1 << n); ++m2) {
        std::vector<int> e1, e2;
        for (int i = 1; i <= n; ++i) {
          if (m1 >> (i - 1) & 1) e1.push_back(i);
          if (m2 >> (i - 1) & 1) e2.push_back(i);
        }
        IndexSet I1(n, e1), I2(n, e2);
        EXPECT_EQ(double_cosets(I1, I2).size(), contingency_count(block_sizes(I1), block_sizes(I2)));
      }
    }
  }
}

// Values from contingency_count, frozen.
TEST(Coxeter, DoubleCosetCounts) {
  EXPECT_EQ(double_cosets(IndexSet::empty(2), IndexSet::empty(2)).size(), 6u);
  EXPECT_EQ(double_cosets(IndexSet(3, {1}), IndexSet(3, {2})).size(), 7u);
  EXPECT_EQ(double_cosets(IndexSet(3, {1, 3}), IndexSet(3, {1, 3})).size(), 3u);
  EXPECT_EQ(double_cosets(IndexSet(4, {1, 2}), IndexSet(4, {4})).size(), 13u);
}

TEST(Coxeter, LengthProperties) {
  std::mt19937_64 rng(7);
  constexpr int kIterations = 500;
  for (int it = 0; it < kIterations; ++it) {
    const int n = 1 + static_cast<int>(rng() % kMaxRank);
    std::vector<int> perm(static_cast<std::size_t>(n + 1));
    for (int j = 0; j <= n; ++j) perm[static_cast<std::size_t>(j)] = j + 1;
    std::shuffle(perm.begin(), perm.end(), rng);
    auto w = WeylElement::from_one_line(perm);
    EXPECT_EQ(w.length(), w.inverse().length());
    EXPECT_TRUE((w * w.inverse()).is_identity());
    const int i = 1 + static_cast<int>(rng() % static_cast<unsigned>(n));
    const int d = (w * WeylElement::simple_reflection(n, i)).length() - w.length();
    EXPECT_TRUE(d == 1 || d == -1);
    EXPECT_EQ(d == -1, w(i) > w(i + 1));
  }
}

TEST(Coxeter, VerificationRoutinesPass) {
  for (int n = 1; n <= 5; ++n) {
    EXPECT_TRUE(verify_coxeter_relations(n).passed()) << n;
    EXPECT_TRUE(verify_sw(n).passed()) << n;
    EXPECT_TRUE(verify_index_translation(n).passed()) << n;
    EXPECT_TRUE(verify_rotation_word(n).passed()) << n;
    auto r = verify_wi_inverse_factorization(n);
    EXPECT_TRUE(r.passed()) << n << " " << r.witness.value_or("");
  }
}
