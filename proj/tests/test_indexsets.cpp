#include <gtest/gtest.h>

#include <random>
#include <set>

#include "sphc/indexsets.hpp"

using namespace sphc;

namespace {

// Product of parabolic subgroups W_{[a_k,n]} ... W_{[a_1,n-k+1]} W_{J_k} by
// multiplying out every element, then reduced to coset representatives.
std::set<WeylElement> brute_product_cosets(int n, int k, const std::vector<int>& a) {
  std::set<WeylElement> cur{WeylElement(n)};
  for (int m = 1; m <= k; ++m) {
    const auto group = parabolic_subgroup(IndexSet::interval(n, a[static_cast<std::size_t>(m - 1)], n - k + m));
    std::set<WeylElement> next;
    for (const auto& g : group)
      for (const auto& x : cur) next.insert(g * x);
    cur.swap(next);
  }
  std::set<WeylElement> reps;
  for (const auto& x : cur) reps.insert(min_left_coset_rep(x, J(n, k)));
  return reps;
}

TEST(IndexSets, NegativeControl) {
  for (int n = 1; n <= 4; ++n) {
    const auto r = decomp_short_box_control(n);
    EXPECT_TRUE(r.passed()) << to_json(r).dump();
  }
}

}  // namespace

TEST(IndexSets, JkAndModifiedSets) {
  EXPECT_EQ(J(4, 2), IndexSet(4, {1, 2}));
  EXPECT_EQ(J(3, 3), IndexSet::empty(3));
  const IndexSet I(4, {1, 3});
  EXPECT_EQ(modified_set(I, {2}, {3}), IndexSet(4, {1, 2}));
  EXPECT_EQ(modified_set(I, {4}, {4}), I);   // r not in I
  EXPECT_EQ(modified_set(I, {3}, {3}), I);   // r in I
  EXPECT_THROW(modified_set(I, {2}, {4}), std::invalid_argument);
  // J_2 with n=4: adds 3, 4 and removes i_1, i_2 gives I.
  EXPECT_EQ(modified_set(J(4, 2), {3, 4}, {2, 4}), IndexSet(4, {1, 3}));
}

TEST(IndexSets, BoxExamples) {
  const IndexSet I(2, {1});
  EXPECT_EQ(box_C0(ComplementSeq::of(I, 3)).bounds(), (std::vector<std::pair<int, int>>{{3, 3}}));
  const IndexSet I2(2, {2});
  EXPECT_EQ(box_C0(ComplementSeq::of(I2, 3)).bounds(), (std::vector<std::pair<int, int>>{{2, 3}}));
  EXPECT_TRUE(box_Ct(ComplementSeq::of(I2, 3), 1).empty());
  const IndexSet I3(4, {1, 3});
  EXPECT_TRUE(box_D(ComplementSeq::of(I3), 1, 1).empty());
  EXPECT_EQ(box_C(I3).size(), 2);  // prod (n-k+l+1-i_l) = 2 * 1
  EXPECT_EQ(box_Cn(IndexSet(3, {1})).to_string(), "[3,3]x[3,4]");
  EXPECT_THROW(box_Cn(IndexSet(3, {3})), std::invalid_argument);
  EXPECT_THROW(ComplementSeq::of(I3, 4), std::out_of_range);
}

TEST(IndexSets, BoxEnumerationOrder) {
  IntervalBox b({{1, 2}, {5, 6}});
  EXPECT_EQ(b.tuples(), (std::vector<std::vector<int>>{{1, 5}, {2, 5}, {1, 6}, {2, 6}}));
  EXPECT_EQ(IntervalBox({{2, 1}, {1, 3}}).size(), 0);
}

TEST(IndexSets, LShapePartition) {
  EXPECT_EQ(lshape_partition(1, 1).size(), 2u);
  std::int64_t covered = 0;
  for (const auto& p : lshape_partition(2, 4)) covered += p.size();
  EXPECT_EQ(lshape_partition(2, 4).size(), 6u);
  EXPECT_EQ(covered, 12);
  EXPECT_THROW(lshape_partition(3, 2), std::out_of_range);
}

TEST(IndexSets, TupleToWeyl) {
  EXPECT_EQ(tuple_to_weyl(1, {1}), WeylElement::simple_reflection(1, 1));
  EXPECT_EQ(tuple_to_weyl(2, {1, 1}), WeylElement::from_word(2, {1, 2, 1}));
  EXPECT_TRUE(tuple_to_weyl(4, {3, 4, 5}).is_identity());
  std::mt19937 rng(3);
  for (int it = 0; it < 200; ++it) {
    const int n = 1 + static_cast<int>(rng() % 6);
    const int k = 1 + static_cast<int>(rng() % static_cast<unsigned>(n));
    std::vector<int> r(static_cast<std::size_t>(k)), word;
    for (int l = 1; l <= k; ++l) r[static_cast<std::size_t>(l - 1)] = 1 + static_cast<int>(rng() % static_cast<unsigned>(n - k + l + 1));
    for (int l = k; l >= 1; --l)
      for (int x = r[static_cast<std::size_t>(l - 1)]; x <= n - k + l; ++x) word.push_back(x);
    EXPECT_EQ(tuple_to_weyl(n, r), WeylElement::from_word(n, word));
  }
}

TEST(IndexSets, TuplesOverCJkEnumerateAllCosets) {
  for (int n = 1; n <= 5; ++n) {
    for (int k = 1; k <= n; ++k) {
      std::set<WeylElement> reps;
      // All i_l = l is the complement of J_k translated to the front: box prod [l, n-k+l+1].
      std::vector<std::pair<int, int>> b;
      for (int l = 1; l <= k; ++l) b.emplace_back(1, n - k + l + 1);
      IntervalBox(b).for_each([&](const std::vector<int>& r) { reps.insert(min_left_coset_rep(tuple_to_weyl(n, r), J(n, k))); });
      std::int64_t expect = 1;
      for (int x = n - k + 2; x <= n + 1; ++x) expect *= x;
      EXPECT_EQ(static_cast<std::int64_t>(reps.size()), expect) << n << " " << k;
    }
  }
}

TEST(IndexSets, ProductOfParabolicsMatchesBruteForce) {
  for (int n = 1; n <= 3; ++n) {
    for (int k = 1; k <= n; ++k) {
      std::vector<int> a(static_cast<std::size_t>(k));
      std::function<void(int)> rec = [&](int l) {
        if (l == k) {
          std::vector<std::pair<int, int>> b;
          for (int m = 1; m <= k; ++m) b.emplace_back(a[static_cast<std::size_t>(m - 1)], n - k + m + 1);
          std::set<WeylElement> reps;
          IntervalBox(b).for_each([&](const std::vector<int>& r) { reps.insert(min_left_coset_rep(tuple_to_weyl(n, r), J(n, k))); });
          EXPECT_EQ(reps, brute_product_cosets(n, k, a));
          EXPECT_EQ(static_cast<std::int64_t>(reps.size()), IntervalBox(b).size());
          return;
        }
        for (int v = l == 0 ? 1 : a[static_cast<std::size_t>(l - 1)]; v <= n - k + l + 2; ++v) {
          a[static_cast<std::size_t>(l)] = v;
          rec(l + 1);
        }
      };
      rec(0);
    }
  }
}

TEST(IndexSets, RotatedType) {
  // Chamber pointed at v_1 in rank 2: complement {1, 2}.
  EXPECT_EQ(rotated_type(2, {0, 1, 2}, 1), IndexSet::empty(2));
  // Edge {v_0, v_2} in rank 3 pointed at v_2: complement {2}.
  EXPECT_EQ(rotated_type(3, {0, 2}, 1), IndexSet(3, {1, 3}));
  EXPECT_THROW(rotated_type(3, {2, 1}, 0), std::invalid_argument);
}

TEST(IndexSets, HatI1) {
  const auto s = ComplementSeq::of(IndexSet(4, {1, 3}), 5);
  // complement {2, 4}, i_3 = 5: hat complement {2, 3}.
  EXPECT_EQ(hat_I1(s), IndexSet(4, {1, 4}));
}

TEST(IndexSets, VerificationRoutinesPass) {
  for (int n = 1; n <= 5; ++n) {
    auto a = verify_box_identities(n);
    EXPECT_TRUE(a.passed()) << a.witness.value_or("");
    auto b = verify_coset_decompositions(n);
    EXPECT_TRUE(b.passed()) << b.witness.value_or("");
  }
  auto c = verify_box_partitions(IndexSet(4, {1, 3}), 5);
  EXPECT_TRUE(c.passed());
  EXPECT_GT(c.counts.instances, 0);
}
