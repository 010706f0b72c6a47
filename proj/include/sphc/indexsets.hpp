// Index calculus: the sets J_k, modified sets, integer boxes and the
// Weyl elements attached to tuples.
#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "sphc/coxeter.hpp"
#include "sphc/report.hpp"

namespace sphc {

// J_k = [[1, n-k]].
IndexSet J(int n, int k);

// (I u {adds}) - {removes}. A pair with adds[j] == removes[j] is a no-op, so
// I^r_r = I whether or not r lies in I.
IndexSet modified_set(const IndexSet& I, const std::vector<int>& adds, const std::vector<int>& removes);

// Product of integer intervals [lo_1, hi_1] x ... x [lo_k, hi_k].
class IntervalBox {
 public:
  IntervalBox() = default;
  explicit IntervalBox(std::vector<std::pair<int, int>> bounds) : bounds_(std::move(bounds)) {}

  int dim() const { return static_cast<int>(bounds_.size()); }
  const std::vector<std::pair<int, int>>& bounds() const { return bounds_; }
  bool empty() const;
  std::int64_t size() const;
  bool contains(const std::vector<int>& r) const;
  // Visits every tuple, the first coordinate varying fastest.
  void for_each(const std::function<void(const std::vector<int>&)>& f) const;
  std::vector<std::vector<int>> tuples() const;
  std::string to_string() const;

 private:
  std::vector<std::pair<int, int>> bounds_;
};

// i_0 = 0, i_1 < ... < i_k the complement of I, and a chosen i_{k+1} with
// i_k < i_{k+1} <= n+1. Entries are indexed 0..k+1.
struct ComplementSeq {
  int n = 0;
  int k = 0;
  std::vector<int> i;

  static ComplementSeq of(const IndexSet& I, int i_next);
  static ComplementSeq of(const IndexSet& I) { return of(I, I.n() + 1); }
  int operator[](int idx) const { return i.at(static_cast<std::size_t>(idx)); }
};

// Boxes attached to I with complement {i_1 < ... < i_k}.
IntervalBox box_C(const IndexSet& I);                                // prod [i_l+1, n-k+l+1]
IntervalBox box_C0(const ComplementSeq& s);                          // prod [i_l+1, i_{l+1}]
IntervalBox box_Ct(const ComplementSeq& s, int t);                   // 0 <= t <= k
IntervalBox box_Ctt(const ComplementSeq& s, int t, int tp);          // 1 <= t <= k-1, 0 <= tp <= k-t-1
IntervalBox box_D(const ComplementSeq& s, int t, int tp);            // 1 <= t <= k-1, 0 <= tp <= k-t (empty at k-t)
IntervalBox box_Cn(const IndexSet& I);                               // requires i_k = n
IntervalBox box_hat_C0(const ComplementSeq& s);                      // prod [i_l-i_1+1, i_{l+1}-i_1]
IntervalBox box_hat_Ct(const ComplementSeq& s, int t);               // 1 <= t <= k
IntervalBox box_hat_D(const ComplementSeq& s, int t);                // 1 <= t <= k+1

// The set with complement {i_2-i_1 < ... < i_{k+1}-i_1}.
IndexSet hat_I1(const ComplementSeq& s);

// For 0 <= i_0 < ... < i_k <= n and a position j, the set with complement
// {i_{j+1}-i_j, ..., i_k-i_j, n+1+i_0-i_j, ..., n+1+i_{j-1}-i_j}.
IndexSet rotated_type(int n, const std::vector<int>& vertices, int j);

// w_{r_k}^n ... w_{r_1}^{n-k+1}.
WeylElement tuple_to_weyl(int n, const std::vector<int>& r);

// The 2(b-a+1) blocks [a,b-l] x {b-l+1} and {b-l} x [a,b-l] partitioning
// [a,b] x [a,b+1].
std::vector<IntervalBox> lshape_partition(int a, int b);

// Partition identities among the boxes of one (I, i_{k+1}).
CheckReport verify_box_partitions(const IndexSet& I, int i_next);
// The same identities, the L-shape partitions and the J_k modification chain,
// exhaustively over all I for the rank.
CheckReport verify_box_identities(int n);
// Coset decompositions of products of parabolic subgroups and the fibers of
// W/W_{J_k} -> W/W_{J_k u {j}}.
CheckReport verify_coset_decompositions(int n);
// Must fail: the a-tuple boxes are cut one short on the right.
CheckReport decomp_short_box_control(int n);

// All subsets I of {1..n} with |complement| = k, in increasing order.
std::vector<IndexSet> subsets_with_corank(int n, int k);

}  // namespace sphc
