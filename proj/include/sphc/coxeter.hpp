// The symmetric group S_{n+1} as the Weyl group of GL_{n+1}, with its
// simple reflections, parabolic subgroups and cosets.
#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "sphc/report.hpp"

namespace sphc {

inline constexpr int kMaxRank = 7;

// A subset of the simple reflections {1, ..., n}.
class IndexSet {
 public:
  IndexSet() = default;
  IndexSet(int n, const std::vector<int>& elements);

  static IndexSet empty(int n) { return IndexSet(n, {}); }
  static IndexSet full(int n);
  // [[a, b]] intersected with {1, ..., n}; empty when a > b.
  static IndexSet interval(int n, int a, int b);
  // The set whose complement in {1, ..., n} is the given list.
  static IndexSet from_complement(int n, const std::vector<int>& complement);

  int n() const { return n_; }
  bool contains(int i) const { return i >= 1 && i <= n_ && ((mask_ >> i) & 1u) != 0; }
  int size() const;
  std::vector<int> elements() const;
  // The complement in {1, ..., n}, increasing.
  std::vector<int> complement() const;

  IndexSet with(int i) const;
  IndexSet without(int i) const;
  IndexSet operator|(const IndexSet& o) const;
  IndexSet operator&(const IndexSet& o) const;

  // Maximal runs of positions {1, ..., n+1} linked by reflections in the set,
  // as inclusive [first, last] pairs.
  std::vector<std::pair<int, int>> blocks() const;

  std::string to_string() const;
  std::uint32_t mask() const { return mask_; }

  bool operator==(const IndexSet& o) const { return n_ == o.n_ && mask_ == o.mask_; }
  auto operator<=>(const IndexSet& o) const {
    if (auto c = n_ <=> o.n_; c != 0) return c;
    return elements() <=> o.elements();
  }

 private:
  int n_ = 0;
  std::uint32_t mask_ = 0;
};

// A permutation of {1, ..., n+1}. The product u * v applies v first.
class WeylElement {
 public:
  WeylElement() = default;
  explicit WeylElement(int n);

  static WeylElement from_one_line(const std::vector<int>& one_line);
  static WeylElement simple_reflection(int n, int i);
  // s_{a_1} s_{a_2} ... s_{a_l}.
  static WeylElement from_word(int n, const std::vector<int>& word);

  int n() const { return n_; }
  int degree() const { return n_ + 1; }
  // Image of j, both 1-based.
  int operator()(int j) const { return p_[static_cast<std::size_t>(j - 1)] + 1; }
  std::vector<int> one_line() const;

  int length() const;
  std::vector<int> reduced_word() const;
  WeylElement inverse() const;
  bool is_identity() const;

  friend WeylElement operator*(const WeylElement& u, const WeylElement& v);
  bool operator==(const WeylElement& o) const { return n_ == o.n_ && p_ == o.p_; }
  // Lexicographic on the one-line form.
  auto operator<=>(const WeylElement& o) const {
    if (auto c = n_ <=> o.n_; c != 0) return c;
    return p_ <=> o.p_;
  }

  std::uint64_t code() const;
  std::string to_string() const;

 private:
  int n_ = 0;
  std::array<std::uint8_t, kMaxRank + 1> p_{};
};

struct WeylHash {
  std::size_t operator()(const WeylElement& w) const { return std::hash<std::uint64_t>{}(w.code()); }
};

// All elements of S_{n+1} in lexicographic one-line order.
std::vector<WeylElement> all_elements(int n);

// w_r^{r'} = s_r s_{r+1} ... s_{r'}; the identity when r = r' + 1.
WeylElement w_range(int n, int r, int rp);

// w_i = w_i^n w_{i-1}^{n-1} ... w_1^{n-i+1}; w_0 = e. It sends j to j + i mod n+1.
WeylElement w_rotation(int n, int i);

bool in_parabolic(const IndexSet& I, const WeylElement& w);
std::vector<WeylElement> parabolic_subgroup(const IndexSet& I);

// Minimal-length representatives of w W_I, W_I w and W_{I1} w W_{I2}.
WeylElement min_left_coset_rep(const WeylElement& w, const IndexSet& I);
WeylElement min_right_coset_rep(const IndexSet& I, const WeylElement& w);
WeylElement min_double_coset_rep(const IndexSet& I1, const WeylElement& w, const IndexSet& I2);

struct DoubleCoset {
  WeylElement rep;
  std::vector<WeylElement> elements;
};

// The partition of W into W_{I1} \ W / W_{I2}, ordered by representative.
std::vector<DoubleCoset> double_cosets(const IndexSet& I1, const IndexSet& I2);

// Relations checked exhaustively for the given rank.
CheckReport verify_coxeter_relations(int n);
CheckReport verify_sw(int n);
CheckReport verify_index_translation(int n);
CheckReport verify_rotation_word(int n);
CheckReport verify_wi_inverse_factorization(int n);
// Must fail: adjacent simple reflections are claimed to commute.
CheckReport weyl_commutation_control(int n);

}  // namespace sphc
