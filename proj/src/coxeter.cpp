#include "sphc/coxeter.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace sphc {

namespace {

void check_rank(int n) {
  if (n < 1 || n > kMaxRank) {
    throw std::out_of_range("rank n=" + std::to_string(n) + " outside [1, " +
                            std::to_string(kMaxRank) + "]");
  }
}

std::string join(const std::vector<int>& v) {
  std::ostringstream os;
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
  return os.str();
}

}  // namespace

// ---------------------------------------------------------------- IndexSet

IndexSet::IndexSet(int n, const std::vector<int>& elements) : n_(n) {
  if (n < 0 || n > 30) throw std::out_of_range("index set rank out of range");
  for (int i : elements) {
    if (i < 1 || i > n) {
      throw std::out_of_range("index " + std::to_string(i) + " not in [1, " + std::to_string(n) +
                              "]");
    }
    mask_ |= 1u << i;
  }
}

IndexSet IndexSet::full(int n) {
  std::vector<int> all(static_cast<std::size_t>(n));
  std::iota(all.begin(), all.end(), 1);
  return IndexSet(n, all);
}

IndexSet IndexSet::interval(int n, int a, int b) {
  std::vector<int> v;
  for (int i = std::max(a, 1); i <= std::min(b, n); ++i) v.push_back(i);
  return IndexSet(n, v);
}

IndexSet IndexSet::from_complement(int n, const std::vector<int>& complement) {
  IndexSet c(n, complement);
  IndexSet r = full(n);
  r.mask_ &= ~c.mask_;
  return r;
}

int IndexSet::size() const { return std::popcount(mask_); }

std::vector<int> IndexSet::elements() const {
  std::vector<int> v;
  for (int i = 1; i <= n_; ++i)
    if (contains(i)) v.push_back(i);
  return v;
}

std::vector<int> IndexSet::complement() const {
  std::vector<int> v;
  for (int i = 1; i <= n_; ++i)
    if (!contains(i)) v.push_back(i);
  return v;
}

IndexSet IndexSet::with(int i) const {
  if (i < 1 || i > n_) throw std::out_of_range("index out of range");
  IndexSet r = *this;
  r.mask_ |= 1u << i;
  return r;
}

IndexSet IndexSet::without(int i) const {
  if (i < 1 || i > n_) throw std::out_of_range("index out of range");
  IndexSet r = *this;
  r.mask_ &= ~(1u << i);
  return r;
}

IndexSet IndexSet::operator|(const IndexSet& o) const {
  if (n_ != o.n_) throw std::invalid_argument("index sets of different rank");
  IndexSet r = *this;
  r.mask_ |= o.mask_;
  return r;
}

IndexSet IndexSet::operator&(const IndexSet& o) const {
  if (n_ != o.n_) throw std::invalid_argument("index sets of different rank");
  IndexSet r = *this;
  r.mask_ &= o.mask_;
  return r;
}

std::vector<std::pair<int, int>> IndexSet::blocks() const {
  std::vector<std::pair<int, int>> out;
  int start = 1;
  for (int pos = 1; pos <= n_ + 1; ++pos) {
    if (pos == n_ + 1 || !contains(pos)) {
      out.emplace_back(start, pos);
      start = pos + 1;
    }
  }
  return out;
}

std::string IndexSet::to_string() const { return "{" + join(elements()) + "}"; }

// ------------------------------------------------------------- WeylElement

WeylElement::WeylElement(int n) : n_(n) {
  check_rank(n);
  for (int j = 0; j <= n; ++j) p_[static_cast<std::size_t>(j)] = static_cast<std::uint8_t>(j);
}

WeylElement WeylElement::from_one_line(const std::vector<int>& one_line) {
  const int deg = static_cast<int>(one_line.size());
  WeylElement w(deg - 1);
  std::vector<bool> seen(static_cast<std::size_t>(deg), false);
  for (int j = 0; j < deg; ++j) {
    const int v = one_line[static_cast<std::size_t>(j)];
    if (v < 1 || v > deg || seen[static_cast<std::size_t>(v - 1)]) {
      throw std::invalid_argument("not a permutation: " + join(one_line));
    }
    seen[static_cast<std::size_t>(v - 1)] = true;
    w.p_[static_cast<std::size_t>(j)] = static_cast<std::uint8_t>(v - 1);
  }
  return w;
}

WeylElement WeylElement::simple_reflection(int n, int i) {
  WeylElement w(n);
  if (i < 1 || i > n) throw std::out_of_range("simple reflection index out of range");
  std::swap(w.p_[static_cast<std::size_t>(i - 1)], w.p_[static_cast<std::size_t>(i)]);
  return w;
}

WeylElement WeylElement::from_word(int n, const std::vector<int>& word) {
  WeylElement w(n);
  // Right multiplication by s_i swaps the entries at positions i and i+1.
  for (int i : word) {
    if (i < 1 || i > n) throw std::out_of_range("word letter out of range");
    std::swap(w.p_[static_cast<std::size_t>(i - 1)], w.p_[static_cast<std::size_t>(i)]);
  }
  return w;
}

std::vector<int> WeylElement::one_line() const {
  std::vector<int> v(static_cast<std::size_t>(n_ + 1));
  for (int j = 0; j <= n_; ++j) v[static_cast<std::size_t>(j)] = p_[static_cast<std::size_t>(j)] + 1;
  return v;
}

int WeylElement::length() const {
  int inv = 0;
  for (int a = 0; a <= n_; ++a)
    for (int b = a + 1; b <= n_; ++b)
      if (p_[static_cast<std::size_t>(a)] > p_[static_cast<std::size_t>(b)]) ++inv;
  return inv;
}

std::vector<int> WeylElement::reduced_word() const {
  WeylElement w = *this;
  std::vector<int> rev;
  bool changed = true;
  while (changed) {
    changed = false;
    for (int i = 1; i <= n_; ++i) {
      auto& a = w.p_[static_cast<std::size_t>(i - 1)];
      auto& b = w.p_[static_cast<std::size_t>(i)];
      if (a > b) {
        std::swap(a, b);
        rev.push_back(i);
        changed = true;
      }
    }
  }
  std::reverse(rev.begin(), rev.end());
  return rev;
}

WeylElement WeylElement::inverse() const {
  WeylElement r(n_);
  for (int j = 0; j <= n_; ++j) r.p_[p_[static_cast<std::size_t>(j)]] = static_cast<std::uint8_t>(j);
  return r;
}

bool WeylElement::is_identity() const {
  for (int j = 0; j <= n_; ++j)
    if (p_[static_cast<std::size_t>(j)] != j) return false;
  return true;
}

WeylElement operator*(const WeylElement& u, const WeylElement& v) {
  if (u.n_ != v.n_) throw std::invalid_argument("Weyl elements of different rank");
  WeylElement r(u.n_);
  for (int j = 0; j <= u.n_; ++j) r.p_[static_cast<std::size_t>(j)] = u.p_[v.p_[static_cast<std::size_t>(j)]];
  return r;
}

std::uint64_t WeylElement::code() const {
  std::uint64_t c = static_cast<std::uint64_t>(n_);
  for (int j = 0; j <= n_; ++j) c = (c << 4) | p_[static_cast<std::size_t>(j)];
  return c;
}

std::string WeylElement::to_string() const { return "[" + join(one_line()) + "]"; }

// --------------------------------------------------------------- free functions

std::vector<WeylElement> all_elements(int n) {
  check_rank(n);
  std::vector<int> perm(static_cast<std::size_t>(n + 1));
  std::iota(perm.begin(), perm.end(), 1);
  std::vector<WeylElement> out;
  do {
    out.push_back(WeylElement::from_one_line(perm));
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

WeylElement w_range(int n, int r, int rp) {
  if (r < 1 || r > rp + 1 || rp > n) {
    throw std::out_of_range("w_r^{r'} needs 1 <= r <= r'+1 and r' <= n (r=" + std::to_string(r) +
                            ", r'=" + std::to_string(rp) + ")");
  }
  std::vector<int> word;
  for (int i = r; i <= rp; ++i) word.push_back(i);
  return WeylElement::from_word(n, word);
}

WeylElement w_rotation(int n, int i) {
  if (i < 0 || i > n) throw std::out_of_range("rotation index out of range");
  WeylElement w(n);
  for (int j = i; j >= 1; --j) w = w * w_range(n, j, n - i + j);
  return w;
}

bool in_parabolic(const IndexSet& I, const WeylElement& w) {
  for (auto [a, b] : I.blocks())
    for (int j = a; j <= b; ++j)
      if (w(j) < a || w(j) > b) return false;
  return true;
}

std::vector<WeylElement> parabolic_subgroup(const IndexSet& I) {
  std::vector<WeylElement> out;
  for (const auto& w : all_elements(I.n()))
    if (in_parabolic(I, w)) out.push_back(w);
  return out;
}

WeylElement min_left_coset_rep(const WeylElement& w, const IndexSet& I) {
  // Right multiplication by W_I permutes positions inside each block.
  std::vector<int> v = w.one_line();
  for (auto [a, b] : I.blocks()) std::sort(v.begin() + (a - 1), v.begin() + b);
  return WeylElement::from_one_line(v);
}

WeylElement min_right_coset_rep(const IndexSet& I, const WeylElement& w) {
  return min_left_coset_rep(w.inverse(), I).inverse();
}

WeylElement min_double_coset_rep(const IndexSet& I1, const WeylElement& w, const IndexSet& I2) {
  WeylElement cur = w;
  for (;;) {
    WeylElement next = min_right_coset_rep(I1, min_left_coset_rep(cur, I2));
    if (next == cur) return cur;
    cur = next;
  }
}

std::vector<DoubleCoset> double_cosets(const IndexSet& I1, const IndexSet& I2) {
  if (I1.n() != I2.n()) throw std::invalid_argument("index sets of different rank");
  std::map<WeylElement, std::vector<WeylElement>> by_rep;
  for (const auto& w : all_elements(I1.n())) by_rep[min_double_coset_rep(I1, w, I2)].push_back(w);
  std::vector<DoubleCoset> out;
  for (auto& [rep, elems] : by_rep) out.push_back({rep, std::move(elems)});
  return out;
}

// --------------------------------------------------------------- verification

CheckReport verify_coxeter_relations(int n) {
  CheckRecorder rec("weyl.coxeter_relations", {{"n", n}});
  if (n < 1 || n > kMaxRank) return skipped_report("weyl.coxeter_relations", {{"n", n}}, "rank out of range");
  const WeylElement e(n);
  auto s = [n](int i) { return WeylElement::simple_reflection(n, i); };
  for (int l = 1; l <= n; ++l) rec.expect(s(l) * s(l) == e, "s_" + std::to_string(l) + "^2 != 1");
  for (int a = 1; a <= n; ++a)
    for (int b = a + 2; b <= n; ++b)
      rec.expect(s(a) * s(b) == s(b) * s(a),
                 "s_" + std::to_string(a) + " and s_" + std::to_string(b) + " do not commute");
  for (int l = 1; l < n; ++l)
    rec.expect(s(l) * s(l + 1) * s(l) == s(l + 1) * s(l) * s(l + 1),
               "braid relation fails at l=" + std::to_string(l));
  // Reduced words multiply back to the element and have length l(w).
  for (const auto& w : all_elements(n)) {
    const auto word = w.reduced_word();
    rec.expect(WeylElement::from_word(n, word) == w &&
                   static_cast<int>(word.size()) == w.length(),
               "reduced word mismatch for " + w.to_string());
  }
  return rec.finish();
}

CheckReport verify_sw(int n) {
  CheckRecorder rec("weyl.sw", {{"n", n}});
  if (n < 1 || n > kMaxRank) return skipped_report("weyl.sw", {{"n", n}}, "rank out of range");
  for (int r = 1; r <= n; ++r)
    for (int rp = r; rp <= n; ++rp)
      for (int l = r + 1; l <= rp; ++l) {
        const auto lhs = WeylElement::simple_reflection(n, l) * w_range(n, r, rp);
        const auto rhs = w_range(n, r, rp) * WeylElement::simple_reflection(n, l - 1);
        rec.expect(lhs == rhs, "s_l w_r^r' != w_r^r' s_{l-1} at r=" + std::to_string(r) +
                                   " r'=" + std::to_string(rp) + " l=" + std::to_string(l));
      }
  return rec.finish();
}

CheckReport verify_index_translation(int n) {
  CheckRecorder rec("weyl.index_translation", {{"n", n}});
  if (n < 1 || n > kMaxRank) return skipped_report("weyl.index_translation", {{"n", n}}, "rank out of range");
  for (int a = 1; a <= n; ++a)
    for (int ap = a; ap <= n; ++ap)
      for (int b = ap; b <= n; ++b)
        for (int bp = b; bp <= n; ++bp) {
          rec.expect(w_range(n, a, b) * w_range(n, ap, bp) == w_range(n, ap + 1, bp) * w_range(n, a, b - 1),
                     "w_a^b w_a'^b' identity fails at (" + join({a, ap, b, bp}) + ")");
        }
  for (int k = 1; k <= n; ++k) {
    for (int i = 0; i <= n; ++i) {
      // Tuples with 1 <= r_j <= n-k+j+1-i; empty when i > n-k+1.
      std::vector<int> hi(static_cast<std::size_t>(k));
      bool feasible = true;
      for (int j = 1; j <= k; ++j) {
        hi[static_cast<std::size_t>(j - 1)] = n - k + j + 1 - i;
        if (hi[static_cast<std::size_t>(j - 1)] < 1) feasible = false;
      }
      if (!feasible) continue;
      WeylElement tail(n);
      for (int iota = i; iota >= 1; --iota) tail = tail * w_range(n, iota, n - k - i + iota);
      const WeylElement wi = w_rotation(n, i);
      std::vector<int> r(static_cast<std::size_t>(k), 1);
      for (;;) {
        WeylElement lhs = wi, rhs(n);
        for (int j = k; j >= 1; --j) {
          lhs = lhs * w_range(n, r[static_cast<std::size_t>(j - 1)], n - k + j);
          rhs = rhs * w_range(n, r[static_cast<std::size_t>(j - 1)] + i, n - k + j);
        }
        rhs = rhs * tail;
        rec.expect(lhs == rhs, "rotation translation fails at n=" + std::to_string(n) +
                                   " k=" + std::to_string(k) + " i=" + std::to_string(i) +
                                   " r=(" + join(r) + ")");
        int pos = 0;
        while (pos < k && ++r[static_cast<std::size_t>(pos)] > hi[static_cast<std::size_t>(pos)]) {
          r[static_cast<std::size_t>(pos)] = 1;
          ++pos;
        }
        if (pos == k) break;
      }
    }
  }
  return rec.finish();
}

CheckReport verify_rotation_word(int n) {
  CheckRecorder rec("weyl.rotation", {{"n", n}});
  if (n < 1 || n > kMaxRank) return skipped_report("weyl.rotation", {{"n", n}}, "rank out of range");
  const int deg = n + 1;
  for (int i = 0; i <= n; ++i) {
    const WeylElement wi = w_rotation(n, i);
    bool shift = true;
    for (int j = 1; j <= deg; ++j) shift = shift && wi(j) == (j - 1 + i) % deg + 1;
    rec.expect(shift, "w_" + std::to_string(i) + " is not the cyclic shift by " + std::to_string(i));
    for (int j = 0; j <= n; ++j) {
      rec.expect(wi * w_rotation(n, j) == w_rotation(n, (i + j) % deg),
                 "w_i w_j != w_{i+j} at i=" + std::to_string(i) + " j=" + std::to_string(j));
    }
  }
  return rec.finish();
}

CheckReport verify_wi_inverse_factorization(int n) {
  CheckRecorder rec("weyl.wi_inverse_factorization", {{"n", n}});
  if (n < 1 || n > kMaxRank) {
    return skipped_report("weyl.wi_inverse_factorization", {{"n", n}}, "rank out of range");
  }
  for (int k = 1; k <= n; ++k) {
    const IndexSet Jk = IndexSet::interval(n, 1, n - k);
    const IndexSet upper = IndexSet::interval(n, n - k + 2, n);
    for (int i = 0; i <= n; ++i) {
      const WeylElement inv = w_rotation(n, i).inverse();
      const std::string at = " at n=" + std::to_string(n) + " k=" + std::to_string(k) + " i=" + std::to_string(i);
      if (i <= n - k + 1) {
        WeylElement first(n), second(n);
        for (int r = n - i + 1; r >= n - k - i + 2; --r) first = first * w_range(n, r, r + i - 1);
        for (int r = n - k - i + 1; r >= 1; --r) second = second * w_range(n, r, r + i - 1);
        rec.expect(first * second == inv, "w_i^{-1} factorization fails" + at);
        rec.expect(in_parabolic(Jk, second), "second factor not in W_{J_k}" + at);
      } else {
        WeylElement w(n), wp(n);
        for (int r = n - i + 1; r >= 1; --r) w = w * w_range(n, r, r + n - k);
        for (int r = 2 * n - k - i + 2; r >= n - k + 2; --r) wp = wp * w_range(n, r, r + i - n + k - 2);
        rec.expect(w * wp == inv, "w_i^{-1} = w w' fails" + at);
        rec.expect(in_parabolic(upper, wp), "w' not in W_{[n-k+2,n]}" + at);
        rec.expect(wp.length() % 2 == ((n - i + 1) * (k - 1)) % 2, "parity of l(w') fails" + at);
      }
    }
  }
  return rec.finish();
}

CheckReport weyl_commutation_control(int n) {
  CheckRecorder rec("weyl.false_commutation", {{"n", n}});
  for (int l = 1; l < n; ++l) {
    const auto a = WeylElement::simple_reflection(n, l), b = WeylElement::simple_reflection(n, l + 1);
    rec.expect(a * b == b * a, "s_" + std::to_string(l) + " s_" + std::to_string(l + 1) + " = " + (a * b).to_string() +
                                   " but s_" + std::to_string(l + 1) + " s_" + std::to_string(l) + " = " +
                                   (b * a).to_string());
  }
  return negative_control("weyl.negative_control", rec.finish());
}

}  // namespace sphc
