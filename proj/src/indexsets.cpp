#include "sphc/indexsets.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

namespace sphc {

namespace {

std::string join(const std::vector<int>& v) {
  std::ostringstream os;
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
  return os.str();
}

std::string tuple_str(const std::vector<int>& r) { return "(" + join(r) + ")"; }

using TupleSet = std::set<std::vector<int>>;

TupleSet as_set(const IntervalBox& b) {
  TupleSet s;
  b.for_each([&](const std::vector<int>& r) { s.insert(r); });
  return s;
}

// Records whether `whole` is the disjoint union of `parts`.
void expect_partition(CheckRecorder& rec, const IntervalBox& whole, const std::vector<IntervalBox>& parts,
                      const std::string& what) {
  TupleSet target = as_set(whole);
  TupleSet seen;
  std::int64_t total = 0;
  for (const auto& p : parts) {
    bool ok = true;
    std::vector<int> bad;
    p.for_each([&](const std::vector<int>& r) {
      ++total;
      if (!seen.insert(r).second && ok) {
        ok = false;
        bad = r;
      }
    });
    if (!ok) {
      rec.fail(what + ": tuple " + tuple_str(bad) + " lies in two parts");
      return;
    }
  }
  rec.expect(seen == target && total == whole.size(), what + ": union differs from " + whole.to_string());
}

IntervalBox empty_box(int k) {
  return IntervalBox(std::vector<std::pair<int, int>>(static_cast<std::size_t>(std::max(k, 1)), {1, 0}));
}

void check_t(const ComplementSeq& s, int t, int lo, int hi, const char* what) {
  if (t < lo || t > hi) {
    throw std::out_of_range(std::string(what) + ": parameter " + std::to_string(t) + " outside [" +
                            std::to_string(lo) + ", " + std::to_string(hi) + "] for k=" + std::to_string(s.k));
  }
}

}  // namespace

IndexSet J(int n, int k) {
  if (k < 0 || k > n) throw std::out_of_range("J_k needs 0 <= k <= n");
  return IndexSet::interval(n, 1, n - k);
}

IndexSet modified_set(const IndexSet& I, const std::vector<int>& adds, const std::vector<int>& removes) {
  if (adds.size() != removes.size()) throw std::invalid_argument("modified_set: adds and removes differ in length");
  IndexSet out = I;
  std::vector<int> rem;
  for (std::size_t j = 0; j < adds.size(); ++j) {
    if (adds[j] == removes[j]) continue;
    out = out.with(adds[j]);
    rem.push_back(removes[j]);
  }
  for (int r : rem) {
    if (!out.contains(r)) {
      throw std::invalid_argument("modified_set: removed index " + std::to_string(r) + " is not present");
    }
    out = out.without(r);
  }
  return out;
}

// ------------------------------------------------------------ IntervalBox

bool IntervalBox::empty() const {
  for (auto [lo, hi] : bounds_)
    if (lo > hi) return true;
  return false;
}

std::int64_t IntervalBox::size() const {
  if (empty()) return 0;
  std::int64_t s = 1;
  for (auto [lo, hi] : bounds_) s *= hi - lo + 1;
  return s;
}

bool IntervalBox::contains(const std::vector<int>& r) const {
  if (static_cast<int>(r.size()) != dim()) return false;
  for (std::size_t i = 0; i < r.size(); ++i)
    if (r[i] < bounds_[i].first || r[i] > bounds_[i].second) return false;
  return true;
}

void IntervalBox::for_each(const std::function<void(const std::vector<int>&)>& f) const {
  if (empty()) return;
  std::vector<int> r(bounds_.size());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = bounds_[i].first;
  for (;;) {
    f(r);
    std::size_t pos = 0;
    while (pos < r.size() && ++r[pos] > bounds_[pos].second) {
      r[pos] = bounds_[pos].first;
      ++pos;
    }
    if (pos == r.size()) return;
  }
}

std::vector<std::vector<int>> IntervalBox::tuples() const {
  std::vector<std::vector<int>> out;
  for_each([&](const std::vector<int>& r) { out.push_back(r); });
  return out;
}

std::string IntervalBox::to_string() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < bounds_.size(); ++i)
    os << (i ? "x" : "") << "[" << bounds_[i].first << "," << bounds_[i].second << "]";
  return os.str();
}

// ---------------------------------------------------------- ComplementSeq

ComplementSeq ComplementSeq::of(const IndexSet& I, int i_next) {
  ComplementSeq s;
  s.n = I.n();
  const auto c = I.complement();
  s.k = static_cast<int>(c.size());
  if (s.k == 0) throw std::invalid_argument("index set has empty complement");
  const int last = c.back();
  if (i_next <= last || i_next > s.n + 1) {
    throw std::out_of_range("i_{k+1}=" + std::to_string(i_next) + " must satisfy i_k < i_{k+1} <= n+1");
  }
  s.i.push_back(0);
  s.i.insert(s.i.end(), c.begin(), c.end());
  s.i.push_back(i_next);
  return s;
}

IntervalBox box_C(const IndexSet& I) {
  const auto s = ComplementSeq::of(I);
  std::vector<std::pair<int, int>> b;
  for (int l = 1; l <= s.k; ++l) b.emplace_back(s[l] + 1, s.n - s.k + l + 1);
  return IntervalBox(b);
}

IntervalBox box_C0(const ComplementSeq& s) {
  std::vector<std::pair<int, int>> b;
  for (int l = 1; l <= s.k; ++l) b.emplace_back(s[l] + 1, s[l + 1]);
  return IntervalBox(b);
}

IntervalBox box_Ct(const ComplementSeq& s, int t) {
  check_t(s, t, 0, s.k, "box_Ct");
  if (t == 0) return box_C0(s);
  std::vector<std::pair<int, int>> b;
  for (int l = 1; l < t; ++l) b.emplace_back(s[l] + 1, s.n - s.k + l + 1);
  b.emplace_back(s[t + 1] + 1, s.n - s.k + t + 1);
  for (int l = t + 1; l <= s.k; ++l) b.emplace_back(s[l] + 1, s[l + 1]);
  return IntervalBox(b);
}

IntervalBox box_Ctt(const ComplementSeq& s, int t, int tp) {
  check_t(s, t, 1, s.k - 1, "box_Ctt");
  check_t(s, tp, 0, s.k - t - 1, "box_Ctt");
  std::vector<std::pair<int, int>> b;
  for (int l = 1; l < t; ++l) b.emplace_back(s[l] + 1, s.n - s.k + l + 1);
  if (tp == s.k - t - 1) {
    for (int l = t; l <= s.k - 1; ++l) b.emplace_back(s[l + 1] + 1, s.n - s.k + l + 1);
    b.emplace_back(s[s.k] + 1, s[s.k + 1]);
  } else {
    for (int l = t; l <= t + tp; ++l) b.emplace_back(s[l + 1] + 1, s.n - s.k + l + 1);
    b.emplace_back(s[t + tp + 1] + 1, s.n - s.k + t + tp + 2);
    for (int l = t + tp + 2; l <= s.k; ++l) b.emplace_back(s[l] + 1, s[l + 1]);
  }
  return IntervalBox(b);
}

IntervalBox box_D(const ComplementSeq& s, int t, int tp) {
  check_t(s, t, 1, s.k - 1, "box_D");
  check_t(s, tp, 0, s.k - t, "box_D");
  if (tp == s.k - t) return empty_box(s.k);
  std::vector<std::pair<int, int>> b;
  for (int l = 1; l < t; ++l) b.emplace_back(s[l] + 1, s.n - s.k + l + 1);
  for (int l = t; l <= t + tp; ++l) b.emplace_back(s[l + 1] + 1, s.n - s.k + l + 1);
  for (int l = t + tp + 1; l <= s.k; ++l) b.emplace_back(s[l] + 1, s[l + 1]);
  return IntervalBox(b);
}

IntervalBox box_Cn(const IndexSet& I) {
  const auto s = ComplementSeq::of(I);
  if (s[s.k] != s.n) throw std::invalid_argument("box_Cn requires i_k = n");
  std::vector<std::pair<int, int>> b;
  for (int l = 1; l <= s.k - 1; ++l) b.emplace_back(s[l] + 1, s.n - s.k + l + 1);
  b.emplace_back(s[s.k - 1] + 1, s.n + 1);
  return IntervalBox(b);
}

IntervalBox box_hat_C0(const ComplementSeq& s) {
  std::vector<std::pair<int, int>> b;
  for (int l = 1; l <= s.k; ++l) b.emplace_back(s[l] - s[1] + 1, s[l + 1] - s[1]);
  return IntervalBox(b);
}

IntervalBox box_hat_Ct(const ComplementSeq& s, int t) {
  check_t(s, t, 1, s.k, "box_hat_Ct");
  std::vector<std::pair<int, int>> b;
  for (int l = 1; l < t; ++l) b.emplace_back(s[l + 1] - s[1] + 1, s.n - s.k + l + 1);
  b.emplace_back(s[t] - s[1] + 1, s.n - s.k + t + 1);
  for (int l = t + 1; l <= s.k; ++l) b.emplace_back(s[l] - s[1] + 1, s[l + 1] - s[1]);
  return IntervalBox(b);
}

IntervalBox box_hat_D(const ComplementSeq& s, int t) {
  check_t(s, t, 1, s.k + 1, "box_hat_D");
  std::vector<std::pair<int, int>> b;
  for (int l = 1; l < t; ++l) b.emplace_back(s[l + 1] - s[1] + 1, s.n - s.k + l + 1);
  for (int l = t; l <= s.k; ++l) b.emplace_back(s[l] - s[1] + 1, s[l + 1] - s[1]);
  return IntervalBox(b);
}

IndexSet hat_I1(const ComplementSeq& s) {
  std::vector<int> c;
  for (int l = 2; l <= s.k + 1; ++l) c.push_back(s[l] - s[1]);
  return IndexSet::from_complement(s.n, c);
}

IndexSet rotated_type(int n, const std::vector<int>& vertices, int j) {
  const int k = static_cast<int>(vertices.size()) - 1;
  if (k < 0 || j < 0 || j > k) throw std::out_of_range("rotated_type: bad position");
  for (int m = 0; m <= k; ++m) {
    if (vertices[static_cast<std::size_t>(m)] < 0 || vertices[static_cast<std::size_t>(m)] > n ||
        (m > 0 && vertices[static_cast<std::size_t>(m)] <= vertices[static_cast<std::size_t>(m - 1)])) {
      throw std::invalid_argument("rotated_type: vertices must be increasing in [0, n]");
    }
  }
  const int ij = vertices[static_cast<std::size_t>(j)];
  std::vector<int> c;
  for (int m = j + 1; m <= k; ++m) c.push_back(vertices[static_cast<std::size_t>(m)] - ij);
  for (int m = 0; m < j; ++m) c.push_back(n + 1 + vertices[static_cast<std::size_t>(m)] - ij);
  return IndexSet::from_complement(n, c);
}

WeylElement tuple_to_weyl(int n, const std::vector<int>& r) {
  const int k = static_cast<int>(r.size());
  if (k < 1 || k > n) throw std::out_of_range("tuple length must lie in [1, n]");
  WeylElement w(n);
  for (int l = k; l >= 1; --l) w = w * w_range(n, r[static_cast<std::size_t>(l - 1)], n - k + l);
  return w;
}

std::vector<IndexSet> subsets_with_corank(int n, int k) {
  std::vector<IndexSet> out;
  for (std::uint32_t m = 0; m < (1u << n); ++m) {
    std::vector<int> c;
    for (int i = 1; i <= n; ++i)
      if ((m >> (i - 1)) & 1u) c.push_back(i);
    if (static_cast<int>(c.size()) == k) out.push_back(IndexSet::from_complement(n, c));
  }
  std::sort(out.begin(), out.end(), [](const IndexSet& a, const IndexSet& b) { return a.complement() < b.complement(); });
  return out;
}

// ------------------------------------------------------------- verification

std::vector<IntervalBox> lshape_partition(int a, int b) {
  if (a < 1 || a > b) throw std::out_of_range("lshape_partition needs 1 <= a <= b");
  std::vector<IntervalBox> parts;
  for (int l = 0; l <= b - a; ++l) {
    parts.push_back(IntervalBox({{a, b - l}, {b - l + 1, b - l + 1}}));
    parts.push_back(IntervalBox({{b - l, b - l}, {a, b - l}}));
  }
  return parts;
}

namespace {

void jk_chain_checks(CheckRecorder& rec, const IndexSet& I) {
  const auto base = ComplementSeq::of(I);
  const int n = base.n, k = base.k;
  const IndexSet Jk = J(n, k);
  const std::string tag = " I=" + I.to_string();
  for (int m = 1; m <= k; ++m) {
    std::vector<int> adds, rems;
    for (int l = 1; l <= m; ++l) {
      adds.push_back(n - k + l);
      rems.push_back(base[l]);
    }
    std::vector<int> expect;
    for (int l = 1; l <= m; ++l)
      for (int x = base[l - 1] + 1; x <= base[l] - 1; ++x) expect.push_back(x);
    for (int x = base[m] + 1; x <= n - k + m; ++x) expect.push_back(x);
    const IndexSet got = modified_set(Jk, adds, rems);
    rec.expect(got == IndexSet(n, expect), "modified J_k chain mismatch at m=" + std::to_string(m) + tag);
    if (m == k) rec.expect(got == I, "full modification of J_k is not I" + tag);
  }
}

void box_checks(CheckRecorder& rec, const IndexSet& I, int inext) {
  const auto s = ComplementSeq::of(I, inext);
  const int n = s.n, k = s.k;
  const std::string at = " I=" + I.to_string() + " i_{k+1}=" + std::to_string(inext);
  std::vector<IntervalBox> parts;
  for (int t = 0; t <= k; ++t) parts.push_back(box_Ct(s, t));
  if (inext == n + 1) expect_partition(rec, box_C(I), parts, "C_I = sum_t C_I^t" + at);
  for (int t = 1; t <= k - 1; ++t) {
    rec.expect(as_set(box_Ct(s, t)) == as_set(box_D(s, t, 0)), "C^t != D^{t,0}" + at);
    for (int tp = 0; tp <= k - t - 1; ++tp) {
      expect_partition(rec, box_Ctt(s, t, tp), {box_D(s, t, tp), box_D(s, t, tp + 1)},
                       "C^{t,t'} = D^{t,t'} + D^{t,t'+1} t=" + std::to_string(t) + " t'=" + std::to_string(tp) + at);
    }
  }
  const IndexSet hat = hat_I1(s);
  rec.expect(as_set(box_hat_D(s, 1)) == as_set(box_hat_C0(s)), "hat D^1 != hat C^0" + at);
  rec.expect(as_set(box_hat_D(s, k + 1)) == as_set(box_C(hat)), "hat D^{k+1} != C_{hat I_1}" + at);
  for (int t = 1; t <= k; ++t) {
    expect_partition(rec, box_hat_Ct(s, t), {box_hat_D(s, t), box_hat_D(s, t + 1)},
                     "hat C^t = hat D^t + hat D^{t+1} t=" + std::to_string(t) + at);
  }
  if (inext > n) return;
  // The sets C_{I^{i_j}_{i_{k+1}}} glued with C_I^{j,k-j-1}.
  for (int j = 1; j <= k + 1; ++j) {
    const IndexSet Ij = modified_set(I, {s[j]}, {inext});
    if (j == k + 1) {
      rec.expect(Ij == I, "I^{i_{k+1}}_{i_{k+1}} != I" + at);
      continue;
    }
    if (j == k) {
      rec.expect(as_set(box_C(Ij)) == as_set(box_Ct(s, k)), "C_{I^{i_k}_{i_{k+1}}} != C_I^k" + at);
      continue;
    }
    std::vector<std::pair<int, int>> d;
    for (int l = 1; l < j; ++l) d.emplace_back(s[l] + 1, n - k + l + 1);
    for (int l = j; l <= k - 1; ++l) d.emplace_back(s[l + 1] + 1, n - k + l + 1);
    d.emplace_back(s[k] + 1, n + 1);
    expect_partition(rec, IntervalBox(d), {box_C(Ij), box_Ctt(s, j, k - j - 1)},
                     "D_{I^{i_j}_{i_{k+1}}} split j=" + std::to_string(j) + at);
  }
}

}  // namespace

CheckReport verify_box_partitions(const IndexSet& I, int i_next) {
  nlohmann::json params = {{"n", I.n()}, {"I", I.elements()}, {"i_next", i_next}};
  CheckRecorder rec("decomp.box_partitions", params);
  try {
    box_checks(rec, I, i_next);
  } catch (const std::exception& e) {
    return skipped_report("decomp.box_partitions", params, e.what());
  }
  return rec.finish();
}

CheckReport verify_box_identities(int n) {
  CheckRecorder rec("decomp.box_identities", {{"n", n}});
  if (n < 1 || n > kMaxRank) return skipped_report("decomp.box_identities", {{"n", n}}, "rank out of range");
  for (int a = 1; a <= n; ++a)
    for (int b = a; b <= n; ++b)
      expect_partition(rec, IntervalBox({{a, b}, {a, b + 1}}), lshape_partition(a, b),
                       "L-shape a=" + std::to_string(a) + " b=" + std::to_string(b));
  for (int k = 1; k <= n; ++k) {
    for (const auto& I : subsets_with_corank(n, k)) {
      jk_chain_checks(rec, I);
      for (int inext = I.complement().back() + 1; inext <= n + 1; ++inext) box_checks(rec, I, inext);
    }
  }
  return rec.finish();
}

namespace {

// Left closure of a set of cosets w W_J under the simple reflections in `gens`.
std::set<WeylElement> left_closure(std::set<WeylElement> cosets, const std::vector<int>& gens,
                                   const IndexSet& Jk) {
  const int n = Jk.n();
  std::vector<WeylElement> frontier(cosets.begin(), cosets.end());
  while (!frontier.empty()) {
    std::vector<WeylElement> next;
    for (const auto& w : frontier) {
      for (int g : gens) {
        auto x = min_left_coset_rep(WeylElement::simple_reflection(n, g) * w, Jk);
        if (cosets.insert(x).second) next.push_back(x);
      }
    }
    frontier.swap(next);
  }
  return cosets;
}

}  // namespace

CheckReport verify_coset_decompositions(int n) {
  CheckRecorder rec("decomp.coset_decompositions", {{"n", n}});
  if (n < 1 || n > kMaxRank) return skipped_report("decomp.coset_decompositions", {{"n", n}}, "rank out of range");
  const auto W = all_elements(n);
  for (int k = 1; k <= n; ++k) {
    const IndexSet Jk = J(n, k);
    // Nondecreasing a_1 <= ... <= a_k with a_l <= n-k+l+1.
    std::vector<int> a(static_cast<std::size_t>(k), 1);
    std::function<void(int)> sweep = [&](int l) {
      if (l == k) {
        std::set<WeylElement> cosets{WeylElement(n)};
        for (int m = 1; m <= k; ++m) {
          std::vector<int> gens;
          for (int g = a[static_cast<std::size_t>(m - 1)]; g <= n - k + m; ++g) gens.push_back(g);
          cosets = left_closure(std::move(cosets), gens, Jk);
        }
        std::vector<std::pair<int, int>> bounds;
        for (int m = 1; m <= k; ++m) bounds.emplace_back(a[static_cast<std::size_t>(m - 1)], n - k + m + 1);
        std::set<WeylElement> reps;
        bool distinct = true;
        IntervalBox(bounds).for_each([&](const std::vector<int>& r) {
          if (!reps.insert(min_left_coset_rep(tuple_to_weyl(n, r), Jk)).second) distinct = false;
        });
        const std::string at = " k=" + std::to_string(k) + " a=(" + join(a) + ")";
        rec.expect(distinct, "tuples give repeated cosets" + at);
        rec.expect(reps == cosets, "coset union differs from the product of parabolics" + at);
        return;
      }
      const int lo = l == 0 ? 1 : a[static_cast<std::size_t>(l - 1)];
      for (int v = lo; v <= n - k + l + 2; ++v) {
        a[static_cast<std::size_t>(l)] = v;
        sweep(l + 1);
      }
    };
    sweep(0);
    // Fibers of W/W_{J_k} -> W/W_{J_k u {j}}.
    for (int j = n - k + 1; j <= n; ++j) {
      const IndexSet big = Jk.with(j);
      for (const auto& w : W) {
        if (!(min_left_coset_rep(w, Jk) == w)) continue;
        std::set<WeylElement> fiber;
        for (const auto& u : parabolic_subgroup(big)) fiber.insert(min_left_coset_rep(w * u, Jk));
        std::vector<WeylElement> formula;
        if (j >= n - k + 2) {
          formula = {w, w * WeylElement::simple_reflection(n, j)};
        } else {
          for (int r = 1; r <= n - k + 2; ++r) formula.push_back(w * w_range(n, r, n - k + 1));
        }
        std::set<WeylElement> fset;
        for (const auto& x : formula) fset.insert(min_left_coset_rep(x, Jk));
        const std::string at = " k=" + std::to_string(k) + " j=" + std::to_string(j) + " w=" + w.to_string();
        rec.expect(fset.size() == formula.size(), "fiber representatives not distinct" + at);
        rec.expect(fset == fiber, "fiber differs from the formula" + at);
      }
    }
  }
  return rec.finish();
}

CheckReport decomp_short_box_control(int n) {
  CheckRecorder rec("decomp.short_box", {{"n", n}});
  for (int k = 1; k <= n; ++k) {
    const IndexSet Jk = J(n, k);
    std::set<WeylElement> cosets{WeylElement(n)};
    std::vector<std::pair<int, int>> bounds;
    for (int m = 1; m <= k; ++m) {
      std::vector<int> gens;
      for (int g = 1; g <= n - k + m; ++g) gens.push_back(g);
      cosets = left_closure(std::move(cosets), gens, Jk);
      bounds.emplace_back(1, n - k + m);
    }
    std::set<WeylElement> reps;
    IntervalBox(bounds).for_each([&](const std::vector<int>& r) { reps.insert(min_left_coset_rep(tuple_to_weyl(n, r), Jk)); });
    rec.expect(reps == cosets, "k=" + std::to_string(k) + ": short box reaches " + std::to_string(reps.size()) + " of " +
                                   std::to_string(cosets.size()) + " cosets");
  }
  return negative_control("decomp.negative_control", rec.finish());
}

}  // namespace sphc
