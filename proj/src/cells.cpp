#include "sphc/cells.hpp"

#include <algorithm>
#include <array>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "sphc/indexsets.hpp"

namespace sphc {

namespace {

constexpr int kMaxDim = 8;

int bits_for(int q) { return q == 2 ? 1 : q == 3 ? 2 : 3; }

// Block index of each 0-based position: p and p+1 share a block iff p+1 is in I.
std::vector<int> block_ids(const IndexSet& I) {
  std::vector<int> id(static_cast<std::size_t>(I.n() + 1), 0);
  for (int p = 1; p <= I.n(); ++p) id[static_cast<std::size_t>(p)] = id[static_cast<std::size_t>(p - 1)] + (I.contains(p) ? 0 : 1);
  return id;
}

int primitive_root(int q) { return q == 2 ? 1 : q == 3 ? 2 : 3; }

std::string set_str(const IndexSet& I) { return I.to_string(); }

}  // namespace

// ---------------------------------------------------------------- FiniteGL

FiniteGL::FiniteGL(int n, int q) : n_(n), q_(q), bits_(bits_for(q)), mask_((Code{1} << bits_for(q)) - 1) {
  check_modulus(q);
  if (n < 1 || (n + 1) * (n + 1) * bits_ > 64 || n + 1 > kMaxDim) {
    throw std::out_of_range("FiniteGL: matrices do not fit in 64 bits");
  }
}

std::int64_t FiniteGL::order() const {
  const int d = dim();
  long double total = 1;
  long double qd = 1;
  for (int i = 0; i < d; ++i) qd *= q_;
  long double qj = 1;
  for (int j = 0; j < d; ++j) {
    total *= qd - qj;
    qj *= q_;
  }
  if (total > 9e18L) return INT64_MAX;
  return static_cast<std::int64_t>(total);
}

FiniteGL::Code FiniteGL::encode(const int* e) const {
  Code c = 0;
  const int d = dim();
  for (int i = 0; i < d * d; ++i) c |= static_cast<Code>(e[i]) << (bits_ * i);
  return c;
}

void FiniteGL::decode(Code c, int* e) const {
  const int d = dim();
  for (int i = 0; i < d * d; ++i) e[i] = static_cast<int>((c >> (bits_ * i)) & mask_);
}

FiniteGL::Code FiniteGL::multiply(Code a, Code b) const {
  const int d = dim();
  int x[kMaxDim * kMaxDim], y[kMaxDim * kMaxDim], z[kMaxDim * kMaxDim];
  decode(a, x);
  decode(b, y);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      int s = 0;
      for (int l = 0; l < d; ++l) s += x[i * d + l] * y[l * d + j];
      z[i * d + j] = s % q_;
    }
  }
  return encode(z);
}

FiniteGL::Code FiniteGL::identity() const {
  int e[kMaxDim * kMaxDim] = {};
  for (int i = 0; i < dim(); ++i) e[i * dim() + i] = 1;
  return encode(e);
}

FiniteGL::Code FiniteGL::permutation(const WeylElement& w) const {
  if (w.n() != n_) throw std::invalid_argument("FiniteGL::permutation: rank mismatch");
  int e[kMaxDim * kMaxDim] = {};
  for (int j = 0; j < dim(); ++j) e[(w(j + 1) - 1) * dim() + j] = 1;
  return encode(e);
}

FiniteGL::Code FiniteGL::elementary(int i, int j, int c) const {
  int e[kMaxDim * kMaxDim] = {};
  for (int l = 0; l < dim(); ++l) e[l * dim() + l] = 1;
  e[i * dim() + j] = (e[i * dim() + j] + c % q_ + q_) % q_;
  return encode(e);
}

FiniteGL::Code FiniteGL::diagonal(int i, int c) const {
  int e[kMaxDim * kMaxDim] = {};
  for (int l = 0; l < dim(); ++l) e[l * dim() + l] = 1;
  e[i * dim() + i] = (c % q_ + q_) % q_;
  return encode(e);
}

int FiniteGL::determinant(Code c) const {
  return sphc::determinant(to_matrix(c)).value();
}

MatFq FiniteGL::to_matrix(Code c) const {
  MatFq m(dim(), dim());
  for (int i = 0; i < dim(); ++i)
    for (int j = 0; j < dim(); ++j) m(i, j) = Fq(q_, entry(c, i, j));
  return m;
}

FiniteGL::Code FiniteGL::from_matrix(const MatFq& m) const {
  int e[kMaxDim * kMaxDim];
  for (int i = 0; i < dim(); ++i)
    for (int j = 0; j < dim(); ++j) e[i * dim() + j] = Fq(q_, m(i, j).value()).value();
  return encode(e);
}

std::string FiniteGL::to_string(Code c) const {
  std::ostringstream os;
  os << "[";
  for (int i = 0; i < dim(); ++i) {
    if (i) os << ";";
    for (int j = 0; j < dim(); ++j) os << (j ? " " : "") << entry(c, i, j);
  }
  os << "]";
  return os.str();
}

bool contains(const CodeSet& s, FiniteGL::Code c) { return std::binary_search(s.begin(), s.end(), c); }

// ---------------------------------------------------------------- enumeration

namespace {

// All invertible b x b matrices over F_q as row-major entry arrays, built row
// by row with each new row outside the span of the previous ones.
std::vector<std::vector<int>> general_linear(int b, int q) {
  int qb = 1;
  for (int i = 0; i < b; ++i) qb *= q;
  auto vec_of = [&](int code) {
    std::vector<int> v(static_cast<std::size_t>(b));
    for (int i = 0; i < b; ++i, code /= q) v[static_cast<std::size_t>(i)] = code % q;
    return v;
  };
  auto code_of = [&](const std::vector<int>& v) {
    int c = 0;
    for (int i = b - 1; i >= 0; --i) c = c * q + v[static_cast<std::size_t>(i)];
    return c;
  };
  std::vector<std::vector<int>> out;
  std::vector<int> rows;
  std::function<void(std::vector<char>&)> rec = [&](std::vector<char>& span) {
    if (static_cast<int>(rows.size()) == b) {
      std::vector<int> m;
      for (int r : rows) {
        auto v = vec_of(r);
        m.insert(m.end(), v.begin(), v.end());
      }
      out.push_back(std::move(m));
      return;
    }
    for (int r = 0; r < qb; ++r) {
      if (span[static_cast<std::size_t>(r)]) continue;
      std::vector<char> next(span.size(), 0);
      const auto v = vec_of(r);
      for (int s = 0; s < qb; ++s) {
        if (!span[static_cast<std::size_t>(s)]) continue;
        const auto u = vec_of(s);
        for (int c = 0; c < q; ++c) {
          std::vector<int> x(static_cast<std::size_t>(b));
          for (int i = 0; i < b; ++i) x[static_cast<std::size_t>(i)] = (u[static_cast<std::size_t>(i)] + c * v[static_cast<std::size_t>(i)]) % q;
          next[static_cast<std::size_t>(code_of(x))] = 1;
        }
      }
      rows.push_back(r);
      rec(next);
      rows.pop_back();
    }
  };
  std::vector<char> span(static_cast<std::size_t>(qb), 0);
  span[0] = 1;
  rec(span);
  return out;
}

std::int64_t parabolic_order(const FiniteGL& G, const std::vector<int>& id) {
  const int d = G.dim();
  std::map<int, int> sizes;
  for (int x : id) ++sizes[x];
  long double order = 1;
  for (auto [blk, b] : sizes) {
    long double qb = 1;
    for (int i = 0; i < b; ++i) qb *= G.q();
    long double qj = 1;
    for (int j = 0; j < b; ++j) {
      order *= qb - qj;
      qj *= G.q();
    }
  }
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      if (id[static_cast<std::size_t>(i)] < id[static_cast<std::size_t>(j)]) order *= G.q();
  return order > 9e18L ? INT64_MAX : static_cast<std::int64_t>(order);
}

}  // namespace

CodeSet parabolic_kappa(const FiniteGL& G, const IndexSet& I) {
  if (I.n() != G.n()) throw std::invalid_argument("parabolic_kappa: rank mismatch");
  const auto id = block_ids(I);
  if (parabolic_order(G, id) > FiniteGL::kMaxOrder) throw std::length_error("parabolic_kappa: group too large");
  const int d = G.dim(), q = G.q();
  std::vector<std::pair<int, int>> blocks;  // [start, size]
  for (int p = 0; p < d; ++p) {
    if (p == 0 || id[static_cast<std::size_t>(p)] != id[static_cast<std::size_t>(p - 1)]) blocks.emplace_back(p, 0);
    ++blocks.back().second;
  }
  std::map<int, std::vector<std::vector<int>>> gl;
  for (auto [s, b] : blocks)
    if (!gl.count(b)) gl[b] = general_linear(b, q);
  std::vector<std::pair<int, int>> free;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      if (id[static_cast<std::size_t>(i)] < id[static_cast<std::size_t>(j)]) free.emplace_back(i, j);

  CodeSet out;
  int e[kMaxDim * kMaxDim] = {};
  std::function<void(std::size_t)> fill_free;
  std::function<void(std::size_t)> fill_block = [&](std::size_t bi) {
    if (bi == blocks.size()) {
      fill_free(0);
      return;
    }
    const auto [s, b] = blocks[bi];
    for (const auto& m : gl[b]) {
      for (int i = 0; i < b; ++i)
        for (int j = 0; j < b; ++j) e[(s + i) * d + s + j] = m[static_cast<std::size_t>(i * b + j)];
      fill_block(bi + 1);
    }
  };
  fill_free = [&](std::size_t fi) {
    if (fi == free.size()) {
      out.push_back(G.encode(e));
      return;
    }
    const auto [i, j] = free[fi];
    for (int v = 0; v < q; ++v) {
      e[i * d + j] = v;
      fill_free(fi + 1);
    }
    e[i * d + j] = 0;
  };
  fill_block(0);
  std::sort(out.begin(), out.end());
  return out;
}

CodeSet enumerate_group(const FiniteGL& G) {
  if (G.order() > FiniteGL::kMaxOrder) throw std::length_error("enumerate_group: |GL| exceeds the guard");
  return parabolic_kappa(G, IndexSet::full(G.n()));
}

bool in_parabolic_kappa(const FiniteGL& G, const IndexSet& I, FiniteGL::Code g) {
  const auto id = block_ids(I);
  for (int i = 0; i < G.dim(); ++i)
    for (int j = 0; j < G.dim(); ++j)
      if (id[static_cast<std::size_t>(i)] > id[static_cast<std::size_t>(j)] && G.entry(g, i, j) != 0) return false;
  return true;
}

std::vector<FiniteGL::Code> parabolic_generators(const FiniteGL& G, const IndexSet& I) {
  const auto id = block_ids(I);
  std::vector<FiniteGL::Code> gens;
  for (int i = 0; i < G.dim(); ++i) {
    if (G.q() > 2) gens.push_back(G.diagonal(i, primitive_root(G.q())));
    for (int j = 0; j < G.dim(); ++j)
      if (i != j && id[static_cast<std::size_t>(i)] <= id[static_cast<std::size_t>(j)]) gens.push_back(G.elementary(i, j, 1));
  }
  return gens;
}

CodeSet left_product(const FiniteGL& G, const CodeSet& A, const CodeSet& T) {
  std::unordered_set<FiniteGL::Code> seen;
  CodeSet out;
  for (auto t : T) {
    if (seen.count(t)) continue;
    for (auto a : A) {
      const auto x = G.multiply(a, t);
      seen.insert(x);
      out.push_back(x);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

CodeSet right_product(const FiniteGL& G, const CodeSet& T, const CodeSet& A) {
  std::unordered_set<FiniteGL::Code> seen;
  CodeSet out;
  for (auto t : T) {
    if (seen.count(t)) continue;
    for (auto a : A) {
      const auto x = G.multiply(t, a);
      seen.insert(x);
      out.push_back(x);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

CodeSet double_coset_kappa(const FiniteGL& G, const CodeSet& P1, FiniteGL::Code g, const CodeSet& P2) {
  return left_product(G, P1, right_product(G, CodeSet{g}, P2));
}

WeylElement bruhat_class_kappa(const FiniteGL& G, FiniteGL::Code g) {
  const int d = G.dim(), q = G.q();
  int e[kMaxDim * kMaxDim];
  G.decode(g, e);
  std::array<bool, kMaxDim> used{};
  std::vector<int> image(static_cast<std::size_t>(d));
  for (int j = 0; j < d; ++j) {
    int piv = -1;
    for (int i = d - 1; i >= 0; --i) {
      if (!used[static_cast<std::size_t>(i)] && e[i * d + j] != 0) {
        piv = i;
        break;
      }
    }
    if (piv < 0) throw std::domain_error("bruhat_class_kappa: singular matrix");
    used[static_cast<std::size_t>(piv)] = true;
    image[static_cast<std::size_t>(j)] = piv + 1;
    const int inv = fq_inverse(q, e[piv * d + j]);
    // Clear the rows above within this column; rows below are already zero here.
    for (int r = 0; r < piv; ++r) {
      if (used[static_cast<std::size_t>(r)] || e[r * d + j] == 0) continue;
      const int f = e[r * d + j] * inv % q;
      for (int l = j; l < d; ++l) e[r * d + l] = ((e[r * d + l] - f * e[piv * d + l]) % q + q) % q;
    }
  }
  return WeylElement::from_one_line(image);
}

// ---------------------------------------------------------------- C_I

CodeSet product_set_CI_kappa(const FiniteGL& G, const IndexSet& I) {
  const int n = G.n();
  const auto comp = I.complement();
  const int k = static_cast<int>(comp.size());
  CodeSet R = parabolic_kappa(G, J(n, k));
  std::vector<int> adds, removes;
  for (int m = 1; m <= k; ++m) {
    adds.push_back(n - k + m);
    removes.push_back(comp[static_cast<std::size_t>(m - 1)]);
    R = left_product(G, parabolic_kappa(G, modified_set(J(n, k), adds, removes)), R);
  }
  return R;
}

CodeSet product_set_CI_intervals(const FiniteGL& G, const IndexSet& I) {
  const int n = G.n();
  const auto comp = I.complement();
  const int k = static_cast<int>(comp.size());
  CodeSet R = parabolic_kappa(G, J(n, k));
  for (int m = 1; m <= k; ++m) {
    const int lo = comp[static_cast<std::size_t>(m - 1)] + 1, hi = n - k + m;
    const IndexSet interval = lo <= hi ? IndexSet::interval(n, lo, hi) : IndexSet::empty(n);
    R = left_product(G, parabolic_kappa(G, interval), R);
  }
  return R;
}

// ---------------------------------------------------------------- checks

CheckReport verify_bruhat_bijection(int n, int q, const IndexSet& I1, const IndexSet& I2) {
  CheckRecorder rec("finite.bruhat_bijection", {{"n", n}, {"q", q}, {"I1", set_str(I1)}, {"I2", set_str(I2)}});
  const FiniteGL G(n, q);
  const CodeSet all = enumerate_group(G);
  const CodeSet P1 = parabolic_kappa(G, I1), P2 = parabolic_kappa(G, I2), B = parabolic_kappa(G, IndexSet::empty(n));

  std::unordered_map<FiniteGL::Code, int> class_of;
  class_of.reserve(all.size() * 2);
  std::vector<std::int64_t> sizes;
  for (auto g : all) {
    if (class_of.count(g)) continue;
    const int id = static_cast<int>(sizes.size());
    const CodeSet cls = double_coset_kappa(G, P1, g, P2);
    for (auto x : cls) class_of[x] = id;
    sizes.push_back(static_cast<std::int64_t>(cls.size()));
  }
  rec.expect(static_cast<std::int64_t>(class_of.size()) == static_cast<std::int64_t>(all.size()),
             "classes do not cover the group");

  const auto dcs = double_cosets(I1, I2);
  rec.expect(dcs.size() == sizes.size(), "class count " + std::to_string(sizes.size()) + " vs Weyl double cosets " +
                                             std::to_string(dcs.size()));
  std::map<int, WeylElement> owner;
  for (const auto& dc : dcs) {
    const int id = class_of.at(G.permutation(dc.rep));
    for (const auto& w : dc.elements) {
      rec.expect(class_of.at(G.permutation(w)) == id, "P_w for w = " + w.to_string() + " leaves the class of " + dc.rep.to_string());
    }
    const auto [it, fresh] = owner.emplace(id, dc.rep);
    rec.expect(fresh, "double cosets of " + dc.rep.to_string() + " and " + it->second.to_string() + " share a class");
  }

  // The row-reduction class agrees with the orbit computation.
  for (auto g : all) {
    const auto w = bruhat_class_kappa(G, g);
    if (class_of.at(g) != class_of.at(G.permutation(w))) {
      rec.fail("bruhat_class_kappa(" + G.to_string(g) + ") = " + w.to_string() + " outside its orbit");
      break;
    }
  }
  rec.ok();

  if (I1 == IndexSet::empty(n) && I2 == IndexSet::empty(n)) {
    for (const auto& dc : dcs) {
      std::int64_t expect = static_cast<std::int64_t>(B.size());
      for (int i = 0; i < dc.rep.length(); ++i) expect *= q;
      rec.expect(sizes[static_cast<std::size_t>(class_of.at(G.permutation(dc.rep)))] == expect,
                 "|BwB| != q^l(w)|B| at w = " + dc.rep.to_string());
    }
  }
  rec.metrics()["classes"] = sizes.size();
  rec.metrics()["group_order"] = all.size();
  std::sort(sizes.begin(), sizes.end());
  rec.metrics()["class_sizes"] = sizes;
  return rec.finish();
}

CheckReport verify_remark_B(int n, int q, const IndexSet& I1, const IndexSet& I2) {
  for (int i : I1.elements())
    for (int j : I2.elements())
      if (std::abs(i - j) < 2) throw std::invalid_argument("verify_remark_B: |i - j| >= 2 violated");
  CheckRecorder rec("finite.remark_B", {{"n", n}, {"q", q}, {"I1", set_str(I1)}, {"I2", set_str(I2)}});
  const FiniteGL G(n, q);
  const CodeSet P1 = parabolic_kappa(G, I1), P2 = parabolic_kappa(G, I2), P12 = parabolic_kappa(G, I1 | I2);
  const CodeSet B = parabolic_kappa(G, IndexSet::empty(n));
  rec.expect(left_product(G, P1, P2) == P12, "P_I1 P_I2 != P_{I1 u I2}");
  rec.expect(left_product(G, P2, P1) == P12, "P_I2 P_I1 != P_{I1 u I2}");
  for (const auto* P : {&P1, &P2}) {
    rec.expect(left_product(G, *P, *P) == *P, "P_I P_I != P_I");
    rec.expect(left_product(G, B, *P) == *P, "B P_I != P_I");
    rec.expect(right_product(G, *P, B) == *P, "P_I B != P_I");
  }
  rec.metrics()["order"] = P12.size();
  return rec.finish();
}

namespace {

// Cells B w_r P_{J_k} over a box, checked to tile `target` disjointly.
void expect_cell_tiling(CheckRecorder& rec, const FiniteGL& G, const CodeSet& target, const IntervalBox& box,
                        const CodeSet& B, const CodeSet& PJ, const std::string& what) {
  std::unordered_set<FiniteGL::Code> seen;
  std::int64_t total = 0;
  bool ok = true;
  box.for_each([&](const std::vector<int>& r) {
    if (!ok) return;
    const WeylElement w = tuple_to_weyl(G.n(), r);
    const CodeSet cell = double_coset_kappa(G, B, G.permutation(w), PJ);
    for (auto x : cell) {
      if (!seen.insert(x).second) {
        rec.fail(what + ": cells overlap at r = " + w.to_string());
        ok = false;
        return;
      }
      if (!contains(target, x)) {
        rec.fail(what + ": cell of " + w.to_string() + " leaves the product set");
        ok = false;
        return;
      }
    }
    total += static_cast<std::int64_t>(cell.size());
  });
  if (ok) rec.expect(total == static_cast<std::int64_t>(target.size()), what + ": cells cover " + std::to_string(total) +
                                                                              " of " + std::to_string(target.size()));
}

// Random inputs whose exact arithmetic passes the degree cap are drawn again.
// The count is reported; more redraws than samples makes the check inconclusive.
class Redraws {
 public:
  Redraws(CheckRecorder& rec, int samples) : rec_(rec), limit_(samples) { rec_.metrics()["redrawn"] = 0; }
  void note() {
    rec_.metrics()["redrawn"] = ++count_;
    if (count_ > limit_) rec_.set_inconclusive(std::to_string(count_) + " samples hit the degree cap");
  }
  bool exhausted() const { return count_ > limit_; }

 private:
  CheckRecorder& rec_;
  int limit_;
  int count_ = 0;
};

}  // namespace

CheckReport verify_decomp_CI(int n, int q, const IndexSet& I) {
  const auto comp = I.complement();
  const int k = static_cast<int>(comp.size());
  CheckRecorder rec("finite.decomp_CI", {{"n", n}, {"q", q}, {"I", set_str(I)}, {"k", k}});
  if (k == 0) throw std::invalid_argument("verify_decomp_CI: I must be a proper subset");
  const FiniteGL G(n, q);
  const CodeSet C = product_set_CI_kappa(G, I);
  rec.expect(C == product_set_CI_intervals(G, I), "modified-set product differs from the interval product");
  const CodeSet B = parabolic_kappa(G, IndexSet::empty(n));
  const CodeSet PJ = parabolic_kappa(G, J(n, k));
  expect_cell_tiling(rec, G, C, box_C(I), B, PJ, "C_I");

  // C_I is a union of whole double cells B w B.
  std::map<WeylElement, std::int64_t> per_class;
  for (auto g : C) ++per_class[bruhat_class_kappa(G, g)];
  for (const auto& [w, count] : per_class) {
    std::int64_t full = static_cast<std::int64_t>(B.size());
    for (int i = 0; i < w.length(); ++i) full *= q;
    rec.expect(count == full, "C_I meets B" + w.to_string() + "B in " + std::to_string(count) + " of " + std::to_string(full));
  }
  rec.metrics()["size"] = C.size();
  std::vector<std::int64_t> cells;
  box_C(I).for_each([&](const std::vector<int>& r) {
    cells.push_back(static_cast<std::int64_t>(double_coset_kappa(G, B, G.permutation(tuple_to_weyl(n, r)), PJ).size()));
  });
  rec.metrics()["cell_sizes"] = cells;
  return rec.finish();
}

CheckReport finite_short_box_control(int n, int q, const IndexSet& I) {
  const int k = static_cast<int>(I.complement().size());
  CheckRecorder rec("finite.short_box", {{"n", n}, {"q", q}, {"I", set_str(I)}, {"k", k}});
  if (k == 0) throw std::invalid_argument("finite_short_box_control: I must be a proper subset");
  auto bounds = box_C(I).bounds();
  if (bounds.empty() || bounds[0].second - bounds[0].first < 1)
    throw std::invalid_argument("finite_short_box_control: first interval has a single entry");
  --bounds[0].second;
  const FiniteGL G(n, q);
  expect_cell_tiling(rec, G, product_set_CI_kappa(G, I), IntervalBox(bounds), parabolic_kappa(G, IndexSet::empty(n)),
                     parabolic_kappa(G, J(n, k)), "C_I");
  return negative_control("finite.negative_control", rec.finish());
}

CheckReport verify_parahoric_translates(int n, int q, const IndexSet& I) {
  const auto comp = I.complement();
  const int k = static_cast<int>(comp.size());
  CheckRecorder rec("finite.parahoric_translates", {{"n", n}, {"q", q}, {"I", set_str(I)}, {"k", k}});
  if (k == 0) throw std::invalid_argument("verify_parahoric_translates: I must be a proper subset");
  const FiniteGL G(n, q);
  const CodeSet C = product_set_CI_kappa(G, I);
  const CodeSet PI = parabolic_kappa(G, I);
  const int ik = comp.back();

  // C_I as disjoint P_I-translates of C_{I'} with I' = I^{i_k}_n.
  const IndexSet Ip = modified_set(I, {ik}, {n});
  const CodeSet Cp = product_set_CI_kappa(G, Ip);
  rec.expect(left_product(G, PI, Cp) == C, "P_I C_{I'} != C_I for I' = " + Ip.to_string());
  CodeSet meet;
  const CodeSet PIp = parabolic_kappa(G, Ip);
  std::set_intersection(PI.begin(), PI.end(), PIp.begin(), PIp.end(), std::back_inserter(meet));
  rec.expect(C.size() * meet.size() == PI.size() * Cp.size(),
             "translates of C_{I'} overlap: |C_I| = " + std::to_string(C.size()) + ", index " +
                 std::to_string(PI.size() / meet.size()) + ", |C_I'| = " + std::to_string(Cp.size()));

  if (ik == n) {
    const IndexSet In = I.with(n);
    const CodeSet PIn = parabolic_kappa(G, In);
    const CodeSet PJ = parabolic_kappa(G, J(n, k));
    const CodeSet big = left_product(G, PIn, C);
    rec.expect(big.size() * PI.size() == PIn.size() * C.size(),
               "translates b C_I, b in P_{I u {n}}/P_I, overlap");
    expect_cell_tiling(rec, G, big, box_Cn(I), parabolic_kappa(G, IndexSet::empty(n)), PJ, "P_{I u {n}} C_I");
    rec.metrics()["translates"] = PIn.size() / PI.size();
  }
  rec.metrics()["size"] = C.size();
  return rec.finish();
}

// ---------------------------------------------------------------- Iwasawa

namespace {

template <bool kTrack>
WeylElement eliminate(MatK g, MatK* b_out, MatK* p_out) {
  const int d = static_cast<int>(g.rows());
  if (g.cols() != d || d < 2) throw std::invalid_argument("iwasawa: square matrix of size >= 2 required");
  const int q = g(0, 0).bound() ? g(0, 0).q() : g(d - 1, d - 1).q();
  MatK b, p;
  if constexpr (kTrack) {
    b = identity<RatFunc>(d, q);
    p = identity<RatFunc>(d, q);
  }
  std::array<bool, kMaxDim> used{};
  std::vector<int> image(static_cast<std::size_t>(d));
  std::vector<RatFunc> pivot_value(static_cast<std::size_t>(d));
  for (int j = 0; j < d; ++j) {
    int piv = -1, best = kValuationInfinity;
    for (int i = 0; i < d; ++i) {
      if (used[static_cast<std::size_t>(i)] || g(i, j).is_zero()) continue;
      const int v = g(i, j).valuation();
      if (v <= best) {  // ties go to the larger row index
        best = v;
        piv = i;
      }
    }
    if (piv < 0) throw std::domain_error("iwasawa: singular matrix");
    used[static_cast<std::size_t>(piv)] = true;
    image[static_cast<std::size_t>(j)] = piv + 1;
    const RatFunc inv = g(piv, j).inverse();
    for (int r = 0; r < d; ++r) {
      if (used[static_cast<std::size_t>(r)] || g(r, j).is_zero()) continue;
      // Valuation >= 0 above the pivot and >= 1 below, so the operation is Iwahori.
      const RatFunc c = g(r, j) * inv;
      g(r, j) = RatFunc::constant(q, 0);
      for (int l = j + 1; l < d; ++l)
        if (!g(piv, l).is_zero()) g(r, l) -= c * g(piv, l);
      if constexpr (kTrack) {
        for (int x = 0; x < d; ++x)
          if (!b(x, r).is_zero()) b(x, piv) += c * b(x, r);
      }
    }
    if constexpr (kTrack) {
      pivot_value[static_cast<std::size_t>(j)] = g(piv, j);
      for (int l = j + 1; l < d; ++l) {
        if (g(piv, l).is_zero()) continue;
        const RatFunc c = g(piv, l) * inv;
        g(piv, l) = RatFunc::constant(q, 0);
        for (int x = 0; x < d; ++x)
          if (!p(l, x).is_zero()) p(j, x) += c * p(l, x);
      }
    }
  }
  if constexpr (kTrack) {
    for (int j = 0; j < d; ++j)
      for (int x = 0; x < d; ++x)
        if (!p(j, x).is_zero()) p(j, x) *= pivot_value[static_cast<std::size_t>(j)];
    *b_out = std::move(b);
    *p_out = std::move(p);
  }
  return WeylElement::from_one_line(image);
}

int uniform(std::mt19937_64& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

WeylElement random_weyl(int n, std::mt19937_64& rng) {
  std::vector<int> perm(static_cast<std::size_t>(n + 1));
  for (int j = 0; j <= n; ++j) perm[static_cast<std::size_t>(j)] = j + 1;
  std::shuffle(perm.begin(), perm.end(), rng);
  return WeylElement::from_one_line(perm);
}

}  // namespace

IwasawaFactorization iwasawa_class(const MatK& g) {
  IwasawaFactorization f;
  f.w = eliminate<true>(g, &f.b, &f.p);
  return f;
}

WeylElement iwasawa_w(const MatK& g) { return eliminate<false>(g, nullptr, nullptr); }

MatK random_parahoric(int n, int q, const IndexSet& I, std::mt19937_64& rng) {
  const auto id = block_ids(I);
  const int d = n + 1;
  for (;;) {
    MatK m(d, d);
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < d; ++j) {
        m(i, j) = random_polynomial(q, rng, 2);
        if (id[static_cast<std::size_t>(i)] > id[static_cast<std::size_t>(j)]) m(i, j) *= RatFunc::t(q);
      }
    }
    if (rank(reduce_mod_pi(m)) == d) return m;
  }
}

MatK random_parabolic_k(int n, int q, const IndexSet& I, std::mt19937_64& rng) {
  const auto id = block_ids(I);
  const int d = n + 1;
  for (;;) {
    MatK m(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        m(i, j) = id[static_cast<std::size_t>(i)] > id[static_cast<std::size_t>(j)] ? RatFunc::constant(q, 0) : random_ratfunc(q, rng);
    if (!determinant(m).is_zero()) return m;
  }
}

CheckReport verify_iwasawa(int n, int q, int samples, int perturbations, std::uint64_t seed) {
  CheckRecorder rec("iwasawa.normal_form",
                    {{"n", n}, {"q", q}, {"samples", samples}, {"perturbations", perturbations}, {"seed", seed}});
  std::mt19937_64 rng(seed);
  std::map<std::string, int> classes;
  Redraws redraws(rec, samples);
  for (int s = 0; s < samples && !redraws.exhausted();) {
    MatK g;
    std::optional<IwasawaFactorization> f;
    std::optional<WeylElement> w_only;
    MatK back;
    try {
      g = random_gl(n, q, rng);
      f = iwasawa_class(g);
      back = multiply(multiply(f->b, permutation_matrix<RatFunc>(f->w, q)), f->p);
      w_only = iwasawa_w(g);
    } catch (const DegreeOverflow&) {
      redraws.note();
      continue;
    }
    ++s;
    if (!rec.expect(back == g, "reconstruction differs for g = " + to_string(g))) continue;
    rec.expect(in_iwahori(f->b), "b not Iwahori for g = " + to_string(g));
    rec.expect(is_upper_triangular(f->p) && !determinant(f->p).is_zero(), "p not invertible upper triangular for g = " + to_string(g));
    rec.expect(*w_only == f->w, "w-only elimination disagrees for g = " + to_string(g));
    ++classes[f->w.to_string()];
    for (int t = 0; t < perturbations && !redraws.exhausted();) {
      std::optional<WeylElement> w2;
      try {
        w2 = iwasawa_w(multiply(multiply(random_iwahori(n, q, rng), g), random_upper(n, q, rng)));
      } catch (const DegreeOverflow&) {
        redraws.note();
        continue;
      }
      ++t;
      if (!rec.expect(*w2 == f->w, "perturbation moved w from " + f->w.to_string() + " to " + w2->to_string() +
                                       " for g = " + to_string(g))) {
        break;
      }
    }
  }
  rec.metrics()["distinct_w"] = classes.size();
  return rec.finish();
}

CheckReport verify_bourbaki3_sampled(int n, int q, const IndexSet& I1, const IndexSet& I2, int samples,
                                     std::uint64_t seed, int perturbations) {
  CheckRecorder rec("iwasawa.bourbaki3", {{"n", n}, {"q", q}, {"I1", set_str(I1)}, {"I2", set_str(I2)},
                                          {"samples", samples}, {"seed", seed}, {"perturbations", perturbations}});
  std::mt19937_64 rng(seed);
  Redraws redraws(rec, samples);
  for (int s = 0; s < samples && !redraws.exhausted();) {
    const WeylElement w = random_weyl(n, rng);
    MatK g;
    std::optional<WeylElement> got;
    try {
      const MatK b = scaled(random_parahoric(n, q, I1, rng), RatFunc::t_power(q, uniform(rng, -2, 2)));
      const MatK p = random_parabolic_k(n, q, I2, rng);
      g = multiply(multiply(b, permutation_matrix<RatFunc>(w, q)), p);
      got = iwasawa_w(g);
    } catch (const DegreeOverflow&) {
      redraws.note();
      continue;
    }
    ++s;
    if (!rec.expect(min_double_coset_rep(I1, *got, I2) == min_double_coset_rep(I1, w, I2),
                    "class " + got->to_string() + " outside W_I1 " + w.to_string() + " W_I2")) {
      break;
    }
    for (int t = 0; t < perturbations && !redraws.exhausted();) {
      std::optional<WeylElement> moved;
      try {
        moved = iwasawa_w(multiply(multiply(random_iwahori(n, q, rng), g), random_upper(n, q, rng)));
      } catch (const DegreeOverflow&) {
        redraws.note();
        continue;
      }
      ++t;
      if (!rec.expect(*moved == *got, "perturbation moved the class of " + to_string(g))) break;
    }
  }
  return rec.finish();
}

CheckReport iwasawa_illegal_perturbation(int n, int q, int samples, std::uint64_t seed) {
  CheckRecorder rec("iwasawa.illegal_perturbation", {{"n", n}, {"q", q}, {"samples", samples}, {"seed", seed}});
  std::mt19937_64 rng(seed);
  for (int s = 0; s < samples; ++s) {
    const MatK g = random_upper(n, q, rng);
    MatK l = identity<RatFunc>(n + 1, q);
    const int i = uniform(rng, 0, n - 1);
    l(i + 1, i) = RatFunc::t_power(q, -1);  // below the diagonal with negative valuation
    const auto w0 = iwasawa_w(g), w1 = iwasawa_w(multiply(l, g));
    rec.expect(w0 == w1, "w changed from " + w0.to_string() + " to " + w1.to_string());
  }
  return rec.finish();
}

}  // namespace sphc
