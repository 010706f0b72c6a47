#include "sphc/building.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <sstream>
#include <unordered_set>

#include "sphc/cells.hpp"

namespace sphc {

std::size_t KeyHash::operator()(const std::vector<int>& key) const {
  std::uint64_t h = 1469598103934665603ULL;
  for (int x : key) {
    h ^= static_cast<std::uint64_t>(static_cast<std::uint32_t>(x));
    h *= 1099511628211ULL;
  }
  return static_cast<std::size_t>(h);
}

// ---------------------------------------------------------------- lattices

namespace {

int modulus_of(const MatK& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      if (m(i, j).bound()) return m(i, j).q();
  throw std::invalid_argument("lattice: matrix has no bound entries");
}

}  // namespace

LatticeClass LatticeClass::from_generators(const MatK& generators) {
  const int N = static_cast<int>(generators.cols());
  const int rows = static_cast<int>(generators.rows());
  if (rows < N) throw std::domain_error("LatticeClass: fewer generators than the dimension");
  const int q = modulus_of(generators);
  MatK g = generators;
  std::vector<bool> used(static_cast<std::size_t>(rows), false);
  MatK basis(N, N);
  std::vector<int> a(static_cast<std::size_t>(N));
  for (int j = 0; j < N; ++j) {
    int piv = -1, best = kValuationInfinity;
    for (int r = 0; r < rows; ++r) {
      if (used[static_cast<std::size_t>(r)] || g(r, j).is_zero()) continue;
      const int v = g(r, j).valuation();
      if (v < best) {
        best = v;
        piv = r;
      }
    }
    if (piv < 0) throw std::domain_error("LatticeClass: generators do not span");
    used[static_cast<std::size_t>(piv)] = true;
    const RatFunc tv = RatFunc::t_power(q, best);
    const RatFunc unit_inv = tv / g(piv, j);
    g(piv, j) = tv;
    for (int l = j + 1; l < N; ++l)
      if (!g(piv, l).is_zero()) g(piv, l) *= unit_inv;
    for (int r = 0; r < rows; ++r) {
      if (used[static_cast<std::size_t>(r)] || g(r, j).is_zero()) continue;
      const RatFunc c = g(r, j) / tv;
      g(r, j) = RatFunc::constant(q, 0);
      for (int l = j + 1; l < N; ++l)
        if (!g(piv, l).is_zero()) g(r, l) -= c * g(piv, l);
    }
    basis.row(j) = g.row(piv);
    for (int l = 0; l < j; ++l) basis(j, l) = RatFunc::constant(q, 0);
    a[static_cast<std::size_t>(j)] = best;
  }
  const int m = *std::min_element(a.begin(), a.end());
  if (m != 0) {
    const RatFunc s = RatFunc::t_power(q, -m);
    for (int i = 0; i < N; ++i)
      for (int l = i; l < N; ++l)
        if (!basis(i, l).is_zero()) basis(i, l) *= s;
    for (auto& x : a) x -= m;
  }
  for (int i = 0; i < N; ++i) {
    for (int j = i + 1; j < N; ++j) {
      const RatFunc& x = basis(i, j);
      if (x.is_zero()) continue;
      const RatFunc keep = x.truncated_below(a[static_cast<std::size_t>(j)]);
      if (keep == x) continue;
      const RatFunc c = (x - keep) / basis(j, j);
      basis(i, j) = keep;
      for (int l = j + 1; l < N; ++l)
        if (!basis(j, l).is_zero()) basis(i, l) -= c * basis(j, l);
    }
  }
  LatticeClass out;
  out.q_ = q;
  out.basis_ = basis;
  out.exponents_ = a;
  out.inverse_ = inverse(basis, q);
  out.key_.push_back(q);
  for (int x : a) out.key_.push_back(x);
  for (int i = 0; i < N; ++i)
    for (int j = i + 1; j < N; ++j) {
      out.key_.push_back(-1);
      basis(i, j).append_key(out.key_);
    }
  return out;
}

int LatticeClass::det_valuation() const {
  int s = 0;
  for (int x : exponents_) s += x;
  return s;
}

std::string LatticeClass::label() const {
  std::string s;
  for (std::size_t i = 0; i < exponents_.size(); ++i) s += (i ? "," : "") + std::to_string(exponents_[i]);
  return s;
}

std::string LatticeClass::to_string() const { return sphc::to_string(basis_); }

LatticeClass standard_vertex(int n, int i, int q) {
  if (i < 0 || i > n) throw std::out_of_range("standard_vertex: 0 <= i <= n required");
  std::vector<int> e(static_cast<std::size_t>(n + 1), 0);
  for (int l = 0; l < i; ++l) e[static_cast<std::size_t>(l)] = 1;
  return LatticeClass::from_generators(diagonal_t_powers(e, q));
}

// ---------------------------------------------------------------- cells

PointedCell PointedCell::from_vertices(std::vector<LatticeClass> vertices) {
  if (vertices.empty()) throw std::invalid_argument("PointedCell: no vertices");
  const int N = vertices.front().dim();
  PointedCell c;
  c.shifts_.push_back(0);
  std::vector<int> vdet{vertices.front().det_valuation()};
  for (std::size_t i = 1; i < vertices.size(); ++i) {
    if (vertices[i].dim() != N) throw std::invalid_argument("PointedCell: rank mismatch");
    const MatK rel = multiply(vertices[i].basis(), vertices[i - 1].basis_inverse());
    const int s = c.shifts_.back() - min_valuation(rel);
    c.shifts_.push_back(s);
    vdet.push_back(vertices[i].det_valuation() + N * s);
  }
  // pi Lambda_0 inside Lambda_k.
  const auto& last = vertices.back();
  const MatK closing = multiply(vertices.front().basis(), last.basis_inverse());
  if (1 - c.shifts_.back() + min_valuation(closing) < 0) {
    throw std::invalid_argument("PointedCell: pi Lambda_0 is not contained in Lambda_k");
  }
  for (std::size_t i = 1; i < vdet.size(); ++i) c.type_.push_back(vdet[i] - vdet[i - 1]);
  c.type_.push_back(N + vdet.front() - vdet.back());
  for (int d : c.type_)
    if (d < 1) throw std::invalid_argument("PointedCell: inclusions are not strict");
  c.vertices_ = std::move(vertices);
  return c;
}

MatK PointedCell::representative(int i) const {
  const auto& v = vertices_.at(static_cast<std::size_t>(i));
  return scaled(v.basis(), RatFunc::t_power(q(), shifts_[static_cast<std::size_t>(i)]));
}

MatK PointedCell::representative_inverse(int i) const {
  const auto& v = vertices_.at(static_cast<std::size_t>(i));
  return scaled(v.basis_inverse(), RatFunc::t_power(q(), -shifts_[static_cast<std::size_t>(i)]));
}

std::vector<int> PointedCell::key() const {
  std::vector<int> key;
  for (const auto& v : vertices_) {
    key.push_back(-7);
    key.insert(key.end(), v.key().begin(), v.key().end());
  }
  return key;
}

std::string PointedCell::to_string() const {
  std::ostringstream os;
  os << "(";
  for (std::size_t i = 0; i < vertices_.size(); ++i) os << (i ? " > " : "") << vertices_[i].to_string();
  os << ")";
  return os.str();
}

CellType standard_type(const IndexSet& I) {
  CellType t;
  int prev = 0;
  for (int i : I.complement()) {
    t.push_back(i - prev);
    prev = i;
  }
  t.push_back(I.n() + 1 - prev);
  return t;
}

PointedCell standard_cell(const IndexSet& I, int q) {
  std::vector<LatticeClass> v{standard_vertex(I.n(), 0, q)};
  for (int i : I.complement()) v.push_back(standard_vertex(I.n(), i, q));
  return PointedCell::from_vertices(std::move(v));
}

LatticeClass act(const MatK& g, const LatticeClass& v) {
  return LatticeClass::from_generators(multiply(v.basis(), inverse(g, v.q())));
}

PointedCell act_by_inverse(const MatK& g_inverse, const PointedCell& c) {
  std::vector<LatticeClass> v;
  v.reserve(c.vertices().size());
  for (const auto& x : c.vertices()) v.push_back(LatticeClass::from_generators(multiply(x.basis(), g_inverse)));
  return PointedCell::from_vertices(std::move(v));
}

PointedCell act(const MatK& g, const PointedCell& c) { return act_by_inverse(inverse(g, c.q()), c); }

PointedCell rotate_pointer(const PointedCell& c) {
  std::vector<LatticeClass> v(c.vertices().begin() + 1, c.vertices().end());
  v.push_back(c.vertices().front());
  return PointedCell::from_vertices(std::move(v));
}

PointedCell delete_vertex(const PointedCell& c, int j) {
  if (c.k() < 1 || j < 0 || j > c.k()) throw std::out_of_range("delete_vertex: 0 <= j <= k, k >= 1 required");
  std::vector<LatticeClass> v = c.vertices();
  v.erase(v.begin() + j);
  return PointedCell::from_vertices(std::move(v));
}

// ---------------------------------------------------------------- subspaces

namespace {

// Subspaces W with U <= W <= F_q^N and dim W = dim U + extra, given U in RREF.
// Each W is returned as a generating matrix (the rows of U followed by new rows).
std::vector<MatFq> subspaces_over(const MatFq& U, int N, int q, int extra) {
  MatFq u = U;
  const auto piv = rref_in_place(u);
  const int du = static_cast<int>(piv.size());
  std::vector<int> free;
  for (int c = 0; c < N; ++c)
    if (std::find(piv.begin(), piv.end(), c) == piv.end()) free.push_back(c);
  const int c = static_cast<int>(free.size());
  std::vector<MatFq> out;
  if (extra < 0 || extra > c) return out;
  // RREF enumeration of extra-dimensional subspaces of F_q^c.
  std::vector<int> pivots;
  std::function<void(int)> choose = [&](int start) {
    if (static_cast<int>(pivots.size()) == extra) {
      std::vector<std::pair<int, int>> slots;
      for (int r = 0; r < extra; ++r)
        for (int x = pivots[static_cast<std::size_t>(r)] + 1; x < c; ++x)
          if (std::find(pivots.begin(), pivots.end(), x) == pivots.end()) slots.emplace_back(r, x);
      std::vector<int> vals(slots.size(), 0);
      for (;;) {
        MatFq w(du + extra, N);
        for (int r = 0; r < du + extra; ++r)
          for (int x = 0; x < N; ++x) w(r, x) = Fq(q, 0);
        for (int r = 0; r < du; ++r) w.row(r) = u.row(r);
        for (int r = 0; r < extra; ++r) w(du + r, free[static_cast<std::size_t>(pivots[static_cast<std::size_t>(r)])]) = Fq(q, 1);
        for (std::size_t s = 0; s < slots.size(); ++s)
          w(du + slots[s].first, free[static_cast<std::size_t>(slots[s].second)]) = Fq(q, vals[s]);
        out.push_back(std::move(w));
        std::size_t s = 0;
        while (s < vals.size() && ++vals[s] == q) vals[s++] = 0;
        if (s == vals.size()) break;
      }
      return;
    }
    for (int p = start; p < c; ++p) {
      pivots.push_back(p);
      choose(p + 1);
      pivots.pop_back();
    }
  };
  choose(0);
  return out;
}

MatFq empty_subspace(int N) { return MatFq(0, N); }

// The lattice whose image in Lambda / pi Lambda is W, Lambda = O^N base.
LatticeClass preimage(const MatFq& W, const MatK& base, int q) {
  const int N = static_cast<int>(base.rows());
  MatK gens(W.rows() + N, N);
  const MatK lifted = lift(W);
  for (Eigen::Index r = 0; r < W.rows(); ++r) gens.row(r) = lifted.row(r);
  const MatK tI = scaled(identity<RatFunc>(N, q), RatFunc::t(q));
  for (int r = 0; r < N; ++r) gens.row(W.rows() + r) = tI.row(r);
  return LatticeClass::from_generators(multiply(gens, base));
}

// Image of Lambda_{j+1} (with Lambda_{k+1} = pi Lambda_0) in Lambda_j / pi Lambda_j.
MatFq image_of_next(const PointedCell& c, int j) {
  const int q = c.q();
  MatK next = j + 1 <= c.k() ? c.representative(j + 1) : scaled(c.representative(0), RatFunc::t(q));
  return reduce_mod_pi(multiply(next, c.representative_inverse(j)));
}

}  // namespace

std::vector<PointedCell> hc3_set(const PointedCell& c, int j) {
  if (c.k() < 1 || j < 0 || j > c.k()) throw std::out_of_range("hc3_set: k >= 1 and 0 <= j <= k required");
  const int q = c.q(), N = c.n() + 1;
  const MatFq U = image_of_next(c, j);
  const MatK base = c.representative(j);
  std::vector<PointedCell> out;
  for (const auto& W : subspaces_over(U, N, q, 1)) {
    std::vector<LatticeClass> v = c.vertices();
    v[static_cast<std::size_t>(j)] = preimage(W, base, q);
    out.push_back(PointedCell::from_vertices(std::move(v)));
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<PointedCell> hc2_set(const PointedCell& eta, const CellType& t) {
  const int k = eta.k();
  const auto& e = eta.type();
  std::vector<PointedCell> out;
  if (static_cast<int>(t.size()) != k + 2) return out;
  int sum = 0;
  for (int d : t) {
    if (d < 1) return out;
    sum += d;
  }
  if (sum != eta.n() + 1) return out;
  // The new vertex sits at chain position p, between eta's positions p - 1 and p.
  int p = -1;
  for (int cand = 1; cand <= k + 1 && p < 0; ++cand) {
    bool ok = t[static_cast<std::size_t>(cand - 1)] + t[static_cast<std::size_t>(cand)] == e[static_cast<std::size_t>(cand - 1)];
    for (int i = 1; i < cand && ok; ++i) ok = t[static_cast<std::size_t>(i - 1)] == e[static_cast<std::size_t>(i - 1)];
    for (int i = cand + 1; i <= k + 1 && ok; ++i) ok = t[static_cast<std::size_t>(i)] == e[static_cast<std::size_t>(i - 1)];
    if (ok) p = cand;
  }
  if (p < 0) return out;
  const int q = eta.q(), N = eta.n() + 1;
  const MatFq U = image_of_next(eta, p - 1);
  const MatK base = eta.representative(p - 1);
  // dim W / U = dim Lambda' / Lambda_p = d_{p+1}.
  for (const auto& W : subspaces_over(U, N, q, t[static_cast<std::size_t>(p)])) {
    std::vector<LatticeClass> v = eta.vertices();
    v.insert(v.begin() + p, preimage(W, base, q));
    out.push_back(PointedCell::from_vertices(std::move(v)));
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<LatticeClass> neighbors(const LatticeClass& v) {
  const int N = v.dim(), q = v.q();
  std::vector<LatticeClass> out;
  for (int d = 1; d < N; ++d)
    for (const auto& W : subspaces_over(empty_subspace(N), N, q, d)) out.push_back(preimage(W, v.basis(), q));
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<PointedCell> cells_at(const LatticeClass& v, int k) {
  const int N = v.dim(), q = v.q();
  if (k < 0 || k > N - 1) throw std::out_of_range("cells_at: 0 <= k <= n required");
  // Flags F_q^N > V_1 > ... > V_k > 0, built from the bottom: V_k first.
  std::vector<PointedCell> out;
  std::vector<MatFq> flag;
  std::function<void(const MatFq&, int)> rec = [&](const MatFq& below, int remaining) {
    if (remaining == 0) {
      std::vector<LatticeClass> verts{v};
      for (auto it = flag.rbegin(); it != flag.rend(); ++it) verts.push_back(preimage(*it, v.basis(), q));
      out.push_back(PointedCell::from_vertices(std::move(verts)));
      return;
    }
    const int dim_below = static_cast<int>(below.rows());
    // Leave room for the remaining - 1 strictly larger proper subspaces.
    for (int extra = 1; dim_below + extra <= N - remaining; ++extra) {
      for (const auto& W : subspaces_over(below, N, q, extra)) {
        flag.push_back(W);
        rec(W, remaining - 1);
        flag.pop_back();
      }
    }
  };
  rec(empty_subspace(N), k);
  std::sort(out.begin(), out.end());
  return out;
}

std::int64_t gaussian_binomial(int n, int k, int q) {
  if (k < 0 || k > n) return 0;
  std::int64_t num = 1, den = 1;
  for (int i = 0; i < k; ++i) {
    std::int64_t a = 1, b = 1;
    for (int l = 0; l < n - i; ++l) a *= q;
    for (int l = 0; l < i + 1; ++l) b *= q;
    num *= a - 1;
    den *= b - 1;
  }
  return num / den;
}

std::int64_t q_multinomial(const CellType& parts, int q) {
  int total = 0;
  for (int p : parts) total += p;
  std::int64_t out = 1;
  for (int p : parts) {
    out *= gaussian_binomial(total, p, q);
    total -= p;
  }
  return out;
}

// ---------------------------------------------------------------- balls

int Ball::find(const LatticeClass& v) const {
  const auto it = index.find(v);
  return it == index.end() ? -1 : it->second;
}

bool Ball::contains(const PointedCell& c) const {
  for (const auto& v : c.vertices())
    if (find(v) < 0) return false;
  return true;
}

std::vector<PointedCell> Ball::pointed_cells(int k) const {
  std::vector<PointedCell> out;
  for (const auto& v : vertices)
    for (auto& c : cells_at(v, k))
      if (contains(c)) out.push_back(std::move(c));
  std::sort(out.begin(), out.end());
  return out;
}

int Ball::boundary_size() const { return static_cast<int>(std::count(distance.begin(), distance.end(), radius)); }

Ball ball(int n, int q, int radius) {
  check_modulus(q);
  if (radius < 0 || n < 1 || n > 2 || (n == 1 && radius > 4) || (n == 2 && radius > 2)) {
    throw std::invalid_argument("ball: radius <= 4 for n = 1 and <= 2 for n = 2");
  }
  Ball b;
  b.n = n;
  b.q = q;
  b.radius = radius;
  const auto add = [&](const LatticeClass& v, int d) {
    b.index.emplace(v, static_cast<int>(b.vertices.size()));
    b.vertices.push_back(v);
    b.distance.push_back(d);
  };
  add(standard_vertex(n, 0, q), 0);
  std::vector<std::vector<LatticeClass>> nbrs;
  for (std::size_t i = 0; i < b.vertices.size(); ++i) {
    nbrs.push_back(neighbors(b.vertices[i]));
    if (b.distance[i] == radius) continue;
    for (const auto& w : nbrs.back())
      if (b.find(w) < 0) add(w, b.distance[i] + 1);
  }
  for (std::size_t i = 0; i < b.vertices.size(); ++i) {
    for (const auto& w : nbrs[i]) {
      const int j = b.find(w);
      if (j > static_cast<int>(i)) b.edges.emplace_back(static_cast<int>(i), j);
    }
  }
  std::sort(b.edges.begin(), b.edges.end());
  return b;
}

std::string to_dot(const Ball& b) {
  std::ostringstream os;
  os << "graph ball {\n";
  for (std::size_t i = 0; i < b.vertices.size(); ++i) {
    os << "  v" << i << " [label=\"" << b.vertices[i].label() << "\"";
    if (b.distance[i] == 0) os << ", shape=box";
    os << "];\n";
  }
  for (auto [i, j] : b.edges) os << "  v" << i << " -- v" << j << ";\n";
  os << "}\n";
  return os.str();
}

nlohmann::json to_json(const Ball& b) {
  nlohmann::json j;
  j["n"] = b.n;
  j["q"] = b.q;
  j["radius"] = b.radius;
  auto& vs = j["vertices"] = nlohmann::json::array();
  for (std::size_t i = 0; i < b.vertices.size(); ++i) {
    vs.push_back({{"id", i}, {"distance", b.distance[i]}, {"exponents", b.vertices[i].exponents()},
                  {"basis", b.vertices[i].to_string()}});
  }
  j["edges"] = b.edges;
  return j;
}

// ---------------------------------------------------------------- orbits

OrbitResult grow_orbit(const PointedCell& start, const std::vector<PointedCell>& target, const GroupSampler& sampler,
                       std::mt19937_64& rng) {
  std::unordered_set<PointedCell, CellHash> tset(target.begin(), target.end());
  OrbitResult res;
  if (!tset.count(start)) {
    res.outcome = OrbitResult::Outcome::kEscaped;
    res.witness = "start cell outside the target " + start.to_string();
    return res;
  }
  std::vector<PointedCell> orbit{start};
  std::unordered_set<PointedCell, CellHash> seen{start};
  const std::int64_t budget = 50 * static_cast<std::int64_t>(tset.size());
  std::size_t cursor = 0;
  while (seen.size() < tset.size() && res.applications < budget) {
    const MatK g = sampler(rng);
    const PointedCell& x = orbit[cursor++ % orbit.size()];
    PointedCell y = act(g, x);
    ++res.applications;
    if (!tset.count(y)) {
      res.outcome = OrbitResult::Outcome::kEscaped;
      res.witness = "g = " + to_string(g) + " sends " + x.to_string() + " to " + y.to_string();
      res.orbit_size = static_cast<std::int64_t>(seen.size());
      return res;
    }
    if (seen.insert(y).second) orbit.push_back(std::move(y));
  }
  res.orbit_size = static_cast<std::int64_t>(seen.size());
  if (seen.size() < tset.size()) res.outcome = OrbitResult::Outcome::kInconclusive;
  return res;
}

// ---------------------------------------------------------------- checks

namespace {

MatK y_w(int n, int i, int q) {
  return multiply(y_matrix(n, i, q), permutation_matrix<RatFunc>(w_rotation(n, i), q));
}

// w_i as the product of its defining words.
WeylElement w_from_words(int n, int i) {
  std::vector<int> word;
  for (int m = 0; m < i; ++m)
    for (int s = i - m; s <= n - m; ++s) word.push_back(s);
  return WeylElement::from_word(n, word);
}

std::string set_label(const IndexSet& I) { return I.to_string(); }

}  // namespace

CheckReport verify_lemma_wij(int n, int q) {
  CheckRecorder rec("building.lemma_wij", {{"n", n}, {"q", q}});
  if (n < 1 || n > 3) throw std::invalid_argument("verify_lemma_wij: 1 <= n <= 3");
  std::vector<LatticeClass> v;
  for (int i = 0; i <= n; ++i) v.push_back(standard_vertex(n, i, q));
  const PointedCell chamber = standard_cell(IndexSet::empty(n), q);
  for (int i = 0; i <= n; ++i) {
    rec.expect(w_from_words(n, i) == w_rotation(n, i), "w_" + std::to_string(i) + " differs from its defining word");
    std::vector<LatticeClass> rot;
    for (int l = 0; l <= n; ++l) rot.push_back(v[static_cast<std::size_t>((i + l) % (n + 1))]);
    const PointedCell expect = PointedCell::from_vertices(rot);
    const PointedCell got = act(y_w(n, i, q), chamber);
    rec.expect(got == expect, "y_w_" + std::to_string(i) + " sends the chamber to " + got.to_string());
  }
  // Faces: 0 <= i_0 < ... < i_k <= n pointed at i_j.
  for (unsigned mask = 1; mask < (1u << (n + 1)); ++mask) {
    std::vector<int> idx;
    for (int i = 0; i <= n; ++i)
      if (mask & (1u << i)) idx.push_back(i);
    const int k = static_cast<int>(idx.size()) - 1;
    for (int j = 0; j <= k; ++j) {
      const int ij = idx[static_cast<std::size_t>(j)];
      std::vector<LatticeClass> face;
      std::vector<int> comp;
      for (int l = 0; l <= k; ++l) {
        const int x = idx[static_cast<std::size_t>((j + l) % (k + 1))];
        face.push_back(v[static_cast<std::size_t>(x)]);
        if (l > 0) comp.push_back(x > ij ? x - ij : n + 1 + x - ij);
      }
      const PointedCell expect = PointedCell::from_vertices(face);
      const PointedCell got = act(y_w(n, ij, q), standard_cell(IndexSet::from_complement(n, comp), q));
      std::string label = "{";
      for (int x : idx) label += std::to_string(x) + ",";
      label.back() = '}';
      rec.expect(got == expect, "face " + label + " pointed at " + std::to_string(ij) + " not reached");
    }
  }
  return rec.finish();
}

CheckReport verify_prov5(int n, int q, const IndexSet& I, int j, std::uint64_t seed) {
  const auto comp = I.complement();
  const int k = static_cast<int>(comp.size());
  CheckRecorder rec("building.prov5", {{"n", n}, {"q", q}, {"I", set_label(I)}, {"j", j}, {"seed", seed}});
  if (n < 1 || n > 2) throw std::invalid_argument("verify_prov5: n <= 2");
  if (j < 1 || j > k) throw std::invalid_argument("verify_prov5: 1 <= j <= k");
  std::mt19937_64 rng(seed);
  const int ij = comp[static_cast<std::size_t>(j - 1)];
  const int inext = j < k ? comp[static_cast<std::size_t>(j)] : n + 1;
  const auto record = [&](const OrbitResult& r, const std::string& part, std::size_t target) {
    rec.metrics()[part] = {{"target", target}, {"orbit", r.orbit_size}, {"applications", r.applications}};
    if (r.outcome == OrbitResult::Outcome::kEscaped) rec.fail(part + ": " + r.witness);
    else if (r.outcome == OrbitResult::Outcome::kInconclusive)
      rec.set_inconclusive(part + ": orbit reached " + std::to_string(r.orbit_size) + " of " + std::to_string(target));
    else rec.ok();
  };

  // (1) B(sigma_{I u {i_j}}, t_I) is the B_{I u {i_j}}-orbit of (sigma_I, v_0).
  const IndexSet Ij = I.with(ij);
  const auto target1 = hc2_set(standard_cell(Ij, q), standard_type(I));
  const GroupSampler s1 = [&](std::mt19937_64& r) { return random_parahoric(n, q, Ij, r); };
  record(grow_orbit(standard_cell(I, q), target1, s1, rng), "part1", target1.size());

  // (2) C(sigma_I, j) is the B_I-orbit of (sigma_{I'}, v_0), I' = I^{i_j}_{i_{j+1}-1}.
  const IndexSet Ip = inext - 1 == ij ? I : I.with(ij).without(inext - 1);
  const auto target2 = hc3_set(standard_cell(I, q), j);
  for (const auto& c : target2) {
    if (c.type() != standard_type(Ip)) {
      rec.fail("part2: member of type outside t_{I'}: " + c.to_string());
      break;
    }
  }
  const GroupSampler s2 = [&](std::mt19937_64& r) { return random_parahoric(n, q, I, r); };
  record(grow_orbit(standard_cell(Ip, q), target2, s2, rng), "part2", target2.size());
  return rec.finish();
}

CheckReport verify_building_invariants(int n, int q, int samples, std::uint64_t seed) {
  CheckRecorder rec("building.invariants", {{"n", n}, {"q", q}, {"samples", samples}, {"seed", seed}});
  std::mt19937_64 rng(seed);
  const Ball b = ball(n, q, 1);
  std::vector<PointedCell> cells;
  for (int k = 0; k <= n; ++k) {
    auto ck = b.pointed_cells(k);
    cells.insert(cells.end(), ck.begin(), ck.end());
  }
  // Canonicalization is idempotent and ignores the choice of generators.
  for (const auto& v : b.vertices) {
    rec.expect(LatticeClass::from_generators(v.basis()) == v, "canonical form not idempotent at " + v.to_string());
    const MatK mixed = multiply(random_iwahori(n, q, rng), scaled(v.basis(), RatFunc::t_power(q, 3)));
    rec.expect(LatticeClass::from_generators(mixed) == v, "homothetic basis canonicalizes differently at " + v.to_string());
  }
  // Rotation has order k + 1; types rotate cyclically.
  for (const auto& c : cells) {
    PointedCell r = c;
    for (int i = 0; i <= c.k(); ++i) {
      const PointedCell next = rotate_pointer(r);
      CellType shifted(r.type().begin() + 1, r.type().end());
      shifted.push_back(r.type().front());
      rec.expect(next.type() == shifted, "rotation does not shift the type of " + r.to_string());
      r = next;
    }
    rec.expect(r == c, "rotate_pointer^(k+1) is not the identity on " + c.to_string());
  }
  // Group action: composition and type invariance.
  std::uniform_int_distribution<std::size_t> pick(0, cells.size() - 1);
  for (int s = 0; s < samples; ++s) {
    const MatK g = random_gl(n, q, rng, {2, -1, 1}), h = random_gl(n, q, rng, {2, -1, 1});
    const PointedCell& c = cells[pick(rng)];
    const PointedCell hc = act(h, c);
    rec.expect(act(g, hc) == act(multiply(g, h), c), "act(g, act(h, c)) != act(gh, c) for c = " + c.to_string());
    rec.expect(hc.type() == c.type(), "action changed the type of " + c.to_string());
  }
  // Flag counts at the fundamental vertex against q-multinomials, and HC2 sets.
  const LatticeClass v0 = b.vertices.front();
  for (int k = 0; k <= n; ++k) {
    std::map<CellType, std::int64_t> by_type;
    for (const auto& c : cells_at(v0, k)) ++by_type[c.type()];
    for (const auto& [t, count] : by_type) {
      rec.expect(count == q_multinomial(t, q), "flag count mismatch for a type at k = " + std::to_string(k));
    }
  }
  for (int k = 1; k <= n; ++k) {
    for (const auto& c : cells_at(v0, k)) {
      for (int j = 1; j <= k; ++j) {
        const PointedCell eta = delete_vertex(c, j);
        const auto set = hc2_set(eta, c.type());
        const std::int64_t expect =
            gaussian_binomial(eta.type()[static_cast<std::size_t>(j - 1)], c.type()[static_cast<std::size_t>(j)], q);
        rec.expect(std::binary_search(set.begin(), set.end(), c), "hc2_set misses a cell with the given face");
        rec.expect(static_cast<std::int64_t>(set.size()) == expect, "hc2_set size differs from the Gaussian binomial");
      }
      for (int j = 0; j <= k; ++j) {
        const auto set = hc3_set(c, j);
        const int d = c.type()[static_cast<std::size_t>(j)];
        rec.expect(static_cast<std::int64_t>(set.size()) == gaussian_binomial(d, 1, q),
                   "hc3_set size differs from the number of lines");
        for (const auto& x : set) {
          rec.expect(x.type()[static_cast<std::size_t>(j)] == 1 || d == 1, "hc3_set member of wrong type");
        }
      }
    }
  }
  rec.metrics()["cells"] = cells.size();
  return rec.finish();
}

CheckReport verify_ball_counts(int n, int q, int radius) {
  CheckRecorder rec("building.ball_counts", {{"n", n}, {"q", q}, {"radius", radius}});
  const Ball b = ball(n, q, radius);
  std::vector<int> per_distance(static_cast<std::size_t>(radius + 1), 0);
  for (int d : b.distance) ++per_distance[static_cast<std::size_t>(d)];
  if (n == 1) {
    std::int64_t expect = 1;
    for (int r = 1; r <= radius; ++r) {
      expect = r == 1 ? q + 1 : expect * q;
      rec.expect(per_distance[static_cast<std::size_t>(r)] == expect,
                 "sphere of radius " + std::to_string(r) + " has " + std::to_string(per_distance[static_cast<std::size_t>(r)]));
    }
    rec.expect(static_cast<std::int64_t>(b.edges.size()) == static_cast<std::int64_t>(b.vertices.size()) - 1,
               "ball in the tree is not a tree");
  } else if (radius >= 1) {
    const std::int64_t link = 2 * (static_cast<std::int64_t>(q) * q + q + 1);
    rec.expect(per_distance[1] == link, "link of v_0 has " + std::to_string(per_distance[1]) + " vertices");
  }
  rec.metrics()["vertices"] = b.vertices.size();
  rec.metrics()["edges"] = b.edges.size();
  rec.metrics()["per_distance"] = per_distance;
  return rec.finish();
}

CheckReport building_wrong_group_orbit(int n, int q, std::uint64_t seed) {
  CheckRecorder rec("building.wrong_group_orbit", {{"n", n}, {"q", q}, {"seed", seed}});
  std::mt19937_64 rng(seed);
  const IndexSet I = IndexSet::empty(n);
  const auto target = hc2_set(standard_cell(I.with(1), q), standard_type(I));
  const GroupSampler any = [&](std::mt19937_64& r) { return random_gl(n, q, r, {2, -1, 1}); };
  const auto res = grow_orbit(standard_cell(I, q), target, any, rng);
  if (res.outcome == OrbitResult::Outcome::kEscaped) rec.fail(res.witness);
  else rec.ok();
  return rec.finish();
}

}  // namespace sphc
