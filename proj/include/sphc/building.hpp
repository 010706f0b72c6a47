// The Bruhat-Tits building of GL_{n+1}(F_q((t))) at desk scale.
//
// Vertices are homothety classes of O-lattices, stored through a canonical
// row basis. Row vectors span the lattice: L = O^{n+1} B.
#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "sphc/coxeter.hpp"
#include "sphc/exactfield.hpp"
#include "sphc/report.hpp"

namespace sphc {

using CellType = std::vector<int>;  // (d_1, ..., d_{k+1})

struct KeyHash {
  std::size_t operator()(const std::vector<int>& key) const;
};

class LatticeClass {
 public:
  LatticeClass() = default;
  // Class of the O-span of the rows of `generators` (at least n+1 rows, full rank).
  // Throws std::domain_error if the rows do not span K^{n+1}.
  static LatticeClass from_generators(const MatK& generators);

  int n() const { return static_cast<int>(basis_.rows()) - 1; }
  int dim() const { return static_cast<int>(basis_.rows()); }
  int q() const { return q_; }
  // Upper triangular, diagonal t^{a_i} with min a_i = 0, entry (i, j) a Laurent
  // polynomial with exponents below a_j.
  const MatK& basis() const { return basis_; }
  const MatK& basis_inverse() const { return inverse_; }
  const std::vector<int>& exponents() const { return exponents_; }
  int det_valuation() const;
  const std::vector<int>& key() const { return key_; }
  // The diagonal exponents, e.g. "1,0,0".
  std::string label() const;
  std::string to_string() const;

  bool operator==(const LatticeClass& o) const { return key_ == o.key_; }
  bool operator<(const LatticeClass& o) const { return key_ < o.key_; }

 private:
  MatK basis_;
  MatK inverse_;
  std::vector<int> exponents_;
  std::vector<int> key_;
  int q_ = 0;
};

struct LatticeHash {
  std::size_t operator()(const LatticeClass& v) const { return KeyHash{}(v.key()); }
};

// Lambda_i^o: pi in the first i coordinates, O in the rest; 0 <= i <= n.
LatticeClass standard_vertex(int n, int i, int q);

// A pointed k-cell (v_0, ..., v_k) with pointer v_0.
class PointedCell {
 public:
  PointedCell() = default;
  // Throws std::invalid_argument unless the vertices form a chain
  // Lambda_0 > Lambda_1 > ... > Lambda_k > pi Lambda_0 with strict inclusions.
  static PointedCell from_vertices(std::vector<LatticeClass> vertices);

  int k() const { return static_cast<int>(vertices_.size()) - 1; }
  int n() const { return vertices_.front().n(); }
  int q() const { return vertices_.front().q(); }
  const std::vector<LatticeClass>& vertices() const { return vertices_; }
  const LatticeClass& pointer() const { return vertices_.front(); }
  // Lambda_i = t^{shift_i} B_i for the canonical bases B_i, with shift_0 = 0.
  const std::vector<int>& shifts() const { return shifts_; }
  MatK representative(int i) const;
  MatK representative_inverse(int i) const;
  const CellType& type() const { return type_; }
  std::vector<int> key() const;
  std::string to_string() const;

  bool operator==(const PointedCell& o) const { return vertices_ == o.vertices_; }
  bool operator<(const PointedCell& o) const { return vertices_ < o.vertices_; }

 private:
  std::vector<LatticeClass> vertices_;
  std::vector<int> shifts_;
  CellType type_;
};

struct CellHash {
  std::size_t operator()(const PointedCell& c) const { return KeyHash{}(c.key()); }
};

// t_I: type of (sigma_I, v_0^o), i.e. (i_1, i_2 - i_1, ..., n + 1 - i_k).
CellType standard_type(const IndexSet& I);
// (sigma_I, v_0^o) = (v_0^o, v_{i_1}^o, ..., v_{i_k}^o).
PointedCell standard_cell(const IndexSet& I, int q);

// [L] -> [L g^{-1}] on every vertex.
LatticeClass act(const MatK& g, const LatticeClass& v);
PointedCell act(const MatK& g, const PointedCell& c);
// The same action given g^{-1} directly.
PointedCell act_by_inverse(const MatK& g_inverse, const PointedCell& c);

// (v_0, ..., v_k) -> (v_1, ..., v_k, v_0).
PointedCell rotate_pointer(const PointedCell& c);
// Deletes v_j, 0 <= j <= k, k >= 1. For j = 0 the new pointer is v_1.
PointedCell delete_vertex(const PointedCell& c, int j);

// Replacements of Lambda_j by Lambda'_j with Lambda_j >= Lambda'_j > Lambda_{j+1}
// and dim Lambda'_j / Lambda_{j+1} = 1 (Lambda_{k+1} = pi Lambda_0); 0 <= j <= k.
// When dim Lambda_j / Lambda_{j+1} = 1 the only member is c itself.
std::vector<PointedCell> hc3_set(const PointedCell& c, int j);
// Pointed (k+1)-cells of type t that contain eta as the face obtained by
// deleting a vertex other than the pointer. Empty for an incompatible type.
std::vector<PointedCell> hc2_set(const PointedCell& eta, const CellType& t);
// Vertices adjacent to v: preimages of the proper nonzero subspaces of Lambda / pi Lambda.
std::vector<LatticeClass> neighbors(const LatticeClass& v);
// All pointed k-cells with pointer v.
std::vector<PointedCell> cells_at(const LatticeClass& v, int k);

// Gaussian binomial and q-multinomial coefficients.
std::int64_t gaussian_binomial(int n, int k, int q);
std::int64_t q_multinomial(const CellType& parts, int q);

// Vertices within simplicial distance `radius` of v_0^o.
struct Ball {
  int n = 0;
  int q = 0;
  int radius = 0;
  std::vector<LatticeClass> vertices;  // breadth-first order, vertices[0] = v_0^o
  std::vector<int> distance;
  std::vector<std::pair<int, int>> edges;  // i < j
  std::unordered_map<LatticeClass, int, LatticeHash> index;

  int find(const LatticeClass& v) const;
  bool contains(const PointedCell& c) const;
  // Pointed k-cells with every vertex in the ball.
  std::vector<PointedCell> pointed_cells(int k) const;
  int boundary_size() const;
};

// Guards: radius <= 4 for n = 1, <= 2 for n = 2; std::invalid_argument otherwise.
Ball ball(int n, int q, int radius);
std::string to_dot(const Ball& b);
nlohmann::json to_json(const Ball& b);

// A random element of the parahoric B_I, used as an orbit sampler.
using GroupSampler = std::function<MatK(std::mt19937_64&)>;

struct OrbitResult {
  enum class Outcome { kEqual, kEscaped, kInconclusive } outcome = Outcome::kEqual;
  std::int64_t orbit_size = 0;
  std::int64_t applications = 0;
  std::string witness;
};

// Grows the orbit of `start` by sampled group elements. Escaping `target` is a
// failure; not reaching |target| within 50 |target| applications is inconclusive.
OrbitResult grow_orbit(const PointedCell& start, const std::vector<PointedCell>& target, const GroupSampler& sampler,
                       std::mt19937_64& rng);

CheckReport verify_lemma_wij(int n, int q);
// Both parts for the given I and 1 <= j <= k.
CheckReport verify_prov5(int n, int q, const IndexSet& I, int j, std::uint64_t seed);
// Canonical forms, action, types, rotations and flag counts on a ball of radius 1.
CheckReport verify_building_invariants(int n, int q, int samples, std::uint64_t seed);
// Vertex counts against closed forms.
CheckReport verify_ball_counts(int n, int q, int radius);
// Must fail: the orbit of the chamber under all of GL leaves the set of chambers through v_0^o.
CheckReport building_wrong_group_orbit(int n, int q, std::uint64_t seed);

}  // namespace sphc
