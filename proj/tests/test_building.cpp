#include <gtest/gtest.h>

#include <set>

#include "sphc/building.hpp"
#include "sphc/cells.hpp"

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

MatK parse_matrix(int q, const std::vector<std::vector<std::string>>& rows) {
  MatK m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = RatFunc::parse(q, rows[i][j]);
  return m;
}

// Independent membership test: v in L iff v B^{-1} integral.
bool in_lattice(const VecK& v, const MatK& basis, int q) {
  MatK row(1, v.cols());
  row.row(0) = v;
  return is_integral(multiply(row, inverse(basis, q)));
}

TEST(Lattice, CanonicalForms) {
  const int q = 3;
  EXPECT_TRUE(is_identity(standard_vertex(2, 0, q).basis()));
  EXPECT_EQ(standard_vertex(2, 1, q).basis(), diagonal_t_powers({1, 0, 0}, q));
  EXPECT_THROW(standard_vertex(2, 3, q), std::out_of_range);

  // Homothety and change of O-basis do not change the class.
  const MatK g = parse_matrix(q, {{"t^-1", "1+t"}, {"2", "t"}});
  const auto v = LatticeClass::from_generators(g);
  EXPECT_EQ(LatticeClass::from_generators(scaled(g, RatFunc::parse(q, "t^5"))), v);
  const MatK u = parse_matrix(q, {{"1+t", "2"}, {"t^2", "1"}});
  EXPECT_EQ(LatticeClass::from_generators(multiply(u, g)), v);
  EXPECT_EQ(*std::min_element(v.exponents().begin(), v.exponents().end()), 0);

  // Random generators: x = t^m U B with U in GL_2(O).
  std::mt19937_64 rng(4);
  for (int s = 0; s < 30; ++s) {
    const MatK x = random_gl(2, q, rng);
    const auto c = LatticeClass::from_generators(x);
    // x = D * B for a unit matrix D and a scalar t^m.
    const MatK ratio = multiply(x, c.basis_inverse());
    const int m = min_valuation(ratio);
    const MatK unit = scaled(ratio, RatFunc::t_power(q, -m));
    EXPECT_TRUE(in_gl_o(unit)) << to_string(x);
    for (int i = 0; i < 2; ++i) EXPECT_TRUE(in_lattice(x.row(i), scaled(c.basis(), RatFunc::t_power(q, m)), q));
  }
}

TEST(Lattice, ExtraGenerators) {
  const int q = 2;
  // O^2 + O (t^-1, 0) = t^-1 O + O.
  const MatK g = parse_matrix(q, {{"1", "0"}, {"0", "1"}, {"t^-1", "0"}});
  EXPECT_EQ(LatticeClass::from_generators(g).exponents(), (std::vector<int>{0, 1}));
  const MatK singular = parse_matrix(q, {{"1", "t"}, {"1", "t"}});
  EXPECT_THROW(LatticeClass::from_generators(singular), std::domain_error);
}

TEST(Cells, StandardCellsAndTypes) {
  const int q = 2;
  EXPECT_EQ(standard_cell(IndexSet::full(2), q).k(), 0);
  EXPECT_EQ(standard_cell(IndexSet::empty(2), q).type(), (CellType{1, 1, 1}));
  EXPECT_EQ(standard_cell(IndexSet(2, {1}), q).type(), (CellType{2, 1}));
  EXPECT_EQ(standard_type(IndexSet(3, {2})), (CellType{1, 2, 1}));
  for (const auto& I : all_subsets(3)) EXPECT_EQ(standard_cell(I, q).type(), standard_type(I));
  const auto v0 = standard_vertex(2, 0, q), v2 = standard_vertex(2, 2, q);
  EXPECT_THROW(PointedCell::from_vertices({v0, v0}), std::invalid_argument);
  EXPECT_EQ(PointedCell::from_vertices({v2, v0}).type(), (CellType{1, 2}));
}

TEST(Cells, ActionOnStandardCells) {
  const int q = 3, n = 2;
  const auto chamber = standard_cell(IndexSet::empty(n), q);
  EXPECT_EQ(act(identity<RatFunc>(3, q), chamber), chamber);
  EXPECT_EQ(act(scaled(identity<RatFunc>(3, q), RatFunc::t(q)), chamber), chamber);
  const MatK g = multiply(y_matrix(n, 1, q), permutation_matrix<RatFunc>(w_rotation(n, 1), q));
  const auto moved = act(g, chamber);
  EXPECT_EQ(moved.pointer(), standard_vertex(n, 1, q));
  EXPECT_EQ(moved, rotate_pointer(chamber));
  // The Iwahori subgroup fixes the chamber.
  std::mt19937_64 rng(1);
  for (int s = 0; s < 10; ++s) EXPECT_EQ(act(random_iwahori(n, q, rng), chamber), chamber);
}

TEST(Cells, HC3Sets) {
  // Tree edge, q = 2: both positions have one-dimensional quotients.
  const auto edge = standard_cell(IndexSet::empty(1), 2);
  EXPECT_EQ(hc3_set(edge, 0), std::vector<PointedCell>{edge});
  EXPECT_EQ(hc3_set(edge, 1), std::vector<PointedCell>{edge});
  // n = 2, type (2, 1): replacing v_0 gives q + 1 lines.
  for (int q : {2, 3}) {
    const auto c = standard_cell(IndexSet(2, {1}), q);
    const auto set0 = hc3_set(c, 0);
    EXPECT_EQ(set0.size(), static_cast<std::size_t>(q + 1));
    for (const auto& x : set0) EXPECT_EQ(x.type(), (CellType{1, 2}));
    EXPECT_EQ(hc3_set(c, 1), std::vector<PointedCell>{c});
    const auto c2 = standard_cell(IndexSet(2, {2}), q);
    const auto set1 = hc3_set(c2, 1);
    EXPECT_EQ(set1.size(), static_cast<std::size_t>(q + 1));
    for (const auto& x : set1) EXPECT_EQ(x.type(), (CellType{2, 1}));
  }
}

TEST(Cells, HC2Sets) {
  // Edges through a vertex of the tree.
  const auto v = standard_cell(IndexSet::full(1), 2);
  EXPECT_EQ(hc2_set(v, {1, 1}).size(), 3u);
  EXPECT_TRUE(hc2_set(v, {1, 2}).empty());
  EXPECT_TRUE(hc2_set(v, {2}).empty());
  // Chambers of GL_3 through the standard edge of type (1, 2): q + 1.
  for (int q : {2, 3}) {
    const auto e = standard_cell(IndexSet(2, {2}), q);
    EXPECT_EQ(hc2_set(e, {1, 1, 1}).size(), static_cast<std::size_t>(q + 1));
    EXPECT_EQ(hc2_set(standard_cell(IndexSet::full(2), q), {1, 2}).size(), static_cast<std::size_t>(q * q + q + 1));
  }
}

TEST(Cells, RotationAndFaces) {
  const auto chamber = standard_cell(IndexSet::empty(3), 2);
  PointedCell r = chamber;
  for (int i = 0; i < 4; ++i) r = rotate_pointer(r);
  EXPECT_EQ(r, chamber);
  EXPECT_EQ(rotate_pointer(chamber).type(), (CellType{1, 1, 1, 1}));
  const auto face = delete_vertex(standard_cell(IndexSet(3, {2}), 2), 0);
  EXPECT_EQ(face.pointer(), standard_vertex(3, 1, 2));
  EXPECT_EQ(face.type(), (CellType{2, 2}));
}

TEST(Counting, GaussianBinomials) {
  EXPECT_EQ(gaussian_binomial(3, 1, 2), 7);
  EXPECT_EQ(gaussian_binomial(4, 2, 2), 35);
  EXPECT_EQ(gaussian_binomial(3, 1, 3), 13);
  EXPECT_EQ(q_multinomial({1, 1, 1}, 2), 21);
  // Brute force: subspaces of F_2^4 of dimension 2 as sets of nonzero vectors.
  std::set<std::set<int>> spaces;
  for (int a = 1; a < 16; ++a)
    for (int b = 1; b < 16; ++b)
      if (a != b) spaces.insert({a, b, a ^ b});
  EXPECT_EQ(static_cast<std::int64_t>(spaces.size()), gaussian_binomial(4, 2, 2));
}

TEST(Balls, ClosedForms) {
  EXPECT_EQ(ball(1, 2, 1).vertices.size(), 4u);
  for (int r = 1; r <= 4; ++r) EXPECT_EQ(ball(1, 2, r).boundary_size(), 3 * (1 << (r - 1)));
  EXPECT_EQ(ball(1, 3, 2).boundary_size(), 12);
  const Ball b = ball(2, 2, 1);
  EXPECT_EQ(b.vertices.size(), 15u);
  EXPECT_TRUE(verify_ball_counts(1, 3, 3).passed());
  EXPECT_TRUE(verify_ball_counts(2, 2, 1).passed());
  EXPECT_THROW(ball(1, 2, 5), std::invalid_argument);
  EXPECT_THROW(ball(3, 2, 1), std::invalid_argument);
  // Pointed chambers at the fundamental vertex: 21 full flags in F_2^3.
  EXPECT_EQ(cells_at(b.vertices.front(), 2).size(), 21u);
  const auto dot = to_dot(ball(1, 2, 1));
  EXPECT_NE(dot.find("v0 -- v1"), std::string::npos);
  EXPECT_EQ(to_json(b)["edges"].size(), b.edges.size());
}

TEST(Balls, LinkOfGL3HasTheIncidenceGraphOfThePlane) {
  // In the link of v_0 every point lies on q + 1 lines: each vertex at distance 1
  // is adjacent to exactly q + 1 others at distance 1.
  const Ball b = ball(2, 2, 1);
  std::vector<int> deg(b.vertices.size(), 0);
  for (auto [i, j] : b.edges)
    if (i != 0) {
      ++deg[static_cast<std::size_t>(i)];
      ++deg[static_cast<std::size_t>(j)];
    }
  for (std::size_t i = 1; i < deg.size(); ++i) EXPECT_EQ(deg[i], 3);
}

TEST(Checks, LemmaWij) {
  for (int n : {1, 2, 3}) {
    const auto r = verify_lemma_wij(n, 2);
    EXPECT_TRUE(r.passed()) << to_json(r).dump();
  }
  EXPECT_TRUE(verify_lemma_wij(2, 3).passed());
}

TEST(Checks, Prov5) {
  for (int n : {1, 2}) {
    for (const auto& I : all_subsets(n)) {
      const int k = static_cast<int>(I.complement().size());
      for (int j = 1; j <= k; ++j) {
        const auto r = verify_prov5(n, 2, I, j, 7);
        EXPECT_TRUE(r.passed()) << to_json(r).dump();
      }
    }
  }
  const auto r = verify_prov5(1, 2, IndexSet::empty(1), 1, 1);
  EXPECT_EQ(r.metrics["part1"]["target"], 3);
}

TEST(Checks, Invariants) {
  for (auto [n, q] : {std::pair{1, 2}, {1, 3}, {2, 2}}) {
    const auto r = verify_building_invariants(n, q, 60, 11);
    EXPECT_TRUE(r.passed()) << to_json(r).dump();
  }
}

TEST(Checks, WrongGroupEscapes) {
  const auto r = building_wrong_group_orbit(1, 2, 3);
  EXPECT_FALSE(r.passed());
  EXPECT_TRUE(r.witness.has_value());
}

}  // namespace
}  // namespace sphc
