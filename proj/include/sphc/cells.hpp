// Bruhat cells over the residue field and Iwasawa cells over K.
//
// Over kappa = F_q the groups GL_{n+1}, P_I and the product sets C_I are small
// enough to enumerate. Elements are packed into 64-bit codes, so sets of group
// elements are sorted std::vector<std::uint64_t>.
#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "sphc/coxeter.hpp"
#include "sphc/exactfield.hpp"
#include "sphc/report.hpp"

namespace sphc {

// GL_{n+1}(F_q) with elements packed row-major, ceil(log2 q) bits per entry.
class FiniteGL {
 public:
  using Code = std::uint64_t;
  static constexpr std::int64_t kMaxOrder = 100'000'000;

  FiniteGL(int n, int q);

  int n() const { return n_; }
  int q() const { return q_; }
  int dim() const { return n_ + 1; }
  // prod_{j=0}^{n} (q^{n+1} - q^j).
  std::int64_t order() const;

  int entry(Code c, int i, int j) const {
    return static_cast<int>((c >> (bits_ * (i * dim() + j))) & mask_);
  }
  Code encode(const int* entries) const;
  void decode(Code c, int* entries) const;
  Code multiply(Code a, Code b) const;
  Code identity() const;
  Code permutation(const WeylElement& w) const;
  Code elementary(int i, int j, int c) const;  // I + c E_{ij}, 0-based
  Code diagonal(int i, int c) const;           // I with (i, i) = c
  int determinant(Code c) const;
  MatFq to_matrix(Code c) const;
  Code from_matrix(const MatFq& m) const;
  std::string to_string(Code c) const;

 private:
  int n_;
  int q_;
  int bits_;
  Code mask_;
};

using CodeSet = std::vector<FiniteGL::Code>;  // sorted, unique

bool contains(const CodeSet& s, FiniteGL::Code c);

// All of GL_{n+1}(F_q); throws std::length_error past FiniteGL::kMaxOrder.
CodeSet enumerate_group(const FiniteGL& G);
// Block upper triangular matrices, blocks the runs of I; P_empty = B.
CodeSet parabolic_kappa(const FiniteGL& G, const IndexSet& I);
bool in_parabolic_kappa(const FiniteGL& G, const IndexSet& I, FiniteGL::Code g);
// Generators of P_I: elementary matrices in the allowed positions and a primitive diagonal.
std::vector<FiniteGL::Code> parabolic_generators(const FiniteGL& G, const IndexSet& I);

// A * T for a subgroup A, built as a union of cosets A t.
CodeSet left_product(const FiniteGL& G, const CodeSet& A, const CodeSet& T);
CodeSet right_product(const FiniteGL& G, const CodeSet& T, const CodeSet& A);
// P1 g P2 for subgroups P1, P2.
CodeSet double_coset_kappa(const FiniteGL& G, const CodeSet& P1, FiniteGL::Code g, const CodeSet& P2);

// The w with g in B w B: the lowest nonzero unused row is the pivot of each column.
WeylElement bruhat_class_kappa(const FiniteGL& G, FiniteGL::Code g);

// The kappa-image of C_I as the product over the modified sets of J_k.
CodeSet product_set_CI_kappa(const FiniteGL& G, const IndexSet& I);
// The same set as P_{[i_k+1,n]} ... P_{[i_1+1,n-k+1]} P_{J_k}.
CodeSet product_set_CI_intervals(const FiniteGL& G, const IndexSet& I);

CheckReport verify_bruhat_bijection(int n, int q, const IndexSet& I1, const IndexSet& I2);
// Requires |i - j| >= 2 for i in I1, j in I2.
CheckReport verify_remark_B(int n, int q, const IndexSet& I1, const IndexSet& I2);
CheckReport verify_decomp_CI(int n, int q, const IndexSet& I);
// Over kappa: P_{I u {n}} C_I as disjoint translates b C_I and its cell box (i_k = n),
// and C_I as disjoint translates of C_{I^{i_k}_n} under P_I.
CheckReport verify_parahoric_translates(int n, int q, const IndexSet& I);
// Must fail: C_I is tiled by the cells of its box with the top entry of the
// first interval dropped. Needs a box whose first interval has length >= 2.
CheckReport finite_short_box_control(int n, int q, const IndexSet& I);

// ---------------------------------------------------------------- Iwasawa

// g = b * P_w * p with b Iwahori and p upper triangular over K.
struct IwasawaFactorization {
  MatK b;
  WeylElement w;
  MatK p;
};

// Throws std::domain_error on singular input.
IwasawaFactorization iwasawa_class(const MatK& g);
// The w component only.
WeylElement iwasawa_w(const MatK& g);

// Random integral element with reduction in P_I(kappa).
MatK random_parahoric(int n, int q, const IndexSet& I, std::mt19937_64& rng);
// Random invertible block upper triangular matrix over K.
MatK random_parabolic_k(int n, int q, const IndexSet& I, std::mt19937_64& rng);

// Reconstruction, legality of b and p, and invariance of w under perturbations.
CheckReport verify_iwasawa(int n, int q, int samples, int perturbations, std::uint64_t seed);
// Each class is also checked against `perturbations` random Iwahori / upper triangular perturbations.
CheckReport verify_bourbaki3_sampled(int n, int q, const IndexSet& I1, const IndexSet& I2, int samples,
                                     std::uint64_t seed, int perturbations = 100);
// Must fail: a non-Iwahori left factor changes w.
CheckReport iwasawa_illegal_perturbation(int n, int q, int samples, std::uint64_t seed);

}  // namespace sphc
