// Exact arithmetic in K = F_q(t) with the t-adic valuation, its residue field
// F_q, and dense Eigen matrices over both.
//
// Scalars built from a bare integer (as Eigen does with Scalar(0) and
// Scalar(1)) are "unbound": they carry no modulus and adopt the modulus of the
// first bound operand they meet.
#pragma once

#include <Eigen/Core>
#include <algorithm>
#include <climits>
#include <cstdint>
#include <ostream>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "sphc/coxeter.hpp"

namespace sphc {

inline constexpr int kValuationInfinity = INT_MAX;

// Thrown when a canonical numerator or denominator exceeds Poly::kMaxDegree.
class DegreeOverflow : public std::overflow_error {
 public:
  using std::overflow_error::overflow_error;
};

// Validates q in {2, 3, 5, 7}.
void check_modulus(int q);
int fq_inverse(int q, int a);

// An element of F_q.
class Fq {
 public:
  Fq() = default;
  Fq(int c) : q_(0), v_(c) {}  // NOLINT: unbound integer constant
  Fq(int q, int v);

  int q() const { return q_; }
  int value() const { return v_; }
  bool is_zero() const { return v_ == 0; }

  Fq inverse() const;
  friend Fq operator+(const Fq& a, const Fq& b);
  friend Fq operator-(const Fq& a, const Fq& b);
  friend Fq operator*(const Fq& a, const Fq& b);
  friend Fq operator/(const Fq& a, const Fq& b);
  Fq operator-() const;
  Fq& operator+=(const Fq& o) { return *this = *this + o; }
  Fq& operator-=(const Fq& o) { return *this = *this - o; }
  Fq& operator*=(const Fq& o) { return *this = *this * o; }
  Fq& operator/=(const Fq& o) { return *this = *this / o; }
  bool operator==(const Fq& o) const;

 private:
  int q_ = 0;
  int v_ = 0;
};

// A polynomial over F_q with coefficients in increasing degree.
class Poly {
 public:
  static constexpr int kMaxDegree = 64;

  Poly() = default;
  explicit Poly(int q) : q_(static_cast<std::uint8_t>(q)) {}
  Poly(int q, const std::vector<int>& coeffs);
  static Poly monomial(int q, int e, int c = 1);

  int q() const { return q_; }
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  int coeff(int i) const { return i >= 0 && i < static_cast<int>(c_.size()) ? c_[static_cast<std::size_t>(i)] : 0; }
  int leading() const { return c_.empty() ? 0 : c_.back(); }
  // Order of vanishing at t = 0; -1 for the zero polynomial.
  int ord() const;
  bool is_monomial() const { return !c_.empty() && ord() == degree(); }

  friend Poly operator+(const Poly& a, const Poly& b);
  friend Poly operator-(const Poly& a, const Poly& b);
  friend Poly operator*(const Poly& a, const Poly& b);
  Poly scaled(int c) const;
  Poly shifted(int e) const;  // times t^e, e >= 0
  // Divides by t^e; the low coefficients must vanish.
  Poly unshifted(int e) const;
  Poly monic() const;
  bool operator==(const Poly& o) const { return q_ == o.q_ && c_ == o.c_; }

  static void divmod(const Poly& a, const Poly& b, Poly& quo, Poly& rem);
  static Poly exact_div(const Poly& a, const Poly& b);
  // Monic greatest common divisor; gcd(0, 0) = 0.
  static Poly gcd(const Poly& a, const Poly& b);

  std::string to_string() const;
  const std::vector<std::uint8_t>& coeffs() const { return c_; }

 private:
  void trim();
  std::uint8_t q_ = 0;
  std::vector<std::uint8_t> c_;
};

// An element num/den of F_q(t) with den monic and gcd(num, den) = 1.
class RatFunc {
 public:
  RatFunc() = default;
  RatFunc(int c) : unbound_(c) {}  // NOLINT: unbound integer constant
  RatFunc(const Poly& num, const Poly& den);
  explicit RatFunc(const Poly& p);

  static RatFunc constant(int q, int c);
  static RatFunc t(int q) { return t_power(q, 1); }
  static RatFunc t_power(int q, int e);
  // Integer-coefficient expressions in t with + - * / ^ and parentheses, e.g. "(1+t)/(t^2)".
  static RatFunc parse(int q, const std::string& text);

  int q() const { return num_.q(); }
  bool bound() const { return num_.q() != 0; }
  bool is_zero() const { return bound() ? num_.is_zero() : unbound_ == 0; }
  bool is_one() const;
  const Poly& numerator() const { return num_; }
  const Poly& denominator() const { return den_; }

  // ord_t(num) - ord_t(den); kValuationInfinity for 0.
  int valuation() const;
  // Image in F_q of an element of valuation >= 0.
  int residue() const;
  // Coefficients c_lo..c_hi of the t-adic expansion.
  std::vector<int> expansion(int lo, int hi) const;
  // Sum of c_e t^e over e < a.
  RatFunc truncated_below(int a) const;

  RatFunc inverse() const;
  friend RatFunc operator+(const RatFunc& a, const RatFunc& b);
  friend RatFunc operator-(const RatFunc& a, const RatFunc& b);
  friend RatFunc operator*(const RatFunc& a, const RatFunc& b);
  friend RatFunc operator/(const RatFunc& a, const RatFunc& b);
  RatFunc operator-() const;
  RatFunc& operator+=(const RatFunc& o) { return *this = *this + o; }
  RatFunc& operator-=(const RatFunc& o) { return *this = *this - o; }
  RatFunc& operator*=(const RatFunc& o) { return *this = *this * o; }
  RatFunc& operator/=(const RatFunc& o) { return *this = *this / o; }
  bool operator==(const RatFunc& o) const;
  bool operator!=(const RatFunc& o) const { return !(*this == o); }

  RatFunc bound_to(int q) const;
  std::string to_string() const;
  // Appends a canonical integer encoding (for hashing and ordering).
  void append_key(std::vector<int>& key) const;

 private:
  void canonicalize();
  Poly num_;
  Poly den_;
  int unbound_ = 0;
};

inline std::ostream& operator<<(std::ostream& os, const Fq& x) { return os << x.value(); }
inline std::ostream& operator<<(std::ostream& os, const RatFunc& x) { return os << x.to_string(); }

}  // namespace sphc

namespace Eigen {

template <>
struct NumTraits<sphc::RatFunc> : GenericNumTraits<sphc::RatFunc> {
  typedef sphc::RatFunc Real;
  typedef sphc::RatFunc NonInteger;
  typedef sphc::RatFunc Nested;
  typedef sphc::RatFunc Literal;
  static constexpr int digits10() { return 0; }
  static constexpr int max_digits10() { return 0; }
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 8,
    AddCost = 64,
    MulCost = 128
  };
};

template <>
struct NumTraits<sphc::Fq> : GenericNumTraits<sphc::Fq> {
  typedef sphc::Fq Real;
  typedef sphc::Fq NonInteger;
  typedef sphc::Fq Nested;
  typedef sphc::Fq Literal;
  static constexpr int digits10() { return 0; }
  static constexpr int max_digits10() { return 0; }
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 1,
    AddCost = 2,
    MulCost = 2
  };
};

}  // namespace Eigen

namespace sphc {

template <class Scalar>
using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <class Scalar>
using Vec = Eigen::Matrix<Scalar, 1, Eigen::Dynamic>;  // row vector

using MatK = Mat<RatFunc>;
using MatFq = Mat<Fq>;
using VecK = Vec<RatFunc>;
using VecFq = Vec<Fq>;

// Bound constants of the right field for each scalar type.
inline RatFunc scalar_constant(const RatFunc*, int q, int c) { return RatFunc::constant(q, c); }
inline Fq scalar_constant(const Fq*, int q, int c) { return Fq(q, c); }

template <class Scalar>
Scalar field_constant(int q, int c) {
  return scalar_constant(static_cast<const Scalar*>(nullptr), q, c);
}

template <class Scalar>
Mat<Scalar> identity(int size, int q) {
  Mat<Scalar> m(size, size);
  for (int i = 0; i < size; ++i)
    for (int j = 0; j < size; ++j) m(i, j) = field_constant<Scalar>(q, i == j ? 1 : 0);
  return m;
}

// Permutation matrix with entry (w(j), j) = 1, so that P_u P_v = P_{uv}.
template <class Scalar>
Mat<Scalar> permutation_matrix(const WeylElement& w, int q) {
  const int d = w.degree();
  Mat<Scalar> m(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) m(i, j) = field_constant<Scalar>(q, w(j + 1) == i + 1 ? 1 : 0);
  return m;
}

// The modulus of the first bound entry, 0 if there is none.
template <class Scalar>
int modulus_hint(const Mat<Scalar>& m) {
  for (Eigen::Index i = 0; i < m.size(); ++i)
    if (m.data()[i].q() != 0) return m.data()[i].q();
  return 0;
}

// Product with explicit accumulation in the field of the operands.
template <class Scalar>
Mat<Scalar> multiply(const Mat<Scalar>& a, const Mat<Scalar>& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("multiply: shape mismatch");
  const int q = std::max(modulus_hint(a), modulus_hint(b));
  const Scalar zero = q ? field_constant<Scalar>(q, 0) : Scalar(0);
  Mat<Scalar> c(a.rows(), b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < b.cols(); ++j) {
      Scalar acc = zero;
      for (Eigen::Index l = 0; l < a.cols(); ++l) {
        if (a(i, l).is_zero() || b(l, j).is_zero()) continue;
        acc += a(i, l) * b(l, j);
      }
      c(i, j) = acc;
    }
  }
  return c;
}

// Reduced row echelon form by Gauss-Jordan elimination; returns the pivot columns.
template <class Scalar>
std::vector<int> rref_in_place(Mat<Scalar>& m) {
  std::vector<int> pivots;
  Eigen::Index row = 0;
  for (Eigen::Index col = 0; col < m.cols() && row < m.rows(); ++col) {
    Eigen::Index p = row;
    while (p < m.rows() && m(p, col).is_zero()) ++p;
    if (p == m.rows()) continue;
    if (p != row) m.row(p).swap(m.row(row));
    const Scalar inv = Scalar(1) / m(row, col);
    for (Eigen::Index j = col; j < m.cols(); ++j) m(row, j) *= inv;
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      if (i == row || m(i, col).is_zero()) continue;
      const Scalar f = m(i, col);
      for (Eigen::Index j = col; j < m.cols(); ++j) {
        if (!m(row, j).is_zero()) m(i, j) -= f * m(row, j);
      }
    }
    pivots.push_back(static_cast<int>(col));
    ++row;
  }
  return pivots;
}

template <class Scalar>
int rank(Mat<Scalar> m) {
  return static_cast<int>(rref_in_place(m).size());
}

template <class Scalar>
Scalar determinant(Mat<Scalar> m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("determinant: not square");
  Scalar det = 1;
  const Eigen::Index n = m.rows();
  for (Eigen::Index col = 0; col < n; ++col) {
    Eigen::Index p = col;
    while (p < n && m(p, col).is_zero()) ++p;
    if (p == n) return Scalar(0);
    if (p != col) {
      m.row(p).swap(m.row(col));
      det = -det;
    }
    det *= m(col, col);
    const Scalar inv = Scalar(1) / m(col, col);
    for (Eigen::Index i = col + 1; i < n; ++i) {
      if (m(i, col).is_zero()) continue;
      const Scalar f = m(i, col) * inv;
      for (Eigen::Index j = col; j < n; ++j) {
        if (!m(col, j).is_zero()) m(i, j) -= f * m(col, j);
      }
    }
  }
  return det;
}

// Exact inverse; throws std::domain_error for a singular matrix.
template <class Scalar>
Mat<Scalar> inverse(const Mat<Scalar>& m, int q) {
  if (m.rows() != m.cols()) throw std::invalid_argument("inverse: not square");
  const Eigen::Index n = m.rows();
  Mat<Scalar> aug(n, 2 * n);
  aug.leftCols(n) = m;
  aug.rightCols(n) = identity<Scalar>(static_cast<int>(n), q);
  const auto piv = rref_in_place(aug);
  if (static_cast<Eigen::Index>(piv.size()) < n || piv[static_cast<std::size_t>(n - 1)] != n - 1) {
    throw std::domain_error("inverse: singular matrix");
  }
  return aug.rightCols(n);
}

// --- Matrices over K

// diag(1 (i times), t (n+1-i times)).
MatK y_matrix(int n, int i, int q);
MatK diagonal_t_powers(const std::vector<int>& exponents, int q);
// Entrywise image in F_q; every entry must have valuation >= 0.
MatFq reduce_mod_pi(const MatK& m);
MatK lift(const MatFq& m);
int min_valuation(const MatK& m);
bool is_integral(const MatK& m);
// Integral with unit determinant.
bool in_gl_o(const MatK& m);
// In GL(O) with upper triangular reduction.
bool in_iwahori(const MatK& m);
bool is_upper_triangular(const MatK& m);
bool is_identity(const MatK& m);
std::string to_string(const MatK& m);
MatK scaled(const MatK& m, const RatFunc& c);

// --- Random elements (entry degrees <= 3, valuations in [-2, 2])

struct RandomBounds {
  int max_degree = 3;
  int min_valuation = -2;
  int max_valuation = 2;
};

RatFunc random_unit(int q, std::mt19937_64& rng, int max_degree = 3);
RatFunc random_ratfunc(int q, std::mt19937_64& rng, const RandomBounds& b = {});
// Random polynomial in t with degree <= max_degree (possibly zero).
RatFunc random_polynomial(int q, std::mt19937_64& rng, int max_degree = 3);
MatK random_gl(int n, int q, std::mt19937_64& rng, const RandomBounds& b = {});
// Random element of the Iwahori subgroup with polynomial entries.
MatK random_iwahori(int n, int q, std::mt19937_64& rng);
// Random invertible upper triangular matrix over K.
MatK random_upper(int n, int q, std::mt19937_64& rng, const RandomBounds& b = {});
MatFq random_fq_matrix(int rows, int cols, int q, std::mt19937_64& rng);

}  // namespace sphc
