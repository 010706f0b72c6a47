#include "sphc/exactfield.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace sphc {

namespace {

int mod(int a, int q) {
  const int r = a % q;
  return r < 0 ? r + q : r;
}

int unbound_div(int a, int b) {
  if (b == 0) throw std::domain_error("division by zero");
  if (a % b != 0) throw std::domain_error("inexact division of unbound constants");
  return a / b;
}

int common_modulus(int qa, int qb) {
  if (qa != 0 && qb != 0 && qa != qb) throw std::invalid_argument("operands over different fields");
  return qa != 0 ? qa : qb;
}

}  // namespace

void check_modulus(int q) {
  if (q != 2 && q != 3 && q != 5 && q != 7) throw std::invalid_argument("q must be one of 2, 3, 5, 7");
}

int fq_inverse(int q, int a) {
  a = mod(a, q);
  if (a == 0) throw std::domain_error("inverse of zero in F_q");
  for (int b = 1; b < q; ++b)
    if (a * b % q == 1) return b;
  throw std::logic_error("fq_inverse: no inverse");
}

// ---------------------------------------------------------------- Fq

Fq::Fq(int q, int v) : q_(q), v_(mod(v, q)) { check_modulus(q); }

namespace {
Fq bind(const Fq& x, int q) { return x.q() == q ? x : Fq(q, x.value()); }
}  // namespace

Fq Fq::inverse() const {
  if (q_ == 0) return Fq(unbound_div(1, v_));
  return Fq(q_, fq_inverse(q_, v_));
}

Fq operator+(const Fq& a, const Fq& b) {
  const int q = common_modulus(a.q_, b.q_);
  if (q == 0) return Fq(a.v_ + b.v_);
  return Fq(q, bind(a, q).v_ + bind(b, q).v_);
}

Fq operator-(const Fq& a, const Fq& b) {
  const int q = common_modulus(a.q_, b.q_);
  if (q == 0) return Fq(a.v_ - b.v_);
  return Fq(q, bind(a, q).v_ - bind(b, q).v_);
}

Fq operator*(const Fq& a, const Fq& b) {
  const int q = common_modulus(a.q_, b.q_);
  if (q == 0) return Fq(a.v_ * b.v_);
  return Fq(q, bind(a, q).v_ * bind(b, q).v_);
}

Fq operator/(const Fq& a, const Fq& b) {
  const int q = common_modulus(a.q_, b.q_);
  if (q == 0) return Fq(unbound_div(a.v_, b.v_));
  return bind(a, q) * bind(b, q).inverse();
}

Fq Fq::operator-() const { return q_ == 0 ? Fq(-v_) : Fq(q_, -v_); }

bool Fq::operator==(const Fq& o) const {
  const int q = common_modulus(q_, o.q_);
  if (q == 0) return v_ == o.v_;
  return bind(*this, q).v_ == bind(o, q).v_;
}

// ---------------------------------------------------------------- Poly

Poly::Poly(int q, const std::vector<int>& coeffs) : q_(static_cast<std::uint8_t>(q)) {
  check_modulus(q);
  c_.reserve(coeffs.size());
  for (int c : coeffs) c_.push_back(static_cast<std::uint8_t>(mod(c, q)));
  trim();
}

Poly Poly::monomial(int q, int e, int c) {
  if (e < 0) throw std::invalid_argument("Poly::monomial: negative exponent");
  Poly p(q);
  c = mod(c, q);
  if (c == 0) return p;
  p.c_.assign(static_cast<std::size_t>(e + 1), 0);
  p.c_.back() = static_cast<std::uint8_t>(c);
  return p;
}

void Poly::trim() {
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

int Poly::ord() const {
  for (std::size_t i = 0; i < c_.size(); ++i)
    if (c_[i] != 0) return static_cast<int>(i);
  return -1;
}

Poly operator+(const Poly& a, const Poly& b) {
  const int q = common_modulus(a.q_, b.q_);
  Poly r(q);
  const std::size_t n = std::max(a.c_.size(), b.c_.size());
  r.c_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    int s = (i < a.c_.size() ? a.c_[i] : 0) + (i < b.c_.size() ? b.c_[i] : 0);
    if (s >= q) s -= q;
    r.c_[i] = static_cast<std::uint8_t>(s);
  }
  r.trim();
  return r;
}

Poly operator-(const Poly& a, const Poly& b) {
  const int q = common_modulus(a.q_, b.q_);
  Poly r(q);
  const std::size_t n = std::max(a.c_.size(), b.c_.size());
  r.c_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    int s = (i < a.c_.size() ? a.c_[i] : 0) - (i < b.c_.size() ? b.c_[i] : 0);
    if (s < 0) s += q;
    r.c_[i] = static_cast<std::uint8_t>(s);
  }
  r.trim();
  return r;
}

Poly operator*(const Poly& a, const Poly& b) {
  const int q = common_modulus(a.q_, b.q_);
  Poly r(q);
  if (a.is_zero() || b.is_zero()) return r;
  std::vector<int> acc(a.c_.size() + b.c_.size() - 1, 0);
  for (std::size_t i = 0; i < a.c_.size(); ++i) {
    if (a.c_[i] == 0) continue;
    for (std::size_t j = 0; j < b.c_.size(); ++j) acc[i + j] += a.c_[i] * b.c_[j];
  }
  r.c_.resize(acc.size());
  for (std::size_t i = 0; i < acc.size(); ++i) r.c_[i] = static_cast<std::uint8_t>(acc[i] % q);
  r.trim();
  return r;
}

Poly Poly::scaled(int c) const {
  c = mod(c, q_);
  Poly r(q_);
  if (c == 0) return r;
  r.c_ = c_;
  for (auto& x : r.c_) x = static_cast<std::uint8_t>(x * c % q_);
  return r;
}

Poly Poly::shifted(int e) const {
  if (e < 0) throw std::invalid_argument("Poly::shifted: negative shift");
  Poly r(q_);
  if (is_zero()) return r;
  r.c_.assign(static_cast<std::size_t>(e), 0);
  r.c_.insert(r.c_.end(), c_.begin(), c_.end());
  return r;
}

Poly Poly::unshifted(int e) const {
  if (e < 0 || (!is_zero() && ord() < e)) throw std::invalid_argument("Poly::unshifted: not divisible");
  Poly r(q_);
  if (is_zero()) return r;
  r.c_.assign(c_.begin() + e, c_.end());
  return r;
}

Poly Poly::monic() const {
  if (is_zero()) return *this;
  return scaled(fq_inverse(q_, leading()));
}

void Poly::divmod(const Poly& a, const Poly& b, Poly& quo, Poly& rem) {
  const int q = common_modulus(a.q_, b.q_);
  if (b.is_zero()) throw std::domain_error("polynomial division by zero");
  quo = Poly(q);
  rem = a;
  rem.q_ = static_cast<std::uint8_t>(q);
  const int db = b.degree();
  if (a.degree() < db) return;
  const int inv = fq_inverse(q, b.leading());
  quo.c_.assign(static_cast<std::size_t>(a.degree() - db + 1), 0);
  for (int i = a.degree() - db; i >= 0; --i) {
    const int top = rem.c_[static_cast<std::size_t>(i + db)];
    if (top == 0) continue;
    const int f = top * inv % q;
    quo.c_[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(f);
    for (int j = 0; j <= db; ++j) {
      auto& x = rem.c_[static_cast<std::size_t>(i + j)];
      x = static_cast<std::uint8_t>(mod(x - f * b.c_[static_cast<std::size_t>(j)], q));
    }
  }
  quo.trim();
  rem.trim();
}

Poly Poly::exact_div(const Poly& a, const Poly& b) {
  if (b.degree() == b.ord() && b.leading() == 1) return a.unshifted(b.degree());
  Poly quo, rem;
  divmod(a, b, quo, rem);
  if (!rem.is_zero()) throw std::logic_error("Poly::exact_div: nonzero remainder");
  return quo;
}

Poly Poly::gcd(const Poly& a, const Poly& b) {
  if (a.is_zero()) return b.monic();
  if (b.is_zero()) return a.monic();
  const int q = common_modulus(a.q_, b.q_);
  if (a.is_monomial() || b.is_monomial()) {
    const int e = a.is_monomial() ? std::min(a.degree(), b.ord()) : std::min(b.degree(), a.ord());
    return monomial(q, e);
  }
  if (a.degree() == 0 || b.degree() == 0) return monomial(q, 0);
  Poly x = a, y = b, quo, rem;
  while (!y.is_zero()) {
    divmod(x, y, quo, rem);
    x = std::move(y);
    y = std::move(rem);
  }
  return x.monic();
}

std::string Poly::to_string() const {
  if (is_zero()) return "0";
  std::string out;
  for (std::size_t e = 0; e < c_.size(); ++e) {
    const int c = c_[e];
    if (c == 0) continue;
    if (!out.empty()) out += "+";
    if (e == 0) {
      out += std::to_string(c);
      continue;
    }
    if (c != 1) out += std::to_string(c);
    out += "t";
    if (e > 1) out += "^" + std::to_string(e);
  }
  return out;
}

// ---------------------------------------------------------------- RatFunc

RatFunc::RatFunc(const Poly& num, const Poly& den) : num_(num), den_(den) {
  const int q = common_modulus(num.q(), den.q());
  if (q == 0) throw std::invalid_argument("RatFunc: unbound polynomials");
  if (den.is_zero()) throw std::domain_error("RatFunc: zero denominator");
  canonicalize();
}

RatFunc::RatFunc(const Poly& p) : num_(p), den_(Poly::monomial(p.q(), 0)) {
  if (p.q() == 0) throw std::invalid_argument("RatFunc: unbound polynomial");
  if (num_.degree() > Poly::kMaxDegree) throw DegreeOverflow("RatFunc: degree cap exceeded");
}

RatFunc RatFunc::constant(int q, int c) { return RatFunc(Poly(q, {c})); }

RatFunc RatFunc::t_power(int q, int e) {
  if (e >= 0) return RatFunc(Poly::monomial(q, e));
  return RatFunc(Poly::monomial(q, 0), Poly::monomial(q, -e));
}

void RatFunc::canonicalize() {
  const int q = num_.q();
  if (num_.is_zero()) {
    den_ = Poly::monomial(q, 0);
    return;
  }
  const Poly g = Poly::gcd(num_, den_);
  if (g.degree() > 0) {
    num_ = Poly::exact_div(num_, g);
    den_ = Poly::exact_div(den_, g);
  }
  if (den_.leading() != 1) {
    const int inv = fq_inverse(q, den_.leading());
    num_ = num_.scaled(inv);
    den_ = den_.scaled(inv);
  }
  if (num_.degree() > Poly::kMaxDegree || den_.degree() > Poly::kMaxDegree) {
    throw DegreeOverflow("RatFunc: degree cap exceeded");
  }
}

RatFunc RatFunc::bound_to(int q) const {
  if (bound()) {
    if (q != this->q()) throw std::invalid_argument("RatFunc: operands over different fields");
    return *this;
  }
  return constant(q, unbound_);
}

bool RatFunc::is_one() const {
  if (!bound()) return unbound_ == 1;
  return den_.degree() == 0 && num_.degree() == 0 && num_.leading() == 1;
}

int RatFunc::valuation() const {
  if (is_zero()) return kValuationInfinity;
  if (!bound()) throw std::logic_error("valuation of an unbound constant");
  return num_.ord() - den_.ord();
}

int RatFunc::residue() const {
  if (is_zero()) return 0;
  const int v = valuation();
  if (v < 0) throw std::domain_error("residue of a non-integral element");
  if (v > 0) return 0;
  const int e = num_.ord();
  return num_.coeff(e) * fq_inverse(q(), den_.coeff(den_.ord())) % q();
}

std::vector<int> RatFunc::expansion(int lo, int hi) const {
  std::vector<int> out(static_cast<std::size_t>(std::max(0, hi - lo + 1)), 0);
  if (is_zero() || hi < lo) return out;
  const int qq = q();
  const int v = valuation();
  if (hi < v) return out;
  const Poly u = num_.unshifted(num_.ord());
  const Poly w = den_.unshifted(den_.ord());
  const int len = hi - v + 1;
  const int w0inv = fq_inverse(qq, w.coeff(0));
  std::vector<int> s(static_cast<std::size_t>(len), 0);
  for (int k = 0; k < len; ++k) {
    int acc = u.coeff(k);
    for (int j = 1; j <= std::min(k, w.degree()); ++j) acc -= w.coeff(j) * s[static_cast<std::size_t>(k - j)];
    s[static_cast<std::size_t>(k)] = mod(acc, qq) * w0inv % qq;
  }
  for (int e = std::max(lo, v); e <= hi; ++e) out[static_cast<std::size_t>(e - lo)] = s[static_cast<std::size_t>(e - v)];
  return out;
}

RatFunc RatFunc::truncated_below(int a) const {
  if (is_zero()) return *this;
  const int v = valuation();
  if (v >= a) return constant(q(), 0);
  const auto c = expansion(v, a - 1);
  const Poly p(q(), c);
  if (v >= 0) return RatFunc(p.shifted(v));
  return RatFunc(p, Poly::monomial(q(), -v));
}

RatFunc RatFunc::inverse() const {
  if (!bound()) return RatFunc(unbound_div(1, unbound_));
  if (num_.is_zero()) throw std::domain_error("inverse of zero in K");
  return RatFunc(den_, num_);
}

RatFunc operator+(const RatFunc& a, const RatFunc& b) {
  const int q = common_modulus(a.q(), b.q());
  if (q == 0) return RatFunc(a.unbound_ + b.unbound_);
  if (a.is_zero()) return b.bound_to(q);
  if (b.is_zero()) return a.bound_to(q);
  const RatFunc x = a.bound_to(q), y = b.bound_to(q);
  if (x.den_ == y.den_) return RatFunc(x.num_ + y.num_, x.den_);
  // Henrici: with g = gcd(b, d), the sum reduces by gcd(num, g) only.
  const Poly g = Poly::gcd(x.den_, y.den_);
  const Poly bg = Poly::exact_div(x.den_, g), dg = Poly::exact_div(y.den_, g);
  RatFunc r;
  r.num_ = x.num_ * dg + y.num_ * bg;
  r.den_ = x.den_ * dg;
  if (r.num_.is_zero()) {
    r.den_ = Poly::monomial(q, 0);
    return r;
  }
  if (g.degree() > 0) {
    const Poly h = Poly::gcd(r.num_, g);
    if (h.degree() > 0) {
      r.num_ = Poly::exact_div(r.num_, h);
      r.den_ = Poly::exact_div(r.den_, h);
    }
  }
  if (r.num_.degree() > Poly::kMaxDegree || r.den_.degree() > Poly::kMaxDegree) {
    throw DegreeOverflow("RatFunc: degree cap exceeded");
  }
  return r;
}

RatFunc RatFunc::operator-() const {
  if (!bound()) return RatFunc(-unbound_);
  RatFunc r = *this;
  r.num_ = num_.scaled(-1);
  return r;
}

RatFunc operator-(const RatFunc& a, const RatFunc& b) { return a + (-b); }

RatFunc operator*(const RatFunc& a, const RatFunc& b) {
  const int q = common_modulus(a.q(), b.q());
  if (q == 0) return RatFunc(a.unbound_ * b.unbound_);
  if (a.is_zero() || b.is_zero()) return RatFunc::constant(q, 0);
  const RatFunc x = a.bound_to(q), y = b.bound_to(q);
  const Poly g1 = Poly::gcd(x.num_, y.den_), g2 = Poly::gcd(y.num_, x.den_);
  RatFunc r;
  r.num_ = Poly::exact_div(x.num_, g1) * Poly::exact_div(y.num_, g2);
  r.den_ = Poly::exact_div(x.den_, g2) * Poly::exact_div(y.den_, g1);
  if (r.num_.degree() > Poly::kMaxDegree || r.den_.degree() > Poly::kMaxDegree) {
    throw DegreeOverflow("RatFunc: degree cap exceeded");
  }
  return r;
}

RatFunc operator/(const RatFunc& a, const RatFunc& b) {
  const int q = common_modulus(a.q(), b.q());
  if (q == 0) return RatFunc(unbound_div(a.unbound_, b.unbound_));
  return a.bound_to(q) * b.bound_to(q).inverse();
}

bool RatFunc::operator==(const RatFunc& o) const {
  const int q = common_modulus(this->q(), o.q());
  if (q == 0) return unbound_ == o.unbound_;
  const RatFunc x = bound_to(q), y = o.bound_to(q);
  return x.num_ == y.num_ && x.den_ == y.den_;
}

std::string RatFunc::to_string() const {
  if (!bound()) return std::to_string(unbound_);
  if (den_.degree() == 0) return num_.to_string();
  return "(" + num_.to_string() + ")/(" + den_.to_string() + ")";
}

void RatFunc::append_key(std::vector<int>& key) const {
  if (!bound()) throw std::logic_error("append_key: unbound constant");
  key.push_back(num_.degree());
  for (auto c : num_.coeffs()) key.push_back(c);
  key.push_back(den_.degree());
  for (auto c : den_.coeffs()) key.push_back(c);
}

// ---------------------------------------------------------------- parser

namespace {

class Parser {
 public:
  Parser(int q, const std::string& s) : q_(q), s_(s) {}

  RatFunc parse() {
    RatFunc r = expr();
    skip();
    if (pos_ != s_.size()) error("trailing input");
    return r;
  }

 private:
  [[noreturn]] void error(const std::string& what) const {
    throw std::invalid_argument("RatFunc::parse: " + what + " at position " + std::to_string(pos_) + " in \"" + s_ + "\"");
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  char peek() {
    skip();
    return pos_ < s_.size() ? s_[pos_] : '\0';
  }
  RatFunc expr() {
    RatFunc r = term();
    for (;;) {
      const char c = peek();
      if (c == '+') {
        ++pos_;
        r = r + term();
      } else if (c == '-') {
        ++pos_;
        r = r - term();
      } else {
        return r;
      }
    }
  }
  RatFunc term() {
    RatFunc r = unary();
    for (;;) {
      const char c = peek();
      if (c == '*') {
        ++pos_;
        r = r * unary();
      } else if (c == '/') {
        ++pos_;
        const RatFunc d = unary();
        if (d.is_zero()) error("division by zero");
        r = r / d;
      } else if (c == 't' || c == '(' || std::isdigit(static_cast<unsigned char>(c))) {
        r = r * unary();
      } else {
        return r;
      }
    }
  }
  RatFunc unary() {
    if (peek() == '-') {
      ++pos_;
      return -unary();
    }
    if (peek() == '+') {
      ++pos_;
      return unary();
    }
    return power();
  }
  RatFunc power() {
    RatFunc base = atom();
    if (peek() != '^') return base;
    ++pos_;
    int sign = 1;
    if (peek() == '-') {
      sign = -1;
      ++pos_;
    }
    const long e = integer();
    if (e > 4 * Poly::kMaxDegree) error("exponent too large");
    if (base.is_zero() && sign < 0) error("negative power of zero");
    RatFunc r = RatFunc::constant(q_, 1);
    for (long i = 0; i < e; ++i) r = r * base;
    return sign > 0 ? r : r.inverse();
  }
  RatFunc atom() {
    const char c = peek();
    if (c == 't') {
      ++pos_;
      return RatFunc::t(q_);
    }
    if (c == '(') {
      ++pos_;
      RatFunc r = expr();
      if (peek() != ')') error("expected ')'");
      ++pos_;
      return r;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) return RatFunc::constant(q_, static_cast<int>(integer() % q_));
    error(c == '\0' ? "unexpected end" : std::string("unexpected '") + c + "'");
  }
  long integer() {
    skip();
    if (pos_ >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[pos_]))) error("expected integer");
    long v = 0;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
      v = v * 10 + (s_[pos_++] - '0');
      if (v > 1'000'000'000L) error("integer too large");
    }
    return v;
  }

  int q_;
  std::string s_;
  std::size_t pos_ = 0;
};

}  // namespace

RatFunc RatFunc::parse(int q, const std::string& text) {
  check_modulus(q);
  return Parser(q, text).parse();
}

// ---------------------------------------------------------------- matrices

MatK y_matrix(int n, int i, int q) {
  if (i < 0 || i > n + 1) throw std::out_of_range("y_matrix: index out of range");
  std::vector<int> e(static_cast<std::size_t>(n + 1), 0);
  for (int j = i; j <= n; ++j) e[static_cast<std::size_t>(j)] = 1;
  return diagonal_t_powers(e, q);
}

MatK diagonal_t_powers(const std::vector<int>& exponents, int q) {
  const int d = static_cast<int>(exponents.size());
  MatK m = identity<RatFunc>(d, q);
  for (int j = 0; j < d; ++j) m(j, j) = RatFunc::t_power(q, exponents[static_cast<std::size_t>(j)]);
  return m;
}

MatFq reduce_mod_pi(const MatK& m) {
  MatFq out(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      const RatFunc& x = m(i, j);
      if (!x.bound()) throw std::invalid_argument("reduce_mod_pi: unbound entry");
      out(i, j) = Fq(x.q(), x.residue());
    }
  }
  return out;
}

MatK lift(const MatFq& m) {
  MatK out(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) out(i, j) = RatFunc::constant(m(i, j).q(), m(i, j).value());
  return out;
}

int min_valuation(const MatK& m) {
  int v = kValuationInfinity;
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) v = std::min(v, m(i, j).valuation());
  return v;
}

bool is_integral(const MatK& m) { return min_valuation(m) >= 0; }

bool in_gl_o(const MatK& m) {
  if (m.rows() != m.cols() || !is_integral(m)) return false;
  return determinant(m).valuation() == 0;
}

bool in_iwahori(const MatK& m) {
  if (!in_gl_o(m)) return false;
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < i; ++j)
      if (m(i, j).valuation() < 1) return false;
  return true;
}

bool is_upper_triangular(const MatK& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < std::min(i, m.cols()); ++j)
      if (!m(i, j).is_zero()) return false;
  return true;
}

bool is_identity(const MatK& m) {
  if (m.rows() != m.cols()) return false;
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      if (i == j ? !m(i, j).is_one() : !m(i, j).is_zero()) return false;
  return true;
}

std::string to_string(const MatK& m) {
  std::ostringstream os;
  os << "[";
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    if (i) os << "; ";
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) os << ", ";
      os << m(i, j).to_string();
    }
  }
  os << "]";
  return os.str();
}

MatK scaled(const MatK& m, const RatFunc& c) {
  MatK out = m;
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) out(i, j) = m(i, j) * c;
  return out;
}

// ---------------------------------------------------------------- random

namespace {

int uniform(std::mt19937_64& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

// Polynomial of degree <= d with nonzero constant term.
Poly random_unit_poly(int q, std::mt19937_64& rng, int d) {
  std::vector<int> c(static_cast<std::size_t>(uniform(rng, 0, d) + 1));
  c[0] = uniform(rng, 1, q - 1);
  for (std::size_t i = 1; i < c.size(); ++i) c[i] = uniform(rng, 0, q - 1);
  return Poly(q, c);
}

}  // namespace

RatFunc random_unit(int q, std::mt19937_64& rng, int max_degree) {
  return RatFunc(random_unit_poly(q, rng, max_degree), random_unit_poly(q, rng, max_degree));
}

RatFunc random_ratfunc(int q, std::mt19937_64& rng, const RandomBounds& b) {
  if (uniform(rng, 0, 7) == 0) return RatFunc::constant(q, 0);
  const int v = uniform(rng, b.min_valuation, b.max_valuation);
  return RatFunc(random_unit_poly(q, rng, b.max_degree)) * RatFunc::t_power(q, v);
}

RatFunc random_polynomial(int q, std::mt19937_64& rng, int max_degree) {
  std::vector<int> c(static_cast<std::size_t>(max_degree + 1));
  for (auto& x : c) x = uniform(rng, 0, q - 1);
  return RatFunc(Poly(q, c));
}

MatK random_gl(int n, int q, std::mt19937_64& rng, const RandomBounds& b) {
  const int d = n + 1;
  for (;;) {
    MatK m(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) m(i, j) = random_ratfunc(q, rng, b);
    if (!determinant(m).is_zero()) return m;
  }
}

MatK random_iwahori(int n, int q, std::mt19937_64& rng) {
  const int d = n + 1;
  MatK m(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      if (i == j) {
        m(i, j) = RatFunc(random_unit_poly(q, rng, 2));
      } else {
        m(i, j) = random_polynomial(q, rng, 2);
        if (i > j) m(i, j) *= RatFunc::t(q);
      }
    }
  }
  return m;
}

MatK random_upper(int n, int q, std::mt19937_64& rng, const RandomBounds& b) {
  const int d = n + 1;
  MatK m(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      if (i > j) {
        m(i, j) = RatFunc::constant(q, 0);
      } else if (i == j) {
        m(i, j) = RatFunc(random_unit_poly(q, rng, b.max_degree)) * RatFunc::t_power(q, uniform(rng, b.min_valuation, b.max_valuation));
      } else {
        m(i, j) = random_ratfunc(q, rng, b);
      }
    }
  }
  return m;
}

MatFq random_fq_matrix(int rows, int cols, int q, std::mt19937_64& rng) {
  MatFq m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = Fq(q, uniform(rng, 0, q - 1));
  return m;
}

}  // namespace sphc
