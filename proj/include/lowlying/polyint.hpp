#pragma once

// Univariate polynomials over Z with GMP coefficients. Coefficients are
// stored in ascending order; the zero polynomial is the empty vector.

#include <gmpxx.h>

#include <algorithm>
#include <cstdint>
#include <initializer_list>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "lowlying/common.hpp"

namespace lowlying {

class IntPoly {
 public:
  IntPoly() = default;
  explicit IntPoly(std::vector<mpz_class> coeffs) : c_(std::move(coeffs)) { trim(); }
  IntPoly(std::initializer_list<long> coeffs) {
    c_.reserve(coeffs.size());
    for (long v : coeffs) c_.emplace_back(v);
    trim();
  }

  static IntPoly constant(const mpz_class& v) { return IntPoly(std::vector<mpz_class>{v}); }
  /// c·t + t0
  static IntPoly linear(const mpz_class& c, const mpz_class& t0) {
    return IntPoly(std::vector<mpz_class>{t0, c});
  }

  /// -1 for the zero polynomial.
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  bool is_constant() const { return c_.size() <= 1; }
  const std::vector<mpz_class>& coeffs() const { return c_; }
  mpz_class coeff(std::size_t i) const { return i < c_.size() ? c_[i] : mpz_class(0); }
  const mpz_class& lc() const { return c_.back(); }

  mpz_class eval(const mpz_class& t) const {
    mpz_class acc = 0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
      acc *= t;
      acc += *it;
    }
    return acc;
  }

  /// p(t) mod m in [0, m), for m < 2^32 so products fit in 64 bits.
  std::uint64_t eval_mod(std::uint64_t t, std::uint64_t m) const {
    const auto coeffs = reduce_mod(m);
    t %= m;
    std::uint64_t acc = 0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = (acc * t + *it) % m;
    return acc;
  }

  /// Coefficients reduced into [0, m), ascending, untrimmed.
  std::vector<std::uint64_t> reduce_mod(std::uint64_t m) const {
    std::vector<std::uint64_t> out(c_.size());
    mpz_class r;
    for (std::size_t i = 0; i < c_.size(); ++i) {
      mpz_fdiv_r_ui(r.get_mpz_t(), c_[i].get_mpz_t(), m);
      out[i] = r.get_ui();
    }
    return out;
  }

  IntPoly derivative() const {
    if (c_.size() <= 1) return {};
    std::vector<mpz_class> d(c_.size() - 1);
    for (std::size_t i = 1; i < c_.size(); ++i) d[i - 1] = c_[i] * static_cast<unsigned long>(i);
    return IntPoly(std::move(d));
  }

  /// p(c·t + t0)
  IntPoly compose_linear(const mpz_class& c, const mpz_class& t0) const {
    IntPoly lin = linear(c, t0);
    IntPoly acc;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * lin + constant(*it);
    return acc;
  }

  IntPoly pow(unsigned n) const {
    IntPoly acc = constant(1);
    for (unsigned i = 0; i < n; ++i) acc = acc * *this;
    return acc;
  }

  /// Non-negative gcd of the coefficients (0 for the zero polynomial).
  mpz_class content() const {
    mpz_class g = 0;
    for (const auto& v : c_) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v.get_mpz_t());
    return g;
  }

  /// p / content(p), normalized to a positive leading coefficient.
  IntPoly primitive_part() const {
    if (is_zero()) return {};
    mpz_class g = content();
    if (lc() < 0) g = -g;
    std::vector<mpz_class> out(c_.size());
    for (std::size_t i = 0; i < c_.size(); ++i) mpz_divexact(out[i].get_mpz_t(), c_[i].get_mpz_t(), g.get_mpz_t());
    return IntPoly(std::move(out));
  }

  friend IntPoly operator+(const IntPoly& a, const IntPoly& b) {
    std::vector<mpz_class> out(std::max(a.c_.size(), b.c_.size()));
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = a.coeff(i) + b.coeff(i);
    return IntPoly(std::move(out));
  }
  friend IntPoly operator-(const IntPoly& a, const IntPoly& b) {
    std::vector<mpz_class> out(std::max(a.c_.size(), b.c_.size()));
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = a.coeff(i) - b.coeff(i);
    return IntPoly(std::move(out));
  }
  friend IntPoly operator-(const IntPoly& a) { return IntPoly() - a; }
  friend IntPoly operator*(const IntPoly& a, const IntPoly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<mpz_class> out(a.c_.size() + b.c_.size() - 1);
    for (std::size_t i = 0; i < a.c_.size(); ++i)
      for (std::size_t j = 0; j < b.c_.size(); ++j) out[i + j] += a.c_[i] * b.c_[j];
    return IntPoly(std::move(out));
  }
  friend IntPoly operator*(const mpz_class& k, const IntPoly& a) {
    std::vector<mpz_class> out(a.c_);
    for (auto& v : out) v *= k;
    return IntPoly(std::move(out));
  }
  friend IntPoly operator*(long k, const IntPoly& a) { return mpz_class(k) * a; }
  friend bool operator==(const IntPoly& a, const IntPoly& b) { return a.c_ == b.c_; }

  std::string to_string(const char* var = "t") const {
    if (is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (int i = degree(); i >= 0; --i) {
      const mpz_class& v = c_[static_cast<std::size_t>(i)];
      if (v == 0) continue;
      mpz_class mag = abs(v);
      if (!first) os << (v < 0 ? " - " : " + ");
      else if (v < 0) os << "-";
      if (mag != 1 || i == 0) os << mag.get_str();
      if (i >= 1) os << var;
      if (i >= 2) os << "^" << i;
      first = false;
    }
    return os.str();
  }

 private:
  void trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
  }
  std::vector<mpz_class> c_;
};

/// Pseudo-division: lc(b)^(deg a - deg b + 1)·a = q·b + r with deg r < deg b.
inline std::pair<IntPoly, IntPoly> pseudo_divmod(const IntPoly& a, const IntPoly& b) {
  if (b.is_zero()) throw InvalidInput("pseudo_divmod: division by the zero polynomial");
  if (a.degree() < b.degree()) return {IntPoly(), a};
  const int db = b.degree();
  std::vector<mpz_class> r(a.coeffs());
  std::vector<mpz_class> q(static_cast<std::size_t>(a.degree() - db + 1));
  const mpz_class& lb = b.lc();
  for (int k = a.degree() - db; k >= 0; --k) {
    const mpz_class lead = r[static_cast<std::size_t>(k + db)];
    for (auto& v : q) v *= lb;
    q[static_cast<std::size_t>(k)] = lead;
    for (auto& v : r) v *= lb;
    for (int j = 0; j <= db; ++j) r[static_cast<std::size_t>(k + j)] -= lead * b.coeffs()[static_cast<std::size_t>(j)];
    r.pop_back();
  }
  return {IntPoly(std::move(q)), IntPoly(std::move(r))};
}

/// Primitive gcd over Q with positive leading coefficient (primitive PRS).
inline IntPoly gcd(const IntPoly& a, const IntPoly& b) {
  if (a.is_zero() && b.is_zero()) throw InvalidInput("gcd: both polynomials are zero");
  if (a.is_zero()) return b.is_constant() ? IntPoly{1} : b.primitive_part();
  if (b.is_zero()) return a.is_constant() ? IntPoly{1} : a.primitive_part();
  IntPoly x = a.primitive_part();
  IntPoly y = b.primitive_part();
  if (x.degree() < y.degree()) std::swap(x, y);
  while (!y.is_zero()) {
    IntPoly r = pseudo_divmod(x, y).second;
    x = std::move(y);
    y = r.is_zero() ? IntPoly() : r.primitive_part();
  }
  return x.is_constant() ? IntPoly{1} : x;
}

/// Exact quotient a / b over Q, returned as a primitive polynomial with
/// positive leading coefficient. Requires b | a over Q.
inline IntPoly quotient_primitive(const IntPoly& a, const IntPoly& b) {
  auto [q, r] = pseudo_divmod(a, b);
  if (!r.is_zero()) throw InvalidInput("quotient_primitive: divisor does not divide");
  return q.is_constant() ? IntPoly{1} : q.primitive_part();
}

/// Square-free part p / gcd(p, p'), primitive, positive leading coefficient.
/// Constants map to 1.
inline IntPoly radical(const IntPoly& p) {
  if (p.is_zero()) throw InvalidInput("radical: zero polynomial");
  if (p.is_constant()) return IntPoly{1};
  return quotient_primitive(p, gcd(p, p.derivative()));
}

/// Determinant of an integer matrix by Bareiss fraction-free elimination.
inline mpz_class bareiss_determinant(std::vector<std::vector<mpz_class>> m) {
  const std::size_t n = m.size();
  if (n == 0) return 1;
  int sign = 1;
  mpz_class prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m[k][k] == 0) {
      std::size_t piv = k + 1;
      while (piv < n && m[piv][k] == 0) ++piv;
      if (piv == n) return 0;
      std::swap(m[k], m[piv]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        mpz_class v = m[i][j] * m[k][k] - m[i][k] * m[k][j];
        mpz_divexact(m[i][j].get_mpz_t(), v.get_mpz_t(), prev.get_mpz_t());
      }
    }
    prev = m[k][k];
  }
  return sign * m[n - 1][n - 1];
}

/// Resultant via the Sylvester matrix. Both polynomials must be nonzero.
inline mpz_class resultant(const IntPoly& a, const IntPoly& b) {
  if (a.is_zero() || b.is_zero()) return 0;
  const int m = a.degree();
  const int n = b.degree();
  if (m == 0 && n == 0) return 1;
  if (m == 0) {
    mpz_class r;
    mpz_pow_ui(r.get_mpz_t(), a.lc().get_mpz_t(), static_cast<unsigned long>(n));
    return r;
  }
  if (n == 0) {
    mpz_class r;
    mpz_pow_ui(r.get_mpz_t(), b.lc().get_mpz_t(), static_cast<unsigned long>(m));
    return r;
  }
  const std::size_t size = static_cast<std::size_t>(m + n);
  std::vector<std::vector<mpz_class>> s(size, std::vector<mpz_class>(size, 0));
  // Rows hold descending coefficients shifted right.
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= m; ++j) s[static_cast<std::size_t>(i)][static_cast<std::size_t>(i + j)] = a.coeff(static_cast<std::size_t>(m - j));
  for (int i = 0; i < m; ++i)
    for (int j = 0; j <= n; ++j) s[static_cast<std::size_t>(n + i)][static_cast<std::size_t>(i + j)] = b.coeff(static_cast<std::size_t>(n - j));
  return bareiss_determinant(std::move(s));
}

/// disc(p) = (-1)^(n(n-1)/2) · res(p, p') / lc(p). Linear polynomials give 1.
inline mpz_class discriminant(const IntPoly& p) {
  if (p.degree() < 1) throw InvalidInput("discriminant: polynomial must have degree >= 1");
  const long n = p.degree();
  mpz_class r = resultant(p, p.derivative());
  mpz_class out;
  mpz_divexact(out.get_mpz_t(), r.get_mpz_t(), p.lc().get_mpz_t());
  if (((n * (n - 1)) / 2) % 2 != 0) out = -out;
  return out;
}

}  // namespace lowlying
