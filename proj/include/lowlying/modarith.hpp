#pragma once

// Legendre symbols, traces of Frobenius a_t(p), and exact moment sums
// A_r(p) = Σ_{t mod p} a_t(p)^r.
//
// For odd p the trace is −Σ_x χ(4x³ + b2x² + 2b4x + b6), the character sum of
// the square-completed model; for p > 3 it is evaluated on the isomorphic
// short model y² = x³ + Ax + B with A = −27c4, B = −54c6, which lets whole
// twist classes share one O(p) sum. p ∈ {2, 3} use affine point counts.

#include <gmpxx.h>

#include <array>
#include <atomic>
#include <cstdint>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "lowlying/common.hpp"
#include "lowlying/factor.hpp"
#include "lowlying/family.hpp"
#include "lowlying/polyint.hpp"

namespace lowlying {

/// Jacobi symbol (a/n) for odd n.
inline int jacobi(std::int64_t a_in, std::uint64_t n) {
  std::uint64_t a = static_cast<std::uint64_t>(((a_in % static_cast<std::int64_t>(n)) + static_cast<std::int64_t>(n)) %
                                                static_cast<std::int64_t>(n));
  int result = 1;
  while (a != 0) {
    while ((a & 1) == 0) {
      a >>= 1;
      const std::uint64_t r = n & 7;
      if (r == 3 || r == 5) result = -result;
    }
    std::swap(a, n);
    if ((a & 3) == 3 && (n & 3) == 3) result = -result;
    a %= n;
  }
  return n == 1 ? result : 0;
}

/// Legendre symbol (a|p); p must be an odd prime.
inline int legendre(const mpz_class& a, std::uint64_t p) {
  if (p == 2 || !is_prime_u64(p)) throw InvalidInput("legendre: modulus must be an odd prime");
  mpz_class r;
  mpz_fdiv_r_ui(r.get_mpz_t(), a.get_mpz_t(), p);
  return jacobi(static_cast<std::int64_t>(r.get_ui()), p);
}

/// χ(v) for v in [0, p): 0, 1 or −1.
class ResidueTable {
 public:
  explicit ResidueTable(std::uint32_t p) : p_(p), chi_(p, -1) {
    chi_[0] = 0;
    for (std::uint64_t x = 1; x <= p / 2; ++x) chi_[(x * x) % p] = 1;
    if (p == 2) chi_[1] = 1;
  }
  std::uint32_t prime() const { return p_; }
  int operator()(std::uint64_t v) const { return chi_[v]; }
  const std::int8_t* data() const { return chi_.data(); }

 private:
  std::uint32_t p_;
  std::vector<std::int8_t> chi_;
};

/// 1 iff a is a nonzero cube mod p, for primes p ≡ 1 mod 3.
inline int cube_residue_indicator(const mpz_class& a, std::uint64_t p) {
  if (!is_prime_u64(p) || p % 3 != 1) throw InvalidInput("cube_residue_indicator: need a prime p ≡ 1 mod 3");
  mpz_class r;
  mpz_fdiv_r_ui(r.get_mpz_t(), a.get_mpz_t(), p);
  if (r == 0) return 0;
  return powmod(r.get_ui(), (p - 1) / 3, p) == 1 ? 1 : 0;
}

/// Family coefficient polynomials reduced mod a prime.
struct FamilyModP {
  std::uint32_t p = 0;
  std::array<std::vector<std::uint64_t>, 5> a;  // a1, a2, a3, a4, a6
  std::vector<std::uint64_t> b2, b4, b6, c4, c6;

  FamilyModP(const FamilyDef& f, std::uint32_t prime) : p(prime) {
    const auto e = f.effective();
    for (std::size_t i = 0; i < 5; ++i) a[i] = e[i].reduce_mod(p);
    const auto w = weierstrass(e[0], e[1], e[2], e[3], e[4]);
    b2 = w.b2.reduce_mod(p);
    b4 = w.b4.reduce_mod(p);
    b6 = w.b6.reduce_mod(p);
    c4 = w.c4.reduce_mod(p);
    c6 = w.c6.reduce_mod(p);
  }

  static std::uint64_t eval(const std::vector<std::uint64_t>& c, std::uint64_t t, std::uint64_t p) {
    std::uint64_t acc = 0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = (acc * t + *it) % p;
    return acc;
  }
};

namespace detail {

inline std::uint64_t addm(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
  std::uint64_t s = a + b;
  return s >= p ? s - p : s;
}

/// Σ_x χ(x³ + Ax + B) by forward differences (cubic in x, third difference 6).
inline int cubic_char_sum(std::uint64_t A, std::uint64_t B, const ResidueTable& chi) {
  const std::uint64_t p = chi.prime();
  const std::int8_t* tab = chi.data();
  std::uint64_t v = B % p;
  std::uint64_t d1 = (1 + A) % p;
  std::uint64_t d2 = 6 % p;
  const std::uint64_t d3 = 6 % p;
  int s = 0;
  for (std::uint64_t x = 0; x < p; ++x) {
    s += tab[v];
    v = addm(v, d1, p);
    d1 = addm(d1, d2, p);
    d2 = addm(d2, d3, p);
  }
  return s;
}

/// p − #{affine (x, y) ∈ F_p² on the full Weierstrass equation}.
inline int trace_by_enumeration(const std::array<std::uint64_t, 5>& a, std::uint64_t p) {
  std::uint64_t count = 0;
  for (std::uint64_t x = 0; x < p; ++x) {
    const std::uint64_t rhs = (((x * x) % p * x) % p + (a[1] * x % p) * x % p + a[3] * x % p + a[4]) % p;
    for (std::uint64_t y = 0; y < p; ++y) {
      const std::uint64_t lhs = (y * y % p + (a[0] * x % p) * y % p + a[2] * y % p) % p;
      if (lhs == rhs) ++count;
    }
  }
  return static_cast<int>(p) - static_cast<int>(count);
}

}  // namespace detail

/// a_t(p) for any prime p and integer t (singular fibers included).
inline int a_p(const FamilyDef& f, const mpz_class& t, std::uint32_t p) {
  if (!is_prime_u64(p)) throw InvalidInput("a_p: p must be prime");
  const FamilyModP fm(f, p);
  mpz_class tr;
  mpz_fdiv_r_ui(tr.get_mpz_t(), t.get_mpz_t(), p);
  const std::uint64_t tt = tr.get_ui();
  if (p <= 3) {
    std::array<std::uint64_t, 5> a{};
    for (std::size_t i = 0; i < 5; ++i) a[i] = FamilyModP::eval(fm.a[i], tt, p);
    return detail::trace_by_enumeration(a, p);
  }
  const ResidueTable chi(p);
  const std::uint64_t A = (p - (27 * FamilyModP::eval(fm.c4, tt, p)) % p) % p;
  const std::uint64_t B = (p - (54 * FamilyModP::eval(fm.c6, tt, p)) % p) % p;
  return -detail::cubic_char_sum(A, B, chi);
}

/// a_t(p) for every t in [0, p).
///
/// For p > 3 the short model (A, B) determines the trace through its twist
/// class: with AB ≠ 0, (A, B) = (d²r, d³r) for r = A³/B², d = B/A, so
/// a = χ(d)·a(r, r); with A = 0 only B modulo sixth powers matters, with
/// B = 0 only A modulo fourth powers. Each distinct class costs one O(p) sum.
inline std::vector<std::int16_t> ap_table(const FamilyDef& f, std::uint32_t p) {
  if (!is_prime_u64(p)) throw InvalidInput("ap_table: p must be prime");
  const FamilyModP fm(f, p);
  std::vector<std::int16_t> out(p, 0);
  if (p <= 3) {
    for (std::uint64_t t = 0; t < p; ++t) {
      std::array<std::uint64_t, 5> a{};
      for (std::size_t i = 0; i < 5; ++i) a[i] = FamilyModP::eval(fm.a[i], t, p);
      out[t] = static_cast<std::int16_t>(detail::trace_by_enumeration(a, p));
    }
    return out;
  }
  const ResidueTable chi(p);
  constexpr std::int16_t kUnset = std::numeric_limits<std::int16_t>::min();
  std::vector<std::int16_t> by_r;  // a(r, r), filled lazily
  std::map<std::uint64_t, std::int16_t> by_b6;  // A = 0, keyed by B^((p−1)/gcd(6, p−1))
  std::map<std::uint64_t, std::int16_t> by_a4;  // B = 0, keyed by A^((p−1)/gcd(4, p−1))
  const std::uint64_t e6 = (p - 1) / std::gcd<std::uint64_t>(6, p - 1);
  const std::uint64_t e4 = (p - 1) / std::gcd<std::uint64_t>(4, p - 1);
  for (std::uint64_t t = 0; t < p; ++t) {
    const std::uint64_t A = (p - (27 * FamilyModP::eval(fm.c4, t, p)) % p) % p;
    const std::uint64_t B = (p - (54 * FamilyModP::eval(fm.c6, t, p)) % p) % p;
    int a;
    if (A == 0 && B == 0) {
      a = 0;
    } else if (A == 0) {
      const std::uint64_t key = powmod(B, e6, p);
      auto it = by_b6.find(key);
      if (it == by_b6.end()) it = by_b6.emplace(key, static_cast<std::int16_t>(-detail::cubic_char_sum(0, B, chi))).first;
      a = it->second;
    } else if (B == 0) {
      const std::uint64_t key = powmod(A, e4, p);
      auto it = by_a4.find(key);
      if (it == by_a4.end()) it = by_a4.emplace(key, static_cast<std::int16_t>(-detail::cubic_char_sum(A, 0, chi))).first;
      a = it->second;
    } else {
      if (by_r.empty()) by_r.assign(p, kUnset);
      const std::uint64_t a_inv = powmod(A, p - 2, p);
      const std::uint64_t b_inv = powmod(B, p - 2, p);
      const std::uint64_t r = mulmod(mulmod(mulmod(A, A, p), A, p), mulmod(b_inv, b_inv, p), p);
      const std::uint64_t d = mulmod(B, a_inv, p);
      if (by_r[r] == kUnset) by_r[r] = static_cast<std::int16_t>(-detail::cubic_char_sum(r, r, chi));
      a = chi(d) * by_r[r];
    }
    out[t] = static_cast<std::int16_t>(a);
  }
  return out;
}

namespace detail {

/// Σ_{t mod p} χ(αt² + βt + γ).
inline std::int64_t quadratic_char_sum(std::uint64_t alpha, std::uint64_t beta, std::uint64_t gamma,
                                       const ResidueTable& chi) {
  const std::uint64_t p = chi.prime();
  if (alpha != 0) {
    const std::uint64_t disc = (mulmod(beta, beta, p) + p - mulmod(4 % p, mulmod(alpha, gamma, p), p)) % p;
    return disc != 0 ? -chi(alpha) : static_cast<std::int64_t>(p - 1) * chi(alpha);
  }
  if (beta != 0) return 0;
  return static_cast<std::int64_t>(p) * chi(gamma);
}

}  // namespace detail

/// True when 4x³ + b2x² + 2b4x + b6 has degree <= 2 in t, so A1(p) has an
/// O(p) evaluation by swapping the x and t sums.
inline bool first_moment_has_fast_path(const FamilyDef& f) {
  const auto e = f.effective();
  const auto w = weierstrass(e[0], e[1], e[2], e[3], e[4]);
  return w.b2.degree() <= 2 && w.b4.degree() <= 2 && w.b6.degree() <= 2;
}

/// A1(p) via Σ_x Σ_t χ(α(x)t² + β(x)t + γ(x)); p odd, family must satisfy
/// first_moment_has_fast_path.
inline std::int64_t first_moment_fast(const FamilyDef& f, std::uint32_t p) {
  const FamilyModP fm(f, p);
  const ResidueTable chi(p);
  auto coeff = [](const std::vector<std::uint64_t>& c, std::size_t i) { return i < c.size() ? c[i] : 0; };
  std::int64_t total = 0;
  const std::uint64_t P = p;
  for (std::uint64_t x = 0; x < P; ++x) {
    const std::uint64_t x2 = x * x % P;
    const std::uint64_t x3 = x2 * x % P;
    std::array<std::uint64_t, 3> k{};
    for (std::size_t i = 0; i < 3; ++i) {
      k[i] = (coeff(fm.b2, i) * x2 % P + 2 * coeff(fm.b4, i) % P * x % P + coeff(fm.b6, i)) % P;
    }
    k[0] = (k[0] + 4 * x3) % P;
    total += detail::quadratic_char_sum(k[2], k[1], k[0], chi);
  }
  return -total;
}

/// Exact Σ_{t mod p} a_t(p)^r for r ∈ {1, 2}; p > 3 prime, p < 2^28.
inline std::int64_t moment_sum(const FamilyDef& f, std::uint32_t p, int r) {
  if (r != 1 && r != 2) throw InvalidInput("moment_sum: r must be 1 or 2");
  if (p <= 3 || !is_prime_u64(p)) throw InvalidInput("moment_sum: p must be a prime > 3");
  if (p >= (1u << 28)) throw InvalidInput("moment_sum: p too large for 64-bit accumulation");
  if (r == 1 && first_moment_has_fast_path(f)) return first_moment_fast(f, p);
  const auto tab = ap_table(f, p);
  std::int64_t s = 0;
  for (auto a : tab) s += r == 1 ? a : static_cast<std::int64_t>(a) * a;
  return s;
}

/// Known closed forms of A1(p), A2(p) for the built-in families (p > 3);
/// empty fields where no closed form applies.
struct ClosedForm {
  std::optional<std::int64_t> A1, A2;
};

inline ClosedForm closed_form(const std::string& label, std::uint32_t p) {
  if (p <= 3 || !is_prime_u64(p)) throw InvalidInput("closed_form: p must be a prime > 3");
  const auto P = static_cast<std::int64_t>(p);
  ClosedForm out;
  if (label == "F1") {
    out.A1 = 0;
    out.A2 = p % 3 == 1 ? 2 * P * P - 2 * P : 0;
  } else if (label == "F2+" || label == "F2-") {
    out.A1 = 0;
    out.A2 = p % 4 == 1 ? 2 * P * P - 2 * P : 0;
  } else if (label == "washington") {
    out.A1 = p % 4 == 1 ? -2 * P : 0;
  } else if (label == "rank1") {
    // −p·#{x : x³ ≡ 2}, which is 3p·h(2) for p ≡ 1 mod 3 and p otherwise.
    const std::int64_t roots = p % 3 == 1 ? 3 * cube_residue_indicator(2, p) : 1;
    std::int64_t s = 0;
    for (std::int64_t x = 0; x < P; ++x) s += jacobi((4 * (x * x % P) * x + 1) % P, P);
    out.A1 = -P;
    out.A2 = P * P - P * roots - 1 + P * s;
  }
  return out;
}

struct MomentRow {
  std::uint32_t p = 0;
  std::int64_t A1 = 0;
  std::int64_t A2 = 0;
};

struct MomentTable {
  std::string label;
  std::uint32_t p_max = 0;
  std::vector<MomentRow> rows;  // every prime 3 < p <= p_max, ascending
};

/// Moments for every prime 3 < p <= p_max, parallel over primes.
inline MomentTable moment_table(const FamilyDef& f, std::uint32_t p_max, bool with_A2 = true) {
  MomentTable out;
  out.label = f.label;
  out.p_max = p_max;
  for (auto p : primes_up_to(p_max))
    if (p > 3) out.rows.push_back({p, 0, 0});
  const bool fast = first_moment_has_fast_path(f);
  parallel_for(out.rows.size(), [&](std::size_t i) {
    auto& row = out.rows[i];
    if (with_A2 || !fast) {
      const auto tab = ap_table(f, row.p);
      for (auto a : tab) {
        row.A1 += a;
        row.A2 += static_cast<std::int64_t>(a) * a;
      }
      if (!with_A2) row.A2 = 0;
    } else {
      row.A1 = first_moment_fast(f, row.p);
    }
  });
  return out;
}

namespace detail {

inline void check_distinct_primes(const std::vector<std::uint32_t>& primes, const std::vector<int>& powers) {
  if (primes.size() != powers.size() || primes.empty())
    throw InvalidInput("product_moment: primes and powers must be nonempty and the same length");
  for (std::size_t i = 0; i < primes.size(); ++i) {
    if (primes[i] <= 3 || !is_prime_u64(primes[i])) throw InvalidInput("product_moment: primes must exceed 3");
    if (powers[i] < 1) throw InvalidInput("product_moment: powers must be >= 1");
    for (std::size_t j = 0; j < i; ++j)
      if (primes[i] == primes[j]) throw InvalidInput("product_moment: primes must be distinct");
  }
}

inline mpz_class power_sum(const std::vector<std::int16_t>& tab, int r) {
  mpz_class s = 0, term;
  for (auto a : tab) {
    mpz_class base = a;
    mpz_pow_ui(term.get_mpz_t(), base.get_mpz_t(), static_cast<unsigned long>(r));
    s += term;
  }
  return s;
}

}  // namespace detail

/// Σ_{t mod Πp_i} Π a_t(p_i)^{r_i}, evaluated as Π A_{r_i}(p_i).
inline mpz_class product_moment(const FamilyDef& f, const std::vector<std::uint32_t>& primes,
                                const std::vector<int>& powers) {
  detail::check_distinct_primes(primes, powers);
  mpz_class prod = 1;
  for (std::size_t i = 0; i < primes.size(); ++i) {
    if (powers[i] <= 2) prod *= mpz_class(std::to_string(moment_sum(f, primes[i], powers[i])));
    else prod *= detail::power_sum(ap_table(f, primes[i]), powers[i]);
  }
  return prod;
}

/// The same sum by running t over every residue mod Πp_i.
inline mpz_class product_moment_brute(const FamilyDef& f, const std::vector<std::uint32_t>& primes,
                                      const std::vector<int>& powers) {
  detail::check_distinct_primes(primes, powers);
  std::vector<std::vector<std::int16_t>> tabs;
  std::uint64_t modulus = 1;
  for (auto p : primes) {
    tabs.push_back(ap_table(f, p));
    modulus *= p;
  }
  mpz_class total = 0, term, base;
  for (std::uint64_t t = 0; t < modulus; ++t) {
    term = 1;
    for (std::size_t i = 0; i < primes.size(); ++i) {
      base = tabs[i][t % primes[i]];
      mpz_class pw;
      mpz_pow_ui(pw.get_mpz_t(), base.get_mpz_t(), static_cast<unsigned long>(powers[i]));
      term *= pw;
    }
    total += term;
  }
  return total;
}

/// Lazily built a_t(p) tables for one family, shared by the density code.
class ApTableCache {
 public:
  explicit ApTableCache(FamilyDef f) : family_(std::move(f)) {}

  const FamilyDef& family() const { return family_; }

  /// Build every table for primes <= p_max (parallel over primes).
  void ensure(std::uint32_t p_max) {
    std::lock_guard<std::mutex> lock(mu_);
    if (p_max <= built_to_) return;
    const auto primes = primes_up_to(p_max);
    std::vector<std::uint32_t> todo;
    for (auto p : primes)
      if (p > built_to_) todo.push_back(p);
    std::vector<std::vector<std::int16_t>> fresh(todo.size());
    parallel_for(todo.size(), [&](std::size_t i) { fresh[i] = ap_table(family_, todo[i]); });
    for (std::size_t i = 0; i < todo.size(); ++i) {
      if (tables_.size() <= todo[i]) tables_.resize(static_cast<std::size_t>(todo[i]) + 1);
      tables_[todo[i]] = std::move(fresh[i]);
    }
    built_to_ = p_max;
  }

  std::uint32_t built_to() const { return built_to_; }

  /// Requires ensure(p) beforehand; t may be any integer.
  int at(std::int64_t t, std::uint32_t p) const {
    std::int64_t r = t % static_cast<std::int64_t>(p);
    if (r < 0) r += p;
    return tables_[p][static_cast<std::size_t>(r)];
  }

 private:
  FamilyDef family_;
  std::mutex mu_;
  std::uint32_t built_to_ = 0;
  std::vector<std::vector<std::int16_t>> tables_;
};

}  // namespace lowlying
