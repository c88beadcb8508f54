#pragma once

// Square-free sieve on polynomial values: local root counts ν(d), the set of
// t ∈ [N, 2N] with D(t) free of small square factors, and the truncated
// Euler product for the family's cardinality constant.

#include <gmpxx.h>

#include <cmath>
#include <cstdint>
#include <map>
#include <vector>

#include "lowlying/common.hpp"
#include "lowlying/factor.hpp"
#include "lowlying/family.hpp"
#include "lowlying/polyint.hpp"

namespace lowlying {

namespace detail {

inline std::uint64_t horner_mod(const std::vector<std::uint64_t>& c, std::uint64_t t, std::uint64_t m) {
  std::uint64_t acc = 0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = (mulmod(acc, t, m) + *it) % m;
  return acc;
}

/// Primes dividing d, or an exception if d is not square-free.
inline std::vector<std::uint64_t> squarefree_primes(std::uint64_t d) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t p = 2; p * p <= d; ++p) {
    if (d % p) continue;
    d /= p;
    if (d % p == 0) throw InvalidInput("nu: d must be square-free");
    out.push_back(p);
  }
  if (d > 1) out.push_back(d);
  return out;
}

}  // namespace detail

/// Residues t mod p² with D(t) ≡ 0 mod p²: roots mod p lifted by Hensel,
/// with a full scan of the p lifts when D' vanishes at the root.
inline std::vector<std::uint64_t> roots_mod_p2(const IntPoly& D, std::uint64_t p) {
  if (!is_prime_u64(p) || p >= (1ull << 31)) throw InvalidInput("roots_mod_p2: p must be a prime below 2^31");
  const std::uint64_t p2 = p * p;
  const auto c = D.reduce_mod(p2);
  const auto dc = D.derivative().reduce_mod(p);
  std::vector<std::uint64_t> out;
  for (std::uint64_t r = 0; r < p; ++r) {
    if (detail::horner_mod(c, r, p) != 0) continue;
    const std::uint64_t d = detail::horner_mod(dc, r, p);
    if (d != 0) {
      // t = r + k p with D(r) + k p D'(r) ≡ 0 mod p².
      const std::uint64_t q = (detail::horner_mod(c, r, p2) / p) % p;
      const std::uint64_t k = mulmod((p - q) % p, powmod(d, p - 2, p), p);
      out.push_back(r + k * p);
    } else {
      for (std::uint64_t k = 0; k < p; ++k)
        if (detail::horner_mod(c, r + k * p, p2) == 0) out.push_back(r + k * p);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// ν(d) = #{t mod d² : D(t) ≡ 0 mod d²} for square-free d (CRT over p | d).
inline std::uint64_t nu(const IntPoly& D, std::uint64_t d) {
  if (d == 0) throw InvalidInput("nu: d must be positive");
  std::uint64_t prod = 1;
  for (auto p : detail::squarefree_primes(d)) prod *= roots_mod_p2(D, p).size();
  return prod;
}

/// ν(d) by scanning every residue mod d².
inline std::uint64_t nu_bruteforce(const IntPoly& D, std::uint64_t d) {
  const std::uint64_t m = d * d;
  const auto c = D.reduce_mod(m);
  std::uint64_t count = 0;
  for (std::uint64_t t = 0; t < m; ++t)
    if (detail::horner_mod(c, t, m) == 0) ++count;
  return count;
}

inline bool is_squarefree(std::uint64_t d) {
  for (std::uint64_t p = 2; p * p <= d; ++p)
    if (d % (p * p) == 0) return false;
  return d >= 1;
}

/// ⌈(log N)^l⌉, at least 2.
inline std::uint64_t default_d_max(std::int64_t N, double l = 1.5) {
  if (N < 2) return 2;
  return std::max<std::uint64_t>(2, static_cast<std::uint64_t>(std::ceil(std::pow(std::log(static_cast<double>(N)), l))));
}

/// Π_{p ≤ p_max, p ∤ B} (1 − ν(p)/p²).
inline double cardinality_constant(const IntPoly& D, const mpz_class& B, std::uint32_t p_max) {
  if (D.is_zero()) throw InvalidInput("cardinality_constant: zero polynomial");
  double prod = 1.0;
  for (auto p : primes_up_to(p_max)) {
    if (B != 0 && mpz_divisible_ui_p(B.get_mpz_t(), p)) continue;
    const double v = static_cast<double>(roots_mod_p2(D, p).size());
    const double p2 = static_cast<double>(p) * p;
    if (v >= p2)
      throw ZeroDensity("nu(" + std::to_string(p) + ") = p^2: every D(t) is divisible by " + std::to_string(p) +
                        "^2; set the exceptional square B to absorb it");
    prod *= 1.0 - v / p2;
  }
  return prod;
}

inline double cardinality_constant(const FamilyDef& f, std::uint32_t p_max) {
  return cardinality_constant(invariants(f).D, f.B, p_max);
}

struct SieveReport {
  std::int64_t N = 0;
  std::uint64_t d_max = 0;
  std::vector<std::int64_t> good_t;
  std::map<std::uint64_t, std::uint64_t> nu_table;  // square-free d <= d_max
  double c_F_estimate = 0.0;
  /// t that survive the sieve but have p² | D(t) for some p > d_max.
  std::uint64_t t_set_excess = 0;
  bool refined = false;

  double density() const { return static_cast<double>(good_t.size()) / static_cast<double>(N + 1); }
};

/// t ∈ [N, 2N] with D(t) ≠ 0 and p² ∤ D(t) for primes p ≤ d_max, p ∤ B.
/// Marking by p² for prime p gives the same set as the Möbius sum over
/// square-free d. With `refine`, survivors are factored and those with a
/// larger square factor (p ∤ B) are dropped and counted in t_set_excess.
inline SieveReport enumerate_good(const IntPoly& D, const mpz_class& B, std::int64_t N, std::uint64_t d_max,
                                  bool refine = true, std::uint32_t euler_p_max = 10000) {
  if (D.degree() < 1) throw InvalidInput("enumerate_good: D must be non-constant");
  if (N < 1) throw InvalidInput("enumerate_good: N must be positive");
  if (d_max < 2) throw InvalidInput("enumerate_good: d_max must be at least 2");
  SieveReport rep;
  rep.N = N;
  rep.d_max = d_max;
  rep.refined = refine;
  rep.c_F_estimate = cardinality_constant(D, B, std::max<std::uint32_t>(euler_p_max, static_cast<std::uint32_t>(d_max)));

  std::map<std::uint64_t, std::uint64_t> nu_p;
  std::vector<bool> bad(static_cast<std::size_t>(N) + 1, false);
  for (auto p : primes_up_to(static_cast<std::uint32_t>(d_max))) {
    const auto roots = roots_mod_p2(D, p);
    nu_p[p] = roots.size();
    if (B != 0 && mpz_divisible_ui_p(B.get_mpz_t(), p)) continue;
    const std::int64_t m = static_cast<std::int64_t>(p) * p;
    for (auto r : roots) {
      std::int64_t start = N + ((static_cast<std::int64_t>(r) - N) % m + m) % m;
      for (std::int64_t t = start; t <= 2 * N; t += m) bad[static_cast<std::size_t>(t - N)] = true;
    }
  }
  for (std::uint64_t d = 1; d <= d_max; ++d) {
    if (!is_squarefree(d)) continue;
    std::uint64_t v = 1;
    for (auto p : detail::squarefree_primes(d)) v *= nu_p[p];
    rep.nu_table[d] = v;
  }

  std::vector<std::int64_t> survivors;
  for (std::int64_t t = N; t <= 2 * N; ++t)
    if (!bad[static_cast<std::size_t>(t - N)] && D.eval(t) != 0) survivors.push_back(t);
  if (!refine) {
    rep.good_t = std::move(survivors);
    return rep;
  }
  std::vector<char> keep(survivors.size(), 1);
  parallel_for(survivors.size(), [&](std::size_t i) {
    const auto fac = factorize(D.eval(survivors[i]));
    for (const auto& [p, e] : fac.prime_powers) {
      if (e < 2) continue;
      if (B != 0 && mpz_divisible_p(B.get_mpz_t(), p.get_mpz_t())) continue;
      keep[i] = 0;
      break;
    }
  });
  for (std::size_t i = 0; i < survivors.size(); ++i) {
    if (keep[i]) rep.good_t.push_back(survivors[i]);
    else ++rep.t_set_excess;
  }
  return rep;
}

inline SieveReport enumerate_good(const FamilyDef& f, std::int64_t N, std::uint64_t d_max, bool refine = true) {
  return enumerate_good(invariants(f).D, f.B, N, d_max, refine);
}

}  // namespace lowlying
