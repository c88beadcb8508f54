#pragma once

// Integer factorization: trial division by primes below 10^6, then
// Pollard-Brent on the remaining composites under an iteration budget.
// Primality is decided by Miller-Rabin with a fixed base set.

#include <gmpxx.h>

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "lowlying/common.hpp"

namespace lowlying {

inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

inline std::uint64_t powmod(std::uint64_t b, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  b %= m;
  while (e) {
    if (e & 1) r = mulmod(r, b, m);
    b = mulmod(b, b, m);
    e >>= 1;
  }
  return r;
}

/// Deterministic for all 64-bit inputs (bases 2..37).
inline bool is_prime_u64(std::uint64_t n) {
  if (n < 2) return false;
  static constexpr std::uint64_t small[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
  for (auto p : small) {
    if (n % p == 0) return n == p;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (auto a : small) {
    std::uint64_t x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 1; i < s; ++i) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

/// All primes <= n (Eratosthenes).
inline std::vector<std::uint32_t> primes_up_to(std::uint32_t n) {
  std::vector<std::uint32_t> out;
  if (n < 2) return out;
  std::vector<bool> composite(static_cast<std::size_t>(n) + 1, false);
  for (std::uint64_t i = 2; i <= n; ++i) {
    if (composite[i]) continue;
    out.push_back(static_cast<std::uint32_t>(i));
    for (std::uint64_t j = i * i; j <= n; j += i) composite[j] = true;
  }
  return out;
}

inline constexpr std::uint32_t kTrialDivisionBound = 1'000'000;

inline const std::vector<std::uint32_t>& trial_primes() {
  static const std::vector<std::uint32_t> primes = primes_up_to(kTrialDivisionBound);
  return primes;
}

/// Miller-Rabin with the first twelve prime bases; deterministic below
/// 3.3·10^24, probabilistic (fixed bases) above.
inline bool is_probable_prime(const mpz_class& n) {
  if (n < 2) return false;
  if (n.fits_ulong_p()) return is_prime_u64(n.get_ui());
  static constexpr unsigned long bases[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
  for (auto p : bases)
    if (mpz_divisible_ui_p(n.get_mpz_t(), p)) return false;
  mpz_class nm1 = n - 1;
  mpz_class d = nm1;
  unsigned long s = mpz_scan1(d.get_mpz_t(), 0);
  mpz_fdiv_q_2exp(d.get_mpz_t(), d.get_mpz_t(), s);
  mpz_class x;
  for (auto a : bases) {
    mpz_class base = a;
    mpz_powm(x.get_mpz_t(), base.get_mpz_t(), d.get_mpz_t(), n.get_mpz_t());
    if (x == 1 || x == nm1) continue;
    bool composite = true;
    for (unsigned long i = 1; i < s; ++i) {
      mpz_powm_ui(x.get_mpz_t(), x.get_mpz_t(), 2, n.get_mpz_t());
      if (x == nm1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

struct Factorization {
  mpz_class n;
  std::map<mpz_class, unsigned> prime_powers;
  /// Unfactored part; 1 when the factorization is complete.
  mpz_class cofactor = 1;

  bool complete() const { return cofactor == 1; }

  mpz_class product() const {
    mpz_class acc = cofactor;
    for (const auto& [p, e] : prime_powers) {
      mpz_class pe;
      mpz_pow_ui(pe.get_mpz_t(), p.get_mpz_t(), e);
      acc *= pe;
    }
    return acc;
  }
};

/// Pollard-Brent; returns a nontrivial factor or 0 when `budget`
/// iterations run out. Decrements budget by the iterations used.
inline mpz_class pollard_brent(const mpz_class& n, std::uint64_t& budget) {
  if (mpz_even_p(n.get_mpz_t())) return 2;
  for (unsigned long c = 1; budget > 0; ++c) {
    mpz_class y = 2, x, q = 1, g = 1, ys, diff;
    const std::uint64_t m = 128;
    std::uint64_t r = 1;
    auto step = [&](mpz_class& v) {
      v = v * v + c;
      mpz_mod(v.get_mpz_t(), v.get_mpz_t(), n.get_mpz_t());
    };
    while (g == 1 && budget > 0) {
      x = y;
      for (std::uint64_t i = 0; i < r; ++i) step(y);
      std::uint64_t k = 0;
      while (k < r && g == 1 && budget > 0) {
        ys = y;
        const std::uint64_t lim = std::min(m, r - k);
        for (std::uint64_t i = 0; i < lim; ++i) {
          step(y);
          diff = x - y;
          q = q * abs(diff);
          mpz_mod(q.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
        }
        budget = budget > lim ? budget - lim : 0;
        mpz_gcd(g.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
        k += lim;
      }
      r *= 2;
    }
    if (g == n) {
      // Backtrack one step at a time from the saved state.
      do {
        step(ys);
        diff = x - ys;
        mpz_gcd(g.get_mpz_t(), diff.get_mpz_t(), n.get_mpz_t());
      } while (g == 1);
    }
    if (g != 1 && g != n) return g;
  }
  return 0;
}

namespace detail {

/// Largest k >= 2 with n = r^k exactly, or 1.
inline unsigned perfect_power(const mpz_class& n, mpz_class& root) {
  if (!mpz_perfect_power_p(n.get_mpz_t()) || n < 4) return 1;
  const unsigned long bits = mpz_sizeinbase(n.get_mpz_t(), 2);
  for (unsigned long k = bits; k >= 2; --k) {
    if (mpz_root(root.get_mpz_t(), n.get_mpz_t(), k) != 0) return static_cast<unsigned>(k);
  }
  return 1;
}

}  // namespace detail

inline constexpr std::uint64_t kDefaultFactorBudget = 2'000'000;

/// Factor |n| (n != 0). Trial division runs to 10^6 unless the remaining
/// cofactor becomes prime, a perfect power, or smaller than p²; composites
/// left over go to Pollard-Brent. Exhausting the budget leaves cofactor > 1.
inline Factorization factorize(const mpz_class& n_in, std::uint64_t budget = kDefaultFactorBudget) {
  if (n_in == 0) throw InvalidInput("factorize: n must be nonzero");
  Factorization out;
  out.n = abs(n_in);
  mpz_class m = out.n;
  const auto& primes = trial_primes();
  std::size_t idx = 0;
  for (; idx < primes.size(); ++idx) {
    const unsigned long p = primes[idx];
    if (m == 1) break;
    if (m < mpz_class(p) * p) break;
    if (mpz_divisible_ui_p(m.get_mpz_t(), p)) {
      unsigned e = 0;
      while (mpz_divisible_ui_p(m.get_mpz_t(), p)) {
        mpz_divexact_ui(m.get_mpz_t(), m.get_mpz_t(), p);
        ++e;
      }
      out.prime_powers[mpz_class(p)] += e;
    }
    if ((idx & 255) == 255) {
      mpz_class root;
      if (is_probable_prime(m) || detail::perfect_power(m, root) > 1) break;
    }
  }
  // Work list of (composite-or-prime value, multiplicity).
  std::vector<std::pair<mpz_class, unsigned>> work;
  if (m > 1) work.emplace_back(m, 1);
  mpz_class unfactored = 1;
  while (!work.empty()) {
    auto [v, mult] = work.back();
    work.pop_back();
    if (v == 1) continue;
    if (is_probable_prime(v)) {
      out.prime_powers[v] += mult;
      continue;
    }
    mpz_class root;
    if (unsigned k = detail::perfect_power(v, root); k > 1) {
      work.emplace_back(root, mult * k);
      continue;
    }
    mpz_class d = pollard_brent(v, budget);
    if (d == 0) {
      mpz_class vp;
      mpz_pow_ui(vp.get_mpz_t(), v.get_mpz_t(), mult);
      unfactored *= vp;
      continue;
    }
    mpz_class other = v / d;
    work.emplace_back(d, mult);
    work.emplace_back(other, mult);
  }
  out.cofactor = unfactored;
  return out;
}

}  // namespace lowlying
