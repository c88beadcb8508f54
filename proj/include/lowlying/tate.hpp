#pragma once

// Tate's algorithm (Silverman, Advanced Topics IV.9.4) for the local
// conductor exponent, Kodaira symbol and a p-minimal model, and the global
// conductor C(t) of a family fiber.

#include <gmpxx.h>

#include <array>
#include <optional>
#include <stdexcept>
#include <string>

#include "lowlying/common.hpp"
#include "lowlying/factor.hpp"
#include "lowlying/family.hpp"
#include "lowlying/modarith.hpp"

namespace lowlying {

enum class Reduction { Good, Multiplicative, Additive };

inline const char* reduction_name(Reduction r) {
  switch (r) {
    case Reduction::Good: return "good";
    case Reduction::Multiplicative: return "multiplicative";
    case Reduction::Additive: return "additive";
  }
  return "?";
}

struct LocalData {
  mpz_class p;
  unsigned f_p = 0;
  Reduction reduction = Reduction::Good;
  std::string kodaira;
  Curve minimal_model;
};

namespace detail {

inline unsigned valuation(const mpz_class& n, const mpz_class& p) {
  if (n == 0) return std::numeric_limits<unsigned>::max();
  mpz_class m = n;
  return static_cast<unsigned>(mpz_remove(m.get_mpz_t(), m.get_mpz_t(), p.get_mpz_t()));
}

inline bool divides(const mpz_class& d, const mpz_class& n) { return mpz_divisible_p(n.get_mpz_t(), d.get_mpz_t()) != 0; }

inline mpz_class mod(const mpz_class& a, const mpz_class& m) {
  mpz_class r;
  mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
  return r;
}

inline mpz_class inverse(const mpz_class& a, const mpz_class& m) {
  mpz_class r;
  if (mpz_invert(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t()) == 0) throw std::logic_error("tate: non-invertible");
  return r;
}

/// (x, y) = (x' + r, y' + s·x' + t) with u = 1.
inline void rst(Curve& a, const mpz_class& r, const mpz_class& s, const mpz_class& t) {
  const auto [a1, a2, a3, a4, a6] = a;
  a[0] = a1 + 2 * s;
  a[1] = a2 - s * a1 + 3 * r - s * s;
  a[2] = a3 + r * a1 + 2 * t;
  a[3] = a4 - s * a3 + 2 * r * a2 - (t + r * s) * a1 + 3 * r * r - 2 * s * t;
  a[4] = a6 + r * a4 + r * r * a2 + r * r * r - t * a3 - t * t - r * t * a1;
}

/// Exact division of every a_i by p^i.
inline void scale_down(Curve& a, const mpz_class& p) {
  static constexpr unsigned w[5] = {1, 2, 3, 4, 6};
  for (std::size_t i = 0; i < 5; ++i) {
    mpz_class pw;
    mpz_pow_ui(pw.get_mpz_t(), p.get_mpz_t(), w[i]);
    mpz_divexact(a[i].get_mpz_t(), a[i].get_mpz_t(), pw.get_mpz_t());
  }
}

/// Roots in F_p of T³ + a T² + b T + c with multiplicities; p <= 3 only.
inline std::vector<std::pair<long, int>> small_cubic_roots(long a, long b, long c, long p) {
  std::vector<std::pair<long, int>> out;
  for (long x = 0; x < p; ++x) {
    // Synthetic division by (T − x) until the remainder is nonzero.
    std::vector<long> q = {1, a, b, c};
    int mult = 0;
    while (q.size() > 1) {
      std::vector<long> nq(q.size() - 1);
      long acc = 0;
      for (std::size_t i = 0; i + 1 < q.size(); ++i) {
        acc = ((acc * x + q[i]) % p + p) % p;
        nq[i] = acc;
      }
      const long rem = ((acc * x + q.back()) % p + p) % p;
      if (rem != 0) break;
      ++mult;
      q = std::move(nq);
    }
    if (mult > 0) out.emplace_back(x, mult);
  }
  return out;
}

enum class CubicShape { Distinct, Double, Triple };

/// Root structure of T³ + a T² + b T + c over F̄_p; for a repeated root
/// also returns it in [0, p).
inline CubicShape cubic_shape(const mpz_class& a, const mpz_class& b, const mpz_class& c, const mpz_class& p,
                              mpz_class& root) {
  if (p <= 3) {
    const long pl = p.get_si();
    for (auto [x, m] : small_cubic_roots(mod(a, p).get_si(), mod(b, p).get_si(), mod(c, p).get_si(), pl)) {
      if (m >= 2) {
        root = x;
        return m == 3 ? CubicShape::Triple : CubicShape::Double;
      }
    }
    return CubicShape::Distinct;
  }
  const mpz_class disc = a * a * b * b - 4 * b * b * b - 4 * a * a * a * c - 27 * c * c + 18 * a * b * c;
  if (!divides(p, disc)) return CubicShape::Distinct;
  const mpz_class h = a * a - 3 * b;
  if (divides(p, h)) {
    root = mod(-a * inverse(3, p), p);
    return CubicShape::Triple;
  }
  root = mod((9 * c - a * b) * inverse(mod(2 * h, p), p), p);
  return CubicShape::Double;
}

/// The double root in F_p of A X² + B X + C (disc ≡ 0, A ≢ 0).
inline mpz_class quadratic_double_root(const mpz_class& A, const mpz_class& B, const mpz_class& C, const mpz_class& p) {
  if (p <= 3) {
    for (long x = 0; x < p.get_si(); ++x)
      if (divides(p, (A * x + B) * x + C)) return x;
    throw std::logic_error("tate: expected a root");
  }
  return mod(-B * inverse(mod(2 * A, p), p), p);
}

}  // namespace detail

/// Local data at the prime p for the integral model a = [a1, a2, a3, a4, a6].
inline LocalData tate_local(const Curve& a_in, const mpz_class& p) {
  using namespace detail;
  if (p < 2 || !is_probable_prime(p)) throw InvalidInput("tate_local: p must be prime");
  Curve a = a_in;
  const mpz_class p2 = p * p;
  const mpz_class p3 = p2 * p;
  const mpz_class p4 = p2 * p2;
  for (;;) {
    auto w = weierstrass(a[0], a[1], a[2], a[3], a[4]);
    if (w.disc == 0) throw InvalidInput("tate_local: singular curve");
    const unsigned n = valuation(w.disc, p);
    LocalData out;
    out.p = p;
    auto finish = [&](unsigned f, Reduction red, std::string sym) {
      out.f_p = f;
      out.reduction = red;
      out.kodaira = std::move(sym);
      out.minimal_model = a;
      return out;
    };
    if (n == 0) return finish(0, Reduction::Good, "I0");

    // Move the singular point of the reduction to (0, 0).
    if (p <= 3) {
      const long pl = p.get_si();
      bool found = false;
      for (long x = 0; x < pl && !found; ++x) {
        for (long y = 0; y < pl && !found; ++y) {
          const mpz_class X = x, Y = y;
          const mpz_class F = Y * Y + a[0] * X * Y + a[2] * Y - X * X * X - a[1] * X * X - a[3] * X - a[4];
          const mpz_class Fx = a[0] * Y - 3 * X * X - 2 * a[1] * X - a[3];
          const mpz_class Fy = 2 * Y + a[0] * X + a[2];
          if (divides(p, F) && divides(p, Fx) && divides(p, Fy)) {
            rst(a, X, 0, Y);
            found = true;
          }
        }
      }
      if (!found) throw std::logic_error("tate: no singular point");
    } else {
      mpz_class r;
      if (divides(p, w.c4)) r = mod(-w.b2 * inverse(12, p), p);
      else r = mod(-(w.c6 + w.b2 * w.c4) * inverse(mod(12 * w.c4, p), p), p);
      const mpz_class t = mod(-(a[0] * r + a[2]) * inverse(2, p), p);
      rst(a, r, 0, t);
    }
    w = weierstrass(a[0], a[1], a[2], a[3], a[4]);

    if (!divides(p, w.c4)) return finish(1, Reduction::Multiplicative, "I" + std::to_string(n));
    if (!divides(p2, a[4])) return finish(n, Reduction::Additive, "II");
    if (!divides(p3, w.b8)) return finish(n - 1, Reduction::Additive, "III");
    if (!divides(p3, w.b6)) return finish(n - 2, Reduction::Additive, "IV");

    // Arrange p | a1, a2; p² | a3, a4; p³ | a6.
    {
      bool done = false;
      if (p <= 3) {
        const long pl = p.get_si();
        for (long s = 0; s < pl && !done; ++s) {
          for (long t = 0; t < pl * pl && !done; ++t) {
            Curve b = a;
            rst(b, 0, s, t);
            if (divides(p, b[0]) && divides(p, b[1]) && divides(p2, b[2]) && divides(p2, b[3]) && divides(p3, b[4])) {
              a = b;
              done = true;
            }
          }
        }
      } else {
        const mpz_class s = mod(-a[0] * inverse(2, p), p);
        const mpz_class t = mod(-a[2] * inverse(2, p2), p2);
        rst(a, 0, s, t);
        done = divides(p, a[0]) && divides(p, a[1]) && divides(p2, a[2]) && divides(p2, a[3]) && divides(p3, a[4]);
      }
      if (!done) throw std::logic_error("tate: translation to p-divisible form failed");
    }

    mpz_class root;
    const auto shape = cubic_shape(a[1] / p, a[3] / p2, a[4] / p3, p, root);
    if (shape == CubicShape::Distinct) return finish(n - 4, Reduction::Additive, "I0*");

    if (shape == CubicShape::Double) {
      rst(a, root * p, 0, 0);
      unsigned ix = 3, iy = 3;
      mpz_class mx = p2, my = p2;
      for (;;) {
        mpz_class a2t = a[1] / p, a3t = a[2] / my, a4t = a[3] / (p * mx), a6t = a[4] / (mx * my);
        if (!divides(p, a3t * a3t + 4 * a6t)) break;
        rst(a, 0, 0, my * quadratic_double_root(1, a3t, -a6t, p));
        my *= p;
        ++iy;
        a2t = a[1] / p;
        a4t = a[3] / (p * mx);
        a6t = a[4] / (mx * my);
        if (!divides(p, a4t * a4t - 4 * a2t * a6t)) break;
        rst(a, mx * quadratic_double_root(a2t, a4t, a6t, p), 0, 0);
        mx *= p;
        ++ix;
      }
      const unsigned m = ix + iy - 5;
      return finish(n - 4 - m, Reduction::Additive, "I" + std::to_string(m) + "*");
    }

    rst(a, root * p, 0, 0);
    {
      const mpz_class a3t = a[2] / p2, a6t = a[4] / p4;
      if (!divides(p, a3t * a3t + 4 * a6t)) return finish(n - 6, Reduction::Additive, "IV*");
      rst(a, 0, 0, p2 * quadratic_double_root(1, a3t, -a6t, p));
    }
    if (!divides(p4, a[3])) return finish(n - 7, Reduction::Additive, "III*");
    if (!divides(p4 * p2, a[4])) return finish(n - 8, Reduction::Additive, "II*");
    scale_down(a, p);
  }
}

/// a_p of the curve itself: p + 1 − #E(F_p) on a model minimal at p, so
/// 1, −1, 0 for split, non-split and additive reduction.
inline int a_p_minimal(const Curve& a, std::uint32_t p) {
  const auto ld = tate_local(a, mpz_class(p));
  std::array<std::uint64_t, 5> r{};
  for (std::size_t i = 0; i < 5; ++i) r[i] = detail::mod(ld.minimal_model[i], mpz_class(p)).get_ui();
  return detail::trace_by_enumeration(r, p);
}

struct ConductorResult {
  mpz_class C;
  bool complete = true;
  /// Unfactored part of the bad-prime support (1 when complete).
  mpz_class cofactor = 1;
};

/// Conductor of the integral model a; bad primes come from factoring
/// `support`, whose prime divisors must be exactly those of Δ. A leftover
/// cofactor is assumed square-free with multiplicative reduction.
inline ConductorResult conductor_of(const Curve& a, const mpz_class& support,
                                    std::uint64_t budget = kDefaultFactorBudget) {
  const auto fac = factorize(support, budget);
  ConductorResult out;
  out.C = 1;
  for (const auto& [q, e] : fac.prime_powers) {
    const auto ld = tate_local(a, q);
    mpz_class pw;
    mpz_pow_ui(pw.get_mpz_t(), q.get_mpz_t(), ld.f_p);
    out.C *= pw;
  }
  if (!fac.complete()) {
    out.complete = false;
    out.cofactor = fac.cofactor;
    out.C *= fac.cofactor;
  }
  return out;
}

inline ConductorResult conductor(const Curve& a, std::uint64_t budget = kDefaultFactorBudget) {
  const auto w = weierstrass(a[0], a[1], a[2], a[3], a[4]);
  if (w.disc == 0) throw InvalidInput("conductor: singular curve");
  return conductor_of(a, w.disc, budget);
}

/// C(t) for the fiber at t. The bad primes are read off content(Δ)·D(t),
/// which has the same prime support as Δ(t) but far smaller size.
inline ConductorResult conductor(const FamilyDef& f, const mpz_class& t, const FamilyInvariants& inv,
                                 std::uint64_t budget = kDefaultFactorBudget) {
  Curve a;
  try {
    a = specialize(f, t);
  } catch (const SingularFiber& e) {
    throw InvalidInput(e.what());
  }
  const mpz_class support = inv.disc.content() * inv.D.eval(t);
  return conductor_of(a, support, budget);
}

inline ConductorResult conductor(const FamilyDef& f, const mpz_class& t, std::uint64_t budget = kDefaultFactorBudget) {
  return conductor(f, t, invariants(f), budget);
}

}  // namespace lowlying
