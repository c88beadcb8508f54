#pragma once

// One-parameter families E_t : y² + a1xy + a3y = x³ + a2x² + a4x + a6 with
// a_i ∈ Z[t], their Weierstrass invariants, root-number rules, the built-in
// presets, and the JSON config format.

#include <gmpxx.h>
#include <json.hpp>

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "lowlying/common.hpp"
#include "lowlying/factor.hpp"
#include "lowlying/polyint.hpp"

namespace lowlying {

/// b- and c-invariants and discriminant; R is IntPoly or mpz_class.
template <class R>
struct Weierstrass {
  R b2, b4, b6, b8, c4, c6, disc;
};

template <class R>
Weierstrass<R> weierstrass(const R& a1, const R& a2, const R& a3, const R& a4, const R& a6) {
  Weierstrass<R> w;
  w.b2 = a1 * a1 + 4 * a2;
  w.b4 = 2 * a4 + a1 * a3;
  w.b6 = a3 * a3 + 4 * a6;
  w.b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
  w.c4 = w.b2 * w.b2 - 24 * w.b4;
  w.c6 = -(w.b2 * w.b2 * w.b2) + 36 * w.b2 * w.b4 - 216 * w.b6;
  w.disc = -(w.b2 * w.b2 * w.b8) - 8 * (w.b4 * w.b4 * w.b4) - 27 * (w.b6 * w.b6) + 9 * w.b2 * w.b4 * w.b6;
  return w;
}

/// Integer Weierstrass coefficients in the order a1, a2, a3, a4, a6.
using Curve = std::array<mpz_class, 5>;

struct SignRule {
  enum class Kind { AllEven, AllOdd, BirchStephensCubic, BirchStephensQuartic, Equidistributed };
  Kind kind = Kind::Equidistributed;
  /// Used by the Birch–Stephens rules: the D of y² = x³ − 432D² (cubic) or
  /// y² = x³ + 4Dx (quartic), as a polynomial in the family parameter.
  IntPoly D;
};

struct Reparam {
  mpz_class c = 1;
  mpz_class t0 = 0;
};

struct FamilyDef {
  std::string label;
  /// a1, a2, a3, a4, a6 in the original parameter.
  std::array<IntPoly, 5> a;
  /// Applied as t ↦ c·t + t0; everything downstream uses the new t.
  Reparam reparam;
  /// Largest square dividing D(t) for every t.
  mpz_class B = 1;
  SignRule sign_rule;
  unsigned rank = 0;
  /// In the reparametrized variable.
  std::optional<IntPoly> expected_conductor;
  bool assert_factor_degrees_le3 = false;

  /// Coefficients after reparametrization.
  std::array<IntPoly, 5> effective() const {
    std::array<IntPoly, 5> out;
    for (std::size_t i = 0; i < 5; ++i) out[i] = a[i].compose_linear(reparam.c, reparam.t0);
    return out;
  }
};

struct FamilyInvariants {
  IntPoly b2, b4, b6, b8, c4, c6, disc;
  /// radical(Δ)
  IntPoly D;
  /// gcd(radical Δ, radical c4): primes of additive reduction
  IntPoly D1;
  /// D / D1
  IntPoly D2;
  /// Irreducible factors of Δ not dividing c4 (= D2).
  IntPoly M;
};

inline FamilyInvariants invariants(const FamilyDef& f) {
  const auto e = f.effective();
  const auto w = weierstrass(e[0], e[1], e[2], e[3], e[4]);
  if (w.disc.is_zero()) throw DegenerateFamily("family '" + f.label + "' has identically zero discriminant");
  FamilyInvariants inv{w.b2, w.b4, w.b6, w.b8, w.c4, w.c6, w.disc, {}, {}, {}, {}};
  inv.D = radical(w.disc);
  inv.D1 = w.c4.is_zero() ? inv.D : gcd(inv.D, radical(w.c4));
  inv.D2 = quotient_primitive(inv.D, inv.D1);
  inv.M = inv.D2;
  return inv;
}

/// True when radical(Δ) has degree >= 4 and the config does not assert that
/// every irreducible factor has degree <= 3.
inline bool abc_flag(const FamilyDef& f) {
  return radical(invariants(f).disc).degree() >= 4 && !f.assert_factor_degrees_le3;
}

struct SurfaceClass {
  bool rational = false;
  /// 1 or 2 when rational, 0 otherwise.
  int which = 0;
  int deg_A = 0;
  int deg_B = 0;
};

/// Classify via the short model y² = x³ − 27c4·x − 54c6 over Q(t).
inline SurfaceClass is_rational_surface(const FamilyDef& f) {
  const auto e = f.effective();
  const auto w = weierstrass(e[0], e[1], e[2], e[3], e[4]);
  const IntPoly A = -27 * w.c4;
  const IntPoly Bp = -54 * w.c6;
  SurfaceClass out;
  out.deg_A = std::max(A.degree(), 0);
  out.deg_B = std::max(Bp.degree(), 0);
  const int m = std::max(3 * out.deg_A, 2 * out.deg_B);
  if (m > 0 && m < 12) {
    out.rational = true;
    out.which = 1;
  } else if (m == 12) {
    // ord_{t=0} t^12 Δ(1/t) = 12 − deg Δ for the short model's Δ.
    const IntPoly disc = -16 * (4 * A.pow(3) + 27 * Bp.pow(2));
    if (disc.degree() == 12) {
      out.rational = true;
      out.which = 2;
    }
  }
  return out;
}

/// Exact integer coefficients of E_t (t in the reparametrized variable).
inline Curve specialize(const FamilyDef& f, const mpz_class& t) {
  const auto e = f.effective();
  Curve c{e[0].eval(t), e[1].eval(t), e[2].eval(t), e[3].eval(t), e[4].eval(t)};
  if (weierstrass(c[0], c[1], c[2], c[3], c[4]).disc == 0)
    throw SingularFiber("family '" + f.label + "' is singular at t = " + t.get_str());
  return c;
}

/// Root number from the configured closed-form rule: +1, −1, or nullopt when
/// the rule's factorization precondition cannot be met.
inline std::optional<int> sign(const FamilyDef& f, const mpz_class& t,
                               std::uint64_t budget = kDefaultFactorBudget) {
  using K = SignRule::Kind;
  switch (f.sign_rule.kind) {
    case K::AllEven:
      return 1;
    case K::AllOdd:
      return -1;
    case K::Equidistributed:
      return std::nullopt;
    case K::BirchStephensCubic: {
      const mpz_class d = f.sign_rule.D.eval(t);
      if (d == 0) return std::nullopt;
      const Factorization fac = factorize(d, budget);
      if (!fac.complete()) return std::nullopt;
      int prod = 1;
      for (const auto& [p, e] : fac.prime_powers) {
        if (e >= 3) return std::nullopt;  // not cube-free
        if (p != 3 && p % 3 == 2) prod = -prod;
      }
      mpz_class r;
      mpz_fdiv_r_ui(r.get_mpz_t(), d.get_mpz_t(), 9);
      const unsigned long d9 = r.get_ui();
      const int w3 = (d9 == 1 || d9 == 8 || d9 == 3 || d9 == 6) ? -1 : 1;
      return -w3 * prod;
    }
    case K::BirchStephensQuartic: {
      const mpz_class d = f.sign_rule.D.eval(t);
      if (d == 0 || mpz_divisible_ui_p(d.get_mpz_t(), 4)) return std::nullopt;
      const Factorization fac = factorize(d, budget);
      if (!fac.complete()) return std::nullopt;
      int prod = 1;
      for (const auto& [p, e] : fac.prime_powers) {
        if (e >= 4) return std::nullopt;  // fourth power divides D
        if (p >= 3 && e == 2 && p % 4 == 3) prod = -prod;
      }
      const int w_inf = d > 0 ? -1 : 1;
      mpz_class r;
      mpz_fdiv_r_ui(r.get_mpz_t(), d.get_mpz_t(), 16);
      const unsigned long d16 = r.get_ui();
      const int w2 = (d16 == 1 || d16 == 3 || d16 == 11 || d16 == 13) ? -1 : 1;
      return w_inf * w2 * prod;
    }
  }
  return std::nullopt;
}

/// Fraction of odd-sign curves among the given t. Equidistributed rules give
/// exactly 1/2; curves whose sign is unknown are left out of the count.
struct NMinus {
  std::uint64_t odd = 0;
  std::uint64_t total = 0;
  std::uint64_t unknown = 0;
  bool equidistributed = false;
  double value() const {
    if (equidistributed) return 0.5;
    return total == 0 ? 0.0 : static_cast<double>(odd) / static_cast<double>(total);
  }
};

inline NMinus n_minus(const FamilyDef& f, const std::vector<std::int64_t>& good_t) {
  NMinus out;
  using K = SignRule::Kind;
  if (f.sign_rule.kind == K::Equidistributed) {
    out.equidistributed = true;
    return out;
  }
  if (f.sign_rule.kind == K::AllEven || f.sign_rule.kind == K::AllOdd) {
    out.total = good_t.size();
    out.odd = f.sign_rule.kind == K::AllOdd ? good_t.size() : 0;
    return out;
  }
  std::vector<int> signs(good_t.size(), 0);
  parallel_for(good_t.size(), [&](std::size_t i) {
    auto s = sign(f, mpz_class(static_cast<long>(good_t[i])));
    signs[i] = s ? *s : 0;
  });
  for (int s : signs) {
    if (s == 0) {
      ++out.unknown;
      continue;
    }
    ++out.total;
    if (s < 0) ++out.odd;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Presets

namespace detail {

inline IntPoly poly_from_strings(std::initializer_list<const char*> coeffs) {
  std::vector<mpz_class> v;
  for (const char* s : coeffs) v.emplace_back(s);
  return IntPoly(std::move(v));
}

}  // namespace detail

inline std::vector<std::string> preset_names() {
  return {"F1", "F2+", "F2-", "washington", "rank1", "rank6"};
}

/// y² = x³ − 432(9t+1)², all signs even, C(t) = 3³(9t+1)².
inline FamilyDef preset_f1() {
  FamilyDef f;
  f.label = "F1";
  f.a = {IntPoly{}, IntPoly{}, IntPoly{}, IntPoly{}, -432 * IntPoly{1, 9}.pow(2)};
  f.sign_rule = {SignRule::Kind::BirchStephensCubic, IntPoly{1, 9}};
  f.rank = 0;
  f.expected_conductor = 27 * IntPoly{1, 9}.pow(2);
  return f;
}

/// y² = x³ ± 4(4t+2)x; C(t) = 2⁶(4t+2)².
inline FamilyDef preset_f2(bool plus) {
  FamilyDef f;
  f.label = plus ? "F2+" : "F2-";
  const long s = plus ? 1 : -1;
  f.a = {IntPoly{}, IntPoly{}, IntPoly{}, s * IntPoly{8, 16}, IntPoly{}};
  f.sign_rule = {SignRule::Kind::BirchStephensQuartic, s * IntPoly{2, 4}};
  f.rank = 0;
  f.expected_conductor = 64 * IntPoly{2, 4}.pow(2);
  return f;
}

/// y² = x³ + tx² − (t+3)x + 1 with t ↦ 12t+1; odd rank for every t.
/// Primes of D(t) = 144t² + 60t + 13 divide c4 too (type II), so
/// C(t) = 2³·D(t)² for square-free D(t).
inline FamilyDef preset_washington() {
  FamilyDef f;
  f.label = "washington";
  f.a = {IntPoly{}, IntPoly{0, 1}, IntPoly{}, IntPoly{-3, -1}, IntPoly{1}};
  f.reparam = {12, 1};
  f.sign_rule = {SignRule::Kind::AllOdd, {}};
  f.rank = 1;
  f.expected_conductor = 8 * IntPoly{13, 60, 144}.pow(2);
  return f;
}

/// y² = x³ + tx² + 1 with t ↦ 6t+1; rank 1 over Q(t). Type III at 2, so
/// C(t) = 2³(4(6t+1)³ + 27) for square-free D(t).
inline FamilyDef preset_rank1() {
  FamilyDef f;
  f.label = "rank1";
  f.a = {IntPoly{}, IntPoly{0, 1}, IntPoly{}, IntPoly{}, IntPoly{1}};
  f.reparam = {6, 1};
  f.sign_rule = {SignRule::Kind::Equidistributed, {}};
  f.rank = 1;
  f.expected_conductor = 8 * (4 * IntPoly{1, 6}.pow(3) + IntPoly{27});
  f.assert_factor_degrees_le3 = true;
  return f;
}

/// The rank-6 rational surface y² = x³ + (2at−B)x² + (2bt−C)(t²+2t−A+1)x
/// + (2ct−D)(t²+2t−A+1)².
inline FamilyDef preset_rank6() {
  const mpz_class A("8916100448256000000");
  const mpz_class B("-811365140824616222208");
  const mpz_class C("26497490347321493520384");
  const mpz_class D("-343107594345448813363200");
  const mpz_class a("16660111104");
  const mpz_class b("-1603174809600");
  const mpz_class c("2149908480000");
  const IntPoly q(std::vector<mpz_class>{1 - A, 2, 1});
  FamilyDef f;
  f.label = "rank6";
  f.a = {IntPoly{}, IntPoly(std::vector<mpz_class>{-B, 2 * a}), IntPoly{},
         IntPoly(std::vector<mpz_class>{-C, 2 * b}) * q, IntPoly(std::vector<mpz_class>{-D, 2 * c}) * q * q};
  f.sign_rule = {SignRule::Kind::Equidistributed, {}};
  f.rank = 6;
  return f;
}

inline FamilyDef preset(const std::string& name) {
  if (name == "F1") return preset_f1();
  if (name == "F2+" || name == "F2plus") return preset_f2(true);
  if (name == "F2-" || name == "F2minus") return preset_f2(false);
  if (name == "washington") return preset_washington();
  if (name == "rank1") return preset_rank1();
  if (name == "rank6") return preset_rank6();
  throw InvalidInput("unknown family preset '" + name + "'");
}

// ---------------------------------------------------------------------------
// JSON config

namespace detail {

/// Machine integers stay numbers; anything wider becomes a decimal string.
inline nlohmann::ordered_json int_to_json(const mpz_class& v) {
  if (v.fits_slong_p()) return v.get_si();
  return v.get_str();
}

inline nlohmann::ordered_json poly_to_json(const IntPoly& p) {
  auto arr = nlohmann::ordered_json::array();
  for (const auto& v : p.coeffs()) arr.push_back(int_to_json(v));
  return arr;
}

inline mpz_class int_from_json(const nlohmann::ordered_json& j, const char* what) {
  try {
    if (j.is_number_integer()) return mpz_class(std::to_string(j.get<long long>()));
    if (j.is_number_unsigned()) return mpz_class(std::to_string(j.get<unsigned long long>()));
    if (j.is_string()) return mpz_class(j.get<std::string>());
  } catch (const std::invalid_argument&) {
  }
  throw InvalidInput(std::string("config: '") + what + "' must be an integer or decimal string");
}

inline IntPoly poly_from_json(const nlohmann::ordered_json& j, const char* what) {
  if (!j.is_array()) throw InvalidInput(std::string("config: '") + what + "' must be a coefficient array");
  std::vector<mpz_class> v;
  for (const auto& x : j) v.push_back(int_from_json(x, what));
  return IntPoly(std::move(v));
}

inline const char* sign_tag(SignRule::Kind k) {
  switch (k) {
    case SignRule::Kind::AllEven: return "AllEven";
    case SignRule::Kind::AllOdd: return "AllOdd";
    case SignRule::Kind::BirchStephensCubic: return "BirchStephensCubic";
    case SignRule::Kind::BirchStephensQuartic: return "BirchStephensQuartic";
    case SignRule::Kind::Equidistributed: return "Equidistributed";
  }
  return "Equidistributed";
}

}  // namespace detail

inline nlohmann::ordered_json to_json(const FamilyDef& f) {
  nlohmann::ordered_json j;
  j["label"] = f.label;
  auto a = nlohmann::ordered_json::array();
  for (const auto& p : f.a) a.push_back(detail::poly_to_json(p));
  j["a"] = a;
  j["reparam"] = {detail::int_to_json(f.reparam.c), detail::int_to_json(f.reparam.t0)};
  j["B"] = detail::int_to_json(f.B);
  nlohmann::ordered_json rule;
  rule["tag"] = detail::sign_tag(f.sign_rule.kind);
  if (f.sign_rule.kind == SignRule::Kind::BirchStephensCubic || f.sign_rule.kind == SignRule::Kind::BirchStephensQuartic)
    rule["D"] = detail::poly_to_json(f.sign_rule.D);
  j["sign_rule"] = rule;
  j["rank"] = f.rank;
  j["expected_conductor"] = f.expected_conductor ? detail::poly_to_json(*f.expected_conductor) : nlohmann::ordered_json(nullptr);
  j["assert_factor_degrees_le3"] = f.assert_factor_degrees_le3;
  return j;
}

inline FamilyDef family_from_json(const nlohmann::ordered_json& j) {
  if (!j.is_object()) throw InvalidInput("config: top level must be an object");
  FamilyDef f;
  f.label = j.value("label", std::string("custom"));
  if (!j.contains("a") || !j["a"].is_array() || j["a"].size() != 5)
    throw InvalidInput("config: 'a' must list five coefficient arrays (a1, a2, a3, a4, a6)");
  for (std::size_t i = 0; i < 5; ++i) f.a[i] = detail::poly_from_json(j["a"][i], "a");
  if (j.contains("reparam")) {
    const auto& r = j["reparam"];
    if (!r.is_array() || r.size() != 2) throw InvalidInput("config: 'reparam' must be [c, t0]");
    f.reparam.c = detail::int_from_json(r[0], "reparam");
    f.reparam.t0 = detail::int_from_json(r[1], "reparam");
    if (f.reparam.c <= 0) throw InvalidInput("config: reparam c must be positive");
  }
  if (j.contains("B")) {
    f.B = detail::int_from_json(j["B"], "B");
    if (f.B <= 0) throw InvalidInput("config: B must be positive");
  }
  if (j.contains("sign_rule")) {
    const auto& s = j["sign_rule"];
    const std::string tag = s.is_string() ? s.get<std::string>() : s.value("tag", std::string());
    using K = SignRule::Kind;
    if (tag == "AllEven") f.sign_rule.kind = K::AllEven;
    else if (tag == "AllOdd") f.sign_rule.kind = K::AllOdd;
    else if (tag == "Equidistributed") f.sign_rule.kind = K::Equidistributed;
    else if (tag == "BirchStephensCubic" || tag == "BirchStephensQuartic") {
      f.sign_rule.kind = tag == "BirchStephensCubic" ? K::BirchStephensCubic : K::BirchStephensQuartic;
      if (!s.is_object() || !s.contains("D")) throw InvalidInput("config: " + tag + " needs a 'D' polynomial");
      f.sign_rule.D = detail::poly_from_json(s["D"], "sign_rule.D");
    } else {
      throw InvalidInput("config: unknown sign_rule tag '" + tag + "'");
    }
  }
  if (j.contains("rank")) {
    if (!j["rank"].is_number_integer() || j["rank"].get<long long>() < 0)
      throw InvalidInput("config: rank must be a non-negative integer");
    f.rank = j["rank"].get<unsigned>();
  }
  if (j.contains("expected_conductor") && !j["expected_conductor"].is_null())
    f.expected_conductor = detail::poly_from_json(j["expected_conductor"], "expected_conductor");
  f.assert_factor_degrees_le3 = j.value("assert_factor_degrees_le3", false);
  return f;
}

}  // namespace lowlying
