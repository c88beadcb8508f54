#pragma once

// Empirical 1- and 2-level densities from the prime side of the explicit
// formula, averaged over the sieved family with per-curve conductors.

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "lowlying/common.hpp"
#include "lowlying/family.hpp"
#include "lowlying/modarith.hpp"
#include "lowlying/predict.hpp"
#include "lowlying/sqsieve.hpp"
#include "lowlying/tate.hpp"
#include "lowlying/testfn.hpp"

namespace lowlying {

enum class Normalization { PerCurve, AverageLogConductor };

inline const char* normalization_name(Normalization n) {
  return n == Normalization::PerCurve ? "percurve" : "avglog";
}

inline Normalization parse_normalization(const std::string& s) {
  if (s == "percurve") return Normalization::PerCurve;
  if (s == "avglog") return Normalization::AverageLogConductor;
  throw InvalidInput("unknown normalization '" + s + "' (expected percurve or avglog)");
}

struct DensityOptions {
  Normalization mode = Normalization::PerCurve;
  /// Smallest prime included in the sums.
  std::uint32_t p_min = 5;
  /// Sieve bound; 0 selects ⌈(log N)^1.5⌉.
  std::uint64_t d_max = 0;
  std::uint64_t factor_budget = kDefaultFactorBudget;
  /// Largest p for which a full table of a_t(p), t mod p, may be built.
  std::uint32_t table_limit = 200000;
  /// Replaces the family's N(F, −1) when set.
  std::optional<double> n_minus_override;
};

struct SSums {
  double S1 = 0;
  double S2 = 0;
};

/// Per-curve data: conductor, normalization and S-sums for each test function.
struct CurveTerms {
  std::int64_t t = 0;
  double log_conductor = 0;
  double L = 0;
  bool complete = true;
  std::vector<SSums> s;
};

namespace detail {

inline std::vector<double> s_terms_1(const std::vector<std::uint32_t>& primes, const std::vector<int>& a,
                                     const TestFn& g, double L) {
  std::vector<double> terms;
  for (std::size_t i = 0; i < primes.size(); ++i) {
    const double lp = std::log(static_cast<double>(primes[i]));
    const double u = lp / L;
    if (u >= g.support()) break;
    terms.push_back(u / primes[i] * g.hat(u) * a[i]);
  }
  return terms;
}

inline std::vector<double> s_terms_2(const std::vector<std::uint32_t>& primes, const std::vector<int>& a,
                                     const TestFn& g, double L) {
  std::vector<double> terms;
  for (std::size_t i = 0; i < primes.size(); ++i) {
    const double p = primes[i];
    const double lp = std::log(p);
    const double u = lp / L;
    if (2.0 * u >= g.support()) break;
    terms.push_back(u / (p * p) * g.hat(2.0 * u) * (static_cast<double>(a[i]) * a[i]));
  }
  return terms;
}

/// S1, S2 for one curve given a_t(p) over the ascending primes.
inline SSums s_sums_from(const std::vector<std::uint32_t>& primes, const std::vector<int>& a, const TestFn& g,
                         double L) {
  if (g.kind() == TestFn::Kind::Zero) return {};
  SSums out;
  out.S1 = -2.0 * pairwise_sum(s_terms_1(primes, a, g, L));
  out.S2 = -2.0 * pairwise_sum(s_terms_2(primes, a, g, L));
  return out;
}

/// Largest p with log p / L < σ (primes beyond contribute ĝ = 0).
inline std::uint32_t prime_cutoff(double sigma, double L) {
  const double x = std::exp(sigma * L);
  if (x >= 268435456.0) throw InvalidInput("prime range C(t)^sigma exceeds 2^28");
  return static_cast<std::uint32_t>(x);
}

inline bool j_constant(const FamilyInvariants& inv) {
  if (inv.c4.is_zero() || inv.c6.is_zero()) return true;
  const IntPoly P = inv.c4.pow(3);
  return (P.derivative() * inv.disc - P * inv.disc.derivative()).is_zero();
}

}  // namespace detail

/// S1 and S2 for the fiber at t, directly from a_t(p) one prime at a time.
/// L defaults to log C(t).
inline SSums s_sums(const FamilyDef& f, std::int64_t t, const TestFn& g, std::optional<double> L = std::nullopt,
                    std::uint32_t p_min = 5) {
  if (!L) {
    const auto c = conductor(f, mpz_class(static_cast<long>(t)));
    *L = std::log(c.C.get_d());
  }
  if (g.kind() == TestFn::Kind::Zero) return {};
  std::vector<std::uint32_t> primes;
  std::vector<int> a;
  for (auto p : primes_up_to(detail::prime_cutoff(g.support(), *L))) {
    if (p < p_min) continue;
    primes.push_back(p);
    const mpz_class tz(static_cast<long>(t));
    a.push_back(p <= 3 ? a_p_minimal(specialize(f, tz), p) : a_p(f, tz, p));
  }
  return detail::s_sums_from(primes, a, g, *L);
}

/// Conductors, normalizations and S-sums for every t and every test function.
inline std::vector<CurveTerms> curve_terms(const FamilyDef& f, const std::vector<std::int64_t>& ts,
                                           const std::vector<TestFn>& tests, const DensityOptions& opt) {
  const auto inv = invariants(f);
  std::vector<CurveTerms> out(ts.size());
  parallel_for(ts.size(), [&](std::size_t i) {
    const auto c = conductor(f, mpz_class(static_cast<long>(ts[i])), inv, opt.factor_budget);
    out[i].t = ts[i];
    out[i].log_conductor = std::log(c.C.get_d());
    out[i].complete = c.complete;
  });
  if (opt.mode == Normalization::AverageLogConductor && !out.empty()) {
    std::vector<double> logs(out.size());
    for (std::size_t i = 0; i < out.size(); ++i) logs[i] = out[i].log_conductor;
    const double mean = pairwise_sum(logs) / static_cast<double>(logs.size());
    for (auto& c : out) c.L = mean;
  } else {
    for (auto& c : out) c.L = c.log_conductor;
  }

  double sigma = 0.0;
  for (const auto& g : tests) sigma = std::max(sigma, g.support());
  std::vector<std::uint32_t> cut(out.size());
  std::uint32_t pmax = 0;
  for (std::size_t i = 0; i < out.size(); ++i) {
    cut[i] = detail::prime_cutoff(sigma, out[i].L);
    pmax = std::max(pmax, cut[i]);
  }
  std::vector<std::uint32_t> primes;
  for (auto p : primes_up_to(pmax))
    if (p >= opt.p_min) primes.push_back(p);

  // a[k][i] = a_{t_i}(p_k), filled where p_k <= cut[i].
  const bool jconst = detail::j_constant(inv);
  std::vector<std::vector<std::int16_t>> a(primes.size());
  parallel_for(primes.size(), [&](std::size_t k) {
    const std::uint32_t p = primes[k];
    auto& row = a[k];
    row.assign(ts.size(), 0);
    if (p <= 3) {
      for (std::size_t i = 0; i < ts.size(); ++i)
        if (p <= cut[i]) row[i] = static_cast<std::int16_t>(a_p_minimal(specialize(f, mpz_class(static_cast<long>(ts[i]))), p));
      return;
    }
    const bool table = p <= opt.table_limit && (jconst || p <= 4 * ts.size());
    if (table) {
      const auto tab = ap_table(f, p);
      for (std::size_t i = 0; i < ts.size(); ++i) {
        if (p > cut[i]) continue;
        std::int64_t r = ts[i] % static_cast<std::int64_t>(p);
        if (r < 0) r += p;
        row[i] = tab[static_cast<std::size_t>(r)];
      }
      return;
    }
    const FamilyModP fm(f, p);
    const ResidueTable chi(p);
    for (std::size_t i = 0; i < ts.size(); ++i) {
      if (p > cut[i]) continue;
      std::int64_t r = ts[i] % static_cast<std::int64_t>(p);
      if (r < 0) r += p;
      const auto tt = static_cast<std::uint64_t>(r);
      const std::uint64_t A = (p - (27 * FamilyModP::eval(fm.c4, tt, p)) % p) % p;
      const std::uint64_t B = (p - (54 * FamilyModP::eval(fm.c6, tt, p)) % p) % p;
      row[i] = static_cast<std::int16_t>(-detail::cubic_char_sum(A, B, chi));
    }
  });

  parallel_for(out.size(), [&](std::size_t i) {
    std::vector<std::uint32_t> ps;
    std::vector<int> as;
    for (std::size_t k = 0; k < primes.size() && primes[k] <= cut[i]; ++k) {
      ps.push_back(primes[k]);
      as.push_back(a[k][i]);
    }
    out[i].s.reserve(tests.size());
    for (const auto& g : tests) out[i].s.push_back(detail::s_sums_from(ps, as, g, out[i].L));
  });
  return out;
}

struct GroupRow {
  Group group;
  double d1_prediction = 0;
  double d1_residual = 0;
  std::optional<double> d2_prediction;
  std::optional<double> d2_residual;
};

struct DensityReport {
  std::string label;
  std::int64_t N = 0;
  std::string testfn1, testfn2;
  Normalization mode = Normalization::PerCurve;
  std::uint32_t p_min = 5;
  std::uint64_t d_max = 0;
  int rank = 0;
  std::uint64_t n_curves = 0;
  std::uint64_t incomplete_conductors = 0;
  double mean_log_conductor = 0;
  std::uint32_t max_prime = 0;

  double g_hat0 = 0, g0 = 0;
  double avg_S1 = 0, avg_S2 = 0;
  double D1_emp = 0;

  std::optional<double> D2_emp;
  double avg_product = 0;
  double D1_product = 0;
  double n_minus = 0;
  bool n_minus_equidistributed = false;
  std::uint64_t sign_unknown = 0;

  int conductor_degree = 0;
  bool admissible_d1 = true;
  bool admissible_d2 = true;
  bool abc = false;
  std::vector<GroupRow> groups;
  std::vector<CurveTerms> curves;

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json j;
    j["family"] = label;
    j["N"] = N;
    j["t_range"] = {N, 2 * N};
    j["testfn"] = testfn1;
    if (D2_emp) j["testfn2"] = testfn2;
    j["normalization"] = normalization_name(mode);
    j["p_min"] = p_min;
    j["d_max"] = d_max;
    j["claimed_rank"] = rank;
    j["curves"] = n_curves;
    j["incomplete_conductors"] = incomplete_conductors;
    j["mean_log_conductor"] = mean_log_conductor;
    j["max_prime"] = max_prime;
    j["D1"] = {{"g_hat_0", g_hat0}, {"g_0", g0}, {"avg_S1", avg_S1}, {"avg_S2", avg_S2}, {"D1_emp", D1_emp}};
    if (D2_emp) {
      j["D2"] = {{"avg_product", avg_product},
                 {"D1_of_product", D1_product},
                 {"n_minus", n_minus},
                 {"n_minus_equidistributed", n_minus_equidistributed},
                 {"sign_unknown", sign_unknown},
                 {"D2_emp", *D2_emp}};
    }
    auto& rows = j["predictions"] = nlohmann::ordered_json::array();
    for (const auto& g : groups) {
      nlohmann::ordered_json r;
      r["group"] = group_name(g.group);
      r["d1_prediction"] = g.d1_prediction;
      r["d1_residual"] = g.d1_residual;
      if (D2_emp) {
        r["d2_prediction"] = g.d2_prediction ? nlohmann::ordered_json(*g.d2_prediction) : nlohmann::ordered_json();
        r["d2_residual"] = g.d2_residual ? nlohmann::ordered_json(*g.d2_residual) : nlohmann::ordered_json();
      }
      rows.push_back(r);
    }
    j["flags"] = {{"conductor_degree", conductor_degree},
                  {"admissible_d1", admissible_d1},
                  {"admissible_d2", admissible_d2},
                  {"abc_flag", abc}};
    return j;
  }
};

inline int conductor_degree(const FamilyDef& f) {
  if (f.expected_conductor) return f.expected_conductor->degree();
  const auto inv = invariants(f);
  return 2 * inv.D1.degree() + inv.D2.degree();
}

/// 1-level density of g (and the 2-level density of g × g2 when given) over
/// the good t in [N, 2N].
inline DensityReport density(const FamilyDef& f, std::int64_t N, const TestFn& g, const std::optional<TestFn>& g2,
                             const DensityOptions& opt = {}) {
  if (N < 1) throw InvalidInput("density: N must be positive");
  DensityReport rep;
  rep.label = f.label;
  rep.N = N;
  rep.testfn1 = g.name();
  rep.mode = opt.mode;
  rep.p_min = opt.p_min;
  rep.rank = f.rank;
  rep.d_max = opt.d_max ? opt.d_max : default_d_max(N);
  rep.abc = abc_flag(f);
  rep.conductor_degree = conductor_degree(f);
  const double m = std::max(1, rep.conductor_degree);
  rep.admissible_d1 = g.support() < std::min(0.5, 2.0 / (3.0 * m));

  const auto sieve = enumerate_good(f, N, rep.d_max, true);
  if (sieve.good_t.empty()) throw InvalidInput("density: no good t in [N, 2N]");

  std::vector<TestFn> tests = {g};
  if (g2) {
    rep.testfn2 = g2->name();
    tests.push_back(*g2);
    tests.push_back(product_fn(g, *g2));
    rep.admissible_d2 = g.support() + g2->support() < 1.0 / (3.0 * m);
  }
  rep.curves = curve_terms(f, sieve.good_t, tests, opt);
  const auto& cs = rep.curves;
  const auto n = static_cast<double>(cs.size());
  rep.n_curves = cs.size();

  std::vector<double> logs, s1, s2;
  for (const auto& c : cs) {
    logs.push_back(c.log_conductor);
    s1.push_back(c.s[0].S1);
    s2.push_back(c.s[0].S2);
    if (!c.complete) ++rep.incomplete_conductors;
    rep.max_prime = std::max(rep.max_prime, detail::prime_cutoff(g.support(), c.L));
  }
  rep.mean_log_conductor = pairwise_sum(logs) / n;
  rep.g_hat0 = g.hat_at_zero();
  rep.g0 = g.at_zero();
  rep.avg_S1 = pairwise_sum(s1) / n;
  rep.avg_S2 = pairwise_sum(s2) / n;
  rep.D1_emp = rep.g_hat0 + rep.g0 + rep.avg_S1 + rep.avg_S2;

  if (g2) {
    const TestFn& h = tests[2];
    std::vector<double> prod, p1, p2;
    for (const auto& c : cs) {
      const double x1 = g.hat_at_zero() + g.at_zero() + c.s[0].S1 + c.s[0].S2;
      const double x2 = g2->hat_at_zero() + g2->at_zero() + c.s[1].S1 + c.s[1].S2;
      prod.push_back(x1 * x2);
      p1.push_back(c.s[2].S1);
      p2.push_back(c.s[2].S2);
    }
    rep.avg_product = pairwise_sum(prod) / n;
    rep.D1_product = h.hat_at_zero() + h.at_zero() + pairwise_sum(p1) / n + pairwise_sum(p2) / n;
    if (opt.n_minus_override) {
      rep.n_minus = *opt.n_minus_override;
    } else {
      const auto nm = n_minus(f, sieve.good_t);
      rep.n_minus = nm.value();
      rep.n_minus_equidistributed = nm.equidistributed;
      rep.sign_unknown = nm.unknown;
    }
    rep.D2_emp = rep.avg_product - 2.0 * rep.D1_product + g.at_zero() * g2->at_zero() * rep.n_minus;
  }

  for (Group G : all_groups()) {
    GroupRow row;
    row.group = G;
    row.d1_prediction = predict_d1(G, g, f.rank);
    row.d1_residual = rep.D1_emp - row.d1_prediction;
    if (g2 && g.support() + g2->support() < 1.0) {
      row.d2_prediction = predict_d2(G, g, *g2, f.rank);
      row.d2_residual = *rep.D2_emp - *row.d2_prediction;
    }
    rep.groups.push_back(row);
  }
  return rep;
}

inline DensityReport d1_empirical(const FamilyDef& f, std::int64_t N, const TestFn& g, const DensityOptions& opt = {}) {
  return density(f, N, g, std::nullopt, opt);
}

inline DensityReport d2_empirical(const FamilyDef& f, std::int64_t N, const TestFn& g1, const TestFn& g2,
                                  const DensityOptions& opt = {}) {
  return density(f, N, g1, g2, opt);
}

}  // namespace lowlying
