#pragma once

// Katz–Sarnak predictions for 1- and 2-level densities, rank corrections,
// quadrature cross-checks against the determinantal kernels, and numerical
// checks of the prime-sum lemmas and the Nagao rank sum.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include "lowlying/common.hpp"
#include "lowlying/factor.hpp"
#include "lowlying/family.hpp"
#include "lowlying/modarith.hpp"
#include "lowlying/testfn.hpp"

namespace lowlying {

enum class Group { SOeven, O, SOodd, Sp, U };

inline const std::vector<Group>& all_groups() {
  static const std::vector<Group> g = {Group::SOeven, Group::O, Group::SOodd, Group::Sp, Group::U};
  return g;
}

inline const char* group_name(Group g) {
  switch (g) {
    case Group::SOeven: return "SO(even)";
    case Group::O: return "O";
    case Group::SOodd: return "SO(odd)";
    case Group::Sp: return "Sp";
    case Group::U: return "U";
  }
  return "?";
}

inline Group parse_group(const std::string& s) {
  if (s == "SOeven" || s == "SO(even)" || s == "soeven") return Group::SOeven;
  if (s == "O" || s == "o") return Group::O;
  if (s == "SOodd" || s == "SO(odd)" || s == "soodd") return Group::SOodd;
  if (s == "Sp" || s == "sp" || s == "USp") return Group::Sp;
  if (s == "U" || s == "u") return Group::U;
  throw InvalidInput("unknown symmetry group '" + s + "'");
}

/// sin(πy)/(πy), 1 at 0.
inline double sine_kernel(double y) {
  const double z = std::numbers::pi * y;
  if (std::abs(z) < 1e-8) return 1.0 - z * z / 6.0;
  return std::sin(z) / z;
}

/// Absolutely continuous part of W_{1,G}(x).
inline double w1_ac(Group g, double x) {
  switch (g) {
    case Group::SOeven: return 1.0 + sine_kernel(2.0 * x);
    case Group::O: return 1.0;
    case Group::SOodd:
    case Group::Sp: return 1.0 - sine_kernel(2.0 * x);
    case Group::U: return 1.0;
  }
  return 0.0;
}

/// Mass of δ(x) in W_{1,G}.
inline double w1_delta_mass(Group g) {
  switch (g) {
    case Group::O: return 0.5;
    case Group::SOodd: return 1.0;
    default: return 0.0;
  }
}

/// Ŵ_{1,G}(u) − δ(u).
inline double w1_hat_ac(Group g, double u) {
  const double box = std::abs(u) <= 1.0 ? 1.0 : 0.0;
  switch (g) {
    case Group::SOeven: return 0.5 * box;
    case Group::O: return 0.5;
    case Group::SOodd: return 1.0 - 0.5 * box;
    case Group::Sp: return -0.5 * box;
    case Group::U: return 0.0;
  }
  return 0.0;
}

inline double predict_d1(Group g, const TestFn& f, int r = 0) {
  if (r < 0) throw InvalidInput("predict_d1: rank must be non-negative");
  const double f0 = f.at_zero();
  const double box = f.hat_integral(-1.0, 1.0);
  double term = 0.0;
  switch (g) {
    case Group::SOeven: term = 0.5 * box; break;
    case Group::O: term = 0.5 * f0; break;
    case Group::SOodd: term = -0.5 * box + f0; break;
    case Group::Sp: term = -0.5 * box; break;
    case Group::U: term = 0.0; break;
  }
  return f.hat_at_zero() + term + r * f0;
}

/// Contribution of r family zeros at the central point to the 2-level density.
inline double rank_terms_d2(const TestFn& f1, const TestFn& f2, int r) {
  const double rr = r;
  return (rr * rr - rr) * f1.at_zero() * f2.at_zero() + rr * f1.hat_at_zero() * f2.at_zero() +
         rr * f1.at_zero() * f2.hat_at_zero();
}

inline void check_d2_support(const TestFn& f1, const TestFn& f2) {
  if (f1.support() + f2.support() >= 1.0)
    throw InvalidInput("2-level prediction needs supp(f̂1) + supp(f̂2) < 1");
}

/// Orthogonal-type 2-level density with odd-sign fraction c (0, ½, 1 for
/// SO(even), O, SO(odd)), plus rank terms.
inline double predict_d2_c(double c, const TestFn& f1, const TestFn& f2, int r = 0) {
  check_d2_support(f1, f2);
  const auto F = functionals(f1, f2);
  const double prod0 = F.f1_0 * F.f2_0;
  return (F.f1_hat0 + 0.5 * F.f1_0) * (F.f2_hat0 + 0.5 * F.f2_0) + 2.0 * F.I_abs - 2.0 * F.P0 - prod0 + c * prod0 +
         rank_terms_d2(f1, f2, r);
}

inline double predict_d2_sp(const TestFn& f1, const TestFn& f2, int r = 0) {
  check_d2_support(f1, f2);
  const auto F = functionals(f1, f2);
  const double prod0 = F.f1_0 * F.f2_0;
  return (F.f1_hat0 + 0.5 * F.f1_0) * (F.f2_hat0 + 0.5 * F.f2_0) + 2.0 * F.I_abs - 2.0 * F.P0 - prod0 -
         F.f1_0 * F.f2_hat0 - F.f1_hat0 * F.f2_0 + 2.0 * prod0 + rank_terms_d2(f1, f2, r);
}

inline double predict_d2_u(const TestFn& f1, const TestFn& f2) {
  check_d2_support(f1, f2);
  const auto F = functionals(f1, f2);
  return F.f1_hat0 * F.f2_hat0 + F.I_abs - F.P0;
}

inline double predict_d2(Group g, const TestFn& f1, const TestFn& f2, int r = 0) {
  switch (g) {
    case Group::SOeven: return predict_d2_c(0.0, f1, f2, r);
    case Group::O: return predict_d2_c(0.5, f1, f2, r);
    case Group::SOodd: return predict_d2_c(1.0, f1, f2, r);
    case Group::Sp: return predict_d2_sp(f1, f2, r);
    case Group::U: return predict_d2_u(f1, f2) + rank_terms_d2(f1, f2, r);
  }
  return 0.0;
}

/// Density with the r family zeros removed.
inline double predict_d2_nonfamily(Group g, const TestFn& f1, const TestFn& f2) { return predict_d2(g, f1, f2, 0); }

// ---------------------------------------------------------------------------
// Kernel cross-checks

struct KernelQuadrature {
  /// Half-width of the truncated x-domain for 1-level integrals.
  double X1 = 4000.0;
  /// Half-width of the truncated domain for 2-level integrals.
  double X2 = 80.0;
  double panel = 0.5;
};

namespace detail {

/// ∫ f(x) (1 + ε S(2x)) dx by x-side quadrature.
inline double a_eps(const TestFn& f, int eps, const KernelQuadrature& q) {
  double X = q.X1;
  if (f.kind() == TestFn::Kind::Fejer) X = std::ceil(X * f.sigma()) / f.sigma();
  const double body = integrate_panels([&](double x) { return f(x) * (1.0 + eps * sine_kernel(2.0 * x)); }, X,
                                       q.panel / std::max(1.0, f.support()));
  return body + f.x_tail(X);
}

/// Nodes and weights of composite 10-point Gauss–Legendre on [lo, hi].
inline void panel_nodes(double lo, double hi, double width, std::vector<double>& x, std::vector<double>& w) {
  const auto& gl = GaussLegendre::get(10);
  const auto n = static_cast<std::size_t>(std::ceil((hi - lo) / width));
  const double step = (hi - lo) / static_cast<double>(n);
  x.clear();
  w.clear();
  for (std::size_t i = 0; i < n; ++i) {
    const double mid = lo + step * (static_cast<double>(i) + 0.5);
    for (std::size_t k = 0; k < gl.x.size(); ++k) {
      x.push_back(mid + 0.5 * step * gl.x[k]);
      w.push_back(0.5 * step * gl.w[k]);
    }
  }
}

/// ∫∫ f1(x1) f2(x2) S(x1 − x2)² via s = x1 − x2 and the inner correlation.
inline double b_term(const TestFn& f1, const TestFn& f2, const KernelQuadrature& q) {
  std::vector<double> xs, xw, ss, sw;
  panel_nodes(-q.X2, q.X2, q.panel, xs, xw);
  panel_nodes(0.0, 2.0 * q.X2, q.panel, ss, sw);
  std::vector<double> f1x(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) f1x[i] = f1(xs[i]);
  std::vector<double> rows(ss.size());
  parallel_for(ss.size(), [&](std::size_t j) {
    std::vector<double> terms(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) terms[i] = xw[i] * f1x[i] * f2(xs[i] - ss[j]);
    const double k = sine_kernel(ss[j]);
    rows[j] = 2.0 * sw[j] * k * k * pairwise_sum(terms);
  });
  return pairwise_sum(rows);
}

/// ∫∫ f1(x1) f2(x2) S(x1 − x2) S(x1 + x2) on the (s, w) = (x1 − x2, x1 + x2)
/// grid, Jacobian ½.
inline double c_term(const TestFn& f1, const TestFn& f2, const KernelQuadrature& q) {
  std::vector<double> ns, wts;
  panel_nodes(-2.0 * q.X2, 2.0 * q.X2, q.panel, ns, wts);
  std::vector<double> kern(ns.size());
  for (std::size_t i = 0; i < ns.size(); ++i) kern[i] = wts[i] * sine_kernel(ns[i]);
  std::vector<double> rows(ns.size());
  parallel_for(ns.size(), [&](std::size_t j) {
    const double w = ns[j];
    std::vector<double> terms(ns.size());
    for (std::size_t i = 0; i < ns.size(); ++i) {
      const double s = ns[i];
      terms[i] = kern[i] * f1(0.5 * (s + w)) * f2(0.5 * (w - s));
    }
    rows[j] = 0.5 * kern[j] * pairwise_sum(terms);
  });
  return pairwise_sum(rows);
}

}  // namespace detail

/// |∫ f W_{1,G} dx − predict_d1(G, f, 0)| with the δ mass added as f(0).
inline double kernel_crosscheck(Group g, const TestFn& f, const KernelQuadrature& q = {}) {
  int eps = 0;
  if (g == Group::SOeven) eps = 1;
  if (g == Group::SOodd || g == Group::Sp) eps = -1;
  const double quad = detail::a_eps(f, eps, q) + w1_delta_mass(g) * f.at_zero();
  return std::abs(quad - predict_d1(g, f, 0));
}

struct Crosscheck2 {
  double quadrature = 0;
  double prediction = 0;
  double residual = 0;
};

/// ∫∫ f1(x1) f2(x2) W_{2,G}(x1, x2) from the determinantal kernel, with the
/// SO(odd) δ(x_k) terms integrated out, against predict_d2(G, f1, f2, 0).
inline Crosscheck2 kernel_crosscheck(Group g, const TestFn& f1, const TestFn& f2, const KernelQuadrature& q = {}) {
  const double B = detail::b_term(f1, f2, q);
  auto even = [&](double C) {
    return detail::a_eps(f1, 1, q) * detail::a_eps(f2, 1, q) - 2.0 * B - 2.0 * C;
  };
  auto odd = [&](double C) {
    const double a1 = detail::a_eps(f1, -1, q), a2 = detail::a_eps(f2, -1, q);
    return a1 * a2 - 2.0 * B + 2.0 * C + f1.at_zero() * a2 + f2.at_zero() * a1;
  };
  Crosscheck2 out;
  switch (g) {
    case Group::U: out.quadrature = detail::a_eps(f1, 0, q) * detail::a_eps(f2, 0, q) - B; break;
    case Group::SOeven: out.quadrature = even(detail::c_term(f1, f2, q)); break;
    case Group::SOodd: out.quadrature = odd(detail::c_term(f1, f2, q)); break;
    case Group::O: {
      const double C = detail::c_term(f1, f2, q);
      out.quadrature = 0.5 * (even(C) + odd(C));
      break;
    }
    case Group::Sp: {
      const double a1 = detail::a_eps(f1, -1, q), a2 = detail::a_eps(f2, -1, q);
      out.quadrature = a1 * a2 - 2.0 * B + 2.0 * detail::c_term(f1, f2, q);
      break;
    }
  }
  out.prediction = predict_d2(g, f1, f2, 0);
  out.residual = std::abs(out.quadrature - out.prediction);
  return out;
}

// ---------------------------------------------------------------------------
// Prime sums

struct PrimeSumResult {
  double value = 0;
  double target = 0;
  double gap = 0;
};

inline std::uint64_t euler_phi(std::uint64_t m) {
  std::uint64_t out = m;
  for (std::uint64_t p = 2; p * p <= m; ++p) {
    if (m % p) continue;
    while (m % p == 0) m /= p;
    out -= out / p;
  }
  if (m > 1) out -= out / m;
  return out;
}

/// (1/log C) Σ_{p ≡ b (m)} (log p / p) F̂(a log p / log C) against F(0)/(2aφ(m)).
inline PrimeSumResult primesum_check(double a, std::uint64_t m, std::uint64_t b, double C_N, const TestFn& F) {
  if (!(C_N >= 1000.0)) throw InvalidInput("primesum_check: C_N must be at least 1000");
  if (!(a > 0) || m == 0) throw InvalidInput("primesum_check: need a > 0 and m >= 1");
  const double L = std::log(C_N);
  const double pmax = std::exp(F.support() * L / a);
  if (pmax > 4e9) throw InvalidInput("primesum_check: prime range too large");
  std::vector<double> terms;
  for (auto p : primes_up_to(static_cast<std::uint32_t>(pmax))) {
    if (p % m != b % m) continue;
    const double lp = std::log(static_cast<double>(p));
    terms.push_back(lp / p * F.hat(a * lp / L));
  }
  PrimeSumResult out;
  out.value = pairwise_sum(terms) / L;
  out.target = F.at_zero() / (2.0 * a * static_cast<double>(euler_phi(m)));
  out.gap = std::abs(out.value - out.target);
  return out;
}

/// 4 Σ_p (log² p / log² M)(1/p) f̂1 f̂2(log p / log M) against 2∫|u| f̂1 f̂2.
inline PrimeSumResult primesum_check_two(double M, const TestFn& f1, const TestFn& f2) {
  if (!(M >= 1000.0)) throw InvalidInput("primesum_check_two: M must be at least 1000");
  const double L = std::log(M);
  const double pmax = std::exp(std::min(f1.support(), f2.support()) * L);
  if (pmax > 4e9) throw InvalidInput("primesum_check_two: prime range too large");
  std::vector<double> terms;
  for (auto p : primes_up_to(static_cast<std::uint32_t>(pmax))) {
    const double lp = std::log(static_cast<double>(p));
    const double u = lp / L;
    terms.push_back(4.0 * u * u / p * f1.hat(u) * f2.hat(u));
  }
  PrimeSumResult out;
  out.value = pairwise_sum(terms);
  out.target = 2.0 * integral_abs_u(f1, f2);
  out.gap = std::abs(out.value - out.target);
  return out;
}

// ---------------------------------------------------------------------------
// Nagao / Rosen–Silverman rank sum

/// θ(X)/X with θ(X) = Σ_{p ≤ X} log p.
inline double theta_ratio(std::uint32_t X) {
  std::vector<double> terms;
  for (auto p : primes_up_to(X)) terms.push_back(std::log(static_cast<double>(p)));
  return pairwise_sum(terms) / X;
}

/// −(1/X) Σ_{p ≤ X} (A1(p)/p) log p.
inline double nagao_estimate(const FamilyDef& f, std::uint32_t X) {
  const auto primes = primes_up_to(X);
  std::vector<double> terms(primes.size());
  parallel_for(primes.size(), [&](std::size_t i) {
    const auto p = primes[i];
    std::int64_t A1 = 0;
    if (p <= 3) {
      for (auto a : ap_table(f, p)) A1 += a;
    } else {
      A1 = moment_sum(f, p, 1);
    }
    terms[i] = -static_cast<double>(A1) / p * std::log(static_cast<double>(p));
  });
  return pairwise_sum(terms) / X;
}

/// Mean of −A1(p)/p over primes lo < p <= hi.
inline double mean_first_moment_ratio(const FamilyDef& f, std::uint32_t lo, std::uint32_t hi) {
  std::vector<std::uint32_t> primes;
  for (auto p : primes_up_to(hi))
    if (p > lo && p > 3) primes.push_back(p);
  if (primes.empty()) throw InvalidInput("mean_first_moment_ratio: empty prime range");
  std::vector<double> terms(primes.size());
  parallel_for(primes.size(), [&](std::size_t i) {
    terms[i] = -static_cast<double>(moment_sum(f, primes[i], 1)) / primes[i];
  });
  return pairwise_sum(terms) / static_cast<double>(primes.size());
}

}  // namespace lowlying
