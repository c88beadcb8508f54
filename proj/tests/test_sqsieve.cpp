#include <gtest/gtest.h>

#include <numeric>

#include "lowlying/sqsieve.hpp"

using namespace lowlying;

namespace {
const IntPoly kF1{1, 9};
const IntPoly kWash{13, 60, 144};
const IntPoly kRank1 = 4 * IntPoly{1, 6}.pow(3) + IntPoly{27};
}  // namespace

TEST(Sieve, NuExamples) {
  EXPECT_EQ(nu(kF1, 2), 1u);
  EXPECT_EQ(nu(kF1, 3), 0u);
  EXPECT_EQ(nu(kF1, 1), 1u);
  EXPECT_EQ(nu(kWash, 1), 1u);
  EXPECT_THROW(nu(kF1, 4), InvalidInput);
}

TEST(Sieve, RootsMatchBruteForce) {
  for (const auto& D : {kF1, kWash, kRank1, IntPoly{0, 0, 1}, IntPoly{-1, 0, 0, 1}})
    for (auto p : primes_up_to(40)) {
      const auto roots = roots_mod_p2(D, p);
      EXPECT_EQ(roots.size(), nu_bruteforce(D, p)) << D.to_string() << " p=" << p;
      for (auto r : roots) EXPECT_EQ(D.eval_mod(r, static_cast<std::uint64_t>(p) * p), 0u);
    }
}

TEST(Sieve, NuMultiplicative) {
  for (const auto& D : {kF1, kWash, kRank1}) {
    for (std::uint64_t d = 1; d <= 50; ++d) {
      if (!is_squarefree(d)) continue;
      EXPECT_EQ(nu(D, d), nu_bruteforce(D, d)) << D.to_string() << " d=" << d;
      for (std::uint64_t e = 1; e <= 50 && d * e <= 50; ++e)
        if (is_squarefree(e) && std::gcd(d, e) == 1) EXPECT_EQ(nu(D, d * e), nu(D, d) * nu(D, e));
    }
  }
}

TEST(Sieve, GoodSetExamples) {
  const auto a = enumerate_good(preset("F1"), 4, 30, true);
  EXPECT_EQ(std::count(a.good_t.begin(), a.good_t.end(), 7), 0);
  const auto b = enumerate_good(preset("F1"), 1, 30, true);
  EXPECT_EQ(std::count(b.good_t.begin(), b.good_t.end(), 1), 1);
  const auto c = enumerate_good(preset("F1"), 1000, 30, true);
  for (auto t : c.good_t) {
    const auto fac = factorize(kF1.eval(t));
    for (const auto& [p, e] : fac.prime_powers) EXPECT_EQ(e, 1u) << t;
  }
  EXPECT_GT(c.c_F_estimate, 0.0);
  EXPECT_LE(c.c_F_estimate, 1.0);
  for (const auto& [d, v] : c.nu_table)
    for (const auto& [e, w] : c.nu_table)
      if (d * e <= 30 && std::gcd(d, e) == 1 && c.nu_table.count(d * e)) EXPECT_EQ(c.nu_table.at(d * e), v * w);
}

TEST(Sieve, UnrefinedIsSuperset) {
  const auto r = enumerate_good(preset("washington"), 300, 5, true);
  const auto u = enumerate_good(preset("washington"), 300, 5, false);
  EXPECT_EQ(u.good_t.size(), r.good_t.size() + r.t_set_excess);
}

TEST(Sieve, CardinalityConstant) {
  const double c = cardinality_constant(kF1, 1, 1000);
  EXPECT_GT(c, 0.6);
  EXPECT_LT(c, 0.7);
  EXPECT_DOUBLE_EQ(cardinality_constant(IntPoly{1}, 1, 1000), 1.0);
  EXPECT_GT(cardinality_constant(kWash, 1, 1000), 0.0);
  EXPECT_THROW(cardinality_constant(IntPoly{4, 4}, 1, 100), ZeroDensity);
  EXPECT_GT(cardinality_constant(IntPoly{4, 4}, 4, 100), 0.0);
}

TEST(Sieve, DensityMatchesEulerProduct) {
  for (const std::string name : {"F1", "washington"}) {
    const auto rep = enumerate_good(preset(name), 100000, default_d_max(100000), true);
    EXPECT_NEAR(rep.density(), rep.c_F_estimate, 0.02) << name;
  }
}
