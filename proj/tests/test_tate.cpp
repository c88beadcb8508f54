#include <gtest/gtest.h>

#include "lowlying/sqsieve.hpp"
#include "lowlying/tate.hpp"

using namespace lowlying;

namespace {

Curve curve(long a1, long a2, long a3, long a4, long a6) { return {a1, a2, a3, a4, a6}; }

/// The model with coefficients a_i·u^i.
Curve scaled(Curve c, long u) {
  const int weight[5] = {1, 2, 3, 4, 6};
  for (std::size_t i = 0; i < 5; ++i) {
    mpz_class k;
    mpz_ui_pow_ui(k.get_mpz_t(), static_cast<unsigned long>(u), weight[i]);
    c[i] *= k;
  }
  return c;
}

}  // namespace

TEST(Tate, F1LocalData) {
  const auto c = specialize(preset("F1"), 1);
  EXPECT_EQ(tate_local(c, 7).f_p, 0u);
  EXPECT_EQ(tate_local(c, 7).reduction, Reduction::Good);
  EXPECT_EQ(tate_local(c, 5).f_p, 2u);
  EXPECT_EQ(tate_local(c, 3).f_p, 3u);
}

TEST(Tate, KnownConductors) {
  EXPECT_EQ(conductor(curve(0, -1, 1, -10, -20)).C, 11);
  EXPECT_EQ(conductor(curve(0, 0, 1, -1, 0)).C, 37);
  EXPECT_EQ(conductor(curve(0, 0, 1, 0, -7)).C, 27);
  EXPECT_EQ(conductor(curve(0, 0, 0, -1, 0)).C, 32);
  EXPECT_EQ(conductor(curve(0, 0, 0, 0, 1)).C, 36);
  EXPECT_EQ(conductor(curve(0, -1, 0, -4, 4)).C, 24);
  EXPECT_EQ(conductor(curve(0, 1, 1, -2, 0)).C, 389);
  EXPECT_EQ(conductor(curve(0, 0, 1, -7, 6)).C, 5077);
  EXPECT_THROW(conductor(curve(0, 0, 0, 0, 0)), InvalidInput);
}

TEST(Tate, NonMinimalModels) {
  const auto e = curve(0, -1, 1, -10, -20);
  for (long u : {2L, 3L, 5L}) {
    const auto s = scaled(e, u);
    EXPECT_EQ(conductor(s).C, 11) << u;
    EXPECT_EQ(a_p_minimal(s, static_cast<std::uint32_t>(u)), a_p_minimal(e, static_cast<std::uint32_t>(u))) << u;
  }
  EXPECT_EQ(a_p_minimal(e, 2), -2);
  EXPECT_EQ(a_p_minimal(e, 3), -1);
  EXPECT_EQ(a_p_minimal(e, 11), 1);
}

TEST(Tate, ReductionTypeMatchesExponent) {
  for (long a4 = -6; a4 <= 6; ++a4)
    for (long a6 = -6; a6 <= 6; ++a6) {
      const auto c = curve(0, 0, 0, a4, a6);
      if (weierstrass(c[0], c[1], c[2], c[3], c[4]).disc == 0) continue;
      for (long p : {2L, 3L, 5L, 7L, 11L, 13L}) {
        const auto ld = tate_local(c, p);
        if (ld.f_p == 0) EXPECT_EQ(ld.reduction, Reduction::Good);
        if (ld.f_p == 1) EXPECT_EQ(ld.reduction, Reduction::Multiplicative);
        if (ld.f_p >= 2) EXPECT_EQ(ld.reduction, Reduction::Additive);
        if (p > 3) EXPECT_LE(ld.f_p, 2u);
        const auto m = ld.minimal_model;
        const auto w0 = weierstrass(c[0], c[1], c[2], c[3], c[4]);
        const auto w1 = weierstrass(m[0], m[1], m[2], m[3], m[4]);
        EXPECT_EQ(w0.c4 * w0.c4 * w0.c4 * w1.c6 * w1.c6, w1.c4 * w1.c4 * w1.c4 * w0.c6 * w0.c6);
      }
    }
}

TEST(Tate, FamilyConductorExamples) {
  EXPECT_EQ(conductor(preset("F1"), 1).C, 2700);
  EXPECT_EQ(conductor(preset("washington"), 0).C, 8 * 13 * 13);
  EXPECT_EQ(conductor(preset("rank1"), 0).C, 8 * 31);
  FamilyDef f;
  f.a = {IntPoly{}, IntPoly{}, IntPoly{}, IntPoly{}, IntPoly{0, 1}};
  EXPECT_THROW(conductor(f, 0), InvalidInput);
}

TEST(Tate, PresetPolynomialsOnGoodT) {
  for (const std::string name : {"F1", "F2+", "F2-", "washington", "rank1"}) {
    const auto f = preset(name);
    const auto rep = enumerate_good(f, 40, 10, true);
    int checked = 0;
    for (auto t : rep.good_t) {
      const auto c = conductor(f, mpz_class(static_cast<long>(t)));
      ASSERT_TRUE(c.complete);
      EXPECT_EQ(c.C, f.expected_conductor->eval(mpz_class(static_cast<long>(t)))) << name << " t=" << t;
      if (++checked == 15) break;
    }
    EXPECT_GE(checked, 10) << name;
  }
}
