#include <gtest/gtest.h>

#include "lowlying/modarith.hpp"

using namespace lowlying;

TEST(ModArith, Legendre) {
  EXPECT_EQ(legendre(2, 7), 1);
  EXPECT_EQ(legendre(0, 5), 0);
  for (std::uint32_t p : {3u, 5u, 7u, 101u, 9973u}) EXPECT_EQ(legendre(1, p), 1);
  EXPECT_EQ(legendre(-1, 7), -1);
  EXPECT_THROW(legendre(2, 9), InvalidInput);
  for (std::uint32_t p : {11u, 13u, 101u}) {
    for (std::int64_t a = -30; a < 30; ++a) EXPECT_EQ(jacobi(a, p), legendre(a, p));
  }
}

TEST(ModArith, ApSmallCurve) {
  FamilyDef f;
  f.a = {IntPoly{}, IntPoly{}, IntPoly{}, IntPoly{}, IntPoly{2}};
  EXPECT_EQ(a_p(f, 0, 7), -1);
}

TEST(ModArith, VanishingTraces) {
  const auto f1 = preset("F1");
  const auto f2 = preset("F2+");
  for (auto p : primes_up_to(200)) {
    if (p <= 3) continue;
    for (long t = 0; t < 12; ++t) {
      if (p % 3 == 2) EXPECT_EQ(a_p(f1, t, p), 0);
      if (p % 4 == 3) EXPECT_EQ(a_p(f2, t, p), 0);
    }
  }
}

TEST(ModArith, TableMatchesPointwise) {
  for (const auto& name : preset_names()) {
    const auto f = preset(name);
    for (std::uint32_t p : {2u, 3u, 5u, 7u, 13u, 31u, 61u}) {
      const auto tab = ap_table(f, p);
      for (std::uint32_t t = 0; t < p; ++t) EXPECT_EQ(tab[t], a_p(f, t, p)) << name << " p=" << p << " t=" << t;
    }
  }
}

TEST(ModArith, ApMatchesEnumeration) {
  const auto f = preset("rank6");
  const FamilyModP fm(f, 23);
  for (std::uint64_t t = 0; t < 23; ++t) {
    std::array<std::uint64_t, 5> a{};
    for (std::size_t i = 0; i < 5; ++i) a[i] = FamilyModP::eval(fm.a[i], t, 23);
    EXPECT_EQ(a_p(f, t, 23), detail::trace_by_enumeration(a, 23)) << t;
  }
}

TEST(ModArith, MomentExamples) {
  EXPECT_EQ(moment_sum(preset("F1"), 7, 2), 84);
  EXPECT_EQ(moment_sum(preset("rank1"), 7, 1), -7);
  for (std::uint32_t p : {7u, 11u, 19u, 23u}) EXPECT_EQ(moment_sum(preset("washington"), p, 1), 0);
}

TEST(ModArith, ClosedFormsThrough199) {
  for (const std::string name : {"F1", "F2+", "F2-", "washington", "rank1"}) {
    const auto f = preset(name);
    const auto tab = moment_table(f, 199, true);
    for (const auto& r : tab.rows) {
      const auto cf = closed_form(name, r.p);
      if (cf.A1) EXPECT_EQ(r.A1, *cf.A1) << name << " p=" << r.p;
      if (cf.A2) EXPECT_EQ(r.A2, *cf.A2) << name << " p=" << r.p;
    }
  }
}

TEST(ModArith, HasseBounds) {
  const auto tab = moment_table(preset("rank6"), 150, true);
  for (const auto& r : tab.rows) {
    const double p = r.p;
    EXPECT_LE(std::abs(static_cast<double>(r.A1)), p * 2.0 * std::sqrt(p));
    EXPECT_LE(static_cast<double>(r.A2), p * 4.0 * p);
  }
}

TEST(ModArith, ProductMoment) {
  EXPECT_EQ(product_moment(preset("F1"), {5, 7}, {1, 1}), 0);
  EXPECT_EQ(product_moment(preset("rank1"), {7, 13}, {1, 1}), 91);
  EXPECT_EQ(product_moment_brute(preset("rank1"), {7, 13}, {1, 1}), 91);
  EXPECT_EQ(product_moment(preset("washington"), {11}, {2}), moment_sum(preset("washington"), 11, 2));
  EXPECT_EQ(product_moment(preset("F2+"), {5, 13}, {2, 1}), product_moment_brute(preset("F2+"), {5, 13}, {2, 1}));
  EXPECT_THROW(product_moment(preset("F1"), {7, 7}, {1, 1}), InvalidInput);
}

TEST(ModArith, CubeResidue) {
  EXPECT_EQ(cube_residue_indicator(2, 31), 1);
  EXPECT_EQ(cube_residue_indicator(1, 7), 1);
  EXPECT_EQ(cube_residue_indicator(2, 7), 0);
  EXPECT_THROW(cube_residue_indicator(2, 11), InvalidInput);
}

TEST(ModArith, FirstMomentFastPathAgrees) {
  for (const auto& name : preset_names()) {
    const auto f = preset(name);
    for (std::uint32_t p : {5u, 7u, 11u, 101u}) {
      std::int64_t brute = 0;
      for (std::uint32_t t = 0; t < p; ++t) brute += a_p(f, t, p);
      EXPECT_EQ(moment_sum(f, p, 1), brute) << name << " p=" << p;
    }
  }
}
