#include <gtest/gtest.h>

#include "lowlying/family.hpp"

using namespace lowlying;

namespace {

FamilyDef washington_raw() {
  auto f = preset_washington();
  f.reparam = {};
  return f;
}

FamilyDef rank1_raw() {
  auto f = preset_rank1();
  f.reparam = {};
  return f;
}

}  // namespace

TEST(Family, InvariantIdentities) {
  for (const auto& name : preset_names()) {
    const auto inv = invariants(preset(name));
    EXPECT_EQ(inv.c4.pow(3) - inv.c6.pow(2), 1728 * inv.disc) << name;
    EXPECT_EQ(4 * inv.b8, inv.b2 * inv.b6 - inv.b4.pow(2)) << name;
    EXPECT_GE(inv.D.degree(), 1) << name;
  }
}

TEST(Family, WashingtonInvariants) {
  const auto inv = invariants(washington_raw());
  const IntPoly q{9, 3, 1};
  EXPECT_EQ(inv.c4, 16 * q);
  EXPECT_EQ(inv.disc, 16 * q.pow(2));
  EXPECT_EQ(inv.D, q);
}

TEST(Family, Rank1Invariants) {
  const auto inv = invariants(rank1_raw());
  EXPECT_EQ(inv.c4, IntPoly({0, 0, 16}));
  EXPECT_EQ(inv.disc, -16 * IntPoly({27, 0, 0, 4}));
}

TEST(Family, ConstantFamily) {
  FamilyDef f;
  f.a = {IntPoly{}, IntPoly{}, IntPoly{}, IntPoly{}, IntPoly{1}};
  const auto inv = invariants(f);
  EXPECT_EQ(inv.disc, IntPoly{-432});
  EXPECT_TRUE(inv.D.is_constant());
  FamilyDef zero;
  EXPECT_THROW(invariants(zero), DegenerateFamily);
}

TEST(Family, RationalSurface) {
  const auto r1 = is_rational_surface(rank1_raw());
  EXPECT_TRUE(r1.rational);
  EXPECT_EQ(r1.which, 1);
  EXPECT_EQ(r1.deg_A, 2);
  EXPECT_EQ(r1.deg_B, 3);
  FamilyDef big;
  std::vector<mpz_class> c(14, 0);
  c[13] = 1;
  big.a = {IntPoly{}, IntPoly{}, IntPoly{}, IntPoly{}, IntPoly(c)};
  EXPECT_FALSE(is_rational_surface(big).rational);
  EXPECT_TRUE(is_rational_surface(preset_rank6()).rational);
}

TEST(Family, Specialize) {
  const auto c = specialize(preset_f1(), 1);
  EXPECT_EQ(c[4], -43200);
  const auto w = specialize(preset_washington(), 0);
  EXPECT_EQ(w[1], 1);
  EXPECT_EQ(w[3], -4);
  EXPECT_EQ(w[4], 1);
  FamilyDef f;
  f.a = {IntPoly{}, IntPoly{}, IntPoly{}, IntPoly{}, IntPoly{0, 1}};
  EXPECT_THROW(specialize(f, 0), SingularFiber);
}

TEST(Family, Signs) {
  for (long t : {1L, 2L, 4L, 5L, 6L, 8L, 10L})
    EXPECT_EQ(sign(preset_f1(), t), 1) << t;
  for (long t : {0L, 1L, 2L, 3L, 5L, 7L})
    EXPECT_EQ(sign(preset_f2(true), t), -1) << t;
  FamilyDef bs;
  bs.sign_rule = {SignRule::Kind::BirchStephensCubic, IntPoly{2}};
  EXPECT_EQ(sign(bs, 0), 1);
  EXPECT_FALSE(sign(preset_rank1(), 3).has_value());
}

TEST(Family, NMinus) {
  const std::vector<std::int64_t> ts = {1, 2, 4, 5, 6, 8};
  EXPECT_EQ(n_minus(preset_f1(), ts).value(), 0.0);
  EXPECT_EQ(n_minus(preset_washington(), ts).value(), 1.0);
  const auto eq = n_minus(preset_rank1(), ts);
  EXPECT_TRUE(eq.equidistributed);
  EXPECT_EQ(eq.value(), 0.5);
}

TEST(Family, JsonRoundTrip) {
  for (const auto& name : preset_names()) {
    const auto f = preset(name);
    const auto g = family_from_json(to_json(f));
    EXPECT_EQ(to_json(g).dump(), to_json(f).dump()) << name;
    EXPECT_EQ(invariants(g).disc, invariants(f).disc) << name;
  }
}

TEST(Family, JsonErrors) {
  EXPECT_THROW(family_from_json(nlohmann::ordered_json::array()), InvalidInput);
  EXPECT_THROW(family_from_json(nlohmann::ordered_json::parse(R"({"a": [[0]]})")), InvalidInput);
  EXPECT_THROW(family_from_json(nlohmann::ordered_json::parse(
                   R"({"a": [[],[],[],[],[1]], "sign_rule": "Sometimes"})")),
               InvalidInput);
  EXPECT_THROW(preset("nope"), InvalidInput);
}

TEST(Family, AbcFlag) {
  EXPECT_FALSE(abc_flag(preset_f1()));
  EXPECT_FALSE(abc_flag(preset_rank1()));
}
