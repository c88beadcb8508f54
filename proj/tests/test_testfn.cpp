#include <gtest/gtest.h>

#include "lowlying/testfn.hpp"

using namespace lowlying;

TEST(TestFn, FejerClosedForms) {
  const auto f = TestFn::fejer(1.0);
  EXPECT_DOUBLE_EQ(f.at_zero(), 1.0);
  EXPECT_DOUBLE_EQ(f.hat_at_zero(), 1.0);
  EXPECT_NEAR(integral_abs_u(f, f), 1.0 / 6.0, 1e-14);
  EXPECT_NEAR(plancherel_product(f, f), 2.0 / 3.0, 1e-14);
}

TEST(TestFn, SupportAndSymmetry) {
  for (const auto& f : {TestFn::fejer(0.45), TestFn::bump(0.7), TestFn::product(TestFn::fejer(0.3), TestFn::bump(0.2))}) {
    EXPECT_EQ(f.hat(f.support()), 0.0);
    EXPECT_EQ(f.hat(-f.support() - 0.1), 0.0);
    for (double u : {0.01, 0.1, 0.2, 0.33})
      EXPECT_DOUBLE_EQ(f.hat(u), f.hat(-u)) << f.name();
    for (double x : {0.3, 1.7, 12.5}) EXPECT_DOUBLE_EQ(f(x), f(-x)) << f.name();
  }
}

TEST(TestFn, FourierPairs) {
  for (const auto& f : {TestFn::fejer(0.45), TestFn::fejer(0.9), TestFn::bump(0.5),
                        TestFn::product(TestFn::fejer(0.45), TestFn::fejer(0.45))}) {
    EXPECT_NEAR(f.x_integral(), f.hat_at_zero(), 1e-10) << f.name();
    EXPECT_NEAR(f.hat_integral(-f.support(), f.support()), f.at_zero(), 1e-10) << f.name();
  }
}

TEST(TestFn, FejerIsNonnegative) {
  const auto f = TestFn::fejer(0.45);
  for (double x = -50; x <= 50; x += 0.37) EXPECT_GE(f(x), 0.0);
}

TEST(TestFn, Functionals) {
  const auto f = TestFn::fejer(0.45);
  const auto F = functionals(f, f);
  EXPECT_NEAR(F.I_abs, 0.45 * 0.45 / 6.0, 1e-14);
  EXPECT_NEAR(F.P0, 0.3, 1e-14);
  EXPECT_NEAR(F.I_box1, f.at_zero(), 1e-14);
  EXPECT_NEAR(functionals(TestFn::bump(0.8), f).I_box1, TestFn::bump(0.8).at_zero(), 1e-12);
}

TEST(TestFn, Product) {
  const auto a = TestFn::fejer(1.0);
  const auto g = product_fn(a, a);
  EXPECT_DOUBLE_EQ(g.at_zero(), 1.0);
  EXPECT_NEAR(g.hat_at_zero(), 2.0 / 3.0, 1e-14);
  EXPECT_EQ(g.support(), 2.0);
  EXPECT_EQ(g.hat(2.0), 0.0);
  const auto b = product_fn(TestFn::fejer(0.3), TestFn::bump(0.5));
  EXPECT_NEAR(b.at_zero(), 0.3 * TestFn::bump(0.5).at_zero(), 1e-15);
  EXPECT_THROW(product_fn(g, a), InvalidInput);
  EXPECT_EQ(product_fn(TestFn::zero(), a).kind(), TestFn::Kind::Zero);
}

TEST(TestFn, Parse) {
  EXPECT_EQ(TestFn::parse("fejer:0.45").sigma(), 0.45);
  EXPECT_EQ(TestFn::parse("bump:0.5").kind(), TestFn::Kind::Bump);
  EXPECT_EQ(TestFn::parse("zero").kind(), TestFn::Kind::Zero);
  EXPECT_THROW(TestFn::parse("fejer"), InvalidInput);
  EXPECT_THROW(TestFn::parse("fejer:abc"), InvalidInput);
  EXPECT_THROW(TestFn::parse("gauss:1"), InvalidInput);
  EXPECT_THROW(TestFn::fejer(0.0), InvalidInput);
}

TEST(TestFn, GaussLegendreExactness) {
  const auto& g = GaussLegendre::get(20);
  EXPECT_NEAR(g.integrate([](double x) { return std::pow(x, 38); }, -1, 1), 2.0 / 39.0, 1e-14);
}
