#include <gtest/gtest.h>

#include "lowlying/factor.hpp"
#include "lowlying/polyint.hpp"

using namespace lowlying;

namespace {
const IntPoly t{0, 1};
}

TEST(PolyInt, Eval) {
  EXPECT_EQ(IntPoly({1, 9}).eval(1), 10);
  EXPECT_EQ(IntPoly({13, 60, 144}).eval(0), 13);
  EXPECT_EQ((4 * IntPoly{1, 6}.pow(3) + IntPoly{27}).eval(0), 31);
  EXPECT_EQ(IntPoly({1, 9}).eval(mpz_class("1000000000000")), mpz_class("9000000000001"));
}

TEST(PolyInt, EvalModMatchesExact) {
  const IntPoly p{-7, 3, 0, 11, -2};
  for (long x = -20; x <= 20; ++x) {
    mpz_class r = p.eval(x) % 97;
    if (r < 0) r += 97;
    EXPECT_EQ(p.eval_mod(static_cast<std::uint64_t>((x % 97 + 97) % 97), 97), r.get_ui());
  }
}

TEST(PolyInt, Arithmetic) {
  const IntPoly a{1, 1}, b{-1, 1};
  EXPECT_EQ(a * b, IntPoly({-1, 0, 1}));
  EXPECT_EQ(a - a, IntPoly{});
  EXPECT_EQ((a + b), IntPoly({0, 2}));
  EXPECT_EQ(IntPoly({1, 2, 3}).derivative(), IntPoly({2, 6}));
  EXPECT_EQ((t * t + 3 * t + IntPoly{9}).compose_linear(12, 1), IntPoly({13, 60, 144}));
  EXPECT_EQ(IntPoly({6, 12, 18}).content(), 6);
  EXPECT_EQ(IntPoly({6, 12, 18}).primitive_part(), IntPoly({1, 2, 3}));
}

TEST(PolyInt, Gcd) {
  const IntPoly a = IntPoly({-1, 1}).pow(2) * IntPoly({2, 1});
  const IntPoly b = IntPoly({-1, 1}) * IntPoly({5, 1});
  EXPECT_EQ(gcd(a, b), IntPoly({-1, 1}));
  EXPECT_EQ(gcd(IntPoly({1, 9}), IntPoly{3}), IntPoly{1});
  EXPECT_EQ(gcd(IntPoly({-1, 0, 0, 0, 1}), IntPoly({-1, 0, 1})), IntPoly({-1, 0, 1}));
}

TEST(PolyInt, Radical) {
  const IntPoly d = mpz_class(-432 * 432) * -432 * IntPoly({1, 9}).pow(4);
  EXPECT_EQ(radical(d), IntPoly({1, 9}));
  EXPECT_EQ(radical(IntPoly({-5, 1})), IntPoly({-5, 1}));
  EXPECT_EQ(radical(IntPoly({-1, 1}).pow(2) * IntPoly({2, 1})), IntPoly({-1, 1}) * IntPoly({2, 1}));
}

TEST(PolyInt, Discriminant) {
  EXPECT_EQ(discriminant(IntPoly({13, 60, 144})), -3888);
  EXPECT_EQ(discriminant(IntPoly({9, 3, 1})), -27);
  EXPECT_EQ(discriminant(IntPoly({1, 9})), 1);
  // x³ + ax + b has discriminant −4a³ − 27b².
  EXPECT_EQ(discriminant(IntPoly({5, -2, 0, 1})), -4 * -8 - 27 * 25);
}

TEST(PolyInt, ResultantMatchesRootProduct) {
  // Res((t−1)(t−2), t−5) = (1−5)(2−5) with the standard sign convention.
  EXPECT_EQ(resultant(IntPoly({2, -3, 1}), IntPoly({-5, 1})), 12);
}

TEST(Factor, SmallCases) {
  const auto f = factorize(2700);
  ASSERT_TRUE(f.complete());
  EXPECT_EQ(f.prime_powers.size(), 3u);
  EXPECT_EQ(f.prime_powers.at(2), 2u);
  EXPECT_EQ(f.prime_powers.at(3), 3u);
  EXPECT_EQ(f.prime_powers.at(5), 2u);
  EXPECT_TRUE(is_prime_u64(1000003));
  const auto g = factorize(1000003);
  EXPECT_EQ(g.prime_powers.size(), 1u);
}

TEST(Factor, LargeSemiprimeAndBudget) {
  const mpz_class p("1000000000000000000000000000057");
  const mpz_class q("1000000000000000000000000000099");
  ASSERT_TRUE(is_probable_prime(p));
  ASSERT_TRUE(is_probable_prime(q));
  const auto f = factorize(p * q, 10);
  EXPECT_FALSE(f.complete());
  EXPECT_EQ(f.product(), p * q);
  const mpz_class r("1000000007");
  const auto g = factorize(r * r * mpz_class("998244353") * 12);
  ASSERT_TRUE(g.complete());
  EXPECT_EQ(g.prime_powers.at(r), 2u);
  EXPECT_EQ(g.product(), r * r * mpz_class("998244353") * 12);
}

TEST(Factor, PrimesUpTo) {
  const auto ps = primes_up_to(100);
  EXPECT_EQ(ps.size(), 25u);
  EXPECT_EQ(ps.back(), 97u);
}
