#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "dcx/groebner.hpp"
#include "dcx/parse.hpp"
#include "helpers.hpp"

using namespace dcx;
using dcx::testing::random_poly;

namespace {

template <Field F>
std::vector<std::string> sorted_strings(const GroebnerBasis<F>& g) {
  std::vector<std::string> out;
  for (const auto& b : g.elements()) out.push_back(b.to_string());
  std::sort(out.begin(), out.end());
  return out;
}

template <Field F>
Ideal<F> ideal_of(const VarSetPtr& vars, const F& k, std::initializer_list<const char*> gens) {
  Ideal<F> i(vars, k);
  for (auto g : gens) i.add(parse_polynomial(g, vars, k));
  return i;
}

}  // namespace

TEST(Groebner, CircleAndLine) {
  RationalField q;
  auto vars = make_varset({"x", "y"});
  auto g = buchberger(ideal_of(vars, q, {"x^2 + y^2 - 1", "x - y"}));
  EXPECT_EQ(sorted_strings(g), (std::vector<std::string>{"x - y", "y^2 - 1/2"}));
  EXPECT_EQ(dimension(g), 0);
  EXPECT_TRUE(g.stats().verified);
}

TEST(Groebner, TwistedCubic) {
  RationalField q;
  auto vars = make_varset({"x", "y", "z"});
  auto g = buchberger(ideal_of(vars, q, {"y - x^2", "z - x^3"}));
  EXPECT_EQ(sorted_strings(g), (std::vector<std::string>{"x*y - z", "x^2 - y", "y^2 - x*z"}));
  EXPECT_EQ(dimension(g), 1);
}

TEST(Groebner, TrivialAndZeroIdeals) {
  PrimeField k(11);
  auto vars = make_varset({"x", "y"});
  auto g = buchberger(ideal_of(vars, k, {"x*y - 1", "x"}));
  EXPECT_TRUE(g.is_trivial());
  EXPECT_EQ(dimension(g), -1);
  auto z = buchberger(Ideal<PrimeField>(vars, k));
  EXPECT_TRUE(z.is_zero_ideal());
  EXPECT_EQ(dimension(z), 2);
  EXPECT_EQ(dimension(ideal_of(vars, k, {"0"})), 2);
}

TEST(Groebner, DimensionOfCoordinateArrangements) {
  PrimeField k(101);
  auto vars = make_varset({"a", "b", "c", "d"});
  EXPECT_EQ(dimension(ideal_of(vars, k, {"a*b"})), 3);
  EXPECT_EQ(dimension(ideal_of(vars, k, {"a*b", "c*d"})), 2);
  EXPECT_EQ(dimension(ideal_of(vars, k, {"a*b", "a*c", "a*d"})), 3);  // a = 0 component
  EXPECT_EQ(dimension(ideal_of(vars, k, {"a", "b", "c", "d"})), 0);
  EXPECT_EQ(dimension(ideal_of(vars, k, {"a^2 + b^2 + c^2 + d^2"})), 3);
}

TEST(Groebner, CharacteristicMatters) {
  // x^2 + 1 and x - 2 meet over F_5 (2^2 + 1 = 5) but not over Q
  auto vars = make_varset({"x"});
  EXPECT_EQ(dimension(ideal_of(vars, PrimeField(5), {"x^2 + 1", "x - 2"})), 0);
  EXPECT_EQ(dimension(ideal_of(vars, RationalField{}, {"x^2 + 1", "x - 2"})), -1);
}

TEST(Groebner, CapsRaiseResourceLimit) {
  PrimeField k(32003);
  auto vars = make_varset({"a", "b", "c", "d"});
  auto i = ideal_of(vars, k, {"a^3 + b*c*d - 1", "b^3 + a*c*d - 2", "c^3 + a*b*d - 3", "d^3 + a*b*c - 4"});
  GroebnerOptions opt;
  opt.max_pairs = 2;
  EXPECT_THROW(buchberger(i, opt), ResourceLimit);
  GroebnerOptions deg;
  deg.max_degree = 3;
  EXPECT_THROW(buchberger(i, deg), ResourceLimit);
}

TEST(Groebner, CriteriaDoNotChangeTheBasis) {
  std::mt19937_64 rng(99);
  PrimeField k(31);
  auto vars = make_varset({"x", "y", "z"});
  for (int t = 0; t < 40; ++t) {
    Ideal<PrimeField> i(vars, k);
    for (int j = 0; j < 3; ++j) i.add(random_poly(vars, k, rng, 3, 3));
    GroebnerOptions with, without;
    without.use_criteria = false;
    auto a = buchberger(i, with), b = buchberger(i, without);
    ASSERT_EQ(sorted_strings(a), sorted_strings(b));
  }
}

// Random ideals: generators and random combinations of them reduce to zero,
// and the basis passes the independent S-pair check.
TEST(Groebner, MembershipProperty) {
  std::mt19937_64 rng(123);
  RationalField q;
  auto vars = make_varset({"x", "y", "z"});
  for (int t = 0; t < 40; ++t) {
    std::vector<QPoly> gens;
    for (int j = 0; j < 3; ++j) gens.push_back(random_poly(vars, q, rng, 3, 2));
    auto g = buchberger(Ideal<RationalField>(vars, q, gens));
    ASSERT_TRUE(verify_groebner_basis(g, gens));
    for (const auto& f : gens) ASSERT_TRUE(contains(g, f));
    QPoly comb(vars, q);
    for (const auto& f : gens) comb += random_poly(vars, q, rng, 2, 2) * f;
    ASSERT_TRUE(contains(g, comb));
    ASSERT_TRUE(normal_form(comb, g).is_zero());
  }
}

TEST(Groebner, NonMemberHasNonzeroNormalForm) {
  RationalField q;
  auto vars = make_varset({"x", "y"});
  auto g = buchberger(ideal_of(vars, q, {"x^2", "y^2"}));
  EXPECT_FALSE(contains(g, parse_polynomial("x*y", vars, q)));
  EXPECT_EQ(normal_form(parse_polynomial("x^2 + x*y + 3", vars, q), g).to_string(), "x*y + 3");
}
