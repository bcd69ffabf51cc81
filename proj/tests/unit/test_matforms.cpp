#include <gtest/gtest.h>

#include <random>

#include "dcx/matforms.hpp"
#include "dcx/parse.hpp"
#include "helpers.hpp"

using namespace dcx;
using dcx::testing::leibniz_det;
using dcx::testing::random_affine_map;
using dcx::testing::random_point;

namespace {

template <Field F>
void compare_det_algorithms(const F& k, std::uint64_t seed, int cases) {
  std::mt19937_64 rng(seed);
  auto vars = make_varset({"x", "y", "z"});
  for (int t = 0; t < cases; ++t) {
    std::size_t m = 1 + rng() % 5;
    auto l = random_affine_map(m, vars, k, rng);
    auto a = det_laplace(l);
    auto b = det_berkowitz(l);
    ASSERT_EQ(a, b) << l.to_string();
    // numeric permutation expansion at a few points
    for (int s = 0; s < 3; ++s) {
      auto x = random_point(3, k, rng);
      ASSERT_TRUE(k.equal(evaluate(a, x), leibniz_det(l.at(x))));
    }
  }
}

}  // namespace

TEST(Determinant, LaplaceMatchesBerkowitzAndLeibniz) {
  compare_det_algorithms(RationalField{}, 21, 100);
  compare_det_algorithms(PrimeField(5), 22, 100);
}

TEST(Determinant, LaplaceCapForcesBerkowitz) {
  PrimeField k(101);
  auto l = generic_matrix_map(3, k);
  EXPECT_THROW(symbolic_det(l, DetOptions{DetAlgorithm::kLaplaceMemo, 2}), ResourceLimit);
  EXPECT_EQ(symbolic_det(l, DetOptions{DetAlgorithm::kBerkowitz, 2}), generic_det_polynomial(3, k));
}

TEST(Determinant, GenericMatrixGivesDet) {
  RationalField q;
  for (std::size_t m = 1; m <= 4; ++m) EXPECT_EQ(symbolic_det(generic_matrix_map(m, q)), generic_det_polynomial(m, q));
  EXPECT_EQ(generic_det_polynomial(2, q).to_string(), "-x12*x21 + x11*x22");
  EXPECT_EQ(perm_polynomial(2, q).to_string(), "x12*x21 + x11*x22");
  EXPECT_EQ(perm_polynomial(4, q).size(), 24u);
}

TEST(Normalize, ConstantPartBecomesJr) {
  std::mt19937_64 rng(5);
  PrimeField k(7);
  auto vars = make_varset({"x", "y"});
  for (int t = 0; t < 200; ++t) {
    std::size_t m = 1 + rng() % 4;
    auto l = random_affine_map(m, vars, k, rng, 0.4);
    auto n = rank_and_normalize(l);
    ASSERT_EQ(n.rank, rank(l.constant_part()));
    ASSERT_EQ(n.map.constant_part(), n.j_matrix());
    ASSERT_EQ(n.map, l.transformed(n.left, n.right));
    // det(PLQ) = det P det Q det L
    ASSERT_EQ(symbolic_det(n.map), symbolic_det(l).scaled(n.scalar));
    ASSERT_FALSE(k.is_zero(n.scalar));
  }
}

TEST(Normalize, OnesSitBottomRight) {
  PrimeField k(3);
  auto vars = make_varset({"x"});
  AffineMatrixMap<PrimeField> l(3, vars, k);
  l.set(0, 0, parse_polynomial("1 + x", vars, k));
  auto n = rank_and_normalize(l);
  EXPECT_EQ(n.rank, 1u);
  EXPECT_EQ(n.map.constant_part()(2, 2), 1u);
  EXPECT_EQ(n.map.constant_part()(0, 0), 0u);
}

TEST(Map, RejectsNonAffineEntries) {
  RationalField q;
  auto vars = make_varset({"x"});
  AffineMatrixMap<RationalField> l(2, vars, q);
  EXPECT_THROW(l.set(0, 1, parse_polynomial("x^2", vars, q)), ArgumentError);
  EXPECT_THROW(l.set(0, 1, parse_polynomial("y", q)), RingMismatch);
  EXPECT_THROW(AffineMatrixMap<RationalField>(0, vars, q), ArgumentError);
}

TEST(Verify, ExactAndProbabilistic) {
  RationalField q;
  auto vars = make_varset({"x", "y", "z"});
  AffineMatrixMap<RationalField> l(2, vars, q);
  l.set(0, 0, parse_polynomial("x", vars, q));
  l.set(0, 1, parse_polynomial("y", vars, q));
  l.set(1, 0, parse_polynomial("-z", vars, q));
  l.set(1, 1, parse_polynomial("x", vars, q));
  auto good = parse_polynomial("x^2 + y*z", vars, q);
  auto bad = parse_polynomial("x^2 - y*z", vars, q);
  EXPECT_TRUE(verify_expression(l, good).match);
  auto r = verify_expression(l, bad);
  EXPECT_FALSE(r.match);
  EXPECT_EQ(*r.witness_monomial, "y*z");
  EXPECT_EQ(r.det_coefficient, "1");
  EXPECT_EQ(r.target_coefficient, "-1");

  auto pr = verify_expression(l, good, VerifyMode::random(20, 3));
  EXPECT_TRUE(pr.match);
  EXPECT_EQ(pr.trials, 20u);
  EXPECT_LT(pr.failure_bound, 1e-50);
  auto pb = verify_expression(l, bad, VerifyMode::random(20, 3));
  EXPECT_FALSE(pb.match);
  ASSERT_TRUE(pb.witness_point.has_value());
}

TEST(Verify, TinyFieldRefusesProbabilisticMode) {
  PrimeField k(3);
  auto l = generic_matrix_map(2, k);
  EXPECT_THROW(verify_expression(l, generic_det_polynomial(2, k), VerifyMode::random(5)), ArgumentError);
  EXPECT_TRUE(verify_expression(l, generic_det_polynomial(2, k)).match);
}
