#include <gtest/gtest.h>

#include <random>

#include "dcx/explore.hpp"
#include "dcx/parse.hpp"
#include "helpers.hpp"

using namespace dcx;

TEST(Sample, ReportInvariants) {
  auto r = sample_codim(4, 3, 101, 30, 5);
  std::size_t binned = 0;
  for (const auto& [c, k] : r.histogram) {
    binned += k;
    EXPECT_GE(c, 1);
  }
  EXPECT_EQ(binned + r.degenerate + r.timeouts, r.trials);
  EXPECT_EQ(r.bound, 4);
  for (const auto& v : r.violations) EXPECT_GT(v.codim, r.bound);
  const double expect = static_cast<double>(r.histogram.count(4) ? r.histogram.at(4) : 0) / 30.0;
  EXPECT_DOUBLE_EQ(r.generic_fraction, expect);
  EXPECT_EQ(r.meets_threshold, r.generic_fraction >= 0.9);
  EXPECT_EQ(r.samples.size(), 30u);
}

TEST(Sample, ReproducibleAcrossJobs) {
  SampleOptions one, four;
  four.jobs = 4;
  auto a = sample_codim(3, 3, 31, 24, 42, one);
  auto b = sample_codim(3, 3, 31, 24, 42, four);
  ASSERT_EQ(a.samples.size(), b.samples.size());
  for (std::size_t i = 0; i < a.samples.size(); ++i) {
    EXPECT_EQ(a.samples[i].seed, b.samples[i].seed);
    EXPECT_EQ(a.samples[i].outcome, b.samples[i].outcome);
    EXPECT_EQ(a.samples[i].codim, b.samples[i].codim);
  }
  EXPECT_EQ(a.histogram, b.histogram);
  auto c = sample_codim(3, 3, 31, 24, 43, one);
  bool differs = false;
  for (std::size_t i = 0; i < a.samples.size(); ++i) differs = differs || a.samples[i].seed != c.samples[i].seed;
  EXPECT_TRUE(differs);
}

TEST(Sample, TimeoutsAreBinned) {
  SampleOptions opt;
  opt.groebner.max_pairs = 1;
  auto r = sample_codim(4, 3, 101, 5, 1, opt);
  EXPECT_EQ(r.timeouts + r.degenerate, 5u);
}

TEST(Sample, ArgumentChecks) {
  EXPECT_THROW(sample_codim(3, 1, 101, 5, 1), ArgumentError);
  EXPECT_THROW(sample_codim(0, 3, 101, 5, 1), ArgumentError);
}

TEST(Sample, DegenerateWhenTooFewVariablesOverF2) {
  // with one variable over F_2 every entry is 0 or x, so det is c * x^3 with c in F_2
  auto r = sample_codim(1, 3, 2, 40, 9);
  EXPECT_GT(r.degenerate, 0u);
  for (const auto& [c, k] : r.histogram) EXPECT_EQ(c, 1);
}

TEST(ConeReduce, DropsDependentVariables) {
  PrimeField k(7);
  auto vars = make_varset({"a", "b", "c"});
  AffineMatrixMap<PrimeField> l(2, vars, k);
  auto P = [&](const char* s) { return parse_polynomial(s, vars, k); };
  // c only appears as a + b
  l.set(0, 0, P("a + c"));
  l.set(0, 1, P("b + c"));
  l.set(1, 0, P("2*a + 2*c"));
  l.set(1, 1, P("a + b + 2*c"));
  auto red = cone_reduce(l);
  EXPECT_EQ(red.kernel_dim, 1u);
  EXPECT_EQ(red.kept, (std::vector<std::size_t>{0, 1}));
  EXPECT_EQ(red.map.num_vars(), 2u);
  AffineMatrixMap<PrimeField> affine(2, vars, k);
  affine.set(0, 0, P("a + 1"));
  EXPECT_THROW(cone_reduce(affine), ArgumentError);
}

// Pad a random linear map with variables that are combinations of the others;
// the reduced map keeps codim Sing(det) unchanged.
TEST(ConeReduce, PreservesCodimension) {
  std::mt19937_64 rng(77);
  PrimeField k(7);
  auto wide = make_varset({"x1", "x2", "x3", "u", "v"});
  for (int t = 0; t < 15; ++t) {
    auto base = random_linear_map(3, 3, k, rng());
    AffineMatrixMap<PrimeField> l(3, wide, k);
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j) {
        auto e = change_vars(base(i, j), wide);
        // u copies the x1 column and v the sum of the x1 and x2 columns
        auto c1 = base(i, j).coefficient(Monomial::variable(0));
        auto c2 = base(i, j).coefficient(Monomial::variable(1));
        e += FpPoly::variable(wide, k, 3).scaled(c1);
        e += FpPoly::variable(wide, k, 4).scaled(k.add(c1, c2));
        l.set(i, j, e);
      }
    auto f = symbolic_det(l);
    if (f.is_zero()) continue;
    auto red = cone_reduce(l);
    EXPECT_GE(red.kernel_dim, 2u);
    auto g = symbolic_det(red.map);
    ASSERT_FALSE(g.is_zero());
    ASSERT_EQ(codim_sing(f).label(), codim_sing(g).label());
  }
}
