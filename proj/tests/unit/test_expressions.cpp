#include <gtest/gtest.h>

#include <functional>
#include <random>

#include "dcx/expressions.hpp"
#include "dcx/parse.hpp"
#include "helpers.hpp"

using namespace dcx;

namespace {

// Path sum by explicit depth-first enumeration of every path.
template <Field F>
Polynomial<F> path_sum_dfs(const ABP<F>& abp) {
  Polynomial<F> total(abp.vars(), abp.field());
  std::function<void(std::size_t, Polynomial<F>)> walk = [&](std::size_t v, Polynomial<F> acc) {
    if (v == abp.sink()) {
      total += acc;
      return;
    }
    for (const auto& e : abp.edges())
      if (e.from == v) walk(e.to, acc * e.label);
  };
  walk(abp.source(), Polynomial<F>::constant(abp.vars(), abp.field(), abp.field().one()));
  return total;
}

}  // namespace

TEST(ABPTest, ParallelPaths) {
  RationalField q;
  auto vars = make_varset({"x", "y", "z"});
  ABP<RationalField> abp(vars, q);
  auto s = abp.add_vertex(0), a = abp.add_vertex(1), b = abp.add_vertex(1), t = abp.add_vertex(2);
  abp.add_edge(s, a, parse_polynomial("x", vars, q));
  abp.add_edge(a, t, parse_polynomial("y", vars, q));
  abp.add_edge(s, b, parse_polynomial("z + 1", vars, q));
  abp.add_edge(b, t, parse_polynomial("z", vars, q));
  EXPECT_EQ(abp_path_sum(abp), parse_polynomial("x*y + z^2 + z", vars, q));
  EXPECT_EQ(abp.depth(), 2u);
  auto l = abp_to_determinant(abp);
  EXPECT_EQ(l.size(), 3u);
  EXPECT_TRUE(verify_expression(l, abp_path_sum(abp)).match);
}

TEST(ABPTest, RejectsMalformedGraphs) {
  RationalField q;
  auto vars = make_varset({"x"});
  ABP<RationalField> abp(vars, q);
  auto s = abp.add_vertex(0), a = abp.add_vertex(2);
  EXPECT_THROW(abp.add_edge(s, a, parse_polynomial("x", vars, q)), ArgumentError);
  auto b = abp.add_vertex(1);
  EXPECT_THROW(abp.add_edge(s, b, parse_polynomial("x^2", vars, q)), ArgumentError);
  abp.add_vertex(0);
  EXPECT_THROW(abp.validate(), ArgumentError);
}

TEST(ABPTest, RandomGraphsMatchPathEnumeration) {
  std::mt19937_64 rng(31);
  PrimeField k(101);
  auto vars = make_varset({"x", "y", "z"});
  for (int t = 0; t < 100; ++t) {
    ABP<PrimeField> abp(vars, k);
    const std::size_t depth = 1 + rng() % 4;
    std::vector<std::vector<std::size_t>> layer(depth + 1);
    layer[0].push_back(abp.add_vertex(0));
    for (std::size_t l = 1; l < depth; ++l)
      for (std::size_t c = 0, w = 1 + rng() % 3; c < w; ++c) layer[l].push_back(abp.add_vertex(l));
    layer[depth].push_back(abp.add_vertex(depth));
    for (std::size_t l = 0; l < depth; ++l)
      for (auto u : layer[l])
        for (auto v : layer[l + 1])
          if (rng() % 3)
            abp.add_edge(u, v, dcx::testing::random_poly(vars, k, rng, 2, 1));
    auto dp = abp_path_sum(abp);
    ASSERT_EQ(dp, path_sum_dfs(abp));
    auto l = abp_to_determinant(abp);
    ASSERT_EQ(l.size(), abp.num_vertices() - 1);
    ASSERT_EQ(symbolic_det(l, DetOptions{DetAlgorithm::kBerkowitz}), dp);
  }
}

TEST(Grenet, PathSumIsThePermanent) {
  RationalField q;
  for (std::size_t n = 1; n <= 4; ++n) {
    auto abp = grenet_abp(n, q);
    EXPECT_EQ(abp.num_vertices(), std::size_t{1} << n);
    EXPECT_EQ(abp_path_sum(abp), perm_polynomial(n, q));
  }
}

TEST(Grenet, DeterminantSizes) {
  PrimeField k(32003);
  // 2^n - 1
  EXPECT_EQ(abp_to_determinant(grenet_abp(2, k)).size(), 3u);
  EXPECT_EQ(abp_to_determinant(grenet_abp(3, k)).size(), 7u);
  auto l = abp_to_determinant(grenet_abp(3, k));
  EXPECT_EQ(rank(l.constant_part()), 6u);
}

TEST(Catalog, EveryEntryVerifies) {
  PrimeField k(32003);
  RationalField q;
  for (const auto& name : catalog_names()) {
    auto e = catalog_get(name, q);
    EXPECT_TRUE(verify_expression(e.map, e.target).match) << name;
    auto f = catalog_get(name, k);
    EXPECT_TRUE(verify_expression(f.map, f.target, VerifyMode::random(10)).match) << name;
  }
  EXPECT_THROW(catalog_get("nope", q), ArgumentError);
}

TEST(Cubic, SixEquationsMatchThePublishedDisplay) {
  auto t = cubic_r3_template();
  EXPECT_EQ(t.param_vars()->size(), 39u);
  auto six = extract_coefficient_equations(t, cubic_surface(),
                                           [](const Monomial& m) { return m.degree() == 3 && m[0] == 1; });
  ASSERT_EQ(six.size(), 6u);
  for (const auto& [label, text] : published_six_equations()) {
    auto expected = parse_polynomial(text, t.param_vars(), RationalField{});
    auto it = std::find_if(six.begin(), six.end(), [&](const auto& e) { return e.label == label; });
    ASSERT_NE(it, six.end()) << label;
    EXPECT_EQ(it->lhs, expected) << label;
  }
  // decreasing degrevlex order of the main monomials
  for (std::size_t i = 1; i < six.size(); ++i) EXPECT_GT(six[i - 1].monomial, six[i].monomial);
}

TEST(Cubic, CaseAnalysisVerdicts) {
  auto r = cubic_case_analysis();
  EXPECT_TRUE(r.six_match_published);
  EXPECT_TRUE(r.mismatches.empty());
  ASSERT_EQ(r.systems.size(), 3u);
  auto verdict = [&](std::size_t s, std::size_t c) { return r.systems[s].cases[c].trivial; };
  // six equations: only alpha != 0 is inconsistent
  EXPECT_EQ(verdict(0, 0), true);
  EXPECT_EQ(verdict(0, 1), false);
  EXPECT_EQ(verdict(0, 2), false);
  EXPECT_EQ(verdict(0, 3), false);
  // every degree-3 coefficient
  EXPECT_EQ(verdict(1, 0), true);
  EXPECT_EQ(verdict(1, 1), false);
  EXPECT_EQ(verdict(1, 2), false);
  EXPECT_EQ(verdict(1, 3), true);
  // every coefficient: no such expression in any case
  for (std::size_t c = 0; c < 4; ++c) EXPECT_EQ(verdict(2, c), true) << c;
}

TEST(Template, OneByOne) {
  RationalField q;
  auto main = make_varset({"x", "y"});
  ParamTemplate<RationalField> t(1, main, make_varset({"a", "b", "c"}), q);
  t.set(0, 0, "a*x + b*y + c");
  auto eqs = extract_coefficient_equations(t, parse_polynomial("2*x - 1", main, q));
  ASSERT_EQ(eqs.size(), 3u);
  EXPECT_EQ(eqs[0].to_string(), "x: a - 2 = 0");
  EXPECT_EQ(eqs[1].to_string(), "y: b = 0");
  EXPECT_EQ(eqs[2].to_string(), "1: c + 1 = 0");
  EXPECT_THROW(t.set(0, 0, "a*x*y"), ArgumentError);
  auto l = t.instantiate({q.from_int(2), q.zero(), q.from_int(-1)});
  EXPECT_EQ(l(0, 0).to_string(), "2*x - 1");
}

// Zeros of the coefficient system of a fully parametrized 2 x 2 template are
// exactly the expressions of xy over F_2, counted independently by brute force.
TEST(Template, CoefficientSystemCountsExpressions) {
  PrimeField k(2);
  auto main = make_varset({"x", "y"});
  std::vector<std::string> names;
  for (int e = 0; e < 4; ++e)
    for (const char* c : {"a", "b", "c"}) names.push_back(c + std::to_string(e));
  auto params = make_varset(names);
  ParamTemplate<PrimeField> t(2, main, params, k);
  for (int e = 0; e < 4; ++e) {
    auto s = std::to_string(e);
    t.set(static_cast<std::size_t>(e / 2), static_cast<std::size_t>(e % 2), "a" + s + "*x + b" + s + "*y + c" + s);
  }
  auto f = parse_polynomial("x*y", main, k);
  auto eqs = extract_coefficient_equations(t, f);
  std::size_t zeros = 0, brute = 0;
  for (std::uint32_t code = 0; code < (1u << 12); ++code) {
    std::vector<std::uint32_t> v(12);
    for (std::size_t i = 0; i < 12; ++i) v[i] = code >> i & 1;
    bool all = std::all_of(eqs.begin(), eqs.end(), [&](const auto& e) { return evaluate(e.lhs, v) == 0; });
    // evaluating at points of F_2^2 cannot separate polynomials, so expand
    const bool is_expr = symbolic_det(t.instantiate(v)) == f;
    zeros += all;
    brute += is_expr;
    ASSERT_EQ(all, is_expr);
  }
  EXPECT_EQ(zeros, brute);
  EXPECT_EQ(zeros, 108u);
}
