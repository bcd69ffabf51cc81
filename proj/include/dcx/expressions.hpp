#pragma once

// Explicit determinantal expressions: algebraic branching programs and their
// conversion to determinants, the built-in catalog, coefficient-equation
// extraction from parametrized templates, and the cubic-surface case study.

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <bit>
#include <optional>
#include <string>
#include <vector>

#include "dcx/error.hpp"
#include "dcx/groebner.hpp"
#include "dcx/matforms.hpp"
#include "dcx/parse.hpp"
#include "dcx/polynomial.hpp"

namespace dcx {

/// Layered DAG with affine edge labels. Its polynomial is the sum over
/// source-to-sink paths of the product of the labels along the path.
template <Field F>
class ABP {
 public:
  using Poly = Polynomial<F>;
  struct Edge {
    std::size_t from, to;
    Poly label;
  };

  ABP(VarSetPtr vars, F field) : vars_(std::move(vars)), field_(std::move(field)) {}

  std::size_t add_vertex(std::size_t layer) {
    layers_.push_back(layer);
    return layers_.size() - 1;
  }

  void add_edge(std::size_t from, std::size_t to, Poly label) {
    if (from >= layers_.size() || to >= layers_.size()) throw ArgumentError("ABP edge endpoint out of range");
    if (layers_[to] != layers_[from] + 1) throw ArgumentError("ABP edges must join consecutive layers");
    if (!same_vars(label.vars(), vars_)) throw RingMismatch("ABP edge label over a different ring");
    if (label.degree() > 1) throw ArgumentError("ABP edge labels must have degree <= 1");
    edges_.push_back({from, to, std::move(label)});
  }

  const VarSetPtr& vars() const noexcept { return vars_; }
  const F& field() const noexcept { return field_; }
  std::size_t num_vertices() const noexcept { return layers_.size(); }
  std::size_t layer(std::size_t v) const { return layers_.at(v); }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  std::size_t depth() const {
    return layers_.empty() ? 0 : *std::max_element(layers_.begin(), layers_.end());
  }

  /// The unique vertex of layer 0.
  std::size_t source() const { return unique_in_layer(0, "source"); }
  /// The unique vertex of the last layer.
  std::size_t sink() const { return unique_in_layer(depth(), "sink"); }

  void validate() const {
    if (layers_.size() < 2) throw ArgumentError("ABP needs a source and a distinct sink");
    (void)source();
    (void)sink();
  }

 private:
  std::size_t unique_in_layer(std::size_t l, const char* what) const {
    std::optional<std::size_t> found;
    for (std::size_t v = 0; v < layers_.size(); ++v) {
      if (layers_[v] != l) continue;
      if (found) throw ArgumentError(std::string("ABP has more than one ") + what);
      found = v;
    }
    if (!found) throw ArgumentError(std::string("ABP has no ") + what);
    return *found;
  }

  VarSetPtr vars_;
  F field_;
  std::vector<std::size_t> layers_;
  std::vector<Edge> edges_;
};

/// Sum of path products by dynamic programming over the layers.
template <Field F>
Polynomial<F> abp_path_sum(const ABP<F>& abp) {
  abp.validate();
  std::vector<Polynomial<F>> value(abp.num_vertices(), Polynomial<F>(abp.vars(), abp.field()));
  value[abp.source()] = Polynomial<F>::constant(abp.vars(), abp.field(), abp.field().one());
  std::vector<const typename ABP<F>::Edge*> order;
  for (const auto& e : abp.edges()) order.push_back(&e);
  std::stable_sort(order.begin(), order.end(),
                   [&](auto* a, auto* b) { return abp.layer(a->from) < abp.layer(b->from); });
  for (auto* e : order) value[e->to] += value[e->from] * e->label;
  return value[abp.sink()];
}

/// Grenet's construction: vertices are the subsets of {1..n}; the edge
/// S -> S+{j} carries x_{|S|+1, j}.
template <Field F>
ABP<F> grenet_abp(std::size_t n, const F& k) {
  if (n < 1 || n > 4) throw ArgumentError("grenet_abp supports 1 <= n <= 4");
  auto vars = matrix_varset(n);
  ABP<F> abp(vars, k);
  std::vector<std::size_t> id(std::size_t{1} << n);
  for (std::uint32_t s = 0; s < (1u << n); ++s) id[s] = abp.add_vertex(static_cast<std::size_t>(std::popcount(s)));
  for (std::uint32_t s = 0; s < (1u << n); ++s) {
    const auto row = static_cast<std::size_t>(std::popcount(s));
    for (std::size_t j = 0; j < n; ++j)
      if (!(s >> j & 1))
        abp.add_edge(id[s], id[s | (1u << j)], Polynomial<F>::variable(vars, k, row * n + j));
  }
  return abp;
}

/// Size (#vertices - 1) map: the sink is identified with the source, every
/// other vertex gets a 1 on the diagonal, entry (u,v) is the label of u -> v.
/// Each path of length l becomes an l-cycle, so det = (-1)^(l-1) * path sum;
/// the sign is corrected on row 0 and the result re-checked.
template <Field F>
AffineMatrixMap<F> abp_to_determinant(const ABP<F>& abp) {
  abp.validate();
  const F& k = abp.field();
  const std::size_t src = abp.source(), snk = abp.sink();
  std::vector<std::size_t> index(abp.num_vertices());
  std::vector<std::size_t> order(abp.num_vertices());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return abp.layer(a) < abp.layer(b); });
  std::size_t next = 0;
  for (auto v : order)
    if (v != snk) index[v] = next++;
  index[snk] = index[src];
  const std::size_t m = abp.num_vertices() - 1;
  PolyMatrix<F> a(m, abp.vars(), k);
  for (std::size_t v = 0; v < abp.num_vertices(); ++v)
    if (v != src && v != snk) a.set(index[v], index[v], Polynomial<F>::constant(abp.vars(), k, k.one()));
  for (const auto& e : abp.edges()) a.set(index[e.from], index[e.to], a(index[e.from], index[e.to]) + e.label);
  if (abp.depth() % 2 == 0)
    for (std::size_t j = 0; j < m; ++j) a.set(0, j, -a(0, j));
  AffineMatrixMap<F> l(a);
  const auto target = abp_path_sum(abp);
  if (!verify_expression(l, target).match) throw Error("abp_to_determinant: sign normalization failed");
  return l;
}

template <Field F>
struct CatalogEntry {
  std::string name;
  AffineMatrixMap<F> map;
  Polynomial<F> target;
};

inline std::vector<std::string> catalog_names() {
  return {"cubic_5x5", "quadric_2x2", "grenet_perm_2", "grenet_perm_3"};
}

namespace detail {

template <Field F>
AffineMatrixMap<F> map_from_rows(const std::vector<std::vector<std::string>>& rows, const VarSetPtr& vars,
                                 const F& k) {
  AffineMatrixMap<F> l(rows.size(), vars, k);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows.size()) throw ArgumentError("map rows must form a square matrix");
    for (std::size_t j = 0; j < rows.size(); ++j) l.set(i, j, parse_polynomial(rows[i][j], vars, k));
  }
  return l;
}

}  // namespace detail

/// A named expression together with its target; every entry is verified
/// exactly before it is returned.
template <Field F>
CatalogEntry<F> catalog_get(const std::string& name, const F& k) {
  std::optional<CatalogEntry<F>> e;
  if (name == "cubic_5x5") {
    auto vars = make_varset({"x", "y", "z", "t"});
    e.emplace(CatalogEntry<F>{name,
                              detail::map_from_rows<F>({{"-y", "z", "0", "0", "0"},
                                                        {"0", "0", "z", "t", "x"},
                                                        {"z", "0", "1", "0", "0"},
                                                        {"0", "t", "0", "1", "0"},
                                                        {"0", "y", "0", "0", "1"}},
                                                       vars, k),
                              parse_polynomial("x*y^2 + y*t^2 + z^3", vars, k)});
  } else if (name == "quadric_2x2") {
    auto vars = make_varset({"x", "y", "z"});
    e.emplace(CatalogEntry<F>{name, detail::map_from_rows<F>({{"x", "y"}, {"-z", "x"}}, vars, k),
                              parse_polynomial("x^2 + y*z", vars, k)});
  } else if (name == "grenet_perm_2" || name == "grenet_perm_3") {
    const std::size_t n = name.back() == '2' ? 2 : 3;
    e.emplace(CatalogEntry<F>{name, abp_to_determinant(grenet_abp(n, k)), perm_polynomial(n, k)});
  } else {
    throw ArgumentError("unknown catalog entry '" + name + "'");
  }
  if (!verify_expression(e->map, e->target).match) throw Error("catalog entry " + name + " failed self-check");
  return std::move(*e);
}

/// Matrix over a combined ring: the first `main` variables are the main
/// block, the rest are parameters. Entries have degree <= 1 in the main block.
template <Field F>
class ParamTemplate {
 public:
  using Poly = Polynomial<F>;

  ParamTemplate(std::size_t m, VarSetPtr main, VarSetPtr params, const F& k)
      : main_(main), params_(params), matrix_(m, combine(*main, *params), k) {}

  const VarSetPtr& main_vars() const noexcept { return main_; }
  const VarSetPtr& param_vars() const noexcept { return params_; }
  const VarSetPtr& vars() const noexcept { return matrix_.vars(); }
  const PolyMatrix<F>& matrix() const noexcept { return matrix_; }
  std::size_t size() const noexcept { return matrix_.size(); }
  const F& field() const noexcept { return matrix_.field(); }

  /// Parses `text` over the combined ring.
  Poly parse(const std::string& text) const { return parse_polynomial(text, vars(), field()); }

  void set(std::size_t i, std::size_t j, const Poly& p) {
    for (const auto& t : p.terms())
      if (main_degree(t.mono) > 1)
        throw ArgumentError("template entry (" + std::to_string(i + 1) + "," + std::to_string(j + 1) +
                            ") has degree > 1 in the main variables");
    matrix_.set(i, j, p);
  }
  void set(std::size_t i, std::size_t j, const std::string& text) { set(i, j, parse(text)); }

  unsigned main_degree(const Monomial& mono) const {
    unsigned d = 0;
    for (std::size_t v = 0; v < main_->size(); ++v) d += mono[v];
    return d;
  }

  /// Substitutes parameter values, giving an ordinary map over the main ring.
  AffineMatrixMap<F> instantiate(const std::vector<typename F::Element>& values) const {
    if (values.size() != params_->size()) throw ArgumentError("wrong number of parameter values");
    const F& k = field();
    AffineMatrixMap<F> l(size(), main_, k);
    for (std::size_t i = 0; i < size(); ++i)
      for (std::size_t j = 0; j < size(); ++j) {
        std::vector<typename Poly::Term> terms;
        for (const auto& t : matrix_(i, j).terms()) {
          Monomial mm;
          auto c = t.coef;
          for (std::size_t v = 0; v < main_->size(); ++v) mm.set(v, t.mono[v]);
          for (std::size_t v = 0; v < params_->size(); ++v)
            for (unsigned e = 0; e < t.mono[main_->size() + v]; ++e) c = k.mul(c, values[v]);
          terms.push_back({mm, c});
        }
        l.set(i, j, Poly::from_terms(main_, k, std::move(terms)));
      }
    return l;
  }

 private:
  static VarSetPtr combine(const VarSet& a, const VarSet& b) {
    auto names = a.names();
    for (const auto& n : b.names()) names.push_back(n);
    return make_varset(std::move(names));
  }

  VarSetPtr main_, params_;
  PolyMatrix<F> matrix_;
};

template <Field F>
struct CoefficientEquation {
  Monomial monomial;  // in the main variables
  std::string label;  // e.g. "x*y^2"
  Polynomial<F> lhs;  // over the parameters; the equation reads lhs = 0

  std::string to_string() const { return label + ": " + lhs.to_string() + " = 0"; }
};

using MonomialFilter = std::function<bool(const Monomial&)>;

/// Equations (coefficient of mu in det T) - (coefficient of mu in f) = 0, one
/// per main monomial mu accepted by the filter, in decreasing degrevlex
/// order of mu. Identically zero equations are dropped.
template <Field F>
std::vector<CoefficientEquation<F>> extract_coefficient_equations(const ParamTemplate<F>& t,
                                                                  const Polynomial<F>& f,
                                                                  const MonomialFilter& filter = {}) {
  if (!same_vars(f.vars(), t.main_vars()))
    throw RingMismatch("target polynomial must live over the template's main variables");
  require_same_field(f.field(), t.field());
  const F& k = t.field();
  const std::size_t nm = t.main_vars()->size(), np = t.param_vars()->size();
  const auto det = symbolic_det(t.matrix(), t.size() > 8 ? DetOptions{DetAlgorithm::kBerkowitz} : DetOptions{});

  auto cmp = [](const Monomial& a, const Monomial& b) { return a > b; };
  std::map<Monomial, std::vector<typename Polynomial<F>::Term>, decltype(cmp)> groups(cmp);
  for (const auto& term : det.terms()) {
    Monomial mm, pm;
    for (std::size_t v = 0; v < nm; ++v) mm.set(v, term.mono[v]);
    for (std::size_t v = 0; v < np; ++v) pm.set(v, term.mono[nm + v]);
    groups[mm].push_back({pm, term.coef});
  }
  for (const auto& term : f.terms()) groups[term.mono].push_back({Monomial{}, k.neg(term.coef)});

  std::vector<CoefficientEquation<F>> out;
  for (auto& [mono, terms] : groups) {
    if (filter && !filter(mono)) continue;
    auto lhs = Polynomial<F>::from_terms(t.param_vars(), k, std::move(terms));
    if (lhs.is_zero()) continue;
    out.push_back({mono, monomial_to_string(mono, *t.main_vars()), std::move(lhs)});
  }
  return out;
}

/// The r = 3 normal form of a hypothetical 4x4 expression of xy^2 + yt^2 + z^3:
/// first column (0, z, y, t), first row (0, a t + b y, -b z + c t, -c y - a z)
/// with a, b, c = alpha, beta, gamma, and lower block I + Z where
/// Z_ij = X_ij x + Y_ij y + Z_ij z + T_ij t for 2 <= i, j <= 4.
inline ParamTemplate<RationalField> cubic_r3_template() {
  auto main = make_varset({"x", "y", "z", "t"});
  std::vector<std::string> params = {"alpha", "beta", "gamma"};
  for (const char* stem : {"X", "Y", "Z", "T"})
    for (int i = 2; i <= 4; ++i)
      for (int j = 2; j <= 4; ++j) params.push_back(stem + std::to_string(i) + std::to_string(j));
  ParamTemplate<RationalField> t(4, main, make_varset(params), RationalField{});
  t.set(0, 1, "alpha*t + beta*y");
  t.set(0, 2, "-beta*z + gamma*t");
  t.set(0, 3, "-gamma*y - alpha*z");
  t.set(1, 0, "z");
  t.set(2, 0, "y");
  t.set(3, 0, "t");
  for (int i = 2; i <= 4; ++i)
    for (int j = 2; j <= 4; ++j) {
      const std::string ij = std::to_string(i) + std::to_string(j);
      std::string e = "X" + ij + "*x + Y" + ij + "*y + Z" + ij + "*z + T" + ij + "*t";
      if (i == j) e = "1 + " + e;
      t.set(static_cast<std::size_t>(i - 1), static_cast<std::size_t>(j - 1), e);
    }
  return t;
}

inline QPoly cubic_surface() { return parse_polynomial("x*y^2 + y*t^2 + z^3", make_varset({"x", "y", "z", "t"}), RationalField{}); }

/// The six equations exactly as they are displayed in the literature, for comparison.
inline std::vector<std::pair<std::string, std::string>> published_six_equations() {
  return {{"x*y^2", "beta*X23 - gamma*X43 - 1"},
          {"x*z^2", "-beta*X32 - alpha*X42"},
          {"x*t^2", "alpha*X24 + gamma*X34"},
          {"x*y*z", "beta*(X22 - X33) - gamma*X42 - alpha*X43"},
          {"x*y*t", "gamma*(X33 - X44) + alpha*X23 + beta*X24"},
          {"x*z*t", "alpha*(X22 - X44) + gamma*X32 - beta*X34"}};
}

struct CaseVerdict {
  std::string name;        // "alpha != 0", ...
  std::string added;       // the extra generators
  bool expected_trivial;   // what the published claim implies
  std::optional<bool> trivial;  // empty if a resource cap stopped the computation
  std::string error;
  std::string inferred_from;  // set when the verdict follows from another case
  GroebnerStats stats;

  bool agrees() const { return trivial.has_value() && *trivial == expected_trivial; }
};

struct SystemAnalysis {
  std::string system;  // "six", "full" (all degree-3 monomials) or "all" (every monomial)
  std::vector<std::string> equations;
  std::vector<CaseVerdict> cases;
};

struct CubicCaseReport {
  bool six_match_published = false;
  std::vector<std::string> six_equations;
  std::vector<std::string> mismatches;
  std::vector<SystemAnalysis> systems;
  std::string claim = "inconsistent unless alpha = 0 and gamma != 0";
};

/// Regenerates the six x-linear equations, compares them with the published
/// display and decides each case by Groebner triviality, for the six
/// equations and for the full degree-3 system.
inline CubicCaseReport cubic_case_analysis(const GroebnerOptions& opt = {}) {
  using Poly = QPoly;
  const RationalField q;
  const auto tmpl = cubic_r3_template();
  const auto f = cubic_surface();
  CubicCaseReport rep;

  auto six = extract_coefficient_equations(tmpl, f, [](const Monomial& m) { return m.degree() == 3 && m[0] == 1; });
  auto full = extract_coefficient_equations(tmpl, f, [](const Monomial& m) { return m.degree() == 3; });
  auto all = extract_coefficient_equations(tmpl, f);

  std::map<std::string, Poly> got;
  for (const auto& e : six) {
    rep.six_equations.push_back(e.to_string());
    got.emplace(e.label, e.lhs);
  }
  rep.six_match_published = six.size() == 6;
  for (const auto& [label, text] : published_six_equations()) {
    auto expected = parse_polynomial(text, tmpl.param_vars(), q);
    auto it = got.find(label);
    if (it == got.end() || !(it->second == expected)) {
      rep.six_match_published = false;
      rep.mismatches.push_back(label + ": expected " + expected.to_string() + ", got " +
                               (it == got.end() ? std::string("nothing") : it->second.to_string()));
    }
  }

  // one extra variable s serves as the Rabinowitsch inverse
  auto names = tmpl.param_vars()->names();
  names.push_back("s");
  auto ring = make_varset(names);
  auto lift = [&](const Poly& p) { return change_vars(p, ring); };
  auto gen = [&](const std::string& text) { return parse_polynomial(text, ring, q); };

  struct Case {
    const char* name;
    std::vector<std::string> added;
    bool expected_trivial;
  };
  const std::vector<Case> cases = {
      {"alpha != 0", {"1 - s*alpha"}, true},
      {"gamma = 0", {"gamma"}, true},
      {"unrestricted", {}, false},
      {"alpha = 0, gamma != 0", {"alpha", "1 - s*gamma"}, false},
  };
  GroebnerOptions capped = opt;
  if (capped.timeout_seconds <= 0) capped.timeout_seconds = 10;
  for (const auto* sys : {&six, &full, &all}) {
    SystemAnalysis sa;
    sa.system = sys == &six ? "six" : sys == &full ? "full" : "all";
    for (const auto& e : *sys) sa.equations.push_back(e.to_string());
    for (const auto& c : cases) {
      CaseVerdict v;
      v.name = c.name;
      // the complete system encodes a full 4x4 expression, which cannot exist
      v.expected_trivial = sys == &all ? true : c.expected_trivial;
      Ideal<RationalField> ideal(ring, q);
      for (const auto& e : *sys) ideal.add(lift(e.lhs));
      for (const auto& a : c.added) {
        ideal.add(gen(a));
        v.added += (v.added.empty() ? "" : ", ") + a;
      }
      try {
        auto gb = buchberger(ideal, capped);
        v.trivial = gb.is_trivial();
        v.stats = gb.stats();
      } catch (const ResourceLimit& e) {
        v.error = e.what();
      }
      sa.cases.push_back(std::move(v));
    }
    // Adding generators only shrinks the variety, so a nontrivial restricted
    // case settles the unrestricted one when it hit a cap.
    auto& unrestricted = sa.cases[2];
    if (!unrestricted.trivial)
      for (const auto& c : sa.cases)
        if (c.trivial == false) {
          unrestricted.trivial = false;
          unrestricted.inferred_from = c.name;
          break;
        }
    rep.systems.push_back(std::move(sa));
  }
  return rep;
}

}  // namespace dcx
