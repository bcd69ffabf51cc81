#pragma once

// JSON reading and writing: matrix-map and ideal files, and every report
// type. Wall-clock fields are dropped when `deterministic` is set so that
// repeated runs produce identical bytes.

#include <fstream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

#include "dcx/error.hpp"
#include "dcx/explore.hpp"
#include "dcx/expressions.hpp"
#include "dcx/field.hpp"
#include "dcx/groebner.hpp"
#include "dcx/matforms.hpp"
#include "dcx/parse.hpp"
#include "dcx/search.hpp"
#include "dcx/singularity.hpp"

namespace dcx {

using json = nlohmann::ordered_json;

inline json field_to_json(const RationalField&) { return "Q"; }
inline json field_to_json(const PrimeField& k) { return json{{"Fp", k.modulus()}}; }
inline json field_to_json(const AnyField& k) {
  return std::visit([](const auto& f) { return field_to_json(f); }, k);
}

inline AnyField field_from_json(const json& j) {
  if (j.is_string()) return parse_field(j.get<std::string>());
  if (j.is_object() && j.contains("Fp") && j["Fp"].is_number_unsigned()) {
    auto p = j["Fp"].get<std::uint64_t>();
    if (p >= (std::uint64_t{1} << 31) || !PrimeField::is_prime(static_cast<std::uint32_t>(p)))
      throw ArgumentError("field: " + std::to_string(p) + " is not a prime below 2^31");
    return PrimeField(static_cast<std::uint32_t>(p));
  }
  throw ArgumentError(R"(field must be "Q" or {"Fp": p})");
}

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ArgumentError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ArgumentError(path + ": " + e.what());
  }
}

/// Contents of a matrix-map file before the entries are parsed.
struct MapFile {
  AnyField field;
  std::vector<std::string> vars;
  std::size_t m = 0;
  std::vector<std::vector<std::string>> entries;

  static MapFile from_json(const json& j) {
    for (const char* key : {"field", "vars", "m", "entries"})
      if (!j.contains(key)) throw ArgumentError(std::string("map file lacks \"") + key + "\"");
    MapFile f{field_from_json(j["field"]), j["vars"].get<std::vector<std::string>>(), j["m"].get<std::size_t>(),
              j["entries"].get<std::vector<std::vector<std::string>>>()};
    if (f.entries.size() != f.m) throw ArgumentError("map file: entries has " + std::to_string(f.entries.size()) +
                                                     " rows, m = " + std::to_string(f.m));
    for (const auto& row : f.entries)
      if (row.size() != f.m) throw ArgumentError("map file: every row needs m entries");
    return f;
  }

  /// Parses the entries over `k` (degree <= 1 is enforced).
  template <Field F>
  AffineMatrixMap<F> build(const F& k) const {
    auto vs = make_varset(vars);
    AffineMatrixMap<F> l(m, vs, k);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j) {
        try {
          l.set(i, j, parse_polynomial(entries[i][j], vs, k));
        } catch (const ParseError& e) {
          throw ParseError("entry (" + std::to_string(i + 1) + "," + std::to_string(j + 1) + "): " + e.what(),
                           e.line(), e.column());
        }
      }
    return l;
  }

  /// Entries parsed over Q and reduced mod p.
  AffineMatrixMap<PrimeField> build_reduced(const PrimeField& k) const {
    auto q = build(RationalField{});
    AffineMatrixMap<PrimeField> l(m, q.vars(), k);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j) l.set(i, j, reduce_mod(q(i, j), k));
    return l;
  }
};

template <Field F>
json map_to_json(const AffineMatrixMap<F>& l) {
  json entries = json::array();
  for (std::size_t i = 0; i < l.size(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < l.size(); ++j) row.push_back(l(i, j).to_string());
    entries.push_back(row);
  }
  return json{{"field", field_to_json(l.field())}, {"vars", l.vars()->names()}, {"m", l.size()}, {"entries", entries}};
}

struct IdealFile {
  AnyField field;
  std::vector<std::string> vars;
  std::vector<std::string> generators;

  static IdealFile from_json(const json& j) {
    for (const char* key : {"field", "vars", "generators"})
      if (!j.contains(key)) throw ArgumentError(std::string("ideal file lacks \"") + key + "\"");
    return {field_from_json(j["field"]), j["vars"].get<std::vector<std::string>>(),
            j["generators"].get<std::vector<std::string>>()};
  }

  template <Field F>
  Ideal<F> build(const F& k) const {
    auto vs = make_varset(vars);
    Ideal<F> ideal(vs, k);
    for (const auto& g : generators) ideal.add(parse_polynomial(g, vs, k));
    return ideal;
  }
};

template <Field F>
json ideal_to_json(const std::vector<Polynomial<F>>& gens, const VarSetPtr& vars, const F& k) {
  json g = json::array();
  for (const auto& p : gens) g.push_back(p.to_string());
  return json{{"field", field_to_json(k)}, {"vars", vars->names()}, {"generators", g}};
}

inline json stats_to_json(const GroebnerStats& s, bool deterministic) {
  json j{{"pairs_reduced", s.pairs_reduced}, {"pairs_skipped", s.pairs_skipped},
         {"zero_reductions", s.zero_reductions}, {"basis_size", s.basis_size},
         {"max_degree", s.max_degree}, {"verified", s.verified}};
  if (!deterministic) j["seconds"] = s.seconds;
  return j;
}

template <Field F>
json basis_to_json(const GroebnerBasis<F>& g, bool deterministic) {
  json els = json::array();
  for (const auto& p : g.elements()) els.push_back(p.to_string());
  return json{{"field", field_to_json(g.field())}, {"vars", g.vars()->names()}, {"order", g.order()},
              {"trivial", g.is_trivial()}, {"dimension", dimension(g)}, {"basis", els},
              {"stats", stats_to_json(g.stats(), deterministic)}};
}

inline json to_json(const VerificationReport& r) {
  json j{{"match", r.match}, {"mode", r.probabilistic ? "probabilistic" : "exact"}, {"field", r.field}};
  if (!r.probabilistic) {
    j["determinant"] = r.determinant;
    if (r.witness_monomial)
      j["witness"] = {{"monomial", *r.witness_monomial},
                      {"det_coefficient", r.det_coefficient},
                      {"target_coefficient", r.target_coefficient}};
  } else {
    j["trials"] = r.trials;
    j["failure_bound"] = r.failure_bound;
    if (r.witness_point) j["witness"] = {{"point", *r.witness_point}};
  }
  return j;
}

inline json to_json(const CodimResult& c, bool deterministic) {
  return json{{"field", c.field}, {"num_vars", c.num_vars}, {"codim", c.label()},
              {"dimension", c.dimension}, {"empty", c.empty}, {"stats", stats_to_json(c.stats, deterministic)}};
}

inline json to_json(const Certificate& c, bool deterministic) {
  json j{{"input_hash", c.input_hash}, {"input", c.input},     {"vars", c.vars},
         {"field", c.field},           {"degree", c.degree},   {"homogeneous", c.homogeneous},
         {"codim", c.codim.label()},   {"applicable", c.applicable()}};
  if (c.bound) {
    j["bound"] = *c.bound;
    j["statement"] = "dc(f) >= " + std::to_string(*c.bound);
  } else {
    j["reason"] = c.reason;
  }
  j["basis"] = stats_to_json(c.codim.stats, deterministic);
  if (!deterministic) j["wall_seconds"] = c.wall_seconds;
  return j;
}

inline json to_json(const AvoidanceReport& r, bool deterministic) {
  json j{{"m", r.m},
         {"rank_at_origin", r.rank_at_origin},
         {"rank_condition", r.rank_condition},
         {"codim", r.codim ? json(*r.codim) : json(nullptr)},
         {"precondition", r.precondition},
         {"mode", r.exact ? "exact" : "probabilistic"},
         {"avoids", r.avoids ? json(*r.avoids) : json(nullptr)},
         {"note", r.note}};
  if (!r.exact) j["samples"] = r.samples;
  if (r.witness) j["witness"] = {{"point", *r.witness}, {"rank", *r.witness_rank}};
  if (r.stats) j["stats"] = stats_to_json(*r.stats, deterministic);
  return j;
}

inline json to_json(const AnalysisReport& r) {
  json j{{"m", r.m}, {"rank", r.rank}, {"degree", r.degree}, {"scalar", r.scalar},
         {"left", r.left}, {"right", r.right}, {"z", r.z}, {"branch", r.full_rank_branch ? "rank m-1" : "rank < m-1"}};
  auto opt = [](const auto& o) { return o ? json(*o) : json(nullptr); };
  if (r.full_rank_branch) {
    j["z11_zero"] = opt(r.z11_zero);
    j["quadric_relation"] = opt(r.quadric_relation);
    j["ideal_generators"] = r.ideal_generators;
    j["ideal_dimension"] = opt(r.ideal_dimension);
    j["jacobian_in_ideal"] = opt(r.jacobian_in_ideal);
    j["f_in_ideal_squared"] = opt(r.f_in_ideal_squared);
    j["g_image_dim"] = opt(r.g_image_dim);
    j["g_image_isotropic"] = opt(r.g_image_isotropic);
    j["g_bound_holds"] = opt(r.g_bound_holds);
    j["codim_upper_bound"] = opt(r.codim_upper_bound);
  } else {
    json parts = json::array();
    for (const auto& p : r.graded_parts)
      parts.push_back({{"degree", p.degree}, {"polynomial", p.polynomial}, {"zero", p.is_zero},
                       {"must_vanish", p.must_vanish}});
    j["graded_parts"] = parts;
    j["homogeneity_consistent"] = opt(r.homogeneity_consistent);
  }
  j["all_checks_pass"] = r.all_checks_pass();
  return j;
}

template <Field F>
json to_json(const std::vector<CoefficientEquation<F>>& eqs) {
  json a = json::array();
  for (const auto& e : eqs) a.push_back({{"monomial", e.label}, {"equation", e.lhs.to_string() + " = 0"}});
  return a;
}

inline json to_json(const CubicCaseReport& r, bool deterministic) {
  json systems = json::array();
  for (const auto& s : r.systems) {
    json cases = json::array();
    for (const auto& c : s.cases) {
      json cj{{"case", c.name}, {"added", c.added},
              {"verdict", c.trivial ? (*c.trivial ? "inconsistent" : "consistent") : "unknown"},
              {"claim", c.expected_trivial ? "inconsistent" : "consistent"}, {"agrees", c.agrees()}};
      if (!c.inferred_from.empty()) cj["inferred_from"] = c.inferred_from;
      if (!c.error.empty()) cj["error"] = c.error;
      cj["stats"] = stats_to_json(c.stats, deterministic);
      cases.push_back(cj);
    }
    systems.push_back({{"system", s.system}, {"equations", s.equations}, {"cases", cases}});
  }
  return json{{"claim", r.claim}, {"six_equations", r.six_equations},
              {"six_match_published", r.six_match_published}, {"mismatches", r.mismatches},
              {"systems", systems}};
}

inline json to_json(const FoundExpression& f) {
  return json{{"type", "found"}, {"index", f.index}, {"rank", f.rank}, {"lambda", f.lambda}, {"map", map_to_json(f.map)}};
}

inline json to_json(const SearchResult& r) {
  json ranks = json::array();
  for (const auto& s : r.ranks) {
    json e{{"rank", s.rank}, {"skipped", s.skipped}, {"evaluated", s.evaluated}, {"found", s.found}};
    if (s.skipped) e["reason"] = s.reason;
    ranks.push_back(e);
  }
  return json{{"type", "verdict"}, {"field", r.field}, {"m", r.m}, {"canonical", r.canonical},
              {"estimate", r.estimate}, {"evaluated", r.evaluated}, {"found", r.found},
              {"exhausted", r.exhausted}, {"stopped_early", r.stopped_early}, {"ranks", ranks}};
}

inline json to_json(const DcResult& r) {
  json searches = json::array();
  for (const auto& s : r.searches) searches.push_back(to_json(s));
  json j{{"field", r.field}, {"dc", r.dc ? json(*r.dc) : json(nullptr)}, {"label", r.label()},
         {"m_max", r.m_max}, {"searches", searches},
         {"note", "value over " + r.field + " only; no characteristic-0 claim"}};
  if (r.witness) j["witness"] = map_to_json(*r.witness);
  return j;
}

inline json to_json(const SampleReport& r) {
  json hist = json::object();
  for (const auto& [c, k] : r.histogram) hist[std::to_string(c)] = k;
  json viol = json::array();
  for (const auto& v : r.violations) viol.push_back({{"trial", v.trial}, {"seed", v.seed}, {"codim", v.codim}});
  auto modal = r.modal_codim();
  return json{{"n", r.n}, {"m", r.m}, {"p", r.p}, {"trials", r.trials}, {"seed", r.seed},
              {"histogram", hist}, {"degenerate", r.degenerate}, {"timeouts", r.timeouts},
              {"bound", r.bound}, {"violations", viol}, {"modal_codim", modal ? json(*modal) : json(nullptr)},
              {"generic_fraction", r.generic_fraction}, {"threshold", r.threshold},
              {"meets_threshold", r.meets_threshold}, {"caveat", r.caveat}};
}

/// codim,count lines.
inline std::string histogram_csv(const SampleReport& r) {
  std::ostringstream out;
  out << "codim,count\n";
  for (const auto& [c, k] : r.histogram) out << c << ',' << k << '\n';
  if (r.degenerate) out << "degenerate," << r.degenerate << '\n';
  if (r.timeouts) out << "timeout," << r.timeouts << '\n';
  return out.str();
}

}  // namespace dcx
