// dcx: command-line front end.
//
// Exit codes: 0 verdict computed, 1 verdict computed and negative,
// 2 usage or input error, 3 resource cap hit.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "dcx/explore.hpp"
#include "dcx/expressions.hpp"
#include "dcx/io.hpp"
#include "dcx/search.hpp"
#include "dcx/singularity.hpp"

namespace {

using dcx::json;

enum Exit { kOk = 0, kNegative = 1, kUsage = 2, kCap = 3 };

struct Common {
  std::string field;
  std::string format = "json";
  bool deterministic = false;
  bool verify_basis = false;
  std::optional<std::size_t> max_pairs, max_degree, jobs;
  std::optional<double> timeout;
  std::optional<std::uint64_t> search_cap;
  std::uint64_t seed = 1;
};

template <typename T>
T env_or(const char* name, std::optional<T> flag, T fallback) {
  if (flag) return *flag;
  if (const char* v = std::getenv(name)) {
    try {
      if constexpr (std::is_floating_point_v<T>)
        return static_cast<T>(std::stod(v));
      else
        return static_cast<T>(std::stoull(v));
    } catch (const std::exception&) {
      throw dcx::ArgumentError(std::string("environment variable ") + name + " is not a number");
    }
  }
  return fallback;
}

dcx::GroebnerOptions groebner_options(const Common& c) {
  dcx::GroebnerOptions o;
  o.max_pairs = env_or<std::size_t>("DCX_MAX_PAIRS", c.max_pairs, 0);
  o.max_degree = static_cast<unsigned>(env_or<std::size_t>("DCX_MAX_DEGREE", c.max_degree, 0));
  o.timeout_seconds = env_or<double>("DCX_TIMEOUT", c.timeout, 0.0);
  if (c.verify_basis) o.verify = true;
  return o;
}

unsigned jobs(const Common& c) { return static_cast<unsigned>(env_or<std::size_t>("DCX_JOBS", c.jobs, 1)); }

/// Text rendering: one "path: value" line per JSON leaf, so the text and JSON
/// outputs carry the same data.
void flatten(const json& j, const std::string& prefix, std::ostream& out) {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it)
      flatten(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), out);
  } else if (j.is_array()) {
    bool scalars = std::all_of(j.begin(), j.end(), [](const json& e) { return e.is_primitive(); });
    if (scalars) {
      out << prefix << ": [";
      for (std::size_t i = 0; i < j.size(); ++i) out << (i ? ", " : "") << (j[i].is_string() ? j[i].get<std::string>() : j[i].dump());
      out << "]\n";
    } else {
      for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], prefix + "[" + std::to_string(i) + "]", out);
    }
  } else {
    out << prefix << ": " << (j.is_string() ? j.get<std::string>() : j.dump()) << '\n';
  }
}

void emit(const Common& c, const json& j) {
  if (c.format == "text")
    flatten(j, "", std::cout);
  else
    std::cout << j.dump(2) << '\n';
}

/// One record per line, for streams.
void emit_line(const Common& c, const json& j) {
  if (c.format == "text") {
    flatten(j, "", std::cout);
    std::cout << '\n';
  } else {
    std::cout << j.dump() << '\n';
  }
}

struct PolyInput {
  std::string text;
  std::optional<std::vector<std::string>> vars;
  bool permanent = false;
};

std::vector<std::string> names_of(const dcx::VarSetPtr& v) { return v->names(); }

/// Expands the built-in aliases.
PolyInput resolve_poly(const std::string& s) {
  auto generic = [](std::size_t n, bool perm) {
    auto f = perm ? dcx::perm_polynomial(n, dcx::RationalField{}) : dcx::generic_det_polynomial(n, dcx::RationalField{});
    return PolyInput{f.to_string(), names_of(f.vars()), perm};
  };
  if (s == "perm2" || s == "perm3" || s == "perm4") return generic(static_cast<std::size_t>(s.back() - '0'), true);
  if (s == "det2" || s == "det3") return generic(static_cast<std::size_t>(s.back() - '0'), false);
  if (s == "cubic") return {"x*y^2 + y*t^2 + z^3", std::vector<std::string>{"x", "y", "z", "t"}, false};
  if (s.rfind("fermat:", 0) == 0) {
    auto rest = s.substr(7);
    auto colon = rest.find(':');
    if (colon == std::string::npos) throw dcx::ArgumentError("fermat alias is fermat:d:n");
    std::size_t d = 0, n = 0;
    try {
      d = std::stoul(rest.substr(0, colon));
      n = std::stoul(rest.substr(colon + 1));
    } catch (const std::exception&) {
      throw dcx::ArgumentError("fermat alias is fermat:d:n");
    }
    if (d < 1 || d > dcx::Monomial::kMaxExponent || n < 1 || n > dcx::Monomial::kMaxVars)
      throw dcx::ArgumentError("fermat:d:n needs 1 <= d <= 127 and 1 <= n <= 64");
    std::string text;
    std::vector<std::string> vars;
    for (std::size_t i = 1; i <= n; ++i) {
      vars.push_back("x" + std::to_string(i));
      text += (i > 1 ? " + " : "") + vars.back() + "^" + std::to_string(d);
    }
    return {text, vars, false};
  }
  return {s, std::nullopt, false};
}

template <dcx::Field F>
dcx::Polynomial<F> build_poly(const PolyInput& in, const F& k) {
  if (in.vars) return dcx::parse_polynomial(in.text, dcx::make_varset(*in.vars), k);
  return dcx::parse_polynomial(in.text, k);
}

/// The polynomial over the map's variable set (it may use a subset).
template <dcx::Field F>
dcx::Polynomial<F> build_poly_over(const PolyInput& in, const dcx::VarSetPtr& vars, const F& k) {
  if (!in.vars) return dcx::parse_polynomial(in.text, vars, k);
  return dcx::change_vars(build_poly(in, k), vars);
}

dcx::AnyField field_or(const std::string& flag, const std::string& fallback) {
  return dcx::parse_field(flag.empty() ? fallback : flag);
}

/// Runs `body` with the map built over the requested field.
template <typename Body>
int with_map(const Common& c, const std::string& path, bool reduce, Body&& body) {
  auto file = dcx::MapFile::from_json(dcx::read_json_file(path));
  if (c.field.empty()) return std::visit([&](const auto& k) { return body(file.build(k)); }, file.field);
  auto want = dcx::parse_field(c.field);
  const bool file_q = std::holds_alternative<dcx::RationalField>(file.field);
  if (auto* p = std::get_if<dcx::PrimeField>(&want)) {
    if (file_q) {
      if (!reduce) throw dcx::ArgumentError("map is over Q; pass --reduce to use it over " + p->name());
      return body(file.build_reduced(*p));
    }
    if (std::get<dcx::PrimeField>(file.field).modulus() != p->modulus())
      throw dcx::ArgumentError("map is over " + dcx::field_name(file.field) + ", not " + p->name());
    return body(file.build(*p));
  }
  if (!file_q) throw dcx::ArgumentError("map is over " + dcx::field_name(file.field) + ", not Q");
  return body(file.build(dcx::RationalField{}));
}

dcx::PrimeField require_prime(const std::string& flag, const char* cmd) {
  if (flag.empty()) throw dcx::ArgumentError(std::string(cmd) + " needs --field Fp:p");
  auto f = dcx::parse_field(flag);
  if (!std::holds_alternative<dcx::PrimeField>(f)) throw dcx::ArgumentError(std::string(cmd) + " works over F_p only");
  return std::get<dcx::PrimeField>(f);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Determinantal complexity toolkit: exact polynomial algebra, Groebner bases, "
               "singular-locus certificates and expression search"};
  app.require_subcommand(1);
  Common c;
  auto add_common = [&](CLI::App* s) {
    s->add_option("--field", c.field, "Q, Fp:p, F<p> or GF(p)");
    s->add_option("--format", c.format, "json or text")->check(CLI::IsMember({"json", "text"}));
    s->add_flag("--deterministic", c.deterministic, "omit wall-clock timings");
    s->add_option("--max-pairs", c.max_pairs, "Groebner S-pair cap (env DCX_MAX_PAIRS)");
    s->add_option("--max-degree", c.max_degree, "Groebner degree cap (env DCX_MAX_DEGREE)");
    s->add_option("--timeout", c.timeout, "Groebner timeout in seconds (env DCX_TIMEOUT)");
    s->add_flag("--verify-basis", c.verify_basis, "re-check every S-pair of each Groebner basis");
    s->add_option("--jobs", c.jobs, "worker threads (env DCX_JOBS)");
    s->add_option("--seed", c.seed, "random seed");
  };

  std::string poly, map_path, ideal_path, name, filter = "x-linear", mode = "exact", csv_path;
  bool reduce = false, unrestricted = false, first = false, list = false;
  std::size_t trials = 20, samples = 0, n = 3, m = 2, m_max = 3;
  std::uint32_t p = 101;

  auto* parse = app.add_subcommand("parse", "print the canonical form of a polynomial");
  parse->add_option("--poly", poly, "polynomial or alias")->required();
  auto* verify = app.add_subcommand("verify", "check det(L) == f");
  verify->add_option("--map", map_path, "matrix-map JSON file")->required();
  verify->add_option("--poly", poly)->required();
  verify->add_option("--mode", mode)->check(CLI::IsMember({"exact", "random"}));
  verify->add_option("--trials", trials, "random-mode trials");
  verify->add_flag("--reduce", reduce, "reduce a Q map modulo the requested prime");
  auto* codim = app.add_subcommand("codim", "codimension of the singular locus (or of an ideal)");
  codim->add_option("--poly", poly);
  codim->add_option("--ideal", ideal_path, "ideal JSON file: report its dimension instead");
  auto* certify = app.add_subcommand("certify", "codimension lower-bound certificate");
  certify->add_option("--poly", poly)->required();
  auto* analyze = app.add_subcommand("analyze", "normalize L = J + Z and check each structural step");
  analyze->add_option("--map", map_path)->required();
  analyze->add_option("--poly", poly)->required();
  analyze->add_flag("--reduce", reduce);
  auto* avoid = app.add_subcommand("avoid-check", "does L(x) ever drop to rank <= m - 2?");
  avoid->add_option("--map", map_path)->required();
  avoid->add_option("--poly", poly)->required();
  avoid->add_option("--samples", samples, "random points instead of the exact Groebner check");
  avoid->add_flag("--reduce", reduce);
  auto* grenet = app.add_subcommand("grenet", "size 2^n - 1 expression of perm_n");
  grenet->add_option("--n", n)->required()->check(CLI::Range(1, 4));
  auto* catalog = app.add_subcommand("catalog", "built-in expressions");
  catalog->add_option("--name", name);
  catalog->add_flag("--list", list);
  auto* coeff = app.add_subcommand("coeff-eqs", "coefficient equations of the cubic r = 3 template");
  coeff->add_option("--filter", filter, "x-linear, degree3 or all")
      ->check(CLI::IsMember({"x-linear", "degree3", "all"}));
  auto* cubic = app.add_subcommand("cubic-case", "case analysis of the cubic r = 3 template");
  auto* search = app.add_subcommand("search", "enumerate size-m expressions over F_p (JSON lines)");
  search->add_option("--poly", poly)->required();
  search->add_option("--m", m)->required()->check(CLI::Range(1, 4));
  search->add_flag("--unrestricted", unrestricted, "enumerate every affine map");
  search->add_flag("--first", first, "stop at the first expression");
  search->add_option("--cap", c.search_cap, "candidate cap (env DCX_SEARCH_CAP)");
  auto* dc = app.add_subcommand("dc", "exact dc over F_p by search");
  dc->add_option("--poly", poly)->required();
  dc->add_option("--m-max", m_max)->check(CLI::Range(1, 4));
  dc->add_option("--cap", c.search_cap, "candidate cap (env DCX_SEARCH_CAP)");
  auto* bertini = app.add_subcommand("bertini", "sample codim Sing(det L) for random linear L");
  bertini->add_option("--n", n)->required();
  bertini->add_option("--m", m)->required();
  bertini->add_option("--p", p);
  bertini->add_option("--trials", trials);
  bertini->add_option("--csv", csv_path, "write the histogram as CSV");
  auto* cone = app.add_subcommand("cone-reduce", "drop variables a linear map does not see");
  cone->add_option("--map", map_path)->required();
  cone->add_flag("--reduce", reduce);
  for (auto* s : {parse, verify, codim, certify, analyze, avoid, grenet, catalog, coeff, cubic, search, dc, bertini, cone})
    add_common(s);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  const bool det = c.deterministic;
  try {
    if (parse->parsed()) {
      auto in = resolve_poly(poly);
      return std::visit(
          [&](const auto& k) {
            auto f = build_poly(in, k);
            emit(c, {{"field", k.name()}, {"vars", f.vars()->names()}, {"polynomial", f.to_string()},
                     {"degree", f.is_zero() ? json(nullptr) : json(f.degree())}, {"homogeneous", f.is_homogeneous()},
                     {"terms", f.size()}});
            return int{kOk};
          },
          field_or(c.field, "Q"));
    }
    if (verify->parsed()) {
      auto in = resolve_poly(poly);
      return with_map(c, map_path, reduce, [&](const auto& l) {
        auto f = build_poly_over(in, l.vars(), l.field());
        auto vm = mode == "exact" ? dcx::VerifyMode::exact() : dcx::VerifyMode::random(trials, c.seed);
        auto r = dcx::verify_expression(l, f, vm);
        emit(c, dcx::to_json(r));
        return r.match ? int{kOk} : int{kNegative};
      });
    }
    if (codim->parsed()) {
      auto gopt = groebner_options(c);
      if (!ideal_path.empty()) {
        auto file = dcx::IdealFile::from_json(dcx::read_json_file(ideal_path));
        auto k = c.field.empty() ? file.field : dcx::parse_field(c.field);
        return std::visit(
            [&](const auto& kk) {
              auto gb = dcx::buchberger(file.build(kk), gopt);
              emit(c, dcx::basis_to_json(gb, det));
              return int{kOk};
            },
            k);
      }
      if (poly.empty()) throw dcx::ArgumentError("codim needs --poly or --ideal");
      auto in = resolve_poly(poly);
      return std::visit(
          [&](const auto& k) {
            emit(c, dcx::to_json(dcx::codim_sing(build_poly(in, k), gopt), det));
            return int{kOk};
          },
          field_or(c.field, "Fp:32003"));
    }
    if (certify->parsed()) {
      auto in = resolve_poly(poly);
      dcx::CertifyOptions co;
      co.groebner = groebner_options(c);
      co.require_odd_characteristic = in.permanent;
      return std::visit(
          [&](const auto& k) {
            auto cert = dcx::certify_lower_bound(build_poly(in, k), co);
            emit(c, dcx::to_json(cert, det));
            return cert.applicable() ? int{kOk} : int{kNegative};
          },
          field_or(c.field, "Fp:32003"));
    }
    if (analyze->parsed()) {
      auto in = resolve_poly(poly);
      return with_map(c, map_path, reduce, [&](const auto& l) {
        auto r = dcx::analyze_expression(l, build_poly_over(in, l.vars(), l.field()));
        emit(c, dcx::to_json(r));
        return r.all_checks_pass() ? int{kOk} : int{kNegative};
      });
    }
    if (avoid->parsed()) {
      auto in = resolve_poly(poly);
      auto gopt = groebner_options(c);
      return with_map(c, map_path, reduce, [&](const auto& l) {
        auto am = samples ? dcx::AvoidanceMode::probabilistic(samples, c.seed) : dcx::AvoidanceMode::exact_mode();
        auto r = dcx::check_avoids_singular_locus(l, build_poly_over(in, l.vars(), l.field()), am, std::nullopt, gopt);
        emit(c, dcx::to_json(r, det));
        return r.avoids.value_or(false) ? int{kOk} : int{kNegative};
      });
    }
    if (grenet->parsed()) {
      return std::visit(
          [&](const auto& k) {
            auto abp = dcx::grenet_abp(n, k);
            auto l = dcx::abp_to_determinant(abp);
            auto f = dcx::perm_polynomial(n, k);
            auto r = dcx::verify_expression(l, f);
            emit(c, {{"n", n}, {"vertices", abp.num_vertices()}, {"edges", abp.edges().size()}, {"size", l.size()},
                     {"target", f.to_string()}, {"match", r.match}, {"map", dcx::map_to_json(l)}});
            return r.match ? int{kOk} : int{kNegative};
          },
          field_or(c.field, "Q"));
    }
    if (catalog->parsed()) {
      if (list || name.empty()) {
        emit(c, {{"entries", dcx::catalog_names()}});
        return kOk;
      }
      return std::visit(
          [&](const auto& k) {
            auto e = dcx::catalog_get(name, k);
            emit(c, {{"name", e.name}, {"target", e.target.to_string()}, {"verified", true},
                     {"map", dcx::map_to_json(e.map)}});
            return int{kOk};
          },
          field_or(c.field, "Q"));
    }
    if (coeff->parsed()) {
      auto t = dcx::cubic_r3_template();
      dcx::MonomialFilter fl;
      if (filter == "x-linear") fl = [](const dcx::Monomial& mo) { return mo.degree() == 3 && mo[0] == 1; };
      if (filter == "degree3") fl = [](const dcx::Monomial& mo) { return mo.degree() == 3; };
      auto eqs = dcx::extract_coefficient_equations(t, dcx::cubic_surface(), fl);
      emit(c, {{"template", "cubic r = 3"}, {"filter", filter}, {"count", eqs.size()}, {"equations", dcx::to_json(eqs)}});
      return kOk;
    }
    if (cubic->parsed()) {
      auto r = dcx::cubic_case_analysis(groebner_options(c));
      emit(c, dcx::to_json(r, det));
      return kOk;
    }
    if (search->parsed()) {
      auto k = require_prime(c.field, "search");
      dcx::SearchSpec spec(build_poly(resolve_poly(poly), k), m);
      spec.cap = env_or<std::uint64_t>("DCX_SEARCH_CAP", c.search_cap, dcx::kDefaultSearchCap);
      spec.canonical = !unrestricted;
      spec.stop_at_first = first;
      spec.jobs = jobs(c);
      auto res = dcx::search_expressions(spec, [&](const dcx::FoundExpression& fe) {
        emit_line(c, dcx::to_json(fe));
        return true;
      });
      emit_line(c, dcx::to_json(res));
      return res.found ? kOk : kNegative;
    }
    if (dc->parsed()) {
      auto k = require_prime(c.field, "dc");
      auto cap = env_or<std::uint64_t>("DCX_SEARCH_CAP", c.search_cap, dcx::kDefaultSearchCap);
      auto res = dcx::dc_exact(build_poly(resolve_poly(poly), k), m_max, cap, jobs(c));
      emit(c, dcx::to_json(res));
      return res.dc ? kOk : kNegative;
    }
    if (bertini->parsed()) {
      dcx::SampleOptions so;
      so.groebner = groebner_options(c);
      so.jobs = jobs(c);
      auto r = dcx::sample_codim(n, m, p, trials, c.seed, so);
      if (!csv_path.empty()) {
        std::ofstream out(csv_path);
        if (!out) throw dcx::ArgumentError("cannot write " + csv_path);
        out << dcx::histogram_csv(r);
      }
      emit(c, dcx::to_json(r));
      return r.violations.empty() ? kOk : kNegative;
    }
    if (cone->parsed()) {
      return with_map(c, map_path, reduce, [&](const auto& l) {
        auto r = dcx::cone_reduce(l);
        emit(c, {{"kernel_dim", r.kernel_dim}, {"kept", r.kept}, {"map", dcx::map_to_json(r.map)}});
        return int{kOk};
      });
    }
  } catch (const dcx::ResourceLimit& e) {
    std::cerr << "resource cap (" << e.stage() << "): " << e.what() << '\n';
    return kCap;
  } catch (const dcx::ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kUsage;
  } catch (const dcx::ArgumentError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const dcx::RingMismatch& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: malformed JSON input: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kNegative;
  }
  return kUsage;
}
