#pragma once

// Jacobian ideals and singular-locus codimension, the codimension lower-bound
// certificate, the singular-locus avoidance check for determinantal
// expressions, and the step-by-step analysis of an expression L = J + Z.

#include <chrono>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "dcx/error.hpp"
#include "dcx/groebner.hpp"
#include "dcx/linalg.hpp"
#include "dcx/matforms.hpp"
#include "dcx/polynomial.hpp"

namespace dcx {

/// <f, df/dx_1, ..., df/dx_n>; f is always included.
template <Field F>
Ideal<F> jacobian_ideal(const Polynomial<F>& f) {
  Ideal<F> ideal(f.vars(), f.field());
  ideal.add(f);
  for (std::size_t i = 0; i < f.vars()->size(); ++i) ideal.add(partial_derivative(f, i));
  return ideal;
}

struct CodimResult {
  int codim = 0;      // n - dim V(Jac f); n + 1 when the locus is empty
  int dimension = 0;  // -1 when empty
  bool empty = false;
  std::size_t num_vars = 0;
  std::string field;
  GroebnerStats stats;

  std::string label() const { return empty ? "empty" : std::to_string(codim); }
};

template <Field F>
CodimResult codim_sing(const Polynomial<F>& f, const GroebnerOptions& opt = {}) {
  auto gb = buchberger(jacobian_ideal(f), opt);
  CodimResult r;
  r.num_vars = f.vars()->size();
  r.field = f.field().name();
  r.stats = gb.stats();
  r.dimension = dimension(gb);
  r.empty = r.dimension < 0;
  r.codim = r.empty ? static_cast<int>(r.num_vars) + 1 : static_cast<int>(r.num_vars) - r.dimension;
  return r;
}

/// Stable 64-bit FNV-1a digest, hex encoded.
inline std::string fnv1a_hex(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i, h >>= 4) out[static_cast<std::size_t>(i)] = digits[h & 15];
  return out;
}

struct Certificate {
  std::string input;       // canonical text of f
  std::string input_hash;  // digest of field, variables and canonical text
  std::vector<std::string> vars;
  std::string field;
  int degree = kMinusInfinity;
  bool homogeneous = false;
  CodimResult codim;
  std::optional<int> bound;  // dc(f) >= *bound
  std::string reason;        // why no bound, when bound is empty
  double wall_seconds = 0.0;

  bool applicable() const { return bound.has_value(); }
};

struct CertifyOptions {
  GroebnerOptions groebner;
  // set for permanent inputs: the codimension facts used need char != 2
  bool require_odd_characteristic = false;
};

/// dc(f) >= codim Sing(f) + 1 whenever f is homogeneous of degree > 2 and the
/// codimension exceeds 4; otherwise a NotApplicable verdict with the reason.
template <Field F>
Certificate certify_lower_bound(const Polynomial<F>& f, const CertifyOptions& opt = {}) {
  const auto t0 = std::chrono::steady_clock::now();
  if (opt.require_odd_characteristic && f.field().characteristic() == 2)
    throw ArgumentError("characteristic 2 is not allowed for permanent certificates");
  Certificate c;
  c.input = f.to_string();
  c.vars = f.vars()->names();
  c.field = f.field().name();
  std::string key = c.field + "|";
  for (const auto& v : c.vars) key += v + ",";
  c.input_hash = fnv1a_hex(key + "|" + c.input);
  c.degree = f.degree();
  c.homogeneous = f.is_homogeneous();
  c.codim = codim_sing(f, opt.groebner);
  if (f.is_zero()) {
    c.reason = "zero polynomial";
  } else if (!c.homogeneous) {
    c.reason = "not homogeneous";
  } else if (c.degree <= 2) {
    c.reason = "degree " + std::to_string(c.degree) + " <= 2";
  } else if (c.codim.empty) {
    c.reason = "singular locus empty";
  } else if (c.codim.codim <= 4) {
    c.reason = "codim " + std::to_string(c.codim.codim) + " <= 4";
  } else {
    c.bound = c.codim.codim + 1;
  }
  c.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return c;
}

/// All k x k minors of a square polynomial matrix.
template <Field F>
std::vector<Polynomial<F>> minors(const PolyMatrix<F>& a, std::size_t k, const DetOptions& det = {}) {
  const std::size_t m = a.size();
  std::vector<Polynomial<F>> out;
  if (k == 0 || k > m) return out;
  std::vector<std::uint32_t> subsets;
  for (std::uint32_t s = 0; s < (1u << m); ++s)
    if (static_cast<std::size_t>(std::popcount(s)) == k) subsets.push_back(s);
  for (auto rows : subsets)
    for (auto cols : subsets) {
      PolyMatrix<F> sub(k, a.vars(), a.field());
      std::size_t r = 0;
      for (std::size_t i = 0; i < m; ++i) {
        if (!(rows >> i & 1)) continue;
        std::size_t c = 0;
        for (std::size_t j = 0; j < m; ++j)
          if (cols >> j & 1) sub.set(r, c++, a(i, j));
        ++r;
      }
      out.push_back(symbolic_det(sub, det));
    }
  return out;
}

struct AvoidanceMode {
  bool exact = true;
  std::size_t samples = 0;
  std::uint64_t seed = 1;

  static AvoidanceMode exact_mode() { return {}; }
  static AvoidanceMode probabilistic(std::size_t samples, std::uint64_t seed = 1) {
    return {false, samples, seed};
  }
};

struct AvoidanceReport {
  std::size_t m = 0;
  std::size_t rank_at_origin = 0;
  bool rank_condition = false;  // rank L(0) == m - 1
  std::optional<int> codim;     // codim Sing(f), when supplied or computed
  bool precondition = false;    // codim Sing(f) > 4: avoidance is then necessary
  bool exact = true;
  // verdict: true = im(L) avoids rank <= m-2 matrices, false = a witness exists
  std::optional<bool> avoids;
  std::size_t samples = 0;
  std::optional<std::vector<std::string>> witness;  // point x with rank L(x) <= m - 2
  std::optional<std::size_t> witness_rank;
  std::optional<GroebnerStats> stats;
  std::string note;
};

/// Decides whether L(x) ever drops to rank <= m - 2.
template <Field F>
AvoidanceReport check_avoids_singular_locus(const AffineMatrixMap<F>& l, const Polynomial<F>& f,
                                            const AvoidanceMode& mode,
                                            std::optional<int> known_codim = std::nullopt,
                                            const GroebnerOptions& gopt = {}) {
  const F& k = l.field();
  const std::size_t m = l.size();
  const std::size_t n = l.num_vars();
  AvoidanceReport rep;
  rep.m = m;
  rep.exact = mode.exact;
  rep.rank_at_origin = rank(l.constant_part());
  rep.rank_condition = rep.rank_at_origin + 1 == m;
  rep.codim = known_codim ? known_codim : std::optional<int>(codim_sing(f, gopt).codim);
  rep.precondition = *rep.codim > 4;

  if (m < 2) {
    rep.avoids = true;
    rep.note = "1x1 maps never meet the rank <= m-2 locus";
    return rep;
  }
  if (rep.rank_at_origin + 2 <= m) {
    rep.avoids = false;
    rep.witness = std::vector<std::string>(n, "0");
    rep.witness_rank = rep.rank_at_origin;
  } else if (mode.exact) {
    Ideal<F> ideal(l.vars(), k, minors(l, m - 1, DetOptions{DetAlgorithm::kBerkowitz, 8}));
    auto gb = buchberger(ideal, gopt);
    rep.stats = gb.stats();
    rep.avoids = gb.is_trivial();
  } else {
    std::mt19937_64 rng(mode.seed);
    std::vector<typename F::Element> x(n, k.zero());
    rep.avoids = true;
    for (std::size_t t = 0; t < mode.samples; ++t) {
      for (auto& xi : x) {
        if constexpr (F::is_prime_field)
          xi = static_cast<typename F::Element>(rng() % k.modulus());
        else
          xi = k.from_int(static_cast<long>(rng() % 2001) - 1000);
      }
      ++rep.samples;
      std::size_t rk = rank(l.at(std::span<const typename F::Element>(x)));
      if (rk + 2 <= m) {
        rep.avoids = false;
        std::vector<std::string> pt;
        for (const auto& xi : x) pt.push_back(k.to_string(xi));
        rep.witness = std::move(pt);
        rep.witness_rank = rk;
        break;
      }
    }
  }
  if (!rep.precondition) {
    rep.note = "codim Sing(f) = " + std::to_string(*rep.codim) +
               " <= 4: avoidance is not forced for f, so the verdict is informational";
  } else if (*rep.avoids == false) {
    rep.note = "contradiction: codim Sing(f) > 4 forces avoidance, yet a witness exists";
  } else {
    rep.note = mode.exact ? "avoidance decided exactly"
                          : "no witness found; sampling cannot prove avoidance";
  }
  return rep;
}

struct IsotropyResult {
  bool isotropic = false;
  std::size_t dim = 0;
  std::size_t bound = 0;  // m - 1
  bool within_bound = false;
};

/// Tests whether span(vectors) is isotropic for Q(w) = sum_j w_{1j} w_{j1},
/// coordinates ordered (w_12..w_1m, w_21..w_m1). Uses Q on a basis and the
/// polar form Q0(u,v) = Q(u+v) - Q(u) - Q(v) on basis pairs, which is valid
/// in every characteristic.
template <Field F>
IsotropyResult isotropic_dimension(const std::vector<std::vector<typename F::Element>>& vectors,
                                   std::size_t m, const F& k) {
  if (m < 2) throw ArgumentError("isotropic_dimension needs m >= 2");
  const std::size_t h = m - 1;
  for (const auto& v : vectors)
    if (v.size() != 2 * h)
      throw ArgumentError("vector of arity " + std::to_string(v.size()) + ", expected " +
                          std::to_string(2 * h));
  IsotropyResult res;
  res.bound = h;
  std::vector<std::vector<typename F::Element>> basis;
  if (!vectors.empty()) {
    Matrix<F> a(vectors.size(), 2 * h, k);
    for (std::size_t i = 0; i < vectors.size(); ++i)
      for (std::size_t j = 0; j < 2 * h; ++j) a(i, j) = vectors[i][j];
    auto piv = row_reduce(a);
    for (std::size_t i = 0; i < piv.size(); ++i) {
      std::vector<typename F::Element> b(2 * h);
      for (std::size_t j = 0; j < 2 * h; ++j) b[j] = a(i, j);
      basis.push_back(std::move(b));
    }
  }
  auto q = [&](const auto& w) {
    auto s = k.zero();
    for (std::size_t t = 0; t < h; ++t) s = k.add(s, k.mul(w[t], w[h + t]));
    return s;
  };
  auto q0 = [&](const auto& u, const auto& v) {
    auto s = k.zero();
    for (std::size_t t = 0; t < h; ++t)
      s = k.add(s, k.add(k.mul(u[t], v[h + t]), k.mul(v[t], u[h + t])));
    return s;
  };
  res.isotropic = true;
  for (std::size_t i = 0; i < basis.size() && res.isotropic; ++i) {
    if (!k.is_zero(q(basis[i]))) res.isotropic = false;
    for (std::size_t j = i + 1; j < basis.size() && res.isotropic; ++j)
      if (!k.is_zero(q0(basis[i], basis[j]))) res.isotropic = false;
  }
  res.dim = basis.size();
  res.within_bound = res.dim <= h;
  return res;
}

/// Ideal generated by linear forms, with membership by linear elimination.
template <Field F>
class LinearIdeal {
 public:
  using Poly = Polynomial<F>;

  LinearIdeal(const std::vector<Poly>& forms, VarSetPtr vars, const F& k) : vars_(std::move(vars)), field_(k) {
    const std::size_t n = vars_->size();
    Matrix<F> a(std::max<std::size_t>(forms.size(), 1), n, k);
    for (std::size_t i = 0; i < forms.size(); ++i) {
      if (forms[i].degree() > 1 || !k.is_zero(forms[i].constant_term()))
        throw ArgumentError("LinearIdeal expects homogeneous linear generators");
      for (std::size_t v = 0; v < n; ++v) a(i, v) = forms[i].coefficient(Monomial::variable(v));
    }
    pivots_ = row_reduce(a);
    // x_{p_i} = y_{p_i} - sum_{free j} a_ij y_j turns the generators into coordinates
    std::vector<bool> is_pivot(n, false);
    for (auto p : pivots_) is_pivot[p] = true;
    for (std::size_t v = 0; v < n; ++v) images_.push_back(Poly::variable(vars_, k, v));
    for (std::size_t i = 0; i < pivots_.size(); ++i) {
      Poly img = Poly::variable(vars_, k, pivots_[i]);
      for (std::size_t j = 0; j < n; ++j)
        if (!is_pivot[j] && !k.is_zero(a(i, j)))
          img -= Poly::variable(vars_, k, j).scaled(a(i, j));
      images_[pivots_[i]] = std::move(img);
      pivot_mask_ |= std::uint64_t{1} << pivots_[i];
    }
  }

  std::size_t dimension() const { return pivots_.size(); }

  /// g in I^power: every term has degree >= power in the new coordinates.
  bool contains_power(const Poly& g, unsigned power) const {
    if (g.is_zero()) return true;
    Poly h = substitute_affine(g, images_);
    for (const auto& t : h.terms()) {
      unsigned d = 0;
      for (std::size_t v = 0; v < vars_->size(); ++v)
        if (pivot_mask_ >> v & 1) d += t.mono[v];
      if (d < power) return false;
    }
    return true;
  }

  bool contains(const Poly& g) const { return contains_power(g, 1); }

 private:
  VarSetPtr vars_;
  F field_;
  std::vector<std::size_t> pivots_;
  std::vector<Poly> images_;
  std::uint64_t pivot_mask_ = 0;
};

struct GradedPart {
  int degree = 0;
  std::string polynomial;
  bool is_zero = true;
  bool must_vanish = false;  // f is homogeneous of another degree
};

struct AnalysisReport {
  std::size_t m = 0;
  std::size_t rank = 0;  // rank L(0)
  std::string scalar;    // det(P) det(Q); det(J+Z) = scalar * f
  std::vector<std::vector<std::string>> left, right, z;
  int degree = 0;
  bool full_rank_branch = false;  // rank == m - 1

  // populated when rank == m - 1
  std::optional<bool> z11_zero;
  std::optional<bool> quadric_relation;  // sum_{j>=2} Z_1j Z_j1 == 0
  std::vector<std::string> ideal_generators;
  std::optional<std::size_t> ideal_dimension;  // span of the first row/column forms
  std::optional<bool> jacobian_in_ideal;
  std::optional<bool> f_in_ideal_squared;
  std::optional<std::size_t> g_image_dim;
  std::optional<bool> g_image_isotropic;
  std::optional<bool> g_bound_holds;  // dim im(G) <= m - 1
  std::optional<int> codim_upper_bound;

  // populated when rank < m - 1
  std::vector<GradedPart> graded_parts;
  std::optional<bool> homogeneity_consistent;

  bool all_checks_pass() const {
    if (full_rank_branch)
      return z11_zero.value_or(false) && quadric_relation.value_or(false) &&
             jacobian_in_ideal.value_or(false) && f_in_ideal_squared.value_or(false) &&
             g_image_isotropic.value_or(false) && g_bound_holds.value_or(false);
    return homogeneity_consistent.value_or(false);
  }
};

namespace detail {

template <Field F>
std::vector<std::vector<std::string>> matrix_strings(const Matrix<F>& a) {
  std::vector<std::vector<std::string>> out(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out[i].push_back(a.field().to_string(a(i, j)));
  return out;
}

}  // namespace detail

/// Runs the normalization L -> J + Z and checks each structural consequence
/// of det(J + Z) = c * f for a homogeneous f of degree > 2.
template <Field F>
AnalysisReport analyze_expression(const AffineMatrixMap<F>& l, const Polynomial<F>& f) {
  using Poly = Polynomial<F>;
  if (!verify_expression(l, f).match) throw ArgumentError("analyze_expression: det(L) != f");
  if (!f.is_homogeneous() || f.degree() <= 2)
    throw ArgumentError("analyze_expression: f must be homogeneous of degree > 2");
  const F& k = l.field();
  const std::size_t m = l.size();
  const auto vars = l.vars();
  auto norm = rank_and_normalize(l);
  AnalysisReport rep;
  rep.m = m;
  rep.rank = norm.rank;
  rep.degree = f.degree();
  rep.scalar = k.to_string(norm.scalar);
  rep.left = detail::matrix_strings(norm.left);
  rep.right = detail::matrix_strings(norm.right);
  auto z = norm.z_matrix();
  rep.z.resize(m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) rep.z[i].push_back(z(i, j).to_string());
  rep.full_rank_branch = norm.rank + 1 == m;

  if (!rep.full_rank_branch) {
    Poly det = symbolic_det(norm.map, m > 8 ? DetOptions{DetAlgorithm::kBerkowitz} : DetOptions{});
    Poly target = f.scaled(norm.scalar);
    bool ok = true;
    for (int d = 0; d <= static_cast<int>(m); ++d) {
      GradedPart gp;
      gp.degree = d;
      Poly part = det.homogeneous_part(d);
      gp.polynomial = part.to_string();
      gp.is_zero = part.is_zero();
      gp.must_vanish = d != f.degree();
      if (gp.must_vanish && !gp.is_zero) ok = false;
      if (!gp.must_vanish && !(part == target)) ok = false;
      rep.graded_parts.push_back(std::move(gp));
    }
    rep.homogeneity_consistent = ok;
    return rep;
  }

  // J has its zero in position (1,1)
  rep.z11_zero = z(0, 0).is_zero();
  Poly quad(vars, k);
  for (std::size_t j = 1; j < m; ++j) quad += z(0, j) * z(j, 0);
  rep.quadric_relation = quad.is_zero();

  std::vector<Poly> gens;
  for (std::size_t j = 0; j < m; ++j) gens.push_back(z(0, j));
  for (std::size_t i = 1; i < m; ++i) gens.push_back(z(i, 0));
  for (const auto& g : gens)
    if (!g.is_zero()) rep.ideal_generators.push_back(g.to_string());
  LinearIdeal<F> ideal(gens, vars, k);
  rep.ideal_dimension = ideal.dimension();
  bool jac = true;
  for (std::size_t v = 0; v < vars->size(); ++v) jac = jac && ideal.contains(partial_derivative(f, v));
  rep.jacobian_in_ideal = jac;
  rep.f_in_ideal_squared = ideal.contains_power(f, 2);

  // G : x -> (Z_12..Z_1m, Z_21..Z_m1); im(G) is spanned by the per-variable columns
  std::vector<std::vector<typename F::Element>> cols;
  for (std::size_t v = 0; v < vars->size(); ++v) {
    Monomial mv = Monomial::variable(v);
    std::vector<typename F::Element> w;
    for (std::size_t j = 1; j < m; ++j) w.push_back(z(0, j).coefficient(mv));
    for (std::size_t i = 1; i < m; ++i) w.push_back(z(i, 0).coefficient(mv));
    cols.push_back(std::move(w));
  }
  auto iso = isotropic_dimension(cols, m, k);
  rep.g_image_dim = iso.dim;
  rep.g_image_isotropic = iso.isotropic;
  rep.g_bound_holds = iso.within_bound;
  // V(I) = ker G sits inside Sing(f), so codim Sing(f) <= dim im(G) <= m - 1
  rep.codim_upper_bound = static_cast<int>(iso.dim);
  return rep;
}

}  // namespace dcx
