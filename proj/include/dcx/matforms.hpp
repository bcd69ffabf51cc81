#pragma once

// Matrices of polynomials, affine-linear matrix maps L : k^n -> k^{m x m},
// symbolic determinants, and normalization of the constant part L(0).

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "dcx/error.hpp"
#include "dcx/linalg.hpp"
#include "dcx/polynomial.hpp"

namespace dcx {

/// Square grid of polynomials over one ring. No degree restriction.
template <Field F>
class PolyMatrix {
 public:
  using Poly = Polynomial<F>;

  PolyMatrix(std::size_t m, VarSetPtr vars, F field)
      : m_(m), vars_(std::move(vars)), field_(std::move(field)) {
    if (m_ == 0) throw ArgumentError("matrix size must be at least 1");
    entries_.assign(m_ * m_, Poly(vars_, field_));
  }

  std::size_t size() const noexcept { return m_; }
  const VarSetPtr& vars() const noexcept { return vars_; }
  const F& field() const noexcept { return field_; }

  const Poly& operator()(std::size_t i, std::size_t j) const { return entries_.at(i * m_ + j); }

  void set(std::size_t i, std::size_t j, Poly p) {
    if (!same_vars(p.vars(), vars_)) throw RingMismatch("matrix entry over a different variable set");
    require_same_field(p.field(), field_);
    entries_.at(i * m_ + j) = std::move(p);
  }

  friend bool operator==(const PolyMatrix& a, const PolyMatrix& b) {
    return a.m_ == b.m_ && a.entries_ == b.entries_;
  }

 protected:
  std::size_t m_;
  VarSetPtr vars_;
  F field_;
  std::vector<Poly> entries_;
};

/// An m x m matrix whose entries are polynomials of degree at most 1.
template <Field F>
class AffineMatrixMap : public PolyMatrix<F> {
 public:
  using Poly = Polynomial<F>;
  using Element = typename F::Element;

  AffineMatrixMap(std::size_t m, VarSetPtr vars, F field) : PolyMatrix<F>(m, std::move(vars), std::move(field)) {}

  explicit AffineMatrixMap(const PolyMatrix<F>& g) : PolyMatrix<F>(g) {
    for (std::size_t i = 0; i < this->m_; ++i)
      for (std::size_t j = 0; j < this->m_; ++j) check_entry(i, j, (*this)(i, j));
  }

  void set(std::size_t i, std::size_t j, Poly p) {
    check_entry(i, j, p);
    PolyMatrix<F>::set(i, j, std::move(p));
  }

  std::size_t num_vars() const { return this->vars_->size(); }

  /// Constant part L(0).
  Matrix<F> constant_part() const {
    Matrix<F> c(this->m_, this->m_, this->field_);
    for (std::size_t i = 0; i < this->m_; ++i)
      for (std::size_t j = 0; j < this->m_; ++j) c(i, j) = (*this)(i, j).constant_term();
    return c;
  }

  /// Coefficient matrix of variable v: the linear map's v-th column.
  Matrix<F> linear_part(std::size_t v) const {
    Matrix<F> c(this->m_, this->m_, this->field_);
    Monomial mv = Monomial::variable(v);
    for (std::size_t i = 0; i < this->m_; ++i)
      for (std::size_t j = 0; j < this->m_; ++j) c(i, j) = (*this)(i, j).coefficient(mv);
    return c;
  }

  /// L(x) at a point.
  Matrix<F> at(std::span<const Element> x) const {
    Matrix<F> c(this->m_, this->m_, this->field_);
    for (std::size_t i = 0; i < this->m_; ++i)
      for (std::size_t j = 0; j < this->m_; ++j) c(i, j) = evaluate((*this)(i, j), x);
    return c;
  }

  /// P * L * Q for constant matrices P, Q.
  AffineMatrixMap transformed(const Matrix<F>& p, const Matrix<F>& q) const {
    const std::size_t m = this->m_;
    const F& k = this->field_;
    std::vector<Poly> tmp(m * m, Poly(this->vars_, k));
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j)
        for (std::size_t l = 0; l < m; ++l)
          if (!k.is_zero(p(i, l))) tmp[i * m + j] += (*this)(l, j).scaled(p(i, l));
    AffineMatrixMap out(m, this->vars_, k);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j) {
        Poly acc(this->vars_, k);
        for (std::size_t l = 0; l < m; ++l)
          if (!k.is_zero(q(l, j))) acc += tmp[i * m + l].scaled(q(l, j));
        out.set(i, j, std::move(acc));
      }
    return out;
  }

  std::string to_string() const {
    std::string s;
    for (std::size_t i = 0; i < this->m_; ++i) {
      s += "[";
      for (std::size_t j = 0; j < this->m_; ++j) s += (j ? ", " : "") + (*this)(i, j).to_string();
      s += "]\n";
    }
    return s;
  }

 private:
  static void check_entry(std::size_t i, std::size_t j, const Poly& p) {
    if (p.degree() > 1)
      throw ArgumentError("entry (" + std::to_string(i + 1) + "," + std::to_string(j + 1) +
                          ") has degree " + std::to_string(p.degree()) + " > 1");
  }
};

enum class DetAlgorithm { kLaplaceMemo, kBerkowitz };

struct DetOptions {
  DetAlgorithm algorithm = DetAlgorithm::kLaplaceMemo;
  std::size_t laplace_cap = 8;
};

/// Laplace expansion memoized over column subsets: 2^m subproblems.
template <Field F>
Polynomial<F> det_laplace(const PolyMatrix<F>& a) {
  using Poly = Polynomial<F>;
  const std::size_t m = a.size();
  if (m > 24) throw ResourceLimit("symbolic_det", "laplace expansion beyond 24 columns");
  // level k holds determinants of the bottom k rows restricted to column sets of size k
  std::vector<std::optional<Poly>> memo(std::size_t{1} << m);
  memo[0] = Poly::constant(a.vars(), a.field(), a.field().one());
  std::vector<std::uint32_t> masks(std::size_t{1} << m);
  std::iota(masks.begin(), masks.end(), 0u);
  std::stable_sort(masks.begin(), masks.end(),
                   [](std::uint32_t x, std::uint32_t y) { return std::popcount(x) < std::popcount(y); });
  for (std::uint32_t s : masks) {
    if (s == 0) continue;
    const std::size_t k = static_cast<std::size_t>(std::popcount(s));
    const std::size_t row = m - k;
    Poly acc(a.vars(), a.field());
    int idx = 0;
    for (std::size_t j = 0; j < m; ++j) {
      if (!(s >> j & 1)) continue;
      const Poly& e = a(row, j);
      const auto& sub = memo[s & ~(std::uint32_t{1} << j)];
      if (!e.is_zero() && sub && !sub->is_zero()) {
        Poly t = e * *sub;
        acc = (idx % 2) ? acc - t : acc + t;
      }
      ++idx;
    }
    if (!acc.is_zero()) memo[s] = std::move(acc);
  }
  auto& full = memo[(std::size_t{1} << m) - 1];
  return full ? *full : Poly(a.vars(), a.field());
}

/// Berkowitz's division-free characteristic-polynomial recursion.
template <Field F>
Polynomial<F> det_berkowitz(const PolyMatrix<F>& a) {
  using Poly = Polynomial<F>;
  const std::size_t n = a.size();
  const F& k = a.field();
  const Poly zero(a.vars(), k);
  const Poly one = Poly::constant(a.vars(), k, k.one());
  // v holds coefficients of det(lambda I - A_r), highest degree first
  std::vector<Poly> v{one, -a(0, 0)};
  for (std::size_t r = 1; r < n; ++r) {
    // t = [1, -a_rr, -R C, -R A C, ..., -R A^{r-1} C]
    std::vector<Poly> t;
    t.reserve(r + 2);
    t.push_back(one);
    t.push_back(-a(r, r));
    std::vector<Poly> col(r, zero);  // A_r^i * C
    for (std::size_t i = 0; i < r; ++i) col[i] = a(i, r);
    for (std::size_t pw = 0; pw < r; ++pw) {
      Poly rc = zero;
      for (std::size_t i = 0; i < r; ++i)
        if (!a(r, i).is_zero() && !col[i].is_zero()) rc += a(r, i) * col[i];
      t.push_back(-rc);
      if (pw + 1 < r) {
        std::vector<Poly> next(r, zero);
        for (std::size_t i = 0; i < r; ++i)
          for (std::size_t j = 0; j < r; ++j)
            if (!a(i, j).is_zero() && !col[j].is_zero()) next[i] += a(i, j) * col[j];
        col = std::move(next);
      }
    }
    std::vector<Poly> nv(r + 2, zero);
    for (std::size_t i = 0; i < r + 2; ++i)
      for (std::size_t j = 0; j <= std::min(i, r); ++j)
        if (!t[i - j].is_zero() && !v[j].is_zero()) nv[i] += t[i - j] * v[j];
    v = std::move(nv);
  }
  return (n % 2) ? -v[n] : v[n];
}

template <Field F>
Polynomial<F> symbolic_det(const PolyMatrix<F>& a, const DetOptions& opt = {}) {
  if (opt.algorithm == DetAlgorithm::kBerkowitz) return det_berkowitz(a);
  if (a.size() > opt.laplace_cap)
    throw ResourceLimit("symbolic_det", "size " + std::to_string(a.size()) +
                                            " exceeds the laplace-memo cap " +
                                            std::to_string(opt.laplace_cap));
  return det_laplace(a);
}

/// Result of bringing L(0) to the canonical rank-r form J.
template <Field F>
struct NormalizedExpression {
  AffineMatrixMap<F> map;  // J + Z = P * L * Q
  std::size_t rank;
  Matrix<F> left;          // P
  Matrix<F> right;         // Q
  typename F::Element scalar;  // det(P) * det(Q)

  std::size_t size() const { return map.size(); }

  /// Canonical constant part: ones at (i,i) for m-r <= i < m.
  Matrix<F> j_matrix() const {
    Matrix<F> j(size(), size(), map.field());
    for (std::size_t i = size() - rank; i < size(); ++i) j(i, i) = map.field().one();
    return j;
  }

  /// Z = (J + Z) - J, the purely linear part.
  PolyMatrix<F> z_matrix() const {
    PolyMatrix<F> z(size(), map.vars(), map.field());
    for (std::size_t i = 0; i < size(); ++i)
      for (std::size_t j = 0; j < size(); ++j) {
        auto e = map(i, j);
        if (i >= size() - rank && i == j)
          e -= Polynomial<F>::constant(map.vars(), map.field(), map.field().one());
        z.set(i, j, e);
      }
    return z;
  }
};

/// Finds invertible constant P, Q with P L(0) Q = J_r.
template <Field F>
NormalizedExpression<F> rank_and_normalize(const AffineMatrixMap<F>& l) {
  const std::size_t m = l.size();
  const F& k = l.field();
  Matrix<F> c = l.constant_part();
  Matrix<F> p = Matrix<F>::identity(m, k);
  Matrix<F> q = Matrix<F>::identity(m, k);
  std::size_t r = 0;
  for (; r < m; ++r) {
    std::size_t pi = m, pj = m;
    for (std::size_t i = r; i < m && pi == m; ++i)
      for (std::size_t j = r; j < m; ++j)
        if (!k.is_zero(c(i, j))) {
          pi = i, pj = j;
          break;
        }
    if (pi == m) break;
    c.swap_rows(r, pi), p.swap_rows(r, pi);
    c.swap_cols(r, pj), q.swap_cols(r, pj);
    auto inv = k.inv(c(r, r));
    c.scale_row(r, inv), p.scale_row(r, inv);
    for (std::size_t i = 0; i < m; ++i)
      if (i != r && !k.is_zero(c(i, r))) {
        auto f = k.neg(c(i, r));
        c.add_row(i, r, f), p.add_row(i, r, f);
      }
    for (std::size_t j = 0; j < m; ++j)
      if (j != r && !k.is_zero(c(r, j))) {
        auto f = k.neg(c(r, j));
        c.add_col(j, r, f), q.add_col(j, r, f);
      }
  }
  // c = diag(I_r, 0); rotate indices so the identity block sits bottom-right
  Matrix<F> perm(m, m, k);
  for (std::size_t i = 0; i < m; ++i) perm((i + m - r) % m, i) = k.one();
  p = perm * p;
  q = q * perm.transposed();
  auto scalar = k.mul(determinant(p), determinant(q));
  return {l.transformed(p, q), r, std::move(p), std::move(q), scalar};
}

/// Names x11, x12, ... (x1_1 style once n > 9).
inline VarSetPtr matrix_varset(std::size_t n, const std::string& stem = "x") {
  std::vector<std::string> names;
  for (std::size_t i = 1; i <= n; ++i)
    for (std::size_t j = 1; j <= n; ++j)
      names.push_back(n > 9 ? stem + std::to_string(i) + "_" + std::to_string(j)
                            : stem + std::to_string(i) + std::to_string(j));
  return make_varset(std::move(names));
}

namespace detail {

template <Field F>
Polynomial<F> permutation_sum(std::size_t n, const F& k, bool signed_sum, const VarSetPtr& vars) {
  std::vector<std::size_t> sigma(n);
  std::iota(sigma.begin(), sigma.end(), 0);
  std::vector<typename Polynomial<F>::Term> terms;
  do {
    Monomial m;
    for (std::size_t i = 0; i < n; ++i) m.set(i * n + sigma[i], 1);
    bool odd = false;
    if (signed_sum)
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) odd ^= sigma[i] > sigma[j];
    terms.push_back({m, odd ? k.neg(k.one()) : k.one()});
  } while (std::next_permutation(sigma.begin(), sigma.end()));
  return Polynomial<F>::from_terms(vars, k, std::move(terms));
}

}  // namespace detail

/// perm_n in the n^2 variables x_ij.
template <Field F>
Polynomial<F> perm_polynomial(std::size_t n, const F& k) {
  if (n < 1 || n > 6) throw ArgumentError("perm_polynomial supports 1 <= n <= 6");
  return detail::permutation_sum(n, k, false, matrix_varset(n));
}

/// det_m of the generic matrix (x_ij).
template <Field F>
Polynomial<F> generic_det_polynomial(std::size_t m, const F& k) {
  if (m < 1 || m > 5) throw ArgumentError("generic_det_polynomial supports 1 <= m <= 5");
  return detail::permutation_sum(m, k, true, matrix_varset(m));
}

/// The map with entry (i,j) = x_ij.
template <Field F>
AffineMatrixMap<F> generic_matrix_map(std::size_t m, const F& k) {
  auto vars = matrix_varset(m);
  AffineMatrixMap<F> l(m, vars, k);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) l.set(i, j, Polynomial<F>::variable(vars, k, i * m + j));
  return l;
}

struct VerifyMode {
  bool probabilistic = false;
  std::size_t trials = 0;
  std::uint64_t seed = 1;

  static VerifyMode exact() { return {}; }
  static VerifyMode random(std::size_t trials, std::uint64_t seed = 1) { return {true, trials, seed}; }
};

struct VerificationReport {
  bool match = false;
  bool probabilistic = false;
  std::string field;
  // exact mode witness: first monomial where det(L) and f differ
  std::optional<std::string> witness_monomial;
  std::string det_coefficient;
  std::string target_coefficient;
  // probabilistic mode
  std::size_t trials = 0;
  std::optional<std::vector<std::string>> witness_point;
  double failure_bound = 0.0;  // probability that a mismatch survived all trials
  std::string determinant;     // canonical det(L), exact mode only
};

/// Checks f == det(L) exactly, or by random evaluation (Schwartz-Zippel).
template <Field F>
VerificationReport verify_expression(const AffineMatrixMap<F>& l, const Polynomial<F>& f,
                                     const VerifyMode& mode = VerifyMode::exact(),
                                     const DetOptions& det_opt = {}) {
  if (!same_vars(l.vars(), f.vars())) throw RingMismatch("map and target use different variable sets");
  require_same_field(l.field(), f.field());
  const F& k = l.field();
  VerificationReport rep;
  rep.field = k.name();
  rep.probabilistic = mode.probabilistic;
  if (!mode.probabilistic) {
    DetOptions o = det_opt;
    if (l.size() > o.laplace_cap) o.algorithm = DetAlgorithm::kBerkowitz;
    Polynomial<F> det = symbolic_det(l, o);
    rep.determinant = det.to_string();
    Polynomial<F> diff = det - f;
    rep.match = diff.is_zero();
    if (!rep.match) {
      const Monomial& w = diff.leading_monomial();
      rep.witness_monomial = monomial_to_string(w, *l.vars());
      rep.det_coefficient = k.to_string(det.coefficient(w));
      rep.target_coefficient = k.to_string(f.coefficient(w));
    }
    return rep;
  }
  const double degree_bound = static_cast<double>(std::max<int>(static_cast<int>(l.size()), f.degree()));
  std::mt19937_64 rng(mode.seed);
  double sample_size;
  if constexpr (F::is_prime_field) {
    sample_size = static_cast<double>(k.modulus());
    if (sample_size <= 2 * degree_bound)
      throw ArgumentError("field F_" + std::to_string(k.modulus()) +
                          " too small for probabilistic verification (need p > 2 * degree)");
  } else {
    sample_size = 2.0 * 1000000 + 1;
  }
  const std::size_t n = l.num_vars();
  std::vector<typename F::Element> x(n, k.zero());
  rep.match = true;
  for (std::size_t t = 0; t < mode.trials; ++t) {
    for (auto& xi : x) {
      if constexpr (F::is_prime_field) {
        xi = static_cast<typename F::Element>(rng() % k.modulus());
      } else {
        xi = k.from_int(static_cast<long>(rng() % 2000001) - 1000000);
      }
    }
    ++rep.trials;
    auto lhs = determinant(l.at(x));
    auto rhs = evaluate(f, std::span<const typename F::Element>(x));
    if (!k.equal(lhs, rhs)) {
      rep.match = false;
      std::vector<std::string> pt;
      for (const auto& xi : x) pt.push_back(k.to_string(xi));
      rep.witness_point = std::move(pt);
      break;
    }
  }
  rep.failure_bound = rep.match ? std::pow(degree_bound / sample_size, static_cast<double>(rep.trials)) : 0.0;
  return rep;
}

}  // namespace dcx
