#pragma once

#include <algorithm>
#include <limits>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dcx/error.hpp"
#include "dcx/field.hpp"
#include "dcx/monomial.hpp"

namespace dcx {

/// Degree of the zero polynomial; compares below every real degree.
inline constexpr int kMinusInfinity = std::numeric_limits<int>::min();

/// Sparse multivariate polynomial over a field, terms kept in strictly
/// decreasing degrevlex order with no zero coefficients.
template <Field F>
class Polynomial {
 public:
  using Element = typename F::Element;
  using FieldType = F;

  struct Term {
    Monomial mono;
    Element coef;
  };

  Polynomial(VarSetPtr vars, F field) : vars_(std::move(vars)), field_(std::move(field)) {
    if (!vars_) throw ArgumentError("polynomial needs a variable set");
  }

  static Polynomial constant(VarSetPtr vars, F field, Element c) {
    Polynomial p(std::move(vars), std::move(field));
    if (!p.field_.is_zero(c)) p.terms_.push_back({Monomial{}, std::move(c)});
    return p;
  }

  static Polynomial variable(VarSetPtr vars, F field, std::size_t i) {
    if (i >= vars->size()) throw ArgumentError("variable index out of range");
    Polynomial p(std::move(vars), field);
    p.terms_.push_back({Monomial::variable(i), p.field_.one()});
    return p;
  }

  static Polynomial monomial(VarSetPtr vars, F field, Monomial m, Element c) {
    Polynomial p(std::move(vars), std::move(field));
    if (!p.field_.is_zero(c)) p.terms_.push_back({m, std::move(c)});
    return p;
  }

  /// Builds a canonical polynomial from arbitrary (unsorted, duplicated) terms.
  static Polynomial from_terms(VarSetPtr vars, F field, std::vector<Term> terms) {
    Polynomial p(std::move(vars), std::move(field));
    p.terms_ = std::move(terms);
    p.canonicalize();
    return p;
  }

  /// Wraps terms already in canonical order. Caller guarantees the invariant.
  static Polynomial from_sorted_terms(VarSetPtr vars, F field, std::vector<Term> terms) {
    Polynomial p(std::move(vars), std::move(field));
    p.terms_ = std::move(terms);
    return p;
  }

  const VarSetPtr& vars() const noexcept { return vars_; }
  const F& field() const noexcept { return field_; }
  const std::vector<Term>& terms() const noexcept { return terms_; }
  std::size_t size() const noexcept { return terms_.size(); }
  bool is_zero() const noexcept { return terms_.empty(); }

  bool is_constant() const noexcept {
    return terms_.empty() || (terms_.size() == 1 && terms_[0].mono.is_one());
  }

  int degree() const noexcept {
    return terms_.empty() ? kMinusInfinity : static_cast<int>(terms_.front().mono.degree());
  }

  /// Smallest degree of a term; kMinusInfinity for zero.
  int low_degree() const noexcept {
    if (terms_.empty()) return kMinusInfinity;
    unsigned d = terms_.front().mono.degree();
    for (const auto& t : terms_) d = std::min(d, t.mono.degree());
    return static_cast<int>(d);
  }

  bool is_homogeneous() const noexcept {
    for (const auto& t : terms_)
      if (t.mono.degree() != terms_.front().mono.degree()) return false;
    return true;
  }

  const Monomial& leading_monomial() const {
    if (terms_.empty()) throw ArgumentError("leading monomial of zero polynomial");
    return terms_.front().mono;
  }
  const Element& leading_coefficient() const {
    if (terms_.empty()) throw ArgumentError("leading coefficient of zero polynomial");
    return terms_.front().coef;
  }

  Element coefficient(const Monomial& m) const {
    auto it = std::lower_bound(terms_.begin(), terms_.end(), m,
                               [](const Term& t, const Monomial& k) { return t.mono > k; });
    if (it != terms_.end() && it->mono == m) return it->coef;
    return field_.zero();
  }

  Element constant_term() const { return coefficient(Monomial{}); }

  Polynomial homogeneous_part(int k) const {
    Polynomial r(vars_, field_);
    for (const auto& t : terms_)
      if (static_cast<int>(t.mono.degree()) == k) r.terms_.push_back(t);
    return r;
  }

  Polynomial operator-() const {
    Polynomial r(*this);
    for (auto& t : r.terms_) t.coef = field_.neg(t.coef);
    return r;
  }

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b) {
    a.require_same_ring(b);
    return merge(a, b, false);
  }
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b) {
    a.require_same_ring(b);
    return merge(a, b, true);
  }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    a.require_same_ring(b);
    if (a.is_zero() || b.is_zero()) return Polynomial(a.vars_, a.field_);
    const F& k = a.field_;
    std::vector<Term> prod;
    prod.reserve(a.size() * b.size());
    for (const auto& s : a.terms_)
      for (const auto& t : b.terms_) prod.push_back({s.mono * t.mono, k.mul(s.coef, t.coef)});
    return from_terms(a.vars_, a.field_, std::move(prod));
  }
  Polynomial& operator+=(const Polynomial& b) { return *this = *this + b; }
  Polynomial& operator-=(const Polynomial& b) { return *this = *this - b; }
  Polynomial& operator*=(const Polynomial& b) { return *this = *this * b; }

  Polynomial scaled(const Element& c) const {
    Polynomial r(vars_, field_);
    if (field_.is_zero(c)) return r;
    r.terms_.reserve(terms_.size());
    for (const auto& t : terms_) r.terms_.push_back({t.mono, field_.mul(t.coef, c)});
    return r;
  }

  /// c * m * this, for a monomial m.
  Polynomial shifted(const Monomial& m, const Element& c) const {
    Polynomial r(vars_, field_);
    if (field_.is_zero(c)) return r;
    r.terms_.reserve(terms_.size());
    for (const auto& t : terms_) r.terms_.push_back({t.mono * m, field_.mul(t.coef, c)});
    return r;
  }

  /// Scales so the leading coefficient is 1 (zero stays zero).
  Polynomial monic() const {
    if (is_zero() || field_.is_one(leading_coefficient())) return *this;
    return scaled(field_.inv(leading_coefficient()));
  }

  Polynomial pow(unsigned e) const {
    Polynomial r = constant(vars_, field_, field_.one());
    Polynomial base = *this;
    while (e) {
      if (e & 1) r = r * base;
      e >>= 1;
      if (e) base = base * base;
    }
    return r;
  }

  friend bool operator==(const Polynomial& a, const Polynomial& b) {
    if (!same_vars(a.vars_, b.vars_) || !(a.field_ == b.field_)) return false;
    if (a.terms_.size() != b.terms_.size()) return false;
    for (std::size_t i = 0; i < a.terms_.size(); ++i)
      if (!(a.terms_[i].mono == b.terms_[i].mono) ||
          !a.field_.equal(a.terms_[i].coef, b.terms_[i].coef))
        return false;
    return true;
  }

  void require_same_ring(const Polynomial& b) const {
    if (!same_vars(vars_, b.vars_)) throw RingMismatch("polynomials over different variable sets");
    require_same_field(field_, b.field_);
  }

  std::string to_string() const;

 private:
  static Polynomial merge(const Polynomial& a, const Polynomial& b, bool subtract) {
    const F& k = a.field_;
    Polynomial r(a.vars_, a.field_);
    r.terms_.reserve(a.size() + b.size());
    std::size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
      int c = i == a.size() ? -1 : j == b.size() ? 1 : compare(a.terms_[i].mono, b.terms_[j].mono);
      if (c > 0) {
        r.terms_.push_back(a.terms_[i++]);
      } else if (c < 0) {
        const Term& t = b.terms_[j++];
        r.terms_.push_back({t.mono, subtract ? k.neg(t.coef) : t.coef});
      } else {
        Element s = subtract ? k.sub(a.terms_[i].coef, b.terms_[j].coef)
                             : k.add(a.terms_[i].coef, b.terms_[j].coef);
        if (!k.is_zero(s)) r.terms_.push_back({a.terms_[i].mono, std::move(s)});
        ++i, ++j;
      }
    }
    return r;
  }

  void canonicalize() {
    std::sort(terms_.begin(), terms_.end(),
              [](const Term& x, const Term& y) { return x.mono > y.mono; });
    std::vector<Term> out;
    out.reserve(terms_.size());
    for (auto& t : terms_) {
      if (!out.empty() && out.back().mono == t.mono) {
        out.back().coef = field_.add(out.back().coef, t.coef);
      } else {
        if (!out.empty() && field_.is_zero(out.back().coef)) out.pop_back();
        out.push_back(std::move(t));
      }
    }
    if (!out.empty() && field_.is_zero(out.back().coef)) out.pop_back();
    terms_ = std::move(out);
  }

  VarSetPtr vars_;
  F field_;
  std::vector<Term> terms_;
};

using QPoly = Polynomial<RationalField>;
using FpPoly = Polynomial<PrimeField>;

namespace detail {

inline std::string coef_string(const RationalField&, const mpq_class& c) { return c.get_str(); }
inline std::string coef_string(const PrimeField&, std::uint32_t c) { return std::to_string(c); }
inline bool coef_negative(const RationalField&, const mpq_class& c) { return sgn(c) < 0; }
inline bool coef_negative(const PrimeField&, std::uint32_t) { return false; }

}  // namespace detail

template <Field F>
std::string Polynomial<F>::to_string() const {
  if (terms_.empty()) return "0";
  std::string s;
  bool first = true;
  for (const auto& t : terms_) {
    bool neg = detail::coef_negative(field_, t.coef);
    Element mag = neg ? field_.neg(t.coef) : t.coef;
    if (first)
      s += neg ? "-" : "";
    else
      s += neg ? " - " : " + ";
    first = false;
    if (t.mono.is_one()) {
      s += detail::coef_string(field_, mag);
    } else {
      if (!field_.is_one(mag)) s += detail::coef_string(field_, mag) + "*";
      s += monomial_to_string(t.mono, *vars_);
    }
  }
  return s;
}

/// Formal partial derivative with respect to variable `i`.
template <Field F>
Polynomial<F> partial_derivative(const Polynomial<F>& f, std::size_t i) {
  if (i >= f.vars()->size()) throw ArgumentError("derivative index out of range");
  const F& k = f.field();
  std::vector<typename Polynomial<F>::Term> out;
  for (const auto& t : f.terms()) {
    unsigned e = t.mono[i];
    if (!e) continue;
    auto c = k.mul(t.coef, k.from_int(static_cast<long>(e)));
    if (k.is_zero(c)) continue;
    Monomial m = t.mono;
    m.set(i, e - 1);
    out.push_back({m, c});
  }
  // lowering one exponent can reorder terms, so re-sort
  return Polynomial<F>::from_terms(f.vars(), k, std::move(out));
}

/// Value of f at `point` (one coordinate per variable).
template <Field F>
typename F::Element evaluate(const Polynomial<F>& f, std::span<const typename F::Element> point) {
  const std::size_t n = f.vars()->size();
  if (point.size() != n)
    throw ArgumentError("point has " + std::to_string(point.size()) + " coordinates, expected " +
                        std::to_string(n));
  const F& k = f.field();
  if constexpr (F::is_prime_field) {
    for (auto v : point)
      if (v >= k.modulus()) throw RingMismatch("point coordinate is not a residue mod p");
  }
  // cache powers per variable
  std::vector<std::vector<typename F::Element>> powers(n);
  for (std::size_t i = 0; i < n; ++i) powers[i].push_back(k.one());
  auto power = [&](std::size_t i, unsigned e) -> const typename F::Element& {
    auto& pw = powers[i];
    while (pw.size() <= e) pw.push_back(k.mul(pw.back(), point[i]));
    return pw[e];
  };
  typename F::Element acc = k.zero();
  for (const auto& t : f.terms()) {
    typename F::Element v = t.coef;
    for (std::size_t i = 0; i < n; ++i)
      if (unsigned e = t.mono[i]) v = k.mul(v, power(i, e));
    acc = k.add(acc, v);
  }
  return acc;
}

template <Field F>
typename F::Element evaluate(const Polynomial<F>& f, const std::vector<typename F::Element>& point) {
  return evaluate(f, std::span<const typename F::Element>(point));
}

/// f(images[0], ..., images[n-1]) for arbitrary polynomial images over a
/// common target ring.
template <Field F>
Polynomial<F> substitute(const Polynomial<F>& f, const std::vector<Polynomial<F>>& images) {
  const std::size_t n = f.vars()->size();
  if (images.size() != n)
    throw ArgumentError("substitution needs " + std::to_string(n) + " images, got " +
                        std::to_string(images.size()));
  if (n == 0) {
    throw ArgumentError("substitution into a polynomial without variables");
  }
  for (const auto& g : images) {
    images.front().require_same_ring(g);
    require_same_field(f.field(), g.field());
  }
  const auto& target = images.front();
  std::vector<std::vector<Polynomial<F>>> powers(n);
  auto power = [&](std::size_t i, unsigned e) -> const Polynomial<F>& {
    auto& pw = powers[i];
    if (pw.empty()) pw.push_back(Polynomial<F>::constant(target.vars(), target.field(), target.field().one()));
    while (pw.size() <= e) pw.push_back(pw.back() * images[i]);
    return pw[e];
  };
  std::vector<typename Polynomial<F>::Term> acc;
  for (const auto& t : f.terms()) {
    Polynomial<F> prod = Polynomial<F>::constant(target.vars(), target.field(), t.coef);
    for (std::size_t i = 0; i < n && !prod.is_zero(); ++i)
      if (unsigned e = t.mono[i]) prod = prod * power(i, e);
    acc.insert(acc.end(), prod.terms().begin(), prod.terms().end());
  }
  return Polynomial<F>::from_terms(target.vars(), target.field(), std::move(acc));
}

/// Affine change of coordinates: every image must have degree at most 1.
template <Field F>
Polynomial<F> substitute_affine(const Polynomial<F>& f, const std::vector<Polynomial<F>>& images) {
  for (const auto& g : images)
    if (g.degree() > 1) throw ArgumentError("substitute_affine: image of degree " + std::to_string(g.degree()));
  return substitute(f, images);
}

/// Re-expresses f over another variable set containing all of f's variables
/// (matched by name).
template <Field F>
Polynomial<F> change_vars(const Polynomial<F>& f, const VarSetPtr& target) {
  std::vector<std::size_t> map(f.vars()->size());
  for (std::size_t i = 0; i < map.size(); ++i) {
    long j = target->find(f.vars()->name(i));
    if (j < 0) throw RingMismatch("variable '" + f.vars()->name(i) + "' missing from target ring");
    map[i] = static_cast<std::size_t>(j);
  }
  std::vector<typename Polynomial<F>::Term> out;
  out.reserve(f.size());
  for (const auto& t : f.terms()) {
    Monomial m;
    for (std::size_t i = 0; i < map.size(); ++i)
      if (unsigned e = t.mono[i]) m.set(map[i], e);
    out.push_back({m, t.coef});
  }
  return Polynomial<F>::from_terms(target, f.field(), std::move(out));
}

/// Reduction of a rational polynomial modulo p; fails if a denominator
/// vanishes mod p.
inline FpPoly reduce_mod(const QPoly& f, const PrimeField& k) {
  std::vector<FpPoly::Term> out;
  out.reserve(f.size());
  for (const auto& t : f.terms())
    out.push_back({t.mono, k.from_rational(t.coef.get_num(), t.coef.get_den())});
  return FpPoly::from_terms(f.vars(), k, std::move(out));
}

/// Maps a rational polynomial into field k (identity for Q, reduction mod p
/// otherwise).
inline QPoly to_field(const QPoly& f, const RationalField&) { return f; }
inline FpPoly to_field(const QPoly& f, const PrimeField& k) { return reduce_mod(f, k); }

}  // namespace dcx
