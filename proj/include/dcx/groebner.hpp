#pragma once

// Buchberger's algorithm (degrevlex, normal selection strategy, Gebauer-Moeller
// criteria), normal forms, and affine dimension of V(I) from the leading-term
// ideal.

#include <algorithm>
#include <bit>
#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "dcx/error.hpp"
#include "dcx/polynomial.hpp"

#ifndef DCX_VERIFY_GROEBNER
#define DCX_VERIFY_GROEBNER 0
#endif

namespace dcx {

struct GroebnerOptions {
  std::size_t max_pairs = 0;     // 0 = unlimited
  unsigned max_degree = 0;       // 0 = unlimited
  double timeout_seconds = 0.0;  // 0 = unlimited
  bool use_criteria = true;      // product and chain criteria
  bool verify = DCX_VERIFY_GROEBNER != 0;  // re-check all S-pairs afterwards
};

struct GroebnerStats {
  std::size_t pairs_reduced = 0;
  std::size_t pairs_skipped = 0;
  std::size_t zero_reductions = 0;
  std::size_t basis_size = 0;
  unsigned max_degree = 0;
  double seconds = 0.0;
  bool verified = false;
};

template <Field F>
class Ideal {
 public:
  using Poly = Polynomial<F>;

  Ideal(VarSetPtr vars, F field, std::vector<Poly> gens = {})
      : vars_(std::move(vars)), field_(std::move(field)) {
    for (auto& g : gens) add(std::move(g));
  }

  explicit Ideal(std::vector<Poly> gens) {
    if (gens.empty()) throw ArgumentError("ideal from an empty generator list needs an explicit ring");
    vars_ = gens.front().vars();
    field_.emplace(gens.front().field());
    for (auto& g : gens) add(std::move(g));
  }

  void add(Poly g) {
    if (!same_vars(g.vars(), vars_)) throw RingMismatch("generator over a different variable set");
    require_same_field(g.field(), *field_);
    gens_.push_back(std::move(g));
  }

  const std::vector<Poly>& generators() const noexcept { return gens_; }
  const VarSetPtr& vars() const noexcept { return vars_; }
  const F& field() const { return *field_; }

 private:
  VarSetPtr vars_;
  std::optional<F> field_;
  std::vector<Poly> gens_;
};

template <Field F>
class GroebnerBasis {
 public:
  using Poly = Polynomial<F>;

  GroebnerBasis(VarSetPtr vars, F field, std::vector<Poly> basis, GroebnerStats stats)
      : vars_(std::move(vars)), field_(std::move(field)), basis_(std::move(basis)), stats_(stats) {}

  const std::vector<Poly>& elements() const noexcept { return basis_; }
  const GroebnerStats& stats() const noexcept { return stats_; }
  const VarSetPtr& vars() const noexcept { return vars_; }
  const F& field() const noexcept { return field_; }
  std::string order() const { return "degrevlex"; }

  /// 1 is in the ideal.
  bool is_trivial() const { return basis_.size() == 1 && basis_[0].is_constant() && !basis_[0].is_zero(); }
  bool is_zero_ideal() const { return basis_.empty(); }

 private:
  VarSetPtr vars_;
  F field_;
  std::vector<Poly> basis_;
  GroebnerStats stats_;
};

namespace detail {

/// Reducer set with support masks for fast divisibility rejection.
template <Field F>
class Reducer {
 public:
  using Poly = Polynomial<F>;
  using Term = typename Poly::Term;

  void add(const Poly* g) {
    polys_.push_back(g);
    masks_.push_back(g->leading_monomial().support());
  }
  void clear() {
    polys_.clear();
    masks_.clear();
  }
  std::size_t size() const { return polys_.size(); }

  const Poly* find_divisor(const Monomial& m) const {
    const std::uint64_t sm = m.support();
    for (std::size_t i = 0; i < polys_.size(); ++i)
      if (!(masks_[i] & ~sm) && polys_[i]->leading_monomial().divides(m)) return polys_[i];
    return nullptr;
  }

  /// Full reduction of p; `check` is polled between steps.
  template <class Check>
  Poly reduce(const Poly& p, Check&& check) const {
    const F& k = p.field();
    std::vector<Term> h(p.terms().begin(), p.terms().end());
    std::vector<Term> rem;
    std::vector<Term> buf;
    std::size_t start = 0;
    std::size_t steps = 0;
    while (start < h.size()) {
      const Term& lt = h[start];
      const Poly* g = find_divisor(lt.mono);
      if (!g) {
        rem.push_back(lt);
        ++start;
        continue;
      }
      if ((++steps & 255) == 0) check();
      const Monomial shift = quotient(lt.mono, g->leading_monomial());
      const auto c = k.neg(k.mul(lt.coef, k.inv(g->leading_coefficient())));
      // h[start+1..] + c * shift * g[1..]
      const auto& gt = g->terms();
      buf.clear();
      buf.reserve(h.size() - start + gt.size());
      std::size_t i = start + 1, j = 1;
      while (i < h.size() || j < gt.size()) {
        if (j == gt.size()) {
          buf.push_back(std::move(h[i++]));
          continue;
        }
        Monomial mj = gt[j].mono * shift;
        int cmp = i == h.size() ? -1 : compare(h[i].mono, mj);
        if (cmp > 0) {
          buf.push_back(std::move(h[i++]));
        } else if (cmp < 0) {
          buf.push_back({mj, k.mul(c, gt[j].coef)});
          ++j;
        } else {
          auto s = k.add(h[i].coef, k.mul(c, gt[j].coef));
          if (!k.is_zero(s)) buf.push_back({mj, std::move(s)});
          ++i, ++j;
        }
      }
      std::swap(h, buf);
      start = 0;
    }
    return Poly::from_sorted_terms(p.vars(), k, std::move(rem));
  }

 private:
  std::vector<const Poly*> polys_;
  std::vector<std::uint64_t> masks_;
};

template <Field F>
Polynomial<F> s_polynomial(const Polynomial<F>& f, const Polynomial<F>& g) {
  const F& k = f.field();
  Monomial l = lcm(f.leading_monomial(), g.leading_monomial());
  auto a = f.shifted(quotient(l, f.leading_monomial()), k.inv(f.leading_coefficient()));
  auto b = g.shifted(quotient(l, g.leading_monomial()), k.inv(g.leading_coefficient()));
  return a - b;
}

/// Textbook multivariate division remainder with no shortcuts; used to
/// re-verify bases independently of Reducer.
template <Field F>
Polynomial<F> plain_remainder(Polynomial<F> p, const std::vector<Polynomial<F>>& g) {
  const F& k = p.field();
  Polynomial<F> r(p.vars(), k);
  while (!p.is_zero()) {
    const auto& lt = p.terms().front();
    bool divided = false;
    for (const auto& gi : g) {
      if (gi.leading_monomial().divides(lt.mono)) {
        auto c = k.mul(lt.coef, k.inv(gi.leading_coefficient()));
        p = p - gi.shifted(quotient(lt.mono, gi.leading_monomial()), c);
        divided = true;
        break;
      }
    }
    if (!divided) {
      r = r + Polynomial<F>::monomial(p.vars(), k, lt.mono, lt.coef);
      p = p - Polynomial<F>::monomial(p.vars(), k, lt.mono, lt.coef);
    }
  }
  return r;
}

}  // namespace detail

/// Remainder of p modulo the basis; zero iff p lies in the ideal.
template <Field F>
Polynomial<F> normal_form(const Polynomial<F>& p, const GroebnerBasis<F>& g) {
  if (!same_vars(p.vars(), g.vars())) throw RingMismatch("normal_form: polynomial and basis rings differ");
  require_same_field(p.field(), g.field());
  detail::Reducer<F> red;
  for (const auto& b : g.elements()) red.add(&b);
  return red.reduce(p, [] {});
}

template <Field F>
bool contains(const GroebnerBasis<F>& g, const Polynomial<F>& p) {
  return normal_form(p, g).is_zero();
}

/// Independent check that every S-pair of the basis (and every listed
/// generator) reduces to zero.
template <Field F>
bool verify_groebner_basis(const GroebnerBasis<F>& g, const std::vector<Polynomial<F>>& generators = {}) {
  const auto& b = g.elements();
  for (std::size_t i = 0; i < b.size(); ++i)
    for (std::size_t j = i + 1; j < b.size(); ++j) {
      // coprime leading monomials: the S-pair always reduces to zero
      if (coprime(b[i].leading_monomial(), b[j].leading_monomial())) continue;
      if (!detail::plain_remainder(detail::s_polynomial(b[i], b[j]), b).is_zero()) return false;
    }
  for (const auto& p : generators)
    if (!detail::plain_remainder(p, b).is_zero()) return false;
  return true;
}

/// Reduced Groebner basis of the ideal in degrevlex order.
template <Field F>
GroebnerBasis<F> buchberger(const Ideal<F>& ideal, const GroebnerOptions& opt = {}) {
  using Poly = Polynomial<F>;
  using Clock = std::chrono::steady_clock;
  const auto t0 = Clock::now();
  const F& k = ideal.field();
  GroebnerStats stats;

  auto check_time = [&] {
    if (opt.timeout_seconds > 0 &&
        std::chrono::duration<double>(Clock::now() - t0).count() > opt.timeout_seconds)
      throw ResourceLimit("groebner", "timeout after " + std::to_string(opt.timeout_seconds) + " s");
  };

  struct Pair {
    std::size_t i, j;
    Monomial lcm;
  };
  // selection order: smallest lcm degree first, ties by lcm then indices
  auto later = [](const Pair& a, const Pair& b) {
    int c = compare(a.lcm, b.lcm);
    if (c != 0) return c > 0;
    return std::tie(a.i, a.j) > std::tie(b.i, b.j);
  };

  std::vector<Poly> polys;
  polys.reserve(64);
  std::vector<bool> active;
  std::vector<Pair> pairs;  // kept sorted so the next pair is at the back
  detail::Reducer<F> reducer;

  auto rebuild_reducer = [&] {
    reducer.clear();
    for (std::size_t i = 0; i < polys.size(); ++i)
      if (active[i]) reducer.add(&polys[i]);
  };

  auto trivial_result = [&] {
    stats.basis_size = 1;
    stats.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    stats.verified = opt.verify;  // {1}: no S-pairs, every generator reduces to 0
    return GroebnerBasis<F>(ideal.vars(), k, {Poly::constant(ideal.vars(), k, k.one())}, stats);
  };

  auto insert = [&](Poly h) {
    const std::size_t idx = polys.size();
    stats.max_degree = std::max<unsigned>(stats.max_degree, static_cast<unsigned>(h.degree()));
    if (opt.max_degree && static_cast<unsigned>(h.degree()) > opt.max_degree)
      throw ResourceLimit("groebner", "basis degree " + std::to_string(h.degree()) + " exceeds cap " +
                                          std::to_string(opt.max_degree));
    polys.push_back(std::move(h));
    active.push_back(true);
    const Monomial& lh = polys[idx].leading_monomial();
    if (!opt.use_criteria) {
      for (std::size_t g = 0; g < idx; ++g)
        pairs.push_back({g, idx, lcm(polys[g].leading_monomial(), lh)});
    } else {
      std::vector<Pair> c;
      for (std::size_t g = 0; g < idx; ++g)
        if (active[g]) c.push_back({g, idx, lcm(polys[g].leading_monomial(), lh)});
      std::vector<Pair> d;
      for (std::size_t a = 0; a < c.size(); ++a) {
        const Pair& p = c[a];
        bool keep = coprime(lh, polys[p.i].leading_monomial());
        if (!keep) {
          keep = true;
          for (std::size_t b = a + 1; b < c.size() && keep; ++b)
            if (c[b].lcm.divides(p.lcm)) keep = false;
          for (std::size_t b = 0; b < d.size() && keep; ++b)
            if (d[b].lcm.divides(p.lcm)) keep = false;
        }
        if (keep) d.push_back(p);
      }
      std::vector<Pair> kept;
      kept.reserve(pairs.size() + d.size());
      for (const Pair& p : pairs) {
        if (!lh.divides(p.lcm) || lcm(polys[p.i].leading_monomial(), lh) == p.lcm ||
            lcm(polys[p.j].leading_monomial(), lh) == p.lcm)
          kept.push_back(p);
        else
          ++stats.pairs_skipped;
      }
      for (const Pair& p : d) {
        if (!coprime(lh, polys[p.i].leading_monomial()))
          kept.push_back(p);
        else
          ++stats.pairs_skipped;
      }
      pairs = std::move(kept);
      for (std::size_t g = 0; g < idx; ++g)
        if (active[g] && lh.divides(polys[g].leading_monomial())) active[g] = false;
    }
    std::sort(pairs.begin(), pairs.end(), later);
    rebuild_reducer();
  };

  for (const auto& g : ideal.generators()) {
    if (g.is_zero()) continue;
    Poly h = reducer.reduce(g, check_time);
    if (h.is_zero()) continue;
    if (h.is_constant()) return trivial_result();
    insert(h.monic());
  }

  while (!pairs.empty()) {
    check_time();
    Pair p = pairs.back();
    pairs.pop_back();
    if (opt.max_pairs && stats.pairs_reduced >= opt.max_pairs)
      throw ResourceLimit("groebner", "S-pair cap " + std::to_string(opt.max_pairs) + " reached");
    ++stats.pairs_reduced;
    Poly h = reducer.reduce(detail::s_polynomial(polys[p.i], polys[p.j]), check_time);
    if (h.is_zero()) {
      ++stats.zero_reductions;
      continue;
    }
    if (h.is_constant()) return trivial_result();
    insert(h.monic());
  }

  // minimalize, then interreduce tails
  std::vector<Poly> minimal;
  for (std::size_t i = 0; i < polys.size(); ++i) {
    if (!active[i]) continue;
    bool redundant = false;
    for (std::size_t j = 0; j < polys.size() && !redundant; ++j) {
      if (j == i || !active[j]) continue;
      const auto& li = polys[i].leading_monomial();
      const auto& lj = polys[j].leading_monomial();
      if (lj.divides(li) && (!(lj == li) || j < i)) redundant = true;
    }
    if (!redundant) minimal.push_back(polys[i]);
  }
  std::sort(minimal.begin(), minimal.end(),
            [](const Poly& a, const Poly& b) { return a.leading_monomial() < b.leading_monomial(); });
  std::vector<Poly> reduced;
  reduced.reserve(minimal.size());
  for (std::size_t i = 0; i < minimal.size(); ++i) {
    detail::Reducer<F> others;
    for (std::size_t j = 0; j < minimal.size(); ++j)
      if (j != i) others.add(&minimal[j]);
    reduced.push_back(others.reduce(minimal[i], check_time).monic());
  }
  stats.basis_size = reduced.size();
  stats.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  GroebnerBasis<F> gb(ideal.vars(), k, std::move(reduced), stats);
  if (opt.verify) {
    std::vector<Poly> gens;
    for (const auto& g : ideal.generators())
      if (!g.is_zero()) gens.push_back(g);
    if (!verify_groebner_basis(gb, gens))
      throw Error("groebner: post-hoc verification failed (S-pair did not reduce to zero)");
    GroebnerStats s = gb.stats();
    s.verified = true;
    return GroebnerBasis<F>(gb.vars(), gb.field(), gb.elements(), s);
  }
  return gb;
}

namespace detail {

// smallest set of variables meeting every support (branch and bound)
inline void min_hitting_set(const std::vector<std::uint64_t>& sets, std::uint64_t chosen, int size,
                            int& best) {
  if (size >= best) return;
  const std::uint64_t* open = nullptr;
  for (const auto& s : sets)
    if (!(s & chosen)) {
      if (!open || std::popcount(s) < std::popcount(*open)) open = &s;
    }
  if (!open) {
    best = size;
    return;
  }
  std::uint64_t s = *open;
  while (s) {
    std::uint64_t bit = s & (~s + 1);
    min_hitting_set(sets, chosen | bit, size + 1, best);
    s &= s - 1;
  }
}

}  // namespace detail

/// Affine dimension of V(I) from a Groebner basis; -1 for the empty variety.
template <Field F>
int dimension(const GroebnerBasis<F>& g) {
  const int n = static_cast<int>(g.vars()->size());
  if (g.is_trivial()) return -1;
  std::vector<std::uint64_t> supports;
  for (const auto& b : g.elements()) supports.push_back(b.leading_monomial().support());
  // keep inclusion-minimal supports only
  std::sort(supports.begin(), supports.end(),
            [](std::uint64_t a, std::uint64_t b) { return std::popcount(a) < std::popcount(b); });
  std::vector<std::uint64_t> minimal;
  for (auto s : supports) {
    bool dominated = false;
    for (auto t : minimal)
      if ((t & s) == t) dominated = true;
    if (!dominated) minimal.push_back(s);
  }
  int best = n + 1;
  detail::min_hitting_set(minimal, 0, 0, best);
  return n - best;
}

template <Field F>
int dimension(const Ideal<F>& ideal, const GroebnerOptions& opt = {}) {
  return dimension(buchberger(ideal, opt));
}

}  // namespace dcx
