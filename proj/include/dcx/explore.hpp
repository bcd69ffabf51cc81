#pragma once

// Random sampling of codim Sing(det L(x)) for linear maps L over F_p, and
// reduction of a linear map to an injective one.

#include <algorithm>
#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "dcx/error.hpp"
#include "dcx/groebner.hpp"
#include "dcx/linalg.hpp"
#include "dcx/matforms.hpp"
#include "dcx/singularity.hpp"

namespace dcx {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

/// Variables x1..xn.
inline VarSetPtr numbered_varset(std::size_t n, const std::string& stem = "x") {
  std::vector<std::string> names;
  for (std::size_t i = 1; i <= n; ++i) names.push_back(stem + std::to_string(i));
  return make_varset(std::move(names));
}

/// Linear map with i.i.d. uniform coefficients and zero constant part.
inline AffineMatrixMap<PrimeField> random_linear_map(std::size_t n, std::size_t m, const PrimeField& k,
                                                     std::uint64_t seed) {
  auto vars = numbered_varset(n);
  std::mt19937_64 rng(seed);
  AffineMatrixMap<PrimeField> l(m, vars, k);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      std::vector<FpPoly::Term> terms;
      for (std::size_t v = 0; v < n; ++v) {
        auto c = static_cast<std::uint32_t>(rng() % k.modulus());
        if (c) terms.push_back({Monomial::variable(v), c});
      }
      l.set(i, j, FpPoly::from_terms(vars, k, std::move(terms)));
    }
  return l;
}

struct SampleOptions {
  GroebnerOptions groebner;  // per-sample caps; a capped sample lands in the timeout bin
  unsigned jobs = 1;
  double threshold = 0.9;    // soft genericity threshold for the modal mass
};

struct SampleRecord {
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  std::string outcome;  // "ok", "degenerate", "timeout"
  int codim = 0;
};

struct SampleReport {
  std::size_t n = 0, m = 0;
  std::uint32_t p = 0;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  std::map<int, std::size_t> histogram;  // codim -> count
  std::size_t degenerate = 0;            // det L == 0
  std::size_t timeouts = 0;
  std::vector<SampleRecord> violations;  // codim > min(4, n)
  int bound = 0;                         // min(4, n)
  double generic_fraction = 0.0;         // share of all trials with codim == bound
  double threshold = 0.9;
  bool meets_threshold = false;
  std::string caveat =
      "genericity is a characteristic-0 statement; frequencies over F_p are a heuristic proxy";
  std::vector<SampleRecord> samples;

  std::optional<int> modal_codim() const {
    std::optional<int> best;
    std::size_t count = 0;
    for (const auto& [c, k] : histogram)
      if (k > count) {
        best = c;
        count = k;
      }
    return best;
  }
};

/// Draws `trials` random linear maps and bins codim Sing(det L). Each trial
/// derives its own seed, so results do not depend on the number of jobs.
inline SampleReport sample_codim(std::size_t n, std::size_t m, std::uint32_t p, std::size_t trials,
                                 std::uint64_t seed, const SampleOptions& opt = {}) {
  if (m < 2) throw ArgumentError("sample_codim needs m >= 2");
  if (n < 1) throw ArgumentError("sample_codim needs n >= 1");
  const PrimeField k(p);
  SampleReport rep;
  rep.n = n;
  rep.m = m;
  rep.p = p;
  rep.trials = trials;
  rep.seed = seed;
  rep.bound = static_cast<int>(std::min<std::size_t>(4, n));
  rep.threshold = opt.threshold;
  rep.samples.resize(trials);

  auto run = [&](std::size_t t) {
    SampleRecord& s = rep.samples[t];
    s.trial = t;
    s.seed = splitmix64(seed + t);
    auto l = random_linear_map(n, m, k, s.seed);
    auto f = symbolic_det(l, DetOptions{m > 8 ? DetAlgorithm::kBerkowitz : DetAlgorithm::kLaplaceMemo});
    if (f.is_zero()) {
      s.outcome = "degenerate";
      return;
    }
    try {
      s.codim = codim_sing(f, opt.groebner).codim;
      s.outcome = "ok";
    } catch (const ResourceLimit&) {
      s.outcome = "timeout";
    }
  };
  const unsigned jobs = std::max(1u, opt.jobs);
  if (jobs == 1) {
    for (std::size_t t = 0; t < trials; ++t) run(t);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < jobs; ++w)
      pool.emplace_back([&, w] {
        for (std::size_t t = w; t < trials; t += jobs) run(t);
      });
    for (auto& th : pool) th.join();
  }

  for (const auto& s : rep.samples) {
    if (s.outcome == "degenerate") {
      ++rep.degenerate;
    } else if (s.outcome == "timeout") {
      ++rep.timeouts;
    } else {
      ++rep.histogram[s.codim];
      if (s.codim > rep.bound) rep.violations.push_back(s);
    }
  }
  if (trials > 0) {
    auto it = rep.histogram.find(rep.bound);
    rep.generic_fraction =
        static_cast<double>(it == rep.histogram.end() ? 0 : it->second) / static_cast<double>(trials);
  }
  rep.meets_threshold = rep.generic_fraction >= rep.threshold;
  return rep;
}

template <Field F>
struct ConeReduction {
  AffineMatrixMap<F> map;          // over the kept variables only
  std::size_t kernel_dim = 0;
  std::vector<std::size_t> kept;   // indices of the kept variables in the input
};

/// For linear L, x -> L(x) factors through a surjection onto the span of the
/// coefficient matrices. Keeping a basis of that span among the variables
/// gives an injective map L' with det L = det L' o (surjection), so the
/// singular locus is a cylinder over that of det L' and codim is unchanged.
template <Field F>
ConeReduction<F> cone_reduce(const AffineMatrixMap<F>& l) {
  const F& k = l.field();
  const std::size_t m = l.size(), n = l.num_vars();
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      if (!k.is_zero(l(i, j).constant_term())) throw ArgumentError("cone_reduce expects a linear map");
  // column v holds the coefficients of x_v; pivot columns give a basis of the span
  Matrix<F> c(m * m, std::max<std::size_t>(n, 1), k);
  for (std::size_t v = 0; v < n; ++v)
    for (std::size_t e = 0; e < m * m; ++e) c(e, v) = l(e / m, e % m).coefficient(Monomial::variable(v));
  auto pivots = n == 0 ? std::vector<std::size_t>{} : row_reduce(c);
  ConeReduction<F> out{AffineMatrixMap<F>(1, l.vars(), k), n - pivots.size(), {}};
  std::vector<std::string> names;
  for (auto v : pivots) {
    out.kept.push_back(v);
    names.push_back(l.vars()->name(v));
  }
  if (names.empty()) {
    out.map = AffineMatrixMap<F>(m, make_varset({}), k);
    return out;
  }
  auto vars = make_varset(names);
  AffineMatrixMap<F> r(m, vars, k);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      std::vector<typename Polynomial<F>::Term> terms;
      for (std::size_t q = 0; q < pivots.size(); ++q) {
        auto coef = l(i, j).coefficient(Monomial::variable(pivots[q]));
        if (!k.is_zero(coef)) terms.push_back({Monomial::variable(q), coef});
      }
      r.set(i, j, Polynomial<F>::from_terms(vars, k, std::move(terms)));
    }
  out.map = std::move(r);
  return out;
}

}  // namespace dcx
