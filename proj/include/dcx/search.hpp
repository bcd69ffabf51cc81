#pragma once

// Exhaustive search for determinantal expressions over small prime fields.
//
// Any L with rank L(0) = r can be written P (J_r + Z) Q with Z linear and
// J_r = diag(0,..,0,1,..,1). Since det L = det P det Q det(J_r + Z), it is
// enough to enumerate Z and accept when det(J_r + Z) = lambda * f for some
// nonzero lambda; row 0 is then divided by lambda. The degree m - r part of
// det(J_r + Z) is det Z[K0,K0] with K0 the zero block, so that block is
// enumerated first and pruned against the degree of f.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <unordered_map>
#include <vector>

#include "dcx/error.hpp"
#include "dcx/matforms.hpp"
#include "dcx/polynomial.hpp"

namespace dcx {

inline constexpr std::uint64_t kDefaultSearchCap = std::uint64_t{1} << 30;

namespace detail {

/// Dense polynomials of degree <= D in n variables with a precomputed
/// multiplication table. Fine for the handful of variables a search uses.
class DenseSpace {
 public:
  DenseSpace(std::size_t n, unsigned max_degree, const PrimeField& k) : n_(n), k_(k) {
    std::vector<Monomial> layer{Monomial{}};
    monos_.push_back(Monomial{});
    for (unsigned d = 1; d <= max_degree; ++d) {
      std::vector<Monomial> next;
      for (const auto& mono : layer)
        for (std::size_t v = 0; v < n; ++v) {
          // only extend at or after the last used variable: each monomial once
          bool ok = true;
          for (std::size_t u = v + 1; u < n; ++u) ok = ok && mono[u] == 0;
          if (ok) next.push_back(mono * Monomial::variable(v));
        }
      for (const auto& mono : next) monos_.push_back(mono);
      layer = std::move(next);
    }
    for (std::size_t i = 0; i < monos_.size(); ++i) index_.emplace(monos_[i], i);
    const std::size_t size = monos_.size();
    mul_.assign(size * size, -1);
    for (std::size_t a = 0; a < size; ++a)
      for (std::size_t b = 0; b < size; ++b) {
        auto it = index_.find(monos_[a] * monos_[b]);
        if (it != index_.end()) mul_[a * size + b] = static_cast<int>(it->second);
      }
  }

  using Dense = std::vector<std::uint32_t>;

  std::size_t size() const noexcept { return monos_.size(); }
  const Monomial& monomial(std::size_t i) const { return monos_[i]; }
  std::size_t var_index(std::size_t v) const { return index_.at(Monomial::variable(v)); }
  std::optional<std::size_t> find(const Monomial& m) const {
    auto it = index_.find(m);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  Dense zero() const { return Dense(size(), 0); }

  Dense mul(const Dense& a, const Dense& b) const {
    Dense r = zero();
    const std::size_t s = size();
    for (std::size_t i = 0; i < s; ++i) {
      if (!a[i]) continue;
      for (std::size_t j = 0; j < s; ++j) {
        if (!b[j]) continue;
        int t = mul_[i * s + j];
        if (t < 0) throw Error("dense product exceeds the degree bound");
        r[static_cast<std::size_t>(t)] = k_.add(r[static_cast<std::size_t>(t)], k_.mul(a[i], b[j]));
      }
    }
    return r;
  }

  void add_to(Dense& acc, const Dense& b, bool subtract) const {
    for (std::size_t i = 0; i < acc.size(); ++i)
      acc[i] = subtract ? k_.sub(acc[i], b[i]) : k_.add(acc[i], b[i]);
  }

  /// Determinant by cofactor expansion along the first row; fine for m <= 4.
  Dense det(const std::vector<const Dense*>& a, std::size_t m) const {
    if (m == 0) {
      Dense one = zero();
      one[0] = 1;
      return one;
    }
    if (m == 1) return *a[0];
    Dense acc = zero();
    std::vector<const Dense*> minor((m - 1) * (m - 1));
    for (std::size_t j = 0; j < m; ++j) {
      bool nonzero = std::any_of(a[j]->begin(), a[j]->end(), [](auto c) { return c != 0; });
      if (!nonzero) continue;
      for (std::size_t i = 1; i < m; ++i) {
        std::size_t c = 0;
        for (std::size_t l = 0; l < m; ++l)
          if (l != j) minor[(i - 1) * (m - 1) + c++] = a[i * m + l];
      }
      add_to(acc, mul(*a[j], det(minor, m - 1)), j % 2 == 1);
    }
    return acc;
  }

  bool is_zero(const Dense& a) const {
    return std::all_of(a.begin(), a.end(), [](auto c) { return c == 0; });
  }

  /// lambda with a == lambda * f, if one exists (f nonzero, lambda != 0).
  std::optional<std::uint32_t> ratio(const Dense& a, const Dense& f) const {
    std::size_t lead = 0;
    while (lead < f.size() && f[lead] == 0) ++lead;
    if (lead == f.size()) return is_zero(a) ? std::optional<std::uint32_t>(1) : std::nullopt;
    if (a[lead] == 0) return std::nullopt;
    std::uint32_t lambda = k_.mul(a[lead], k_.inv(f[lead]));
    for (std::size_t i = 0; i < a.size(); ++i)
      if (a[i] != k_.mul(lambda, f[i])) return std::nullopt;
    return lambda;
  }

 private:
  std::size_t n_;
  PrimeField k_;
  std::vector<Monomial> monos_;
  std::unordered_map<Monomial, std::size_t, MonomialHash> index_;
  std::vector<int> mul_;
};

inline std::uint64_t saturating_pow(std::uint64_t base, std::uint64_t exp, std::uint64_t limit) {
  std::uint64_t r = 1;
  for (std::uint64_t i = 0; i < exp; ++i) {
    if (r > limit / base) return limit + 1;
    r *= base;
  }
  return r;
}

}  // namespace detail

struct SearchSpec {
  FpPoly target;
  std::size_t m = 1;
  std::uint64_t cap = kDefaultSearchCap;
  bool canonical = true;       // enumerate J_r + Z; false enumerates every affine map
  bool stop_at_first = false;
  std::optional<std::vector<std::size_t>> ranks;  // restrict the constant-part ranks
  unsigned jobs = 1;

  explicit SearchSpec(FpPoly f, std::size_t size = 1) : target(std::move(f)), m(size) {}
};

struct FoundExpression {
  std::size_t rank = 0;          // rank of the constant part
  std::uint64_t index = 0;       // position in the enumeration order
  std::uint32_t lambda = 1;      // det(J_r + Z) = lambda * f before row 0 is rescaled
  AffineMatrixMap<PrimeField> map;
};

struct RankSummary {
  std::size_t rank = 0;
  bool skipped = false;
  std::string reason;
  std::uint64_t evaluated = 0;
  std::uint64_t found = 0;
};

struct SearchResult {
  std::string field;
  std::size_t m = 0;
  bool canonical = true;
  std::uint64_t estimate = 0;   // candidates before pruning
  std::uint64_t evaluated = 0;  // full determinant evaluations
  std::uint64_t found = 0;
  bool exhausted = false;       // the whole space was covered and nothing was found
  bool stopped_early = false;
  std::vector<RankSummary> ranks;
};

using SearchCallback = std::function<bool(const FoundExpression&)>;

namespace detail {

inline std::vector<std::size_t> rank_order(std::size_t m) {
  std::vector<std::size_t> order;
  for (std::size_t r = m; r-- > 0;) order.push_back(r);
  order.push_back(m);
  return order;
}

/// Digits of one candidate: a coefficient in F_p for every (entry, variable).
struct Layout {
  std::size_t m, n, r;
  // entry order: the K0 x K0 block first, then the remaining entries
  std::vector<std::pair<std::size_t, std::size_t>> entries;
  std::size_t block_entries;
};

inline Layout make_layout(std::size_t m, std::size_t n, std::size_t r) {
  Layout l{m, n, r, {}, (m - r) * (m - r)};
  const std::size_t k0 = m - r;
  for (std::size_t i = 0; i < k0; ++i)
    for (std::size_t j = 0; j < k0; ++j) l.entries.emplace_back(i, j);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      if (i >= k0 || j >= k0) l.entries.emplace_back(i, j);
  return l;
}

/// Writes the linear entries encoded by `value` (base p, n digits per entry)
/// into dense polynomials.
inline void decode(std::uint64_t value, std::size_t first_entry, std::size_t count, const Layout& lay,
                   std::uint32_t p, const DenseSpace& space, std::vector<DenseSpace::Dense>& z) {
  for (std::size_t e = first_entry; e < first_entry + count; ++e) {
    auto [i, j] = lay.entries[e];
    auto& d = z[i * lay.m + j];
    std::fill(d.begin(), d.end(), 0);
    for (std::size_t v = 0; v < lay.n; ++v) {
      d[space.var_index(v)] = static_cast<std::uint32_t>(value % p);
      value /= p;
    }
  }
}

inline AffineMatrixMap<PrimeField> to_map(const std::vector<DenseSpace::Dense>& z, std::size_t m,
                                          std::uint32_t lambda, const FpPoly& f, const DenseSpace& space) {
  const PrimeField& k = f.field();
  AffineMatrixMap<PrimeField> l(m, f.vars(), k);
  const auto inv = k.inv(lambda);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      std::vector<FpPoly::Term> terms;
      const auto& d = z[i * m + j];
      for (std::size_t t = 0; t < d.size(); ++t)
        if (d[t]) terms.push_back({space.monomial(t), i == 0 ? k.mul(d[t], inv) : d[t]});
      l.set(i, j, FpPoly::from_terms(f.vars(), k, std::move(terms)));
    }
  return l;
}

}  // namespace detail

/// Streams every size-m expression of spec.target in a fixed order. The
/// callback may return false to stop. Throws ResourceLimit when the
/// candidate estimate exceeds the cap.
inline SearchResult search_expressions(const SearchSpec& spec, const SearchCallback& on_found = {}) {
  const FpPoly& f = spec.target;
  const PrimeField& k = f.field();
  const std::uint32_t p = k.modulus();
  const std::size_t m = spec.m, n = f.vars()->size();
  if (m < 1 || m > 4) throw ArgumentError("search supports sizes 1 <= m <= 4");
  SearchResult res;
  res.field = k.name();
  res.m = m;
  res.canonical = spec.canonical;

  const detail::DenseSpace space(n, static_cast<unsigned>(m), k);
  auto fd = space.zero();
  bool fits = f.is_zero() || f.degree() <= static_cast<int>(m);
  for (const auto& t : f.terms()) {
    if (auto i = space.find(t.mono)) fd[*i] = t.coef;
  }
  const bool homogeneous = f.is_homogeneous() && !f.is_zero();
  const int d = f.is_zero() ? -1 : f.degree();

  if (!spec.canonical) {
    // all affine maps: p^(m^2 (n+1)) candidates
    const std::uint64_t digits = m * m * (n + 1);
    res.estimate = detail::saturating_pow(p, digits, spec.cap);
    if (res.estimate > spec.cap)
      throw ResourceLimit("search", "unrestricted enumeration exceeds the cap of " + std::to_string(spec.cap));
    std::vector<detail::DenseSpace::Dense> a(m * m, space.zero());
    std::vector<const detail::DenseSpace::Dense*> ptr(m * m);
    for (std::size_t i = 0; i < m * m; ++i) ptr[i] = &a[i];
    for (std::uint64_t idx = 0; idx < res.estimate; ++idx) {
      std::uint64_t v = idx;
      for (auto& e : a) {
        std::fill(e.begin(), e.end(), 0);
        e[0] = static_cast<std::uint32_t>(v % p);
        v /= p;
        for (std::size_t x = 0; x < n; ++x) {
          e[space.var_index(x)] = static_cast<std::uint32_t>(v % p);
          v /= p;
        }
      }
      ++res.evaluated;
      if (!fits) continue;
      auto det = space.det(ptr, m);
      if (det != fd) continue;
      ++res.found;
      if (on_found) {
        AffineMatrixMap<PrimeField> l(m, f.vars(), k);
        for (std::size_t i = 0; i < m; ++i)
          for (std::size_t j = 0; j < m; ++j) {
            std::vector<FpPoly::Term> terms;
            for (std::size_t t = 0; t < a[i * m + j].size(); ++t)
              if (a[i * m + j][t]) terms.push_back({space.monomial(t), a[i * m + j][t]});
            l.set(i, j, FpPoly::from_terms(f.vars(), k, std::move(terms)));
          }
        FoundExpression fe{rank(l.constant_part()), idx, 1, std::move(l)};
        if (!on_found(fe)) {
          res.stopped_early = true;
          return res;
        }
      }
      if (spec.stop_at_first) {
        res.stopped_early = true;
        return res;
      }
    }
    res.exhausted = res.found == 0;
    return res;
  }

  std::vector<std::size_t> ranks = spec.ranks ? *spec.ranks : detail::rank_order(m);
  const std::uint64_t per_rank = detail::saturating_pow(p, m * m * n, spec.cap);
  std::vector<RankSummary> summaries;
  for (auto r : ranks) {
    if (r > m) throw ArgumentError("rank " + std::to_string(r) + " exceeds the size");
    RankSummary s;
    s.rank = r;
    if (!fits) {
      s.skipped = true;
      s.reason = "deg f > m";
    } else if (homogeneous && static_cast<int>(m - r) > d) {
      s.skipped = true;
      s.reason = "lowest degree m - r = " + std::to_string(m - r) + " exceeds deg f";
    } else {
      res.estimate = std::min<std::uint64_t>(res.estimate + per_rank, spec.cap + 1);
    }
    summaries.push_back(s);
  }
  if (res.estimate > spec.cap)
    throw ResourceLimit("search", "estimated " + std::string(res.estimate > spec.cap ? "> " : "") +
                                      std::to_string(spec.cap) + " candidates at m = " + std::to_string(m));

  const unsigned jobs = std::max(1u, spec.jobs);
  std::uint64_t global_offset = 0;
  for (auto& s : summaries) {
    if (s.skipped) {
      res.ranks.push_back(s);
      continue;
    }
    const std::size_t r = s.rank, k0 = m - r;
    const auto lay = detail::make_layout(m, n, r);
    const std::uint64_t outer = detail::saturating_pow(p, lay.block_entries * n, spec.cap);
    const std::uint64_t inner = detail::saturating_pow(p, (m * m - lay.block_entries) * n, spec.cap);

    // outer values processed in batches; workers take strided slices and the
    // results are merged by candidate index, so the stream order is fixed
    const std::uint64_t batch = std::max<std::uint64_t>(jobs, 1) * 4;
    bool stop = false;
    for (std::uint64_t a0 = 0; a0 < outer && !stop; a0 += batch) {
      const std::uint64_t a1 = std::min(outer, a0 + batch);
      std::vector<std::vector<FoundExpression>> found(jobs);
      std::vector<std::uint64_t> evaluated(jobs, 0);
      // smallest outer value with a hit; larger ones can be skipped
      std::atomic<std::uint64_t> best{UINT64_MAX};
      auto work = [&](unsigned w) {
        std::vector<detail::DenseSpace::Dense> z(m * m, space.zero());
        std::vector<detail::DenseSpace::Dense> lz(m * m, space.zero());
        std::vector<const detail::DenseSpace::Dense*> ptr(m * m), block(k0 * k0);
        for (std::size_t i = 0; i < m * m; ++i) ptr[i] = &lz[i];
        for (std::uint64_t a = a0 + w; a < a1; a += jobs) {
          if (spec.stop_at_first && a > best.load()) return;
          detail::decode(a, 0, lay.block_entries, lay, p, space, z);
          if (homogeneous) {
            for (std::size_t i = 0; i < k0; ++i)
              for (std::size_t j = 0; j < k0; ++j) block[i * k0 + j] = &z[i * m + j];
            auto low = space.det(block, k0);
            if (static_cast<int>(k0) < d && !space.is_zero(low)) continue;
            if (static_cast<int>(k0) == d && !space.ratio(low, fd)) continue;
          }
          for (std::uint64_t b = 0; b < inner; ++b) {
            detail::decode(b, lay.block_entries, lay.entries.size() - lay.block_entries, lay, p, space, z);
            for (std::size_t i = 0; i < m; ++i)
              for (std::size_t j = 0; j < m; ++j) {
                lz[i * m + j] = z[i * m + j];
                if (i == j && i >= k0) lz[i * m + j][0] = k.add(lz[i * m + j][0], 1);
              }
            ++evaluated[w];
            auto lambda = space.ratio(space.det(ptr, m), fd);
            if (!lambda || *lambda == 0) continue;
            found[w].push_back({r, global_offset + a * inner + b, *lambda,
                                detail::to_map(lz, m, *lambda, f, space)});
            if (spec.stop_at_first) {
              auto cur = best.load();
              while (a < cur && !best.compare_exchange_weak(cur, a)) {
              }
              break;
            }
          }
        }
      };
      if (jobs == 1) {
        work(0);
      } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < jobs; ++w) pool.emplace_back(work, w);
        for (auto& t : pool) t.join();
      }
      std::vector<FoundExpression> merged;
      for (unsigned w = 0; w < jobs; ++w) {
        s.evaluated += evaluated[w];
        for (auto& fe : found[w]) merged.push_back(std::move(fe));
      }
      std::sort(merged.begin(), merged.end(), [](const auto& x, const auto& y) { return x.index < y.index; });
      for (auto& fe : merged) {
        if (!verify_expression(fe.map, f).match) throw Error("search produced an expression that does not verify");
        ++s.found;
        if (on_found && !on_found(fe)) {
          stop = true;
          break;
        }
        if (spec.stop_at_first) {
          stop = true;
          break;
        }
      }
    }
    global_offset += outer * inner;
    res.evaluated += s.evaluated;
    res.found += s.found;
    res.ranks.push_back(s);
    if (stop) {
      res.stopped_early = true;
      for (auto it = summaries.begin() + static_cast<long>(res.ranks.size()); it != summaries.end(); ++it)
        res.ranks.push_back(*it);
      return res;
    }
  }
  res.exhausted = res.found == 0;
  return res;
}

struct DcResult {
  std::string field;
  std::optional<std::size_t> dc;  // empty: no expression up to m_max
  std::size_t m_max = 0;
  std::vector<SearchResult> searches;
  std::optional<AffineMatrixMap<PrimeField>> witness;

  std::string label() const { return dc ? std::to_string(*dc) : "> " + std::to_string(m_max); }
};

/// Smallest m <= m_max with an expression of f over F_p.
inline DcResult dc_exact(const FpPoly& f, std::size_t m_max, std::uint64_t cap = kDefaultSearchCap,
                         unsigned jobs = 1) {
  DcResult res;
  res.field = f.field().name();
  res.m_max = m_max;
  for (std::size_t m = 1; m <= m_max; ++m) {
    SearchSpec spec(f, m);
    spec.cap = cap;
    spec.stop_at_first = true;
    spec.jobs = jobs;
    std::optional<AffineMatrixMap<PrimeField>> hit;
    res.searches.push_back(search_expressions(spec, [&](const FoundExpression& fe) {
      hit = fe.map;
      return false;
    }));
    if (hit) {
      res.dc = m;
      res.witness = std::move(hit);
      return res;
    }
  }
  return res;
}

}  // namespace dcx
