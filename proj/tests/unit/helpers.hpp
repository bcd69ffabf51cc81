#pragma once

#include <random>
#include <vector>

#include "dcx/matforms.hpp"
#include "dcx/polynomial.hpp"

namespace dcx::testing {

inline mpq_class random_rational(std::mt19937_64& rng) {
  long num = static_cast<long>(rng() % 21) - 10;
  long den = static_cast<long>(rng() % 4) + 1;
  mpq_class q(num, den);
  q.canonicalize();
  return q;
}

template <Field F>
typename F::Element random_element(const F& k, std::mt19937_64& rng) {
  if constexpr (F::is_prime_field)
    return static_cast<typename F::Element>(rng() % k.modulus());
  else
    return random_rational(rng);
}

/// Sparse random polynomial with up to `terms` terms of degree <= max_deg.
template <Field F>
Polynomial<F> random_poly(const VarSetPtr& vars, const F& k, std::mt19937_64& rng, std::size_t terms = 5,
                          unsigned max_deg = 3) {
  std::vector<typename Polynomial<F>::Term> t;
  for (std::size_t i = 0; i < terms; ++i) {
    Monomial m;
    unsigned budget = static_cast<unsigned>(rng() % (max_deg + 1));
    for (unsigned e = 0; e < budget; ++e) {
      std::size_t v = rng() % vars->size();
      m.set(v, m[v] + 1);
    }
    t.push_back({m, random_element(k, rng)});
  }
  return Polynomial<F>::from_terms(vars, k, std::move(t));
}

/// Random homogeneous polynomial of degree d.
template <Field F>
Polynomial<F> random_homogeneous(const VarSetPtr& vars, const F& k, std::mt19937_64& rng, unsigned d,
                                 std::size_t terms = 5) {
  std::vector<typename Polynomial<F>::Term> t;
  for (std::size_t i = 0; i < terms; ++i) {
    Monomial m;
    for (unsigned e = 0; e < d; ++e) {
      std::size_t v = rng() % vars->size();
      m.set(v, m[v] + 1);
    }
    t.push_back({m, random_element(k, rng)});
  }
  return Polynomial<F>::from_terms(vars, k, std::move(t));
}

template <Field F>
std::vector<typename F::Element> random_point(std::size_t n, const F& k, std::mt19937_64& rng) {
  std::vector<typename F::Element> x;
  for (std::size_t i = 0; i < n; ++i) x.push_back(random_element(k, rng));
  return x;
}

/// Random affine map with entries c0 + sum c_v x_v.
template <Field F>
AffineMatrixMap<F> random_affine_map(std::size_t m, const VarSetPtr& vars, const F& k, std::mt19937_64& rng,
                                     double density = 0.6) {
  AffineMatrixMap<F> l(m, vars, k);
  std::uniform_real_distribution<double> u(0, 1);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      std::vector<typename Polynomial<F>::Term> t;
      if (u(rng) < density) t.push_back({Monomial{}, random_element(k, rng)});
      for (std::size_t v = 0; v < vars->size(); ++v)
        if (u(rng) < density) t.push_back({Monomial::variable(v), random_element(k, rng)});
      l.set(i, j, Polynomial<F>::from_terms(vars, k, std::move(t)));
    }
  return l;
}

/// Determinant by the permutation expansion over numbers: the reference
/// every symbolic algorithm is compared against.
template <Field F>
typename F::Element leibniz_det(const Matrix<F>& a) {
  const F& k = a.field();
  const std::size_t n = a.rows();
  std::vector<std::size_t> s(n);
  for (std::size_t i = 0; i < n; ++i) s[i] = i;
  auto total = k.zero();
  do {
    bool odd = false;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) odd ^= s[i] > s[j];
    auto prod = k.one();
    for (std::size_t i = 0; i < n; ++i) prod = k.mul(prod, a(i, s[i]));
    total = odd ? k.sub(total, prod) : k.add(total, prod);
  } while (std::next_permutation(s.begin(), s.end()));
  return total;
}

}  // namespace dcx::testing
