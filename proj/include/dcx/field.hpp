#pragma once

// Coefficient fields. A field is a small value object that owns the
// arithmetic on its element type; polynomials carry one by value.
//
//   RationalField  elements are mpq_class, always canonical (lowest terms,
//                  positive denominator).
//   PrimeField     elements are residues in [0, p) stored as uint32_t.
//
// Mixing the two is a compile error; mixing two prime fields with different
// moduli is a RingMismatch at run time.

#include <gmpxx.h>

#include <concepts>
#include <cstdint>
#include <string>
#include <variant>

#include "dcx/error.hpp"

namespace dcx {

class RationalField {
 public:
  using Element = mpq_class;

  static constexpr bool is_prime_field = false;

  Element zero() const { return Element(0); }
  Element one() const { return Element(1); }
  Element from_int(long v) const { return Element(v); }

  Element from_rational(const mpz_class& num, const mpz_class& den) const {
    if (den == 0) throw ArgumentError("rational literal with zero denominator");
    Element q(num, den);
    q.canonicalize();
    return q;
  }

  Element add(const Element& a, const Element& b) const { return a + b; }
  Element sub(const Element& a, const Element& b) const { return a - b; }
  Element mul(const Element& a, const Element& b) const { return a * b; }
  Element neg(const Element& a) const { return -a; }
  Element inv(const Element& a) const {
    if (a == 0) throw ArgumentError("division by zero in Q");
    return 1 / a;
  }
  bool is_zero(const Element& a) const { return sgn(a) == 0; }
  bool is_one(const Element& a) const { return a == 1; }
  bool equal(const Element& a, const Element& b) const { return a == b; }

  /// Characteristic; 0 for Q.
  std::uint64_t characteristic() const { return 0; }

  std::string to_string(const Element& a) const { return a.get_str(); }
  std::string name() const { return "Q"; }

  bool operator==(const RationalField&) const { return true; }
};

class PrimeField {
 public:
  using Element = std::uint32_t;

  static constexpr bool is_prime_field = true;

  explicit PrimeField(std::uint32_t p) : p_(p) {
    if (p < 2 || p >= (1u << 31) || !is_prime(p))
      throw ArgumentError("modulus " + std::to_string(p) + " is not a prime below 2^31");
  }

  std::uint32_t modulus() const { return p_; }

  Element zero() const { return 0; }
  Element one() const { return 1; }
  Element from_int(long v) const {
    long r = v % static_cast<long>(p_);
    if (r < 0) r += p_;
    return static_cast<Element>(r);
  }
  Element from_mpz(const mpz_class& v) const {
    mpz_class r = v % p_;
    if (r < 0) r += p_;
    return static_cast<Element>(r.get_ui());
  }
  Element from_rational(const mpz_class& num, const mpz_class& den) const {
    Element d = from_mpz(den);
    if (d == 0)
      throw ArgumentError("denominator vanishes modulo " + std::to_string(p_));
    return mul(from_mpz(num), inv(d));
  }

  Element add(Element a, Element b) const {
    std::uint32_t s = a + b;
    return s >= p_ ? s - p_ : s;
  }
  Element sub(Element a, Element b) const { return a >= b ? a - b : a + p_ - b; }
  Element mul(Element a, Element b) const {
    return static_cast<Element>((static_cast<std::uint64_t>(a) * b) % p_);
  }
  Element neg(Element a) const { return a == 0 ? 0 : p_ - a; }
  Element inv(Element a) const {
    if (a == 0) throw ArgumentError("division by zero in F_" + std::to_string(p_));
    // extended Euclid on signed 64-bit
    std::int64_t t = 0, new_t = 1, r = p_, new_r = a;
    while (new_r != 0) {
      std::int64_t q = r / new_r;
      std::int64_t tmp = t - q * new_t;
      t = new_t;
      new_t = tmp;
      tmp = r - q * new_r;
      r = new_r;
      new_r = tmp;
    }
    if (t < 0) t += p_;
    return static_cast<Element>(t);
  }
  bool is_zero(Element a) const { return a == 0; }
  bool is_one(Element a) const { return a == 1; }
  bool equal(Element a, Element b) const { return a == b; }

  std::uint64_t characteristic() const { return p_; }

  std::string to_string(Element a) const { return std::to_string(a); }
  std::string name() const { return "Fp:" + std::to_string(p_); }

  bool operator==(const PrimeField& o) const { return p_ == o.p_; }

  static bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d)
      if (n % d == 0) return false;
    return true;
  }

 private:
  std::uint32_t p_;
};

template <class F>
concept Field = requires(const F& f, const typename F::Element& a) {
  { f.add(a, a) } -> std::convertible_to<typename F::Element>;
  { f.mul(a, a) } -> std::convertible_to<typename F::Element>;
  { f.inv(a) } -> std::convertible_to<typename F::Element>;
  { f.is_zero(a) } -> std::convertible_to<bool>;
  { f.name() } -> std::convertible_to<std::string>;
};

/// Throws unless both fields are the same field.
template <Field F>
void require_same_field(const F& a, const F& b) {
  if (!(a == b)) throw RingMismatch("field mismatch: " + a.name() + " vs " + b.name());
}

/// Run-time field choice used at the I/O boundary.
using AnyField = std::variant<RationalField, PrimeField>;

inline std::string field_name(const AnyField& f) {
  return std::visit([](const auto& k) { return k.name(); }, f);
}

/// Parses "Q" or "Fp:<p>" (also "F<p>" and "GF(<p>)").
inline AnyField parse_field(const std::string& s) {
  if (s == "Q" || s == "QQ") return RationalField{};
  std::string digits;
  if (s.rfind("Fp:", 0) == 0)
    digits = s.substr(3);
  else if (s.rfind("GF(", 0) == 0 && s.back() == ')')
    digits = s.substr(3, s.size() - 4);
  else if (s.size() > 1 && s[0] == 'F')
    digits = s.substr(1);
  if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos ||
      digits.size() > 10)
    throw ArgumentError("unknown field '" + s + "' (expected Q or Fp:<prime>)");
  unsigned long long p = std::stoull(digits);
  if (p >= (1ull << 31)) throw ArgumentError("modulus " + digits + " is not a prime below 2^31");
  return PrimeField(static_cast<std::uint32_t>(p));
}

}  // namespace dcx
