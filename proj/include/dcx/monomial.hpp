#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "dcx/error.hpp"

namespace dcx {

/// Ordered list of distinct variable names. Immutable once built.
class VarSet {
 public:
  explicit VarSet(std::vector<std::string> names) : names_(std::move(names)) {
    for (std::size_t i = 0; i < names_.size(); ++i) {
      if (!index_.emplace(names_[i], i).second)
        throw ArgumentError("duplicate variable name '" + names_[i] + "'");
    }
  }

  std::size_t size() const noexcept { return names_.size(); }
  const std::string& name(std::size_t i) const { return names_.at(i); }
  const std::vector<std::string>& names() const noexcept { return names_; }

  /// Index of `name`, or -1.
  long find(const std::string& name) const {
    auto it = index_.find(name);
    return it == index_.end() ? -1 : static_cast<long>(it->second);
  }

  bool operator==(const VarSet& o) const { return names_ == o.names_; }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, std::size_t> index_;
};

using VarSetPtr = std::shared_ptr<const VarSet>;

VarSetPtr make_varset(std::vector<std::string> names);

inline bool same_vars(const VarSetPtr& a, const VarSetPtr& b) {
  return a == b || (a && b && *a == *b);
}

/// Exponent vector packed one byte per variable into eight 64-bit words.
///
/// Exponents are kept below 128 so word-wise addition never carries between
/// variables; divisibility and division then run on whole words.
class Monomial {
 public:
  static constexpr std::size_t kMaxVars = 64;
  static constexpr unsigned kMaxExponent = 127;

  Monomial() = default;

  static Monomial variable(std::size_t i, unsigned e = 1) {
    Monomial m;
    m.set(i, e);
    return m;
  }

  unsigned operator[](std::size_t i) const {
    return static_cast<unsigned>((w_[i >> 3] >> ((i & 7) * 8)) & 0xff);
  }

  void set(std::size_t i, unsigned e) {
    if (i >= kMaxVars) throw ArgumentError("variable index beyond capacity");
    if (e > kMaxExponent) throw ArgumentError("exponent " + std::to_string(e) + " exceeds 127");
    unsigned old = (*this)[i];
    std::uint64_t shift = (i & 7) * 8;
    w_[i >> 3] = (w_[i >> 3] & ~(std::uint64_t{0xff} << shift)) | (std::uint64_t{e} << shift);
    deg_ = deg_ - old + e;
  }

  unsigned degree() const noexcept { return deg_; }
  bool is_one() const noexcept { return deg_ == 0; }

  friend Monomial operator*(const Monomial& a, const Monomial& b) {
    Monomial r;
    std::uint64_t hi = 0;
    for (int k = 0; k < 8; ++k) {
      r.w_[k] = a.w_[k] + b.w_[k];
      hi |= r.w_[k];
    }
    if (hi & kHighBits) throw ArgumentError("exponent overflow (max 127)");
    r.deg_ = a.deg_ + b.deg_;
    return r;
  }

  /// True iff this monomial divides `b`.
  bool divides(const Monomial& b) const noexcept {
    if (deg_ > b.deg_) return false;
    for (int k = 0; k < 8; ++k) {
      if ((((b.w_[k] | kHighBits) - w_[k]) & kHighBits) != kHighBits) return false;
    }
    return true;
  }

  /// b / a, assuming a divides b.
  friend Monomial quotient(const Monomial& b, const Monomial& a) {
    Monomial r;
    for (int k = 0; k < 8; ++k) r.w_[k] = b.w_[k] - a.w_[k];
    r.deg_ = b.deg_ - a.deg_;
    return r;
  }

  friend Monomial lcm(const Monomial& a, const Monomial& b) {
    Monomial r;
    for (std::size_t i = 0; i < kMaxVars; ++i) {
      unsigned e = std::max(a[i], b[i]);
      if (e) r.set(i, e);
    }
    return r;
  }

  friend bool coprime(const Monomial& a, const Monomial& b) {
    for (int k = 0; k < 8; ++k) {
      // a byte is nonzero iff any of its bits is set; fold to the low bit
      std::uint64_t x = a.w_[k], y = b.w_[k];
      x |= x >> 4, x |= x >> 2, x |= x >> 1;
      y |= y >> 4, y |= y >> 2, y |= y >> 1;
      if (x & y & kLowBits) return false;
    }
    return true;
  }

  /// Bit i set iff variable i occurs.
  std::uint64_t support() const noexcept {
    std::uint64_t s = 0;
    for (int k = 0; k < 8; ++k) {
      std::uint64_t x = w_[k];
      if (!x) continue;
      for (int j = 0; j < 8; ++j)
        if ((x >> (8 * j)) & 0xff) s |= std::uint64_t{1} << (8 * k + j);
    }
    return s;
  }

  friend bool operator==(const Monomial& a, const Monomial& b) noexcept {
    return a.deg_ == b.deg_ && a.w_ == b.w_;
  }

  /// Degree-reverse-lexicographic comparison: negative if a < b.
  friend int compare(const Monomial& a, const Monomial& b) noexcept {
    if (a.deg_ != b.deg_) return a.deg_ < b.deg_ ? -1 : 1;
    for (int k = 7; k >= 0; --k) {
      std::uint64_t x = a.w_[k] ^ b.w_[k];
      if (!x) continue;
      int byte = (63 - std::countl_zero(x)) / 8;
      unsigned ea = (a.w_[k] >> (8 * byte)) & 0xff;
      unsigned eb = (b.w_[k] >> (8 * byte)) & 0xff;
      // smaller exponent in the last differing variable means larger monomial
      return ea < eb ? 1 : -1;
    }
    return 0;
  }

  friend bool operator<(const Monomial& a, const Monomial& b) noexcept { return compare(a, b) < 0; }
  friend bool operator>(const Monomial& a, const Monomial& b) noexcept { return compare(a, b) > 0; }

  std::size_t hash() const noexcept {
    std::uint64_t h = 0x9e3779b97f4a7c15ull;
    for (auto w : w_) h = (h ^ w) * 0x100000001b3ull + (h >> 29);
    return static_cast<std::size_t>(h);
  }

 private:
  static constexpr std::uint64_t kHighBits = 0x8080808080808080ull;
  static constexpr std::uint64_t kLowBits = 0x0101010101010101ull;

  std::array<std::uint64_t, 8> w_{};
  unsigned deg_ = 0;
};

struct MonomialHash {
  std::size_t operator()(const Monomial& m) const noexcept { return m.hash(); }
};

inline VarSetPtr make_varset(std::vector<std::string> names) {
  if (names.size() > Monomial::kMaxVars)
    throw ArgumentError("at most " + std::to_string(Monomial::kMaxVars) + " variables supported");
  return std::make_shared<const VarSet>(std::move(names));
}

/// Text form of a monomial over `vars`, e.g. "x*y^2"; "1" for the unit.
inline std::string monomial_to_string(const Monomial& m, const VarSet& vars) {
  if (m.is_one()) return "1";
  std::string s;
  for (std::size_t i = 0; i < vars.size(); ++i) {
    unsigned e = m[i];
    if (!e) continue;
    if (!s.empty()) s += '*';
    s += vars.name(i);
    if (e > 1) s += '^' + std::to_string(e);
  }
  return s;
}

}  // namespace dcx
