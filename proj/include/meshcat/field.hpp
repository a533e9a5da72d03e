#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>

#include "meshcat/error.hpp"

namespace meshcat {

/// Exact rationals backed by GMP. Stateless; values normalize sign and gcd
/// through canonicalize().
class RationalField {
 public:
  using Elem = mpq_class;

  static constexpr const char* name() { return "Q"; }

  Elem zero() const { return Elem(0); }
  Elem one() const { return Elem(1); }
  Elem from_long(long n) const { return Elem(n); }

  Elem add(const Elem& a, const Elem& b) const { return a + b; }
  Elem sub(const Elem& a, const Elem& b) const { return a - b; }
  Elem mul(const Elem& a, const Elem& b) const { return a * b; }
  Elem neg(const Elem& a) const { return -a; }
  Elem div(const Elem& a, const Elem& b) const {
    if (b == 0) fail(errc::invalid_argument, "division by zero");
    return a / b;
  }

  bool is_zero(const Elem& a) const { return a == 0; }
  bool equal(const Elem& a, const Elem& b) const { return a == b; }

  std::string to_string(const Elem& a) const { return a.get_str(); }

  /// Accepts "n" or "n/d" with arbitrary-precision integers.
  Elem from_string(std::string_view text) const {
    if (text.empty()) fail(errc::parse_error, "empty rational literal");
    mpq_class v;
    if (v.set_str(std::string(text), 10) != 0 || text.find('.') != std::string_view::npos)
      fail(errc::parse_error, "bad rational literal '" + std::string(text) + "'");
    if (v.get_den() == 0) fail(errc::parse_error, "zero denominator in rational literal");
    v.canonicalize();
    return v;
  }
};

/// Z/pZ for a prime p < 2^31. Elements live in [0, p).
class PrimeField {
 public:
  using Elem = std::int64_t;

  explicit PrimeField(std::int64_t p) : p_(p) {
    if (p < 2 || p >= (std::int64_t{1} << 31))
      fail(errc::invalid_argument, "prime field modulus must satisfy 2 <= p < 2^31");
    if (!is_prime(p))
      fail(errc::invalid_argument, std::to_string(p) + " is not prime");
  }

  std::string name() const { return "F" + std::to_string(p_); }
  std::int64_t modulus() const { return p_; }

  Elem zero() const { return 0; }
  Elem one() const { return 1; }
  Elem from_long(long n) const {
    Elem r = n % p_;
    return r < 0 ? r + p_ : r;
  }

  Elem add(Elem a, Elem b) const {
    Elem r = a + b;
    return r >= p_ ? r - p_ : r;
  }
  Elem sub(Elem a, Elem b) const {
    Elem r = a - b;
    return r < 0 ? r + p_ : r;
  }
  Elem mul(Elem a, Elem b) const { return (a * b) % p_; }
  Elem neg(Elem a) const { return a == 0 ? 0 : p_ - a; }
  Elem div(Elem a, Elem b) const {
    if (b == 0) fail(errc::invalid_argument, "division by zero");
    return mul(a, inverse(b));
  }

  bool is_zero(Elem a) const { return a == 0; }
  bool equal(Elem a, Elem b) const { return a == b; }

  std::string to_string(Elem a) const { return std::to_string(a) + " mod " + std::to_string(p_); }

  /// Accepts "k" or "k mod p" (the declared p must match this field).
  Elem from_string(std::string_view text) const {
    std::string s(text);
    std::size_t at = s.find(" mod ");
    if (at != std::string::npos) {
      std::int64_t declared;
      try {
        declared = std::stoll(s.substr(at + 5));
      } catch (...) {
        fail(errc::parse_error, "bad modulus in '" + s + "'");
      }
      if (declared != p_)
        fail(errc::field_mismatch, "literal declares modulus " + std::to_string(declared) +
                                       " but field has " + std::to_string(p_));
      s = s.substr(0, at);
    }
    try {
      std::size_t used = 0;
      std::int64_t v = std::stoll(s, &used);
      if (used != s.size()) fail(errc::parse_error, "bad field literal '" + s + "'");
      return from_long(v);
    } catch (const Error&) {
      throw;
    } catch (...) {
      fail(errc::parse_error, "bad field literal '" + s + "'");
    }
  }

  static bool is_prime(std::int64_t n) {
    if (n < 2) return false;
    for (std::int64_t d = 2; d * d <= n; ++d)
      if (n % d == 0) return false;
    return true;
  }

 private:
  Elem inverse(Elem a) const {
    // extended Euclid
    std::int64_t t = 0, nt = 1, r = p_, nr = a;
    while (nr != 0) {
      std::int64_t q = r / nr;
      t = std::exchange(nt, t - q * nt);
      r = std::exchange(nr, r - q * nr);
    }
    if (r != 1) fail(errc::invalid_argument, "element not invertible");
    return t < 0 ? t + p_ : t;
  }

  std::int64_t p_;
};

/// Runtime field selection for the CLI: "Q" or "Fp:<prime>".
struct FieldSpec {
  bool rational = true;
  std::int64_t p = 0;

  static FieldSpec parse(std::string_view text) {
    if (text == "Q" || text == "q") return FieldSpec{true, 0};
    if (text.rfind("Fp:", 0) == 0 || text.rfind("fp:", 0) == 0) {
      try {
        return FieldSpec{false, std::stoll(std::string(text.substr(3)))};
      } catch (...) {
      }
    }
    fail(errc::parse_error, "bad field spec '" + std::string(text) + "' (expected Q or Fp:<p>)");
  }
};

}  // namespace meshcat
