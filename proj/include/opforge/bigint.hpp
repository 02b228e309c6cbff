// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "opforge/rng.hpp"

namespace opforge {

/// Unsigned arbitrary-precision integer, 32-bit limbs, little-endian.
///
/// Covers exactly what desk-scale RSA needs: schoolbook multiply, binary
/// long division, modular exponentiation and inversion, gcd, Miller-Rabin.
/// Not constant-time and not meant for production cryptography.
class BigUint {
public:
  BigUint() = default;
  BigUint(uint64_t value); // implicit on purpose: arithmetic mixes freely

  static BigUint from_hex(std::string_view hex);
  std::string to_hex() const;

  bool is_zero() const { return limbs_.empty(); }
  bool is_odd() const { return !limbs_.empty() && (limbs_[0] & 1); }
  uint32_t bit_length() const;
  bool bit(uint32_t index) const;
  uint64_t to_u64() const; // throws if it does not fit

  friend BigUint operator+(const BigUint& a, const BigUint& b);
  friend BigUint operator-(const BigUint& a, const BigUint& b); // requires a >= b
  friend BigUint operator*(const BigUint& a, const BigUint& b);
  friend BigUint operator%(const BigUint& a, const BigUint& b);
  friend BigUint operator/(const BigUint& a, const BigUint& b);
  static std::pair<BigUint, BigUint> divmod(const BigUint& a, const BigUint& b);

  BigUint operator<<(uint32_t shift) const;
  BigUint operator>>(uint32_t shift) const;

  friend bool operator==(const BigUint& a, const BigUint& b) { return a.limbs_ == b.limbs_; }
  friend std::strong_ordering operator<=>(const BigUint& a, const BigUint& b);

  BigUint& operator+=(const BigUint& b) { return *this = *this + b; }
  BigUint& operator-=(const BigUint& b) { return *this = *this - b; }

  static BigUint pow_mod(const BigUint& base, const BigUint& exponent, const BigUint& modulus);
  static BigUint gcd(BigUint a, BigUint b);
  /// Inverse of a modulo m, when gcd(a, m) == 1.
  static std::optional<BigUint> mod_inverse(const BigUint& a, const BigUint& m);

  /// Uniform value with exactly `bits` bits (top bit set).
  static BigUint random_bits(uint32_t bits, SeededRng& rng);
  /// Uniform value in [0, bound).
  static BigUint random_below(const BigUint& bound, SeededRng& rng);

  /// Miller-Rabin with `rounds` random bases (after small-prime screening).
  static bool is_probable_prime(const BigUint& n, uint32_t rounds, SeededRng& rng);
  /// Random prime with exactly `bits` bits.
  static BigUint random_prime(uint32_t bits, SeededRng& rng);

private:
  void trim();
  std::vector<uint32_t> limbs_;
};

} // namespace opforge
