// SPDX-License-Identifier: Apache-2.0
#include "opforge/bigint.hpp"

#include <algorithm>
#include <stdexcept>

namespace opforge {

namespace {

// Enough to reject ~80% of odd composites before Miller-Rabin runs.
constexpr uint32_t kSmallPrimes[] = {
    2,   3,   5,   7,   11,  13,  17,  19,  23,  29,  31,  37,  41,  43,  47,  53,
    59,  61,  67,  71,  73,  79,  83,  89,  97,  101, 103, 107, 109, 113, 127, 131,
    137, 139, 149, 151, 157, 163, 167, 173, 179, 181, 191, 193, 197, 199, 211, 223,
    227, 229, 233, 239, 241, 251, 257, 263, 269, 271, 277, 281, 283, 293, 307, 311,
    313, 317, 331, 337, 347, 349, 353, 359, 367, 373, 379, 383, 389, 397, 401, 409,
    419, 421, 431, 433, 439, 443, 449, 457, 461, 463, 467, 479, 487, 491, 499, 503};

} // namespace

void BigUint::trim() {
  while (!limbs_.empty() && limbs_.back() == 0)
    limbs_.pop_back();
}

BigUint::BigUint(uint64_t value) {
  if (value != 0) {
    limbs_.push_back(static_cast<uint32_t>(value));
    if (value >> 32)
      limbs_.push_back(static_cast<uint32_t>(value >> 32));
  }
}

BigUint BigUint::from_hex(std::string_view hex) {
  if (hex.empty())
    throw std::invalid_argument("empty hex string");
  BigUint out;
  for (char c : hex) {
    uint32_t digit;
    if (c >= '0' && c <= '9')
      digit = static_cast<uint32_t>(c - '0');
    else if (c >= 'a' && c <= 'f')
      digit = static_cast<uint32_t>(c - 'a' + 10);
    else if (c >= 'A' && c <= 'F')
      digit = static_cast<uint32_t>(c - 'A' + 10);
    else
      throw std::invalid_argument("bad hex digit");
    out = (out << 4) + BigUint(digit);
  }
  return out;
}

std::string BigUint::to_hex() const {
  if (is_zero())
    return "0";
  std::string out;
  bool leading = true;
  for (size_t i = limbs_.size(); i-- > 0;) {
    for (int shift = 28; shift >= 0; shift -= 4) {
      const uint32_t digit = (limbs_[i] >> shift) & 0xf;
      if (leading && digit == 0)
        continue;
      leading = false;
      out += "0123456789abcdef"[digit];
    }
  }
  return out;
}

uint32_t BigUint::bit_length() const {
  if (limbs_.empty())
    return 0;
  uint32_t top = limbs_.back();
  uint32_t bits = static_cast<uint32_t>(limbs_.size() - 1) * 32;
  while (top) {
    ++bits;
    top >>= 1;
  }
  return bits;
}

bool BigUint::bit(uint32_t index) const {
  const size_t limb = index / 32;
  if (limb >= limbs_.size())
    return false;
  return (limbs_[limb] >> (index % 32)) & 1;
}

uint64_t BigUint::to_u64() const {
  if (limbs_.size() > 2)
    throw std::overflow_error("BigUint does not fit in 64 bits");
  uint64_t value = 0;
  if (limbs_.size() > 1)
    value = uint64_t{limbs_[1]} << 32;
  if (!limbs_.empty())
    value |= limbs_[0];
  return value;
}

std::strong_ordering operator<=>(const BigUint& a, const BigUint& b) {
  if (a.limbs_.size() != b.limbs_.size())
    return a.limbs_.size() <=> b.limbs_.size();
  for (size_t i = a.limbs_.size(); i-- > 0;)
    if (a.limbs_[i] != b.limbs_[i])
      return a.limbs_[i] <=> b.limbs_[i];
  return std::strong_ordering::equal;
}

BigUint operator+(const BigUint& a, const BigUint& b) {
  BigUint out;
  const size_t n = std::max(a.limbs_.size(), b.limbs_.size());
  out.limbs_.resize(n + 1, 0);
  uint64_t carry = 0;
  for (size_t i = 0; i < n; ++i) {
    uint64_t sum = carry;
    if (i < a.limbs_.size())
      sum += a.limbs_[i];
    if (i < b.limbs_.size())
      sum += b.limbs_[i];
    out.limbs_[i] = static_cast<uint32_t>(sum);
    carry = sum >> 32;
  }
  out.limbs_[n] = static_cast<uint32_t>(carry);
  out.trim();
  return out;
}

BigUint operator-(const BigUint& a, const BigUint& b) {
  if (a < b)
    throw std::underflow_error("BigUint subtraction would go negative");
  BigUint out;
  out.limbs_.resize(a.limbs_.size(), 0);
  int64_t borrow = 0;
  for (size_t i = 0; i < a.limbs_.size(); ++i) {
    int64_t diff = int64_t{a.limbs_[i]} - borrow;
    if (i < b.limbs_.size())
      diff -= b.limbs_[i];
    if (diff < 0) {
      diff += int64_t{1} << 32;
      borrow = 1;
    } else {
      borrow = 0;
    }
    out.limbs_[i] = static_cast<uint32_t>(diff);
  }
  out.trim();
  return out;
}

BigUint operator*(const BigUint& a, const BigUint& b) {
  if (a.is_zero() || b.is_zero())
    return {};
  BigUint out;
  out.limbs_.assign(a.limbs_.size() + b.limbs_.size(), 0);
  for (size_t i = 0; i < a.limbs_.size(); ++i) {
    uint64_t carry = 0;
    for (size_t j = 0; j < b.limbs_.size(); ++j) {
      uint64_t cur = uint64_t{a.limbs_[i]} * b.limbs_[j] + out.limbs_[i + j] + carry;
      out.limbs_[i + j] = static_cast<uint32_t>(cur);
      carry = cur >> 32;
    }
    out.limbs_[i + b.limbs_.size()] += static_cast<uint32_t>(carry);
  }
  out.trim();
  return out;
}

BigUint BigUint::operator<<(uint32_t shift) const {
  if (is_zero() || shift == 0)
    return *this;
  const uint32_t limb_shift = shift / 32;
  const uint32_t bit_shift = shift % 32;
  BigUint out;
  out.limbs_.assign(limbs_.size() + limb_shift + 1, 0);
  for (size_t i = 0; i < limbs_.size(); ++i) {
    out.limbs_[i + limb_shift] |= limbs_[i] << bit_shift;
    if (bit_shift)
      out.limbs_[i + limb_shift + 1] |= limbs_[i] >> (32 - bit_shift);
  }
  out.trim();
  return out;
}

BigUint BigUint::operator>>(uint32_t shift) const {
  const uint32_t limb_shift = shift / 32;
  const uint32_t bit_shift = shift % 32;
  if (limb_shift >= limbs_.size())
    return {};
  BigUint out;
  out.limbs_.assign(limbs_.size() - limb_shift, 0);
  for (size_t i = 0; i < out.limbs_.size(); ++i) {
    out.limbs_[i] = limbs_[i + limb_shift] >> bit_shift;
    if (bit_shift && i + limb_shift + 1 < limbs_.size())
      out.limbs_[i] |= limbs_[i + limb_shift + 1] << (32 - bit_shift);
  }
  out.trim();
  return out;
}

std::pair<BigUint, BigUint> BigUint::divmod(const BigUint& a, const BigUint& b) {
  if (b.is_zero())
    throw std::domain_error("division by zero");
  if (a < b)
    return {BigUint{}, a};

  // Binary long division; plenty fast at desk-scale operand sizes.
  BigUint quotient, remainder;
  quotient.limbs_.assign(a.limbs_.size(), 0);
  for (uint32_t i = a.bit_length(); i-- > 0;) {
    remainder = remainder << 1;
    if (a.bit(i)) {
      if (remainder.limbs_.empty())
        remainder.limbs_.push_back(1);
      else
        remainder.limbs_[0] |= 1;
    }
    if (remainder >= b) {
      remainder -= b;
      quotient.limbs_[i / 32] |= 1u << (i % 32);
    }
  }
  quotient.trim();
  return {std::move(quotient), std::move(remainder)};
}

BigUint operator%(const BigUint& a, const BigUint& b) { return BigUint::divmod(a, b).second; }
BigUint operator/(const BigUint& a, const BigUint& b) { return BigUint::divmod(a, b).first; }

BigUint BigUint::pow_mod(const BigUint& base, const BigUint& exponent, const BigUint& modulus) {
  if (modulus.is_zero())
    throw std::domain_error("pow_mod: zero modulus");
  if (modulus == BigUint(1))
    return {};
  BigUint result(1);
  BigUint acc = base % modulus;
  const uint32_t bits = exponent.bit_length();
  for (uint32_t i = 0; i < bits; ++i) {
    if (exponent.bit(i))
      result = (result * acc) % modulus;
    acc = (acc * acc) % modulus;
  }
  return result;
}

BigUint BigUint::gcd(BigUint a, BigUint b) {
  while (!b.is_zero()) {
    BigUint r = a % b;
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

std::optional<BigUint> BigUint::mod_inverse(const BigUint& a, const BigUint& m) {
  if (m.is_zero())
    throw std::domain_error("mod_inverse: zero modulus");
  // Extended Euclid tracking only the coefficient of a, with explicit signs.
  BigUint old_r = a % m, r = m;
  BigUint old_s(1), s;
  bool old_s_neg = false, s_neg = false;
  while (!r.is_zero()) {
    auto [q, rem] = divmod(old_r, r);
    old_r = std::move(r);
    r = std::move(rem);
    // (old_s, s) <- (s, old_s - q*s)
    BigUint qs = q * s;
    BigUint new_s;
    bool new_s_neg;
    if (old_s_neg == s_neg) {
      if (old_s >= qs) {
        new_s = old_s - qs;
        new_s_neg = old_s_neg;
      } else {
        new_s = qs - old_s;
        new_s_neg = !old_s_neg;
      }
    } else {
      new_s = old_s + qs;
      new_s_neg = old_s_neg;
    }
    old_s = std::move(s);
    old_s_neg = s_neg;
    s = std::move(new_s);
    s_neg = new_s_neg;
  }
  if (!(old_r == BigUint(1)))
    return std::nullopt;
  BigUint inv = old_s % m;
  if (old_s_neg && !inv.is_zero())
    inv = m - inv;
  return inv;
}

BigUint BigUint::random_bits(uint32_t bits, SeededRng& rng) {
  if (bits == 0)
    return {};
  BigUint out;
  out.limbs_.assign((bits + 31) / 32, 0);
  for (auto& limb : out.limbs_)
    limb = static_cast<uint32_t>(rng.next());
  const uint32_t top_bits = ((bits - 1) % 32) + 1;
  uint32_t& top = out.limbs_.back();
  if (top_bits < 32)
    top &= (1u << top_bits) - 1;
  top |= 1u << (top_bits - 1); // force exact bit length
  out.trim();
  return out;
}

BigUint BigUint::random_below(const BigUint& bound, SeededRng& rng) {
  if (bound.is_zero())
    throw std::invalid_argument("random_below: zero bound");
  const uint32_t bits = bound.bit_length();
  for (;;) {
    BigUint candidate;
    candidate.limbs_.assign((bits + 31) / 32, 0);
    for (auto& limb : candidate.limbs_)
      limb = static_cast<uint32_t>(rng.next());
    const uint32_t top_bits = ((bits - 1) % 32) + 1;
    if (top_bits < 32)
      candidate.limbs_.back() &= (1u << top_bits) - 1;
    candidate.trim();
    if (candidate < bound)
      return candidate;
  }
}

bool BigUint::is_probable_prime(const BigUint& n, uint32_t rounds, SeededRng& rng) {
  if (n < BigUint(2))
    return false;
  for (uint32_t p : kSmallPrimes) {
    if (n == BigUint(p))
      return true;
    if ((n % BigUint(p)).is_zero())
      return false;
  }

  const BigUint one(1), two(2);
  const BigUint n_minus_1 = n - one;
  BigUint d = n_minus_1;
  uint32_t r = 0;
  while (!d.is_odd()) {
    d = d >> 1;
    ++r;
  }

  for (uint32_t round = 0; round < rounds; ++round) {
    const BigUint a = two + random_below(n - BigUint(3), rng); // [2, n-2]
    BigUint x = pow_mod(a, d, n);
    if (x == one || x == n_minus_1)
      continue;
    bool witness = true;
    for (uint32_t i = 0; i + 1 < r; ++i) {
      x = (x * x) % n;
      if (x == n_minus_1) {
        witness = false;
        break;
      }
    }
    if (witness)
      return false;
  }
  return true;
}

BigUint BigUint::random_prime(uint32_t bits, SeededRng& rng) {
  if (bits < 2)
    throw std::invalid_argument("random_prime: need at least 2 bits");
  for (;;) {
    BigUint candidate = random_bits(bits, rng);
    if (!candidate.is_odd())
      candidate += 1;
    if (candidate.bit_length() != bits)
      continue; // the +1 overflowed the width
    if (is_probable_prime(candidate, 40, rng))
      return candidate;
  }
}

} // namespace opforge
