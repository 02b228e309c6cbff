// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "opforge/bigint.hpp"
#include "opforge/rng.hpp"

namespace opforge {

/// RSA key with the factorization retained (generator and attacker both
/// hold it at desk scale; nothing here is production cryptography).
struct RsaKeyPair {
  BigUint n, e, d;
  BigUint p, q;
};

struct AdversaryPublicKey {
  BigUint n_adv, e_adv;
};

/// The trojan designer's full RSA key; the public half is what gets
/// embedded in the subverted device.
struct AdversaryKey {
  BigUint n_adv, e_adv, d_adv;
};

struct SubvertedKeygenResult {
  RsaKeyPair key;
  /// How often e had to be bumped until it was invertible mod phi(n); the
  /// recovery loop finds the factorization at exactly this index.
  uint64_t e_increments = 0;
};

/// Subverted key generation: p and q are random lambda/2-bit primes, and the
/// public exponent starts as p encrypted under the adversary key
/// (e = p^E_adv mod N_adv), incremented until gcd(e, phi(n)) = 1. lambda
/// must be even and in [32, 2048]; N_adv must exceed any lambda/2-bit value
/// so p embeds injectively.
SubvertedKeygenResult subverted_keygen(uint32_t lambda, const AdversaryPublicKey& adv,
                                       SeededRng& rng);

/// The trojan designer's side: decrypt e - i under the private adversary key
/// for i = 0 .. i_max-1 and test whether the result divides n. Returns the
/// factorization (p, q) or nullopt.
std::optional<std::pair<BigUint, BigUint>> attacker_recover(const BigUint& n, const BigUint& e,
                                                            const AdversaryKey& adv,
                                                            uint64_t i_max = 64);

/// Checks n = p*q, primality of both factors, gcd(e, phi) = 1 and
/// e*d = 1 mod phi.
bool verify_keypair(const RsaKeyPair& kp);

/// Ordinary RSA key generation with a randomly chosen public exponent, the
/// negative control for recovery experiments.
RsaKeyPair honest_keygen(uint32_t lambda, SeededRng& rng);

/// A fresh RSA key pair for the trojan designer, `bits` bits of modulus.
AdversaryKey make_adversary_key(uint32_t bits, SeededRng& rng);

/// The embedded constants (N_adv then E_adv, each padded to `bits`) as one
/// bit vector, index 0 = least significant bit of E_adv. This is the value
/// an opaque predicate would be asked to supply.
std::vector<uint8_t> export_constant_bits(const AdversaryPublicKey& adv, uint32_t bits);

} // namespace opforge
