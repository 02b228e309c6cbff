// SPDX-License-Identifier: Apache-2.0
#include "opforge/klepto.hpp"

#include <stdexcept>

namespace opforge {

namespace {

void check_lambda(uint32_t lambda) {
  if (lambda % 2 != 0)
    throw std::invalid_argument("modulus size must be even");
  if (lambda < 32 || lambda > 2048)
    throw std::invalid_argument("modulus size must be in [32, 2048]");
}

std::pair<BigUint, BigUint> distinct_primes(uint32_t bits, SeededRng& rng) {
  const BigUint p = BigUint::random_prime(bits, rng);
  for (;;) {
    const BigUint q = BigUint::random_prime(bits, rng);
    if (!(q == p))
      return {p, q};
  }
}

} // namespace

SubvertedKeygenResult subverted_keygen(uint32_t lambda, const AdversaryPublicKey& adv,
                                       SeededRng& rng) {
  check_lambda(lambda);
  if (adv.n_adv.bit_length() <= lambda / 2)
    throw std::invalid_argument("adversary modulus too small to embed p injectively");

  auto [p, q] = distinct_primes(lambda / 2, rng);
  const BigUint n = p * q;
  const BigUint phi = (p - 1) * (q - 1);

  BigUint e = BigUint::pow_mod(p, adv.e_adv, adv.n_adv);
  uint64_t increments = 0;
  while (!(BigUint::gcd(e, phi) == BigUint(1))) {
    e += 1;
    ++increments;
  }
  const BigUint d = *BigUint::mod_inverse(e, phi);

  return {{n, e, d, p, q}, increments};
}

std::optional<std::pair<BigUint, BigUint>> attacker_recover(const BigUint& n, const BigUint& e,
                                                            const AdversaryKey& adv,
                                                            uint64_t i_max) {
  for (uint64_t i = 0; i < i_max; ++i) {
    const BigUint offset(i);
    if (e < offset)
      break; // e - i would go negative
    const BigUint candidate = BigUint::pow_mod(e - offset, adv.d_adv, adv.n_adv);
    if (candidate <= BigUint(1) || candidate >= n)
      continue;
    if ((n % candidate).is_zero())
      return std::make_pair(candidate, n / candidate);
  }
  return std::nullopt;
}

bool verify_keypair(const RsaKeyPair& kp) {
  if (kp.p.is_zero() || kp.q.is_zero() || kp.p == kp.q)
    return false;
  if (!(kp.p * kp.q == kp.n))
    return false;
  SeededRng rng(0x9e3779b9); // fixed bases are fine for a deterministic check
  if (!BigUint::is_probable_prime(kp.p, 40, rng) || !BigUint::is_probable_prime(kp.q, 40, rng))
    return false;
  const BigUint phi = (kp.p - 1) * (kp.q - 1);
  if (!(BigUint::gcd(kp.e, phi) == BigUint(1)))
    return false;
  if (kp.e.is_zero() || kp.d.is_zero())
    return false;
  return (kp.e * kp.d) % phi == BigUint(1);
}

RsaKeyPair honest_keygen(uint32_t lambda, SeededRng& rng) {
  check_lambda(lambda);
  auto [p, q] = distinct_primes(lambda / 2, rng);
  const BigUint n = p * q;
  const BigUint phi = (p - 1) * (q - 1);

  // e drawn at random (the subverted variant targets exactly this style of
  // keygen, where e is not a fixed constant).
  for (;;) {
    BigUint e = BigUint(3) + BigUint::random_below(phi - 3, rng);
    if (!(BigUint::gcd(e, phi) == BigUint(1)))
      continue;
    const BigUint d = *BigUint::mod_inverse(e, phi);
    return {n, e, d, p, q};
  }
}

AdversaryKey make_adversary_key(uint32_t bits, SeededRng& rng) {
  check_lambda(bits);
  const RsaKeyPair kp = honest_keygen(bits, rng);
  return {kp.n, kp.e, kp.d};
}

std::vector<uint8_t> export_constant_bits(const AdversaryPublicKey& adv, uint32_t bits) {
  if (adv.n_adv.bit_length() > bits || adv.e_adv.bit_length() > bits)
    throw std::invalid_argument("export width smaller than the adversary key");
  std::vector<uint8_t> out(size_t{bits} * 2, 0);
  for (uint32_t i = 0; i < bits; ++i) {
    out[i] = adv.e_adv.bit(i) ? 1 : 0;
    out[bits + i] = adv.n_adv.bit(i) ? 1 : 0;
  }
  return out;
}

} // namespace opforge
