#pragma once

// Pre-4.1 MySQL login primitives: the PASSWORD() hash, the two-word PRNG and
// the 8-byte scramble a client sends back for a server challenge.

#include "oldauth/rational.hpp"

#include <compare>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace oldauth {

// Two 32-bit words of a legacy hash: (p1, p2) for a password, (c1, c2) for a
// challenge. XOR of the two gives the PRNG seed pair (X, Y).
struct HashHalves {
  std::uint32_t h1 = 0;
  std::uint32_t h2 = 0;

  friend HashHalves operator^(HashHalves a, HashHalves b) { return {a.h1 ^ b.h1, a.h2 ^ b.h2}; }
  friend bool operator==(const HashHalves&, const HashHalves&) = default;
  friend auto operator<=>(const HashHalves&, const HashHalves&) = default;
};

// "h1:h2" with two 8-digit lowercase hex fields.
std::string to_string(const HashHalves& h);
// Inverse of to_string; throws ParseError (line 1) on malformed text.
HashHalves parse_hash_halves(std::string_view text);

struct ScrambleParams {
  std::uint64_t modulus = (std::uint64_t{1} << 30) - 1;
  int rounds = 8;
  std::uint32_t digit_span = 31;
  std::uint32_t digit_offset = 64;
  std::uint32_t additive = 33;
  int half_width_bits = 32;
  // Reduce both seeds mod n before the first step, as the shipped engine
  // does. Off by default: the attack models unreduced seeds.
  bool reduce_seeds = false;

  // Throws MalformedInput when the parameters are inconsistent.
  void validate() const;

  // Exclusive upper bound 2^half_width_bits on every hash half.
  std::uint64_t half_limit() const { return std::uint64_t{1} << half_width_bits; }
};

// Reduced-size parameters for exhaustive checks: W-bit halves, modulus n.
ScrambleParams toy_params(int half_width_bits, std::uint64_t modulus);

struct PrngState {
  std::uint64_t s1 = 0;
  std::uint64_t s2 = 0;

  friend bool operator==(const PrngState&, const PrngState&) = default;
};

struct PrngStep {
  PrngState state;
  std::uint32_t digit = 0;
};

// s1 <- (3*s1 + s2) mod n; s2 <- (s1 + s2 + additive) mod n; the digit is
// floor(digit_span * s1 / n) computed in integers.
PrngStep prng_step(const PrngState& state, const ScrambleParams& params);

// Seed state for (X, Y), honoring params.reduce_seeds.
PrngState seed_state(HashHalves seed, const ScrambleParams& params);

// The rounds+1 raw digits for seed (X, Y); the last one is the mask digit.
std::vector<std::uint32_t> scramble_digits(HashHalves seed, const ScrambleParams& params);

struct Response {
  std::vector<std::uint8_t> bytes;

  std::string hex() const;
  friend bool operator==(const Response&, const Response&) = default;
};

// The one-way map from the seed pair (X, Y) to the response bytes.
Response one_way(HashHalves seed, const ScrambleParams& params);

// Client-side scramble of the password hash against a hashed challenge.
Response scramble(HashHalves password_hash, HashHalves challenge_hash,
                  const ScrambleParams& params = {});

// Classic PASSWORD(): both words masked to 31 bits, spaces and tabs skipped.
HashHalves hash_password(std::string_view text);
HashHalves hash_password(std::span<const std::uint8_t> bytes);

// Server-side check. Throws MalformedInput when the response length differs
// from params.rounds.
bool verify(HashHalves password_hash, std::string_view challenge_text, const Response& response,
            const ScrambleParams& params = {});

// Linear form for the i-th PRNG state: s1 after i steps equals
// (alpha*X + beta*Y + additive*gamma) mod n. `delta_max` bounds the number of
// whole multiples of n that fit under the form on [0, 2^W)^2.
struct LinearForm {
  int index = 0;
  BigInt alpha;
  BigInt beta;
  BigInt gamma;
  BigInt delta_max;
};

LinearForm linear_coefficients(int i, const ScrambleParams& params = {});

// Challenge alphabet for simulated sessions: printable ASCII 0x21..0x7e.
inline constexpr std::uint8_t challenge_alphabet_first = 0x21;
inline constexpr std::uint8_t challenge_alphabet_last = 0x7e;

// `length` characters drawn uniformly from the challenge alphabet.
std::string random_challenge(std::mt19937_64& rng, std::size_t length = 8);

// Hash of a fresh random challenge. For widths below 31 bits (toy domains)
// the halves are drawn uniformly from [0, 2^W) instead.
HashHalves random_challenge_hash(std::mt19937_64& rng, const ScrambleParams& params);

}  // namespace oldauth
