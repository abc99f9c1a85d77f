#include "oldauth/legacy_auth.hpp"

#include "oldauth/error.hpp"

#include <charconv>
#include <cstdio>

namespace oldauth {

std::string to_string(const HashHalves& h) {
  char buf[18];
  std::snprintf(buf, sizeof buf, "%08x:%08x", h.h1, h.h2);
  return buf;
}

HashHalves parse_hash_halves(std::string_view text) {
  auto bad = [&] {
    return ParseError(ParseError::Unit::line, 1,
                      "expected h1:h2 in hex, got '" + std::string(text) + "'");
  };
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) throw bad();
  auto field = [&](std::string_view s) {
    if (s.empty() || s.size() > 8) throw bad();
    std::uint32_t value = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value, 16);
    if (ec != std::errc() || ptr != s.data() + s.size()) throw bad();
    return value;
  };
  return {field(text.substr(0, colon)), field(text.substr(colon + 1))};
}

void ScrambleParams::validate() const {
  if (modulus <= digit_span) throw MalformedInput("modulus must exceed digit_span");
  if (rounds < 1) throw MalformedInput("rounds must be at least 1");
  if (half_width_bits < 1 || half_width_bits > 32) {
    throw MalformedInput("half_width_bits must be in [1, 32]");
  }
  if (digit_span == 0 || digit_offset + digit_span > 256) {
    throw MalformedInput("digit_offset + digit_span must fit in a byte");
  }
  if (modulus >= (std::uint64_t{1} << 40)) throw MalformedInput("modulus too large");
}

ScrambleParams toy_params(int half_width_bits, std::uint64_t modulus) {
  ScrambleParams p;
  p.half_width_bits = half_width_bits;
  p.modulus = modulus;
  p.validate();
  return p;
}

PrngStep prng_step(const PrngState& state, const ScrambleParams& params) {
  const std::uint64_t n = params.modulus;
  PrngStep out;
  out.state.s1 = (3 * state.s1 + state.s2) % n;
  out.state.s2 = (out.state.s1 + state.s2 + params.additive) % n;
  out.digit = static_cast<std::uint32_t>(params.digit_span * out.state.s1 / n);
  return out;
}

PrngState seed_state(HashHalves seed, const ScrambleParams& params) {
  if (params.reduce_seeds) return {seed.h1 % params.modulus, seed.h2 % params.modulus};
  return {seed.h1, seed.h2};
}

std::vector<std::uint32_t> scramble_digits(HashHalves seed, const ScrambleParams& params) {
  std::vector<std::uint32_t> digits;
  digits.reserve(static_cast<std::size_t>(params.rounds) + 1);
  PrngState state = seed_state(seed, params);
  for (int i = 0; i <= params.rounds; ++i) {
    PrngStep step = prng_step(state, params);
    state = step.state;
    digits.push_back(step.digit);
  }
  return digits;
}

std::string Response::hex() const {
  static constexpr char digits[] = "0123456789abcdef";
  std::string out;
  out.reserve(bytes.size() * 2);
  for (auto b : bytes) {
    out.push_back(digits[b >> 4]);
    out.push_back(digits[b & 0xf]);
  }
  return out;
}

Response one_way(HashHalves seed, const ScrambleParams& params) {
  PrngState state = seed_state(seed, params);
  Response r;
  r.bytes.resize(static_cast<std::size_t>(params.rounds));
  for (auto& b : r.bytes) {
    PrngStep step = prng_step(state, params);
    state = step.state;
    b = static_cast<std::uint8_t>(step.digit + params.digit_offset);
  }
  const auto mask = static_cast<std::uint8_t>(prng_step(state, params).digit);
  for (auto& b : r.bytes) b ^= mask;
  return r;
}

Response scramble(HashHalves password_hash, HashHalves challenge_hash,
                  const ScrambleParams& params) {
  const std::uint64_t limit = params.half_limit();
  if (password_hash.h1 >= limit || password_hash.h2 >= limit || challenge_hash.h1 >= limit ||
      challenge_hash.h2 >= limit) {
    throw MalformedInput("hash half outside the configured width");
  }
  return one_way(password_hash ^ challenge_hash, params);
}

HashHalves hash_password(std::span<const std::uint8_t> bytes) {
  std::uint32_t nr = 1345345333u;
  std::uint32_t add = 7;
  std::uint32_t nr2 = 0x12345671u;
  for (std::uint8_t c : bytes) {
    if (c == ' ' || c == '\t') continue;
    nr ^= (((nr & 63) + add) * c) + (nr << 8);
    nr2 += (nr2 << 8) ^ nr;
    add += c;
  }
  constexpr std::uint32_t mask = (std::uint32_t{1} << 31) - 1;
  return {nr & mask, nr2 & mask};
}

HashHalves hash_password(std::string_view text) {
  return hash_password(std::span<const std::uint8_t>(
      reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

bool verify(HashHalves password_hash, std::string_view challenge_text, const Response& response,
            const ScrambleParams& params) {
  if (response.bytes.size() != static_cast<std::size_t>(params.rounds)) {
    throw MalformedInput("response has " + std::to_string(response.bytes.size()) +
                         " bytes, expected " + std::to_string(params.rounds));
  }
  return scramble(password_hash, hash_password(challenge_text), params) == response;
}

LinearForm linear_coefficients(int i, const ScrambleParams& params) {
  if (i < 1) throw MalformedInput("linear form index must be >= 1");
  // s1 form (a) and s2 form (A) as (X, Y, constant) coefficients, starting
  // from the seed (X, Y).
  BigInt a[3] = {1, 0, 0};
  BigInt s[3] = {0, 1, 0};
  for (int step = 0; step < i; ++step) {
    for (int k = 0; k < 3; ++k) a[k] = 3 * a[k] + s[k];
    for (int k = 0; k < 3; ++k) s[k] = a[k] + s[k];
    s[2] += 1;
  }
  LinearForm form{i, a[0], a[1], a[2], 0};
  const BigInt n = params.modulus;
  const BigInt top = (BigInt(1) << params.half_width_bits) * (form.alpha + form.beta) +
                     BigInt(params.additive) * form.gamma;
  form.delta_max = ceil_div(top, n) - 1;
  return form;
}

std::string random_challenge(std::mt19937_64& rng, std::size_t length) {
  constexpr std::uint64_t span = challenge_alphabet_last - challenge_alphabet_first + 1;
  std::string out(length, '\0');
  // plain modulo: the mapping must not depend on the standard library
  for (auto& ch : out) ch = static_cast<char>(challenge_alphabet_first + rng() % span);
  return out;
}

HashHalves random_challenge_hash(std::mt19937_64& rng, const ScrambleParams& params) {
  if (params.half_width_bits >= 31) return hash_password(random_challenge(rng));
  const std::uint64_t mask = params.half_limit() - 1;
  const auto h1 = static_cast<std::uint32_t>(rng() & mask);
  const auto h2 = static_cast<std::uint32_t>(rng() & mask);
  return {h1, h2};
}

}  // namespace oldauth
