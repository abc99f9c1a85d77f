#include "doctest.h"
#include "reference_oracle.hpp"
#include "support.hpp"

#include "oldauth/error.hpp"
#include "oldauth/legacy_auth.hpp"

#include <cmath>
#include <random>

using namespace oldauth;

namespace {

std::string response_text(const Response& r) { return {r.bytes.begin(), r.bytes.end()}; }

HashHalves oracle_hash(const std::string& s) {
  unsigned long h[2];
  reference::hash_password(h, s.data(), s.size());
  return {static_cast<std::uint32_t>(h[0]), static_cast<std::uint32_t>(h[1])};
}

// 4-decimal truncation of alpha/beta, in units of 1e-4
BigInt slope_e4(const LinearForm& f) { return floor_div(f.alpha * 10000, f.beta); }

}  // namespace

TEST_CASE("empty password hashes to the masked initial accumulators") {
  const HashHalves h = hash_password("");
  CHECK(h.h1 == 1345345333u);
  CHECK(h.h2 == 305419889u);
  CHECK(to_string(h) == "50305735:12345671");
}

TEST_CASE("spaces and tabs do not contribute to the hash") {
  CHECK(hash_password("pass word") == hash_password("password"));
  CHECK(hash_password("\tpassword ") == hash_password("password"));
  CHECK(hash_password("password") != hash_password("passwore"));
}

TEST_CASE("hash halves print and parse back") {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 200; ++i) {
    const HashHalves h = hash_password(testing::random_password(rng));
    CHECK(h.h1 < (1u << 31));
    CHECK(h.h2 < (1u << 31));
    CHECK(parse_hash_halves(to_string(h)) == h);
  }
  CHECK_THROWS_AS(parse_hash_halves("1234"), ParseError);
  CHECK_THROWS_AS(parse_hash_halves("12g4:0"), ParseError);
  CHECK_THROWS_AS(parse_hash_halves("123456789:0"), ParseError);
  CHECK_THROWS_AS(parse_hash_halves(":1"), ParseError);
}

TEST_CASE("hash and scramble agree with the reference transcription") {
  std::mt19937_64 rng(42);
  for (int i = 0; i < 2000; ++i) {
    const std::string pw = testing::random_password(rng);
    const std::string challenge = random_challenge(rng);
    CHECK(hash_password(pw) == oracle_hash(pw));
    const Response r = scramble(hash_password(pw), hash_password(challenge));
    CHECK(response_text(r) == reference::scramble(challenge, pw, false));
    CHECK(response_text(r) == reference::scramble(challenge, pw, true));
  }
}

TEST_CASE("one_way matches the reference on raw words") {
  std::mt19937_64 rng(43);
  for (int i = 0; i < 2000; ++i) {
    const auto p1 = static_cast<std::uint32_t>(rng()), p2 = static_cast<std::uint32_t>(rng());
    const auto c1 = static_cast<std::uint32_t>(rng()), c2 = static_cast<std::uint32_t>(rng());
    const Response r = scramble({p1, p2}, {c1, c2});
    CHECK(response_text(r) == reference::scramble_words(p1, p2, c1, c2));
  }
}

TEST_CASE("property: response bytes lie in [64, 96)") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 100000; ++i) {
    const HashHalves seed{static_cast<std::uint32_t>(rng()), static_cast<std::uint32_t>(rng())};
    const Response r = one_way(seed, {});
    for (auto b : r.bytes) {
      if (b < 64 || b >= 96) FAIL("byte out of range: " << int(b));
    }
  }
}

TEST_CASE("property: the response depends only on password xor challenge") {
  std::mt19937_64 rng(8);
  for (int i = 0; i < 5000; ++i) {
    const HashHalves p{static_cast<std::uint32_t>(rng()), static_cast<std::uint32_t>(rng())};
    const HashHalves c{static_cast<std::uint32_t>(rng()), static_cast<std::uint32_t>(rng())};
    const HashHalves d{static_cast<std::uint32_t>(rng()), static_cast<std::uint32_t>(rng())};
    CHECK(scramble(p, c) == scramble(p ^ d, c ^ d));
    CHECK(scramble(p, c) == one_way(p ^ c, {}));
  }
}

TEST_CASE("property: reducing the seeds first never changes the response") {
  std::mt19937_64 rng(9);
  ScrambleParams real;
  real.reduce_seeds = true;
  for (int i = 0; i < 20000; ++i) {
    const HashHalves s{static_cast<std::uint32_t>(rng()), static_cast<std::uint32_t>(rng())};
    CHECK(one_way(s, {}) == one_way(s, real));
  }
  // seeds right at and above the modulus
  for (std::uint32_t s1 : {0u, 1073741822u, 1073741823u, 1073741824u, 4294967295u}) {
    for (std::uint32_t s2 : {0u, 1073741823u, 2147483647u, 4294967295u}) {
      CHECK(one_way({s1, s2}, {}) == one_way({s1, s2}, real));
    }
  }
}

TEST_CASE("zero seed produces response bytes of 64 with mask 0") {
  const auto digits = scramble_digits({0, 0}, {});
  REQUIRE(digits.size() == 9);
  // s1 stays 0 on the first step, so the first digit is 0
  CHECK(digits[0] == 0);
  CHECK(one_way({0, 0}, {}).bytes[0] == (64 ^ digits[8]));
}

TEST_CASE("linear coefficients of the first digits") {
  const LinearForm f1 = linear_coefficients(1, {});
  CHECK(f1.alpha == 3);
  CHECK(f1.beta == 1);
  CHECK(f1.gamma == 0);
  CHECK(f1.delta_max == 16);
  const LinearForm f2 = linear_coefficients(2, {});
  CHECK(f2.alpha == 12);
  CHECK(f2.beta == 5);
  CHECK(f2.gamma == 1);
  const LinearForm f9 = linear_coefficients(9, {});
  CHECK(f9.alpha == 322863);
  CHECK(f9.beta == 140206);
  CHECK(f9.gamma == 42450);
  const LinearForm f10 = linear_coefficients(10, {});
  CHECK(f10.alpha == 1389207);
  CHECK(f10.beta == 603275);
  CHECK(f10.gamma == 182656);
  CHECK_THROWS_AS(linear_coefficients(0, {}), MalformedInput);
}

TEST_CASE("slopes truncated to four decimals") {
  const std::int64_t expected[] = {30000, 24000, 23181, 23052, 23031, 23028, 23027, 23027};
  for (int i = 1; i <= 8; ++i) {
    CHECK(slope_e4(linear_coefficients(i, {})) == expected[i - 1]);
  }
}

TEST_CASE("property: forms obey L(i+1) = 5 L(i) - 3 L(i-1) + 33") {
  for (int i = 2; i < 20; ++i) {
    const auto a = linear_coefficients(i - 1, {});
    const auto b = linear_coefficients(i, {});
    const auto c = linear_coefficients(i + 1, {});
    CHECK(c.alpha == 5 * b.alpha - 3 * a.alpha);
    CHECK(c.beta == 5 * b.beta - 3 * a.beta);
    CHECK(c.gamma == 5 * b.gamma - 3 * a.gamma + 1);
  }
}

TEST_CASE("property: the unreduced state equals the linear form and wraps within delta_max") {
  std::mt19937_64 rng(10);
  const ScrambleParams params;
  const BigInt n = params.modulus;
  for (int t = 0; t < 3000; ++t) {
    const HashHalves seed{static_cast<std::uint32_t>(rng()), static_cast<std::uint32_t>(rng())};
    BigInt s1 = seed.h1, s2 = seed.h2;
    PrngState st = seed_state(seed, params);
    for (int i = 1; i <= 9; ++i) {
      s1 = 3 * s1 + s2;
      s2 = s1 + s2 + 33;
      const PrngStep step = prng_step(st, params);
      st = step.state;
      const LinearForm f = linear_coefficients(i, params);
      const BigInt value = f.alpha * seed.h1 + f.beta * seed.h2 + 33 * f.gamma;
      CHECK(value == s1);
      const BigInt delta = floor_div(value, n);
      CHECK(delta >= 0);
      CHECK(delta <= f.delta_max);
      CHECK(value - delta * n == BigInt(step.state.s1));
      CHECK(floor_div(31 * (value - delta * n), n) == BigInt(step.digit));
    }
  }
}

TEST_CASE("verify accepts the matching response and rejects others") {
  const HashHalves pw = hash_password("secret");
  const Response r = scramble(pw, hash_password("abcdefgh"));
  CHECK(verify(pw, "abcdefgh", r));
  Response bad = r;
  bad.bytes[3] ^= 1;
  CHECK_FALSE(verify(pw, "abcdefgh", bad));
  Response short_r = r;
  short_r.bytes.pop_back();
  CHECK_THROWS_AS(verify(pw, "abcdefgh", short_r), MalformedInput);
}

TEST_CASE("inputs outside the configured width are rejected") {
  const ScrambleParams toy = toy_params(12, 1023);
  CHECK_THROWS_AS(scramble({4096, 0}, {0, 0}, toy), MalformedInput);
  CHECK_NOTHROW(scramble({4095, 4095}, {0, 0}, toy));
  CHECK_THROWS_AS(toy_params(12, 20), MalformedInput);
  CHECK_THROWS_AS(toy_params(40, 1023), MalformedInput);
}

TEST_CASE("random challenges use printable characters") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 1000; ++i) {
    const std::string c = random_challenge(rng);
    CHECK(c.size() == 8);
    for (char ch : c) {
      CHECK(ch >= 0x21);
      CHECK(ch <= 0x7e);
    }
  }
  std::mt19937_64 a(3), b(3);
  CHECK(random_challenge(a) == random_challenge(b));
}

TEST_CASE("toy challenge hashes cover the toy width") {
  std::mt19937_64 rng(12);
  const ScrambleParams toy = toy_params(12, 1023);
  std::uint32_t seen_or = 0;
  for (int i = 0; i < 1000; ++i) {
    const HashHalves c = random_challenge_hash(rng, toy);
    CHECK(c.h1 < 4096);
    CHECK(c.h2 < 4096);
    seen_or |= c.h1 | c.h2;
  }
  CHECK(seen_or == 4095);
}
