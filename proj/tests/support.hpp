#pragma once

#include "oldauth/attack.hpp"
#include "oldauth/capture.hpp"
#include "oldauth/error.hpp"
#include "oldauth/geometry.hpp"
#include "oldauth/legacy_auth.hpp"

#include <cstdint>
#include <random>
#include <set>
#include <string>
#include <vector>

namespace testing {

using namespace oldauth;

inline std::string random_password(std::mt19937_64& rng, std::size_t max_len = 16) {
  static constexpr char alphabet[] =
      "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789 \t!#$%&*+-./:;<=>?@_~";
  std::string out(rng() % (max_len + 1), ' ');
  for (auto& c : out) c = alphabet[rng() % (sizeof alphabet - 1)];
  return out;
}

// Pair for a password hash and a challenge hash, without challenge text.
inline ChallengeResponsePair hashed_pair(HashHalves password, HashHalves challenge,
                                         const ScrambleParams& params) {
  return {"", challenge, scramble(password, challenge, params)};
}

inline std::vector<ChallengeResponsePair> pairs_for(HashHalves password, std::size_t count,
                                                    std::mt19937_64& rng,
                                                    const ScrambleParams& params) {
  std::vector<ChallengeResponsePair> out;
  std::set<HashHalves> seen;
  while (out.size() < count) {
    const HashHalves c = random_challenge_hash(rng, params);
    if (!seen.insert(c).second) continue;
    out.push_back(hashed_pair(password, c, params));
  }
  return out;
}

inline HashHalves random_hash(std::mt19937_64& rng, const ScrambleParams& params) {
  const std::uint64_t limit = std::min<std::uint64_t>(params.half_limit(), std::uint64_t{1} << 31);
  return {static_cast<std::uint32_t>(rng() % limit), static_cast<std::uint32_t>(rng() % limit)};
}

// Every seed (X, Y) in [0, 2^W)^2 whose forward scramble is `response`.
// The mask cancels in r_i ^ r_1, so most seeds are rejected after two steps.
inline std::set<std::pair<std::uint64_t, std::uint64_t>> brute_preimage(
    const Response& response, const ScrambleParams& params) {
  std::set<std::pair<std::uint64_t, std::uint64_t>> out;
  const std::uint64_t limit = params.half_limit();
  const auto& r = response.bytes;
  for (std::uint64_t x = 0; x < limit; ++x) {
    for (std::uint64_t y = 0; y < limit; ++y) {
      PrngState st{x, y};
      PrngStep first = prng_step(st, params);
      PrngStep second = prng_step(first.state, params);
      if (((first.digit + params.digit_offset) ^ (second.digit + params.digit_offset)) !=
          static_cast<std::uint32_t>(r[0] ^ r[1])) {
        continue;
      }
      HashHalves seed{static_cast<std::uint32_t>(x), static_cast<std::uint32_t>(y)};
      if (one_way(seed, params) == response) out.emplace(x, y);
    }
  }
  return out;
}

inline std::set<std::pair<std::uint64_t, std::uint64_t>> union_lattice(
    const std::vector<ConvexPolygon>& polys) {
  std::set<std::pair<std::uint64_t, std::uint64_t>> out;
  for (const auto& p : polys) {
    for (const auto& q : lattice_points(p)) {
      out.emplace(static_cast<std::uint64_t>(q.x), static_cast<std::uint64_t>(q.y));
    }
  }
  return out;
}

// Password hashes in [0, 2^W)^2 consistent with every pair.
inline std::vector<HashHalves> brute_survivors(const std::vector<ChallengeResponsePair>& pairs,
                                               const ScrambleParams& params) {
  std::vector<HashHalves> out;
  const auto first = brute_preimage(pairs.front().response, params);
  for (auto [x, y] : first) {
    const HashHalves p =
        HashHalves{static_cast<std::uint32_t>(x), static_cast<std::uint32_t>(y)} ^
        pairs.front().challenge_hash;
    bool ok = true;
    for (std::size_t j = 1; j < pairs.size() && ok; ++j) {
      ok = scramble(p, pairs[j].challenge_hash, params) == pairs[j].response;
    }
    if (ok) out.push_back(p);
  }
  std::sort(out.begin(), out.end());
  return out;
}

// Random convex polygon with small integer vertices inside [0, side]^2,
// optionally with a few edges made strict by clipping.
inline ConvexPolygon random_small_polygon(std::mt19937_64& rng, int side = 64) {
  for (;;) {
    std::vector<Point> pts;
    const int n = 3 + static_cast<int>(rng() % 6);
    for (int i = 0; i < n; ++i) {
      pts.push_back({Rational(static_cast<std::int64_t>(rng() % (side + 1))),
                     Rational(static_cast<std::int64_t>(rng() % (side + 1)))});
    }
    ConvexPolygon poly;
    try {
      poly = ConvexPolygon::from_vertices(pts);
    } catch (const Error&) {
      continue;
    }
    // a couple of random rational cuts, some strict
    const int cuts = static_cast<int>(rng() % 3);
    for (int c = 0; c < cuts; ++c) {
      const BigInt a = static_cast<std::int64_t>(rng() % 9) - 4;
      const BigInt b = static_cast<std::int64_t>(rng() % 9) - 4;
      if (a == 0 && b == 0) continue;
      const Rational bound(BigInt(static_cast<std::int64_t>(rng() % (8 * side)) - 2 * side),
                           BigInt(static_cast<std::int64_t>(1 + rng() % 3)));
      HalfPlane hp{a, b, bound, rng() % 2 == 0};
      ConvexPolygon cut = intersect_halfplane(poly, hp);
      if (!cut.empty()) poly = std::move(cut);
    }
    return poly;
  }
}

}  // namespace testing
