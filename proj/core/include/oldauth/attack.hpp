#pragma once

// Passive recovery of a legacy password hash from observed
// challenge/response pairs.
//
// For one pair, the set of seed pairs (X, Y) = (p1^c1, p2^c2) producing the
// observed response is a finite union of convex polygons: every PRNG digit
// pins a linear form alpha*X + beta*Y + 33*gamma into one of a few parallel
// strips. Polygon sets from different pairs are compared on dyadic cells,
// where XOR with the challenge only permutes cells of equal size, and the
// surviving region is enumerated and sieved with the remaining pairs.

#include "oldauth/geometry.hpp"
#include "oldauth/legacy_auth.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace oldauth {

struct ChallengeResponsePair {
  std::string challenge_text;  // may be empty when only the hash is known
  HashHalves challenge_hash;
  Response response;

  // Pair for a textual challenge; the hash is computed with hash_password.
  static ChallengeResponsePair from_text(std::string text, Response response);
};

struct PolygonSet {
  std::vector<ConvexPolygon> polygons;  // seed space, inside [0, 2^W)^2
  ChallengeResponsePair pair;
  std::uint32_t w9 = 0;                 // extra digit of the first survivor
  std::vector<std::uint32_t> w9_candidates;

  Rational total_area() const;
};

struct CellPiece {
  DyadicCell cell;  // seed-space cell holding the fragment
  ConvexPolygon fragment;
  std::size_t polygon_index = 0;  // polygon of the originating set
};

struct CandidateSet {
  std::vector<HashHalves> points;  // password space, sorted, unique
  std::size_t pairs_survived = 0;
};

struct AttackConfig {
  std::size_t p1_pairs = 5;
  std::vector<int> cell_exponents = {24, 20, 16, 12, 8};
  std::size_t sieve_budget = std::size_t{1} << 24;
  bool stop_when_unique = true;
  // Width of the password hash halves; 0 means min(31, W), the output width
  // of hash_password. Candidates outside [0, 2^bits)^2 are never hashes.
  int password_bits = 0;

  int effective_password_bits(const ScrambleParams& params) const;
  void validate(const ScrambleParams& params) const;
};

// Strip for digit `digit` of linear form `form`, shifted by `delta` whole
// multiples of n: the two half-planes
//   digit*n + span*delta*n <= span*(alpha*X + beta*Y + additive*gamma)
//   span*(...) < (digit+1)*n + span*delta*n
std::pair<HalfPlane, HalfPlane> digit_strip(const LinearForm& form, std::uint32_t digit,
                                            const BigInt& delta, const ScrambleParams& params);

// Polygons for one guess of the extra digit; empty when the guess is
// inconsistent with the response.
std::vector<ConvexPolygon> polygons_for_mask(const ChallengeResponsePair& pair,
                                             std::uint32_t mask, const ScrambleParams& params);

struct MaskSurvivor {
  std::uint32_t w9 = 0;
  PolygonSet set;
};

// Tries every extra-digit value in [0, 32) and keeps the non-empty ones.
std::vector<MaskSurvivor> recover_w9(const ChallengeResponsePair& pair,
                                     const ScrambleParams& params = {});

// Exact preimage of the pair's response as a polygon set. Throws
// NoPolygonError if no extra-digit guess yields a polygon.
PolygonSet procedure1(const ChallengeResponsePair& pair, const ScrambleParams& params = {});

// One piece per polygon, tagged with the whole-domain cell.
std::vector<CellPiece> wrap_pieces(const PolygonSet& set, const ScrambleParams& params);

// Password-space index of a seed-space cell under challenge `challenge`.
DyadicCell password_cell(const DyadicCell& cell, HashHalves challenge);

// Refines `current` onto cells of side 2^m and keeps the pieces whose
// password-space cell is also reached by `other`.
std::vector<CellPiece> procedure2(const std::vector<CellPiece>& current,
                                  const ChallengeResponsePair& current_pair,
                                  const PolygonSet& other, int m);

// Lattice points of every piece mapped to password space, dropping points
// with a half >= password_limit (0: keep all). Throws BudgetExceeded if more
// than `budget` points would be enumerated.
CandidateSet extract_points(const std::vector<CellPiece>& pieces,
                            const ChallengeResponsePair& pair, std::size_t budget,
                            std::uint64_t password_limit = 0);

// Keeps the candidates whose scramble against the pair matches its response.
CandidateSet procedure3(const CandidateSet& candidates, const ChallengeResponsePair& pair,
                        const ScrambleParams& params = {});

struct StageLog {
  std::string stage;  // "procedure1", "procedure2", "extract", "procedure3"
  int pair = -1;
  int round = -1;
  int cell_exponent = -1;
  std::size_t polygons = 0;
  std::size_t pieces = 0;
  double area = 0.0;
  std::size_t points = 0;
  std::size_t survivors = 0;
  std::vector<std::uint32_t> w9;
  double seconds = 0.0;
};

struct AttackResult {
  CandidateSet candidates;
  std::vector<StageLog> stages;
  std::vector<std::string> warnings;
  double seconds = 0.0;
};

// Read-only hooks into a running attack, for instrumentation and figures.
struct AttackObserver {
  std::function<void(std::size_t pair_index, const PolygonSet&)> on_polygon_set;
  std::function<void(int round, int m, const std::vector<CellPiece>&)> on_pieces;
  std::function<void(const CandidateSet&)> on_extracted;
  std::function<void(std::size_t pair_index, const CandidateSet&)> on_sieved;
};

// Full attack: polygon sets for the first p1_pairs pairs, cell filtering of
// the first set against the others, extraction, then sieving with every
// pair that was not enumerated exactly.
AttackResult run_attack(const std::vector<ChallengeResponsePair>& pairs,
                        const AttackConfig& config = {}, const ScrambleParams& params = {},
                        const AttackObserver* observer = nullptr);

struct CandidateScore {
  HashHalves candidate;
  std::size_t passed = 0;
  std::size_t trials = 0;

  double rate() const { return trials == 0 ? 0.0 : static_cast<double>(passed) / trials; }
};

// Fraction of `trials` fresh random challenges on which each candidate
// answers exactly like `truth`. Deterministic in `seed`.
std::vector<CandidateScore> score_candidates(const CandidateSet& candidates, HashHalves truth,
                                             std::size_t trials, std::uint64_t seed,
                                             const ScrambleParams& params = {});

}  // namespace oldauth
