#include "oldauth/attack.hpp"
#include "oldauth/capture.hpp"
#include "oldauth/geometry.hpp"
#include "oldauth/legacy_auth.hpp"

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

using namespace oldauth;

namespace {

std::vector<ChallengeResponsePair> pairs_for(std::string_view password, std::size_t count,
                                             std::uint64_t seed) {
  std::vector<ChallengeResponsePair> out;
  for (const auto& rec : generate_sessions(password, count, seed)) out.push_back(rec.to_pair());
  return out;
}

void BM_HashPassword(benchmark::State& state) {
  const std::string text = "correct horse battery staple";
  for (auto _ : state) benchmark::DoNotOptimize(hash_password(text));
}
BENCHMARK(BM_HashPassword);

void BM_Scramble(benchmark::State& state) {
  std::mt19937_64 rng(1);
  const HashHalves pw = hash_password("hunter2");
  const HashHalves c = hash_password(random_challenge(rng));
  for (auto _ : state) benchmark::DoNotOptimize(scramble(pw, c));
}
BENCHMARK(BM_Scramble);

void BM_Procedure1(benchmark::State& state) {
  const auto pairs = pairs_for("hunter2", 16, 2);
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(procedure1(pairs[i++ % pairs.size()]));
}
BENCHMARK(BM_Procedure1)->Unit(benchmark::kMillisecond);

// Lattice points of one polygon inside the 2^k cell around its middle.
void BM_LatticeEnumeration(benchmark::State& state) {
  const auto set = procedure1(pairs_for("hunter2", 1, 3)[0]);
  const auto& poly = set.polygons.front();
  const auto& v = poly.vertices();
  const Point mid{(v.front().x + v[v.size() / 2].x) / 2, (v.front().y + v[v.size() / 2].y) / 2};
  const int m = static_cast<int>(state.range(0));
  const DyadicCell cell{static_cast<std::uint64_t>(mid.x.floor() >> m),
                        static_cast<std::uint64_t>(mid.y.floor() >> m), m};
  const ConvexPolygon piece = clip_to_cell(poly, cell);
  std::size_t points = 0;
  for (auto _ : state) {
    points = 0;
    for_each_lattice_point(piece, [&](const LatticePoint&) {
      ++points;
      return true;
    });
    benchmark::DoNotOptimize(points);
  }
  state.counters["points"] = static_cast<double>(points);
}
BENCHMARK(BM_LatticeEnumeration)->Arg(12)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_RunAttack(benchmark::State& state) {
  const auto pairs = pairs_for("hunter2", 10, 4);
  for (auto _ : state) benchmark::DoNotOptimize(run_attack(pairs));
}
BENCHMARK(BM_RunAttack)->Unit(benchmark::kMillisecond)->Iterations(3);

}  // namespace

BENCHMARK_MAIN();
