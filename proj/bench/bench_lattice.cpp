// Serial reference kernels against their OpenMP counterparts.

#include <benchmark/benchmark.h>

#include <algorithm>
#include <map>
#include <random>

#include "noesis/lattice.hpp"

using namespace noesis;

namespace {

FormalContext random_context(std::size_t objects, std::size_t attributes, double density, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution cell(density);
  QualityDimension dim{"d", {}};
  for (std::size_t j = 0; j < attributes; ++j) dim.attributes.push_back("m" + std::to_string(j));
  std::vector<std::string> names;
  Incidence inc(objects, std::vector<bool>(attributes));
  for (std::size_t i = 0; i < objects; ++i) {
    names.push_back("g" + std::to_string(i));
    for (std::size_t j = 0; j < attributes; ++j) inc[i][j] = cell(rng);
  }
  return FormalContext::create(names, {dim}, inc);
}

const FormalContext& context_for(const benchmark::State& state) {
  static std::map<std::pair<std::int64_t, std::int64_t>, FormalContext> cache;
  auto key = std::pair{state.range(0), state.range(1)};
  auto it = cache.find(key);
  if (it == cache.end())
    it = cache.emplace(key, random_context(key.first, key.second, 0.3, 42)).first;
  return it->second;
}

void enumerate_serial(benchmark::State& state) {
  const auto& ctx = context_for(state);
  std::size_t n = 0;
  for (auto _ : state) {
    auto concepts = concepts_next_closure(ctx);
    n = concepts.size();
    benchmark::DoNotOptimize(concepts);
  }
  state.counters["concepts"] = static_cast<double>(n);
}

void enumerate_parallel(benchmark::State& state) {
  const auto& ctx = context_for(state);
  std::size_t n = 0;
  for (auto _ : state) {
    auto concepts = concepts_cbo_parallel(ctx);
    n = concepts.size();
    benchmark::DoNotOptimize(concepts);
  }
  state.counters["concepts"] = static_cast<double>(n);
}

std::vector<Concept> sorted_concepts(const FormalContext& ctx) {
  auto concepts = concepts_cbo_parallel(ctx);
  std::sort(concepts.begin(), concepts.end(), canonical_less);
  return concepts;
}

void hasse_serial(benchmark::State& state) {
  const auto& ctx = context_for(state);
  auto concepts = sorted_concepts(ctx);
  for (auto _ : state) benchmark::DoNotOptimize(covering_edges_serial(ctx, concepts));
}

void hasse_parallel(benchmark::State& state) {
  const auto& ctx = context_for(state);
  auto concepts = sorted_concepts(ctx);
  for (auto _ : state) benchmark::DoNotOptimize(covering_edges_parallel(ctx, concepts));
}

void sizes(benchmark::internal::Benchmark* b) {
  b->Args({50, 16})->Args({200, 24})->Args({500, 32})->Unit(benchmark::kMillisecond)->UseRealTime();
}

}  // namespace

BENCHMARK(enumerate_serial)->Apply(sizes);
BENCHMARK(enumerate_parallel)->Apply(sizes);
BENCHMARK(hasse_serial)->Apply(sizes);
BENCHMARK(hasse_parallel)->Apply(sizes);

BENCHMARK_MAIN();
