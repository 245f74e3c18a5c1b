#pragma once

// Fixtures, random generators and brute-force oracles shared by the test
// binaries. The oracles work on plain bool matrices and never call the
// library's derivation or enumeration code.

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "noesis/context.hpp"
#include "noesis/lattice.hpp"

#ifndef NOESIS_DATA_DIR
#error "NOESIS_DATA_DIR must point at the fixture directory"
#endif

namespace noesis::testing {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::string data_path(const std::string& name) { return std::string(NOESIS_DATA_DIR) + "/" + name; }
inline std::string fixture(const std::string& name) { return read_file(data_path(name)); }

inline FormalContext digits() { return parse_context(fixture("digits_context.json"), ContextFormat::Json); }
inline FormalContext digit_attributes() {
  return parse_context(fixture("digits_attributes.json"), ContextFormat::Json);
}

inline std::vector<std::string> names(std::initializer_list<const char*> xs) { return {xs.begin(), xs.end()}; }

// Random context with up to max_objects x max_attributes cells, split into
// one to three dimensions.
inline FormalContext random_context(std::mt19937_64& rng, std::size_t max_objects = 12,
                                    std::size_t max_attributes = 10) {
  std::uniform_int_distribution<std::size_t> on(0, max_objects), an(1, max_attributes);
  const std::size_t n = on(rng), m = an(rng);
  std::uniform_real_distribution<double> density_dist(0.15, 0.85);
  std::bernoulli_distribution cell(density_dist(rng));

  std::vector<QualityDimension> dims;
  std::size_t dim_count = std::min<std::size_t>(m, std::uniform_int_distribution<std::size_t>(1, 3)(rng));
  for (std::size_t d = 0; d < dim_count; ++d) dims.push_back({"d" + std::to_string(d), {}});
  for (std::size_t j = 0; j < m; ++j) dims[j < dim_count ? j : rng() % dim_count].attributes.push_back("a" + std::to_string(j));

  std::vector<std::string> objects;
  Incidence inc(n, std::vector<bool>(m));
  for (std::size_t i = 0; i < n; ++i) {
    objects.push_back("g" + std::to_string(i));
    for (std::size_t j = 0; j < m; ++j) inc[i][j] = cell(rng);
  }
  // Column order in `inc` follows attribute names a0..a{m-1}; remap to the
  // dimension-concatenated order.
  std::vector<std::size_t> order;
  for (const auto& d : dims)
    for (const auto& a : d.attributes) order.push_back(std::stoul(a.substr(1)));
  Incidence permuted(n, std::vector<bool>(m));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j) permuted[i][j] = inc[i][order[j]];
  return FormalContext::create(objects, dims, permuted);
}

// ---------------------------------------------------------------------------
// Oracles

struct Table {
  std::size_t n = 0, m = 0;
  std::vector<std::vector<bool>> cell;
};

inline Table table_of(const FormalContext& ctx) {
  Table t{ctx.object_count(), ctx.attribute_count(), {}};
  t.cell.assign(t.n, std::vector<bool>(t.m));
  for (std::size_t i = 0; i < t.n; ++i)
    for (std::size_t j = 0; j < t.m; ++j) t.cell[i][j] = ctx.incident(i, j);
  return t;
}

using Mask = std::uint64_t;

inline Mask oracle_extent(const Table& t, Mask attrs) {
  Mask out = 0;
  for (std::size_t i = 0; i < t.n; ++i) {
    bool all = true;
    for (std::size_t j = 0; j < t.m; ++j)
      if ((attrs >> j & 1) && !t.cell[i][j]) all = false;
    if (all) out |= Mask{1} << i;
  }
  return out;
}

inline Mask oracle_intent(const Table& t, Mask objs) {
  Mask out = 0;
  for (std::size_t j = 0; j < t.m; ++j) {
    bool all = true;
    for (std::size_t i = 0; i < t.n; ++i)
      if ((objs >> i & 1) && !t.cell[i][j]) all = false;
    if (all) out |= Mask{1} << j;
  }
  return out;
}

// Every (extent, intent) pair, found by closing all 2^m attribute subsets.
inline std::set<std::pair<Mask, Mask>> powerset_concepts(const Table& t) {
  std::set<std::pair<Mask, Mask>> out;
  for (Mask a = 0; a < (Mask{1} << t.m); ++a) {
    Mask e = oracle_extent(t, a);
    if (oracle_intent(t, e) == a) out.emplace(e, a);
  }
  return out;
}

template <typename Tag>
Mask mask_of(const IndexSet<Tag>& s) {
  Mask out = 0;
  s.for_each([&](std::size_t i) { out |= Mask{1} << i; });
  return out;
}

inline std::set<std::pair<Mask, Mask>> concept_masks(const ConceptLattice& lat) {
  std::set<std::pair<Mask, Mask>> out;
  for (const auto& c : lat.concepts()) out.emplace(mask_of(c.extent), mask_of(c.intent));
  return out;
}

// Covering pairs (lower, upper) from pairwise extent inclusion.
inline std::set<std::pair<std::size_t, std::size_t>> covering_oracle(const std::vector<Mask>& extents) {
  auto below = [&](std::size_t a, std::size_t b) {
    return a != b && (extents[a] & ~extents[b]) == 0 && extents[a] != extents[b];
  };
  std::set<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t a = 0; a < extents.size(); ++a)
    for (std::size_t b = 0; b < extents.size(); ++b) {
      if (!below(a, b)) continue;
      bool between = false;
      for (std::size_t k = 0; k < extents.size() && !between; ++k) between = below(a, k) && below(k, b);
      if (!between) out.emplace(a, b);
    }
  return out;
}

// Literal scan: does every object owning `premise` own all of `conclusion`?
inline bool oracle_implication(const Table& t, Mask premise, Mask conclusion) {
  for (std::size_t i = 0; i < t.n; ++i) {
    bool has_premise = true, has_conclusion = true;
    for (std::size_t j = 0; j < t.m; ++j) {
      if ((premise >> j & 1) && !t.cell[i][j]) has_premise = false;
      if ((conclusion >> j & 1) && !t.cell[i][j]) has_conclusion = false;
    }
    if (has_premise && !has_conclusion) return false;
  }
  return true;
}

template <typename Tag>
IndexSet<Tag> set_of(std::size_t size, Mask mask) {
  IndexSet<Tag> s(size);
  for (std::size_t i = 0; i < size; ++i)
    if (mask >> i & 1) s.set(i);
  return s;
}

inline Mask random_mask(std::mt19937_64& rng, std::size_t width) {
  if (width == 0) return 0;
  return rng() & ((Mask{1} << width) - 1);
}

}  // namespace noesis::testing

#ifdef DOCTEST_LIBRARY_INCLUDED
#define CHECK_THROWS_KIND(expr, expected_kind)                                   \
  do {                                                                           \
    try {                                                                        \
      (void)(expr);                                                              \
      FAIL_CHECK("expected " << noesis::to_string(expected_kind) << ", no throw"); \
    } catch (const noesis::Error& e_) {                                          \
      CHECK_MESSAGE(e_.kind() == (expected_kind), std::string(e_.what()));               \
    }                                                                            \
  } while (0)
#endif
