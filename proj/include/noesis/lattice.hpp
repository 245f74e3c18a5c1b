#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "noesis/bitset.hpp"
#include "noesis/context.hpp"

namespace noesis {

// ---------------------------------------------------------------------------
// Derivation operators

// Attributes shared by every object of `objects`; all of M for the empty set.
AttributeSet derive_intent(const FormalContext& ctx, const ObjectSet& objects);
// Objects owning every attribute of `attributes`; all of G for the empty set.
ObjectSet derive_extent(const FormalContext& ctx, const AttributeSet& attributes);
// Smallest closed attribute set containing `attributes`.
AttributeSet closure(const FormalContext& ctx, const AttributeSet& attributes);

// Name-based forms; throw UnknownObject / UnknownAttribute.
std::vector<std::string> derive_intent(const FormalContext& ctx, std::span<const std::string> objects);
std::vector<std::string> derive_extent(const FormalContext& ctx, std::span<const std::string> attributes);
std::vector<std::string> closure(const FormalContext& ctx, std::span<const std::string> attributes);

// Next set after `current` in lectic order that is closed under `close`, or
// nullopt when `current` is the last one.
template <typename Close>
std::optional<AttributeSet> next_closed(const AttributeSet& current, Close&& close) {
  AttributeSet prefix = current;
  for (std::size_t i = current.size(); i-- > 0;) {
    if (prefix.test(i)) {
      prefix.reset(i);
      continue;
    }
    AttributeSet candidate = prefix;
    candidate.set(i);
    candidate = close(candidate);
    if (candidate.equal_below(prefix, i)) return candidate;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Concepts and lattices

struct Concept {
  ObjectSet extent;
  AttributeSet intent;

  friend bool operator==(const Concept&, const Concept&) = default;
};

// (lower, upper): the lower concept has the smaller extent.
using HasseEdge = std::pair<std::size_t, std::size_t>;

// Canonical concept order: intent size, then lexicographic intent.
bool canonical_less(const Concept& a, const Concept& b);

class ConceptLattice {
 public:
  // Sorts `concepts` canonically and computes the covering relation.
  // `concepts` must be exactly the formal concepts of `ctx`.
  static ConceptLattice assemble(FormalContext ctx, std::vector<Concept> concepts, bool parallel = true);

  const FormalContext& context() const { return context_; }
  const std::vector<Concept>& concepts() const { return concepts_; }
  const std::vector<HasseEdge>& hasse() const { return hasse_; }
  std::size_t size() const { return concepts_.size(); }
  const Concept& operator[](std::size_t i) const { return concepts_[i]; }

  // Index of the concept with the given intent, if that intent is closed.
  std::optional<std::size_t> find(const AttributeSet& intent) const;

  std::size_t top() const { return 0; }
  std::size_t bottom() const { return concepts_.size() - 1; }

 private:
  ConceptLattice(FormalContext ctx) : context_(std::move(ctx)) {}

  FormalContext context_;
  std::vector<Concept> concepts_;
  std::vector<HasseEdge> hasse_;
  std::unordered_map<AttributeSet, std::size_t, IndexSetHash> by_intent_;
};

// Concept enumeration. The default entry point runs the OpenMP Close-by-One
// kernel; the serial NextClosure kernel is the reference it is tested against.
ConceptLattice enumerate_concepts(const FormalContext& ctx);
ConceptLattice enumerate_concepts_serial(const FormalContext& ctx);

// Unsorted concept lists straight from the kernels.
std::vector<Concept> concepts_next_closure(const FormalContext& ctx);
std::vector<Concept> concepts_cbo_parallel(const FormalContext& ctx);

// Covering pairs for concepts already in canonical order.
std::vector<HasseEdge> covering_edges_serial(const FormalContext& ctx, const std::vector<Concept>& concepts);
std::vector<HasseEdge> covering_edges_parallel(const FormalContext& ctx, const std::vector<Concept>& concepts);

// Lattice of the context extended by one object, built from the existing
// intents rather than from scratch. Errors as FormalContext::with_object.
ConceptLattice insert_object(const ConceptLattice& lat, const std::string& name, const AttributeSet& intent,
                             Granule granule);
ConceptLattice insert_object(const ConceptLattice& lat, const std::string& name,
                             std::span<const std::string> intent, Granule granule);

inline const std::vector<HasseEdge>& hasse_edges(const ConceptLattice& lat) { return lat.hasse(); }

// ---------------------------------------------------------------------------
// Implications

struct Implication {
  AttributeSet premise;
  AttributeSet conclusion;

  // Throws UnknownAttribute, or ValidationError for an empty conclusion.
  static Implication from_names(const FormalContext& ctx, std::span<const std::string> premise,
                                std::span<const std::string> conclusion);
  static Implication make(AttributeSet premise, AttributeSet conclusion);

  friend bool operator==(const Implication&, const Implication&) = default;
};

enum class VerdictKind { Holds, Vacuous, Fails };

std::string_view to_string(VerdictKind kind);

struct Verdict {
  VerdictKind kind = VerdictKind::Holds;
  std::optional<std::string> counterexample;  // present iff kind == Fails

  bool satisfied() const { return kind != VerdictKind::Fails; }
  friend bool operator==(const Verdict&, const Verdict&) = default;
};

// Vacuous when no object has the premise; otherwise holds iff the conclusion
// lies in the closure of the premise. A failure names the first violating
// object in declaration order.
Verdict holds(const FormalContext& ctx, const Implication& imp);

// Closure of `attributes` under a set of implications.
AttributeSet implication_closure(const AttributeSet& attributes, std::span<const Implication> implications);

// ---------------------------------------------------------------------------
// Exports

enum class LabelMode { Full, Reduced };

std::string export_dot(const ConceptLattice& lat, LabelMode mode = LabelMode::Reduced);
// {"concepts":[{"extent":[...],"intent":[...]}],"hasse":[[i,j]]}, newline-terminated.
std::string lattice_json(const ConceptLattice& lat);

}  // namespace noesis
