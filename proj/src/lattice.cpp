#include "noesis/lattice.hpp"

#include "lattice_detail.hpp"

#include <algorithm>
#include <unordered_set>

namespace noesis {

AttributeSet derive_intent(const FormalContext& ctx, const ObjectSet& objects) {
  AttributeSet out = ctx.all_attributes();
  objects.for_each([&](std::size_t g) { out &= ctx.row(g); });
  return out;
}

ObjectSet derive_extent(const FormalContext& ctx, const AttributeSet& attributes) {
  ObjectSet out = ctx.all_objects();
  attributes.for_each([&](std::size_t m) { out &= ctx.column(m); });
  return out;
}

AttributeSet closure(const FormalContext& ctx, const AttributeSet& attributes) {
  return derive_intent(ctx, derive_extent(ctx, attributes));
}

std::vector<std::string> derive_intent(const FormalContext& ctx, std::span<const std::string> objects) {
  return ctx.attribute_names(derive_intent(ctx, ctx.object_set(objects)));
}

std::vector<std::string> derive_extent(const FormalContext& ctx, std::span<const std::string> attributes) {
  return ctx.object_names(derive_extent(ctx, ctx.attribute_set(attributes)));
}

std::vector<std::string> closure(const FormalContext& ctx, std::span<const std::string> attributes) {
  return ctx.attribute_names(closure(ctx, ctx.attribute_set(attributes)));
}

bool canonical_less(const Concept& a, const Concept& b) {
  auto ca = a.intent.count(), cb = b.intent.count();
  if (ca != cb) return ca < cb;
  return lexicographic(a.intent, b.intent) < 0;
}

ConceptLattice ConceptLattice::assemble(FormalContext ctx, std::vector<Concept> concepts, bool parallel) {
  ConceptLattice lat(std::move(ctx));
  std::sort(concepts.begin(), concepts.end(), canonical_less);
  lat.concepts_ = std::move(concepts);
  lat.by_intent_.reserve(lat.concepts_.size());
  for (std::size_t i = 0; i < lat.concepts_.size(); ++i) lat.by_intent_.emplace(lat.concepts_[i].intent, i);
  lat.hasse_ = parallel ? covering_edges_parallel(lat.context_, lat.concepts_)
                        : covering_edges_serial(lat.context_, lat.concepts_);
  return lat;
}

std::optional<std::size_t> ConceptLattice::find(const AttributeSet& intent) const {
  auto it = by_intent_.find(intent);
  if (it == by_intent_.end()) return std::nullopt;
  return it->second;
}

std::vector<Concept> concepts_next_closure(const FormalContext& ctx) {
  std::vector<Concept> out;
  auto close = [&](const AttributeSet& a) { return closure(ctx, a); };
  std::optional<AttributeSet> intent = close(ctx.no_attributes());
  while (intent) {
    out.push_back({derive_extent(ctx, *intent), *intent});
    intent = next_closed(*intent, close);
  }
  return out;
}

namespace detail {

// The inclusion-minimal extents among (X + g)'' for g outside X.
std::vector<std::size_t> upper_covers(const FormalContext& ctx, const std::vector<Concept>& concepts,
                                      const IntentIndex& index, std::size_t i) {
  const Concept& c = concepts[i];
  std::vector<std::size_t> candidates;
  ObjectSet outside = c.extent.complement();
  outside.for_each([&](std::size_t g) {
    AttributeSet intent = c.intent & ctx.row(g);
    std::size_t k = index.at(intent);
    if (std::find(candidates.begin(), candidates.end(), k) == candidates.end()) candidates.push_back(k);
  });
  std::vector<std::size_t> covers;
  for (std::size_t a : candidates) {
    bool minimal = true;
    for (std::size_t b : candidates)
      if (a != b && concepts[b].extent.is_subset_of(concepts[a].extent)) {
        minimal = false;
        break;
      }
    if (minimal) covers.push_back(a);
  }
  std::sort(covers.begin(), covers.end());
  return covers;
}

IntentIndex intent_index(const std::vector<Concept>& concepts) {
  IntentIndex index;
  index.reserve(concepts.size());
  for (std::size_t i = 0; i < concepts.size(); ++i) index.emplace(concepts[i].intent, i);
  return index;
}

}  // namespace detail

std::vector<HasseEdge> covering_edges_serial(const FormalContext& ctx, const std::vector<Concept>& concepts) {
  auto index = detail::intent_index(concepts);
  std::vector<HasseEdge> edges;
  for (std::size_t i = 0; i < concepts.size(); ++i)
    for (std::size_t up : detail::upper_covers(ctx, concepts, index, i)) edges.emplace_back(i, up);
  return edges;
}

ConceptLattice enumerate_concepts_serial(const FormalContext& ctx) {
  return ConceptLattice::assemble(ctx, concepts_next_closure(ctx), false);
}

ConceptLattice enumerate_concepts(const FormalContext& ctx) {
  return ConceptLattice::assemble(ctx, concepts_cbo_parallel(ctx), true);
}

ConceptLattice insert_object(const ConceptLattice& lat, const std::string& name, const AttributeSet& intent,
                             Granule granule) {
  FormalContext ctx = lat.context().with_object(name, intent, granule);
  const std::size_t g = ctx.object_count() - 1;

  // New intents are the old ones plus their intersections with the new row.
  std::vector<Concept> concepts;
  concepts.reserve(lat.size() * 2);
  std::unordered_set<AttributeSet, IndexSetHash> seen;
  for (const auto& c : lat.concepts()) {
    Concept updated{c.extent.widened(ctx.object_count()), c.intent};
    if (c.intent.is_subset_of(intent)) updated.extent.set(g);
    seen.insert(c.intent);
    concepts.push_back(std::move(updated));
  }
  for (const auto& c : lat.concepts()) {
    AttributeSet met = c.intent & intent;
    if (seen.insert(met).second) concepts.push_back({derive_extent(ctx, met), met});
  }
  return ConceptLattice::assemble(std::move(ctx), std::move(concepts));
}

ConceptLattice insert_object(const ConceptLattice& lat, const std::string& name, std::span<const std::string> intent,
                             Granule granule) {
  return insert_object(lat, name, lat.context().attribute_set(intent), granule);
}

Implication Implication::make(AttributeSet premise, AttributeSet conclusion) {
  if (premise.size() != conclusion.size())
    throw Error(ErrorKind::ShapeMismatch, "premise and conclusion range over different bases");
  if (conclusion.none()) throw Error(ErrorKind::ValidationError, "implication conclusion is empty");
  return {std::move(premise), std::move(conclusion)};
}

Implication Implication::from_names(const FormalContext& ctx, std::span<const std::string> premise,
                                    std::span<const std::string> conclusion) {
  return make(ctx.attribute_set(premise), ctx.attribute_set(conclusion));
}

std::string_view to_string(VerdictKind kind) {
  switch (kind) {
    case VerdictKind::Holds: return "holds";
    case VerdictKind::Vacuous: return "vacuous";
    case VerdictKind::Fails: return "fails";
  }
  return "?";
}

Verdict holds(const FormalContext& ctx, const Implication& imp) {
  if (imp.premise.size() != ctx.attribute_count() || imp.conclusion.size() != ctx.attribute_count())
    throw Error(ErrorKind::BasisMismatch, "implication does not range over this context's attributes");
  ObjectSet extent = derive_extent(ctx, imp.premise);
  if (extent.none()) return {VerdictKind::Vacuous, std::nullopt};
  for (std::size_t g = extent.first(); g != ObjectSet::npos; g = extent.next(g + 1))
    if (!imp.conclusion.is_subset_of(ctx.row(g))) return {VerdictKind::Fails, ctx.object_name(g)};
  return {VerdictKind::Holds, std::nullopt};
}

AttributeSet implication_closure(const AttributeSet& attributes, std::span<const Implication> implications) {
  AttributeSet out = attributes;
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& imp : implications)
      if (imp.premise.is_subset_of(out) && !imp.conclusion.is_subset_of(out)) {
        out |= imp.conclusion;
        changed = true;
      }
  }
  return out;
}

}  // namespace noesis
