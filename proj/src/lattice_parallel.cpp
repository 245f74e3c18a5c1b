// OpenMP kernels for concept enumeration and the covering relation.
// Results are sorted or concatenated in a fixed order, so the output does
// not depend on the thread count.

#include <omp.h>

#include "lattice_detail.hpp"

namespace noesis {

namespace {

// Close-by-One: children of `parent` are generated by adding attributes at or
// after `from`; a child is kept only if its closure adds nothing below the
// attribute that produced it.
void cbo_descend(const FormalContext& ctx, const Concept& parent, std::size_t from, std::vector<Concept>& out) {
  for (std::size_t j = from; j < ctx.attribute_count(); ++j) {
    if (parent.intent.test(j)) continue;
    ObjectSet extent = parent.extent & ctx.column(j);
    AttributeSet intent = derive_intent(ctx, extent);
    if (!intent.equal_below(parent.intent, j)) continue;
    out.push_back({std::move(extent), std::move(intent)});
    Concept child = out.back();
    cbo_descend(ctx, child, j + 1, out);
  }
}

}  // namespace

std::vector<Concept> concepts_cbo_parallel(const FormalContext& ctx) {
  const std::size_t m = ctx.attribute_count();
  Concept top{ctx.all_objects(), closure(ctx, ctx.no_attributes())};

  std::vector<std::vector<Concept>> branches(m);
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t sj = 0; sj < static_cast<std::ptrdiff_t>(m); ++sj) {
    const auto j = static_cast<std::size_t>(sj);
    if (top.intent.test(j)) continue;
    ObjectSet extent = top.extent & ctx.column(j);
    AttributeSet intent = derive_intent(ctx, extent);
    if (!intent.equal_below(top.intent, j)) continue;
    auto& out = branches[j];
    out.push_back({std::move(extent), std::move(intent)});
    Concept child = out.back();
    cbo_descend(ctx, child, j + 1, out);
  }

  std::vector<Concept> all;
  all.push_back(std::move(top));
  for (auto& b : branches)
    for (auto& c : b) all.push_back(std::move(c));
  return all;
}

std::vector<HasseEdge> covering_edges_parallel(const FormalContext& ctx, const std::vector<Concept>& concepts) {
  auto index = detail::intent_index(concepts);
  std::vector<std::vector<std::size_t>> covers(concepts.size());
#pragma omp parallel for schedule(dynamic, 16)
  for (std::ptrdiff_t si = 0; si < static_cast<std::ptrdiff_t>(concepts.size()); ++si) {
    const auto i = static_cast<std::size_t>(si);
    covers[i] = detail::upper_covers(ctx, concepts, index, i);
  }
  std::vector<HasseEdge> edges;
  for (std::size_t i = 0; i < covers.size(); ++i)
    for (std::size_t up : covers[i]) edges.emplace_back(i, up);
  return edges;
}

}  // namespace noesis
