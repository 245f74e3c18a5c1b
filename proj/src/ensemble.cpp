#include "noesis/ensemble.hpp"

#include <cmath>
#include <cstdio>

#include "json_util.hpp"

namespace noesis {

BeliefState::BeliefState(std::vector<std::string> basis, std::vector<double> amplitudes, bool normalized)
    : basis_(std::move(basis)), amplitudes_(std::move(amplitudes)), normalized_(normalized) {
  if (basis_.size() != amplitudes_.size())
    throw Error(ErrorKind::ValidationError, "basis has " + std::to_string(basis_.size()) + " entries but " +
                                                std::to_string(amplitudes_.size()) + " amplitudes");
  for (double a : amplitudes_)
    if (!(a >= 0.0) || !std::isfinite(a))
      throw Error(ErrorKind::ValidationError, "amplitudes must be finite and non-negative");
  if (normalized_ && std::abs(squared_norm() - 1.0) > kNormTolerance)
    throw Error(ErrorKind::ValidationError, "state flagged normalized has squared norm " +
                                                std::to_string(squared_norm()));
}

double BeliefState::squared_norm() const {
  double s = 0.0;
  for (double a : amplitudes_) s += a * a;
  return s;
}

Observable::Observable(std::vector<AttributeSet> blocks) : blocks_(std::move(blocks)) {
  if (blocks_.empty()) return;
  AttributeSet seen(blocks_.front().size());
  for (const auto& b : blocks_) {
    if (b.size() != seen.size()) throw Error(ErrorKind::ValidationError, "observable blocks differ in width");
    if (b.intersects(seen)) throw Error(ErrorKind::ValidationError, "observable blocks overlap");
    seen |= b;
  }
  if (seen != AttributeSet::full(seen.size()))
    throw Error(ErrorKind::ValidationError, "observable blocks do not cover the basis");
}

Observable Observable::from_dimensions(const FormalContext& ctx) {
  std::vector<AttributeSet> blocks;
  for (std::size_t d = 0; d < ctx.dimensions().size(); ++d) {
    auto [begin, end] = ctx.dimension_range(d);
    AttributeSet b(ctx.attribute_count());
    for (std::size_t i = begin; i < end; ++i) b.set(i);
    blocks.push_back(std::move(b));
  }
  return Observable(std::move(blocks));
}

std::vector<int> ProjectionVector::flat() const {
  std::vector<int> out;
  for (const auto& d : dimensions) out.insert(out.end(), d.coordinates.begin(), d.coordinates.end());
  return out;
}

BeliefState uniform_prior(std::vector<std::string> basis) {
  if (basis.empty()) throw Error(ErrorKind::EmptyBasis, "a belief state needs at least one basis attribute");
  const double a = 1.0 / std::sqrt(static_cast<double>(basis.size()));
  std::vector<double> amps(basis.size(), a);
  return BeliefState(std::move(basis), std::move(amps), true);
}

BeliefState uniform_prior(const FormalContext& ctx) { return uniform_prior(ctx.attributes()); }

BeliefState object_state(const FormalContext& ctx, std::string_view object, const BeliefState& prior) {
  const std::size_t g = ctx.object_index(object);
  if (prior.basis() != ctx.attributes())
    throw Error(ErrorKind::BasisMismatch, "prior basis differs from the context's attributes");
  const AttributeSet& row = ctx.row(g);
  const std::size_t k = row.count();
  if (k == 0) throw Error(ErrorKind::NoAttributes, "object '" + std::string(object) + "' owns no attributes");
  const double scale = 1.0 / std::sqrt(static_cast<double>(k));
  std::vector<double> amps(ctx.attribute_count(), 0.0);
  row.for_each([&](std::size_t m) { amps[m] = prior.amplitude(m) * scale; });
  return BeliefState(prior.basis(), std::move(amps), false);
}

BeliefState normalize(const BeliefState& state) {
  const double n2 = state.squared_norm();
  if (n2 == 0.0) throw Error(ErrorKind::ZeroState, "cannot normalize the zero vector");
  if (state.normalized()) return state;
  const double inv = 1.0 / std::sqrt(n2);
  std::vector<double> amps = state.amplitudes();
  for (double& a : amps) a *= inv;
  return BeliefState(state.basis(), std::move(amps), true);
}

double inner_product(const BeliefState& a, const BeliefState& b) {
  if (a.basis() != b.basis()) throw Error(ErrorKind::BasisMismatch, "inner product of states over different bases");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a.amplitude(i) * b.amplitude(i);
  return s;
}

Measurement measure(const BeliefState& state, const AttributeSet& subspace) {
  if (subspace.size() != state.size())
    throw Error(ErrorKind::ShapeMismatch, "subspace width differs from the basis size");
  const double total = state.squared_norm();
  if (total == 0.0) throw Error(ErrorKind::ZeroState, "cannot measure the zero vector");
  double inside = 0.0;
  subspace.for_each([&](std::size_t i) { inside += state.amplitude(i) * state.amplitude(i); });
  if (inside == 0.0) throw Error(ErrorKind::ZeroProbability, "measurement outcome has probability zero");

  const double inv = 1.0 / std::sqrt(inside);
  std::vector<double> amps(state.size(), 0.0);
  subspace.for_each([&](std::size_t i) { amps[i] = state.amplitude(i) * inv; });
  return {inside / total, BeliefState(state.basis(), std::move(amps), true)};
}

Measurement measure(const BeliefState& state, const FormalContext& ctx, std::span<const std::string> subspace) {
  if (state.basis() != ctx.attributes())
    throw Error(ErrorKind::BasisMismatch, "state basis differs from the context's attributes");
  return measure(state, ctx.attribute_set(subspace));
}

std::vector<double> block_probabilities(const BeliefState& state, const Observable& obs) {
  const double total = state.squared_norm();
  if (total == 0.0) throw Error(ErrorKind::ZeroState, "cannot measure the zero vector");
  std::vector<double> out;
  for (const auto& block : obs.blocks()) {
    if (block.size() != state.size()) throw Error(ErrorKind::ShapeMismatch, "observable width differs from basis");
    double p = 0.0;
    block.for_each([&](std::size_t i) { p += state.amplitude(i) * state.amplitude(i); });
    out.push_back(p / total);
  }
  return out;
}

BeliefState reinforce_from_support(const FormalContext& ctx) {
  std::vector<std::size_t> support(ctx.attribute_count());
  std::size_t total = 0;
  for (std::size_t m = 0; m < ctx.attribute_count(); ++m) {
    support[m] = ctx.column(m).count();
    total += support[m];
  }
  if (total == 0) throw Error(ErrorKind::EmptyContext, "context has no incidence pairs");
  std::vector<double> amps(ctx.attribute_count());
  for (std::size_t m = 0; m < amps.size(); ++m)
    amps[m] = std::sqrt(static_cast<double>(support[m]) / static_cast<double>(total));
  return BeliefState(ctx.attributes(), std::move(amps), true);
}

ProjectionVector project_vector(const FormalContext& ctx, std::string_view object) {
  const std::size_t g = ctx.object_index(object);
  ProjectionVector out{std::string(object), {}};
  for (std::size_t d = 0; d < ctx.dimensions().size(); ++d) {
    auto [begin, end] = ctx.dimension_range(d);
    DimensionProjection p{ctx.dimensions()[d].name, ctx.dimensions()[d].attributes, {}};
    for (std::size_t m = begin; m < end; ++m) p.coordinates.push_back(ctx.incident(g, m) ? 1 : 0);
    out.dimensions.push_back(std::move(p));
  }
  return out;
}

std::string ensemble_json(const BeliefState& state) {
  std::string out = "{\"amplitudes\":[";
  char buf[40];
  for (std::size_t i = 0; i < state.size(); ++i) {
    if (i) out += ',';
    std::snprintf(buf, sizeof buf, "%.17g", state.amplitude(i));
    out += buf;
  }
  out += "],\"basis\":";
  out += detail::names_json(state.basis()).dump();
  out += ",\"normalized\":";
  out += state.normalized() ? "true" : "false";
  out += "}\n";
  return out;
}

}  // namespace noesis
