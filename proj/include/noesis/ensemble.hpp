#pragma once

#include <string>
#include <utility>
#include <vector>

#include "noesis/bitset.hpp"
#include "noesis/context.hpp"

namespace noesis {

// Real, non-negative amplitude vector over the attribute basis.
//
// `normalized` is a claim, not a cache: it is true only for states built to
// have unit squared norm (within 1e-12). Object states are deliberately left
// sub-normalized.
class BeliefState {
 public:
  static constexpr double kNormTolerance = 1e-12;

  // Throws ValidationError on size mismatch or a negative amplitude, and if
  // `normalized` is claimed for a vector whose squared norm is off by more
  // than kNormTolerance.
  BeliefState(std::vector<std::string> basis, std::vector<double> amplitudes, bool normalized);

  const std::vector<std::string>& basis() const { return basis_; }
  const std::vector<double>& amplitudes() const { return amplitudes_; }
  double amplitude(std::size_t i) const { return amplitudes_.at(i); }
  std::size_t size() const { return amplitudes_.size(); }
  bool normalized() const { return normalized_; }
  double squared_norm() const;

  friend bool operator==(const BeliefState&, const BeliefState&) = default;

 private:
  std::vector<std::string> basis_;
  std::vector<double> amplitudes_;
  bool normalized_;
};

// Partition of the basis into disjoint blocks.
class Observable {
 public:
  // Throws ValidationError unless the blocks are disjoint and cover the basis.
  explicit Observable(std::vector<AttributeSet> blocks);
  // One block per quality dimension.
  static Observable from_dimensions(const FormalContext& ctx);

  const std::vector<AttributeSet>& blocks() const { return blocks_; }

 private:
  std::vector<AttributeSet> blocks_;
};

// One quality dimension's 0/1 coordinates of an object.
struct DimensionProjection {
  std::string dimension;
  std::vector<std::string> attributes;
  std::vector<int> coordinates;

  friend bool operator==(const DimensionProjection&, const DimensionProjection&) = default;
};

struct ProjectionVector {
  std::string object;
  std::vector<DimensionProjection> dimensions;

  std::vector<int> flat() const;
};

struct Measurement {
  double probability;
  BeliefState collapsed;
};

// Every amplitude 1/sqrt(B). Throws EmptyBasis.
BeliefState uniform_prior(std::vector<std::string> basis);
BeliefState uniform_prior(const FormalContext& ctx);

// Prior amplitude scaled by 1/sqrt(k) on each of the object's k attributes,
// zero elsewhere; for the uniform prior that is 1/sqrt(B*k). The result keeps
// squared norm 1/B and is flagged not normalized.
// Throws UnknownObject, NoAttributes, BasisMismatch.
BeliefState object_state(const FormalContext& ctx, std::string_view object, const BeliefState& prior);

// Throws ZeroState.
BeliefState normalize(const BeliefState& state);

// Throws BasisMismatch.
double inner_product(const BeliefState& a, const BeliefState& b);

// Born rule over the squared norm: probability = |P a|^2 / |a|^2, and the
// collapsed state is P a rescaled to unit norm.
// Throws ZeroState, ZeroProbability, ShapeMismatch.
Measurement measure(const BeliefState& state, const AttributeSet& subspace);
Measurement measure(const BeliefState& state, const FormalContext& ctx, std::span<const std::string> subspace);

// Probability of each block of `obs` for `state`.
std::vector<double> block_probabilities(const BeliefState& state, const Observable& obs);

// Amplitude sqrt(support(b) / total support). Throws EmptyContext.
BeliefState reinforce_from_support(const FormalContext& ctx);

// Throws UnknownObject.
ProjectionVector project_vector(const FormalContext& ctx, std::string_view object);

// {"amplitudes":[...],"basis":[...],"normalized":bool}, 17 significant digits.
std::string ensemble_json(const BeliefState& state);

}  // namespace noesis
