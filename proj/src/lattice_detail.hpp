#pragma once

#include <unordered_map>
#include <vector>

#include "noesis/lattice.hpp"

namespace noesis::detail {

using IntentIndex = std::unordered_map<AttributeSet, std::size_t, IndexSetHash>;

IntentIndex intent_index(const std::vector<Concept>& concepts);

// Upper covers of concept `i`, ascending by index.
std::vector<std::size_t> upper_covers(const FormalContext& ctx, const std::vector<Concept>& concepts,
                                      const IntentIndex& index, std::size_t i);

}  // namespace noesis::detail
