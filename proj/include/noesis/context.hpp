#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "noesis/bitset.hpp"
#include "noesis/error.hpp"

namespace noesis {

// Discrete step of a learning trace.
struct Granule {
  std::uint64_t index = 0;

  constexpr Granule() = default;
  constexpr explicit Granule(std::uint64_t i) : index(i) {}
  constexpr Granule next() const { return Granule{index + 1}; }
  friend constexpr auto operator<=>(Granule, Granule) = default;
};

// A named group of attributes; one orthogonal block of the attribute basis.
struct QualityDimension {
  std::string name;
  std::vector<std::string> attributes;

  friend bool operator==(const QualityDimension&, const QualityDimension&) = default;
};

using Incidence = std::vector<std::vector<bool>>;
using GranuleMap = std::map<std::string, Granule>;

// Formal context (G, M, I) whose attributes are grouped by quality dimension
// and whose objects carry the granule at which they were introduced.
//
// Values are immutable once built. The global attribute order is the
// concatenation of the dimension attribute lists.
class FormalContext {
 public:
  // Validating constructor. Throws DuplicateName, ShapeMismatch,
  // ValidationError (empty dimension, unknown granule key).
  static FormalContext create(std::vector<std::string> objects,
                              std::vector<QualityDimension> dimensions,
                              const Incidence& incidence,
                              const std::optional<GranuleMap>& granules = std::nullopt);

  // Same dimensions, no objects.
  static FormalContext attributes_only(std::vector<QualityDimension> dimensions);

  // Returns a new context with one more object. Throws DuplicateName,
  // UnknownAttribute, GranuleRegression.
  FormalContext with_object(const std::string& name, const AttributeSet& intent, Granule granule) const;
  FormalContext with_object(const std::string& name, std::span<const std::string> intent,
                            Granule granule) const;

  // Objects born at or before `g`, in declaration order.
  FormalContext restricted_to(Granule g) const;

  std::size_t object_count() const { return objects_.size(); }
  std::size_t attribute_count() const { return attributes_.size(); }

  const std::vector<std::string>& objects() const { return objects_; }
  const std::vector<std::string>& attributes() const { return attributes_; }
  const std::vector<QualityDimension>& dimensions() const { return dimensions_; }

  const std::string& object_name(std::size_t i) const { return objects_.at(i); }
  const std::string& attribute_name(std::size_t i) const { return attributes_.at(i); }

  std::optional<std::size_t> find_object(std::string_view name) const;
  std::optional<std::size_t> find_attribute(std::string_view name) const;
  std::size_t object_index(std::string_view name) const;      // throws UnknownObject
  std::size_t attribute_index(std::string_view name) const;   // throws UnknownAttribute

  ObjectSet object_set(std::span<const std::string> names) const;
  AttributeSet attribute_set(std::span<const std::string> names) const;
  ObjectSet object_set(std::initializer_list<std::string_view> names) const;
  AttributeSet attribute_set(std::initializer_list<std::string_view> names) const;

  std::vector<std::string> object_names(const ObjectSet& s) const;
  std::vector<std::string> attribute_names(const AttributeSet& s) const;

  ObjectSet all_objects() const { return ObjectSet::full(object_count()); }
  AttributeSet all_attributes() const { return AttributeSet::full(attribute_count()); }
  ObjectSet no_objects() const { return ObjectSet(object_count()); }
  AttributeSet no_attributes() const { return AttributeSet(attribute_count()); }

  bool incident(std::size_t object, std::size_t attribute) const { return rows_[object].test(attribute); }
  const AttributeSet& row(std::size_t object) const { return rows_[object]; }
  const ObjectSet& column(std::size_t attribute) const { return columns_[attribute]; }

  Granule granule(std::size_t object) const { return granules_[object]; }
  Granule max_granule() const;
  bool all_granules_zero() const;

  // Index range [begin, end) of a dimension's attributes in the global order.
  std::pair<std::size_t, std::size_t> dimension_range(std::size_t dimension) const;

  // Same object names, attribute structure, incidence and granules.
  friend bool operator==(const FormalContext& a, const FormalContext& b) {
    return a.objects_ == b.objects_ && a.dimensions_ == b.dimensions_ && a.rows_ == b.rows_ &&
           a.granules_ == b.granules_;
  }

  // Same dimensions in the same order.
  bool same_basis(const FormalContext& other) const { return dimensions_ == other.dimensions_; }

 private:
  FormalContext() = default;

  std::vector<std::string> objects_;
  std::vector<QualityDimension> dimensions_;
  std::vector<std::string> attributes_;
  std::vector<AttributeSet> rows_;
  std::vector<ObjectSet> columns_;
  std::vector<Granule> granules_;
  std::unordered_map<std::string, std::size_t> object_lookup_;
  std::unordered_map<std::string, std::size_t> attribute_lookup_;
};

inline FormalContext new_context(std::vector<std::string> objects, std::vector<QualityDimension> dimensions,
                                 const Incidence& incidence,
                                 const std::optional<GranuleMap>& granules = std::nullopt) {
  return FormalContext::create(std::move(objects), std::move(dimensions), incidence, granules);
}

inline FormalContext add_object(const FormalContext& ctx, const std::string& name,
                                std::span<const std::string> intent, Granule granule) {
  return ctx.with_object(name, intent, granule);
}

// ---------------------------------------------------------------------------
// On-disk formats

enum class ContextFormat { Json, Cxt };

// Picks Cxt for a ".cxt" extension, Json otherwise.
ContextFormat format_for_path(std::string_view path);

// CXT input carries no dimension names; its attributes land in one dimension
// called `cxt_dimension`.
FormalContext parse_context(std::string_view bytes, ContextFormat format,
                            std::string_view cxt_dimension = "attributes");

// Canonical output. Cxt throws CxtLossy for multi-dimension or time-stamped
// contexts; use serialize_cxt_flattened to export those anyway.
std::string serialize_context(const FormalContext& ctx, ContextFormat format);
std::string serialize_cxt_flattened(const FormalContext& ctx, std::vector<std::string>& warnings);

// Helpers shared by the JSON-facing modules.
std::size_t line_of_offset(std::string_view text, std::size_t offset);

}  // namespace noesis
