#include "noesis/context.hpp"

#include <algorithm>
#include <unordered_set>

namespace noesis {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DuplicateName: return "DuplicateName";
    case ErrorKind::ShapeMismatch: return "ShapeMismatch";
    case ErrorKind::UnknownObject: return "UnknownObject";
    case ErrorKind::UnknownAttribute: return "UnknownAttribute";
    case ErrorKind::GranuleRegression: return "GranuleRegression";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::ValidationError: return "ValidationError";
    case ErrorKind::CxtLossy: return "CxtLossy";
    case ErrorKind::MissingTruth: return "MissingTruth";
    case ErrorKind::DuplicateInstance: return "DuplicateInstance";
    case ErrorKind::EmptyBasis: return "EmptyBasis";
    case ErrorKind::NoAttributes: return "NoAttributes";
    case ErrorKind::ZeroState: return "ZeroState";
    case ErrorKind::BasisMismatch: return "BasisMismatch";
    case ErrorKind::ZeroProbability: return "ZeroProbability";
    case ErrorKind::EmptyContext: return "EmptyContext";
    case ErrorKind::ProtocolViolation: return "ProtocolViolation";
    case ErrorKind::OracleUnavailable: return "OracleUnavailable";
    case ErrorKind::NotACounterexample: return "NotACounterexample";
    case ErrorKind::UnknownGranule: return "UnknownGranule";
  }
  return "Error";
}

FormalContext FormalContext::create(std::vector<std::string> objects, std::vector<QualityDimension> dimensions,
                                    const Incidence& incidence, const std::optional<GranuleMap>& granules) {
  FormalContext ctx;

  std::unordered_set<std::string> dimension_names;
  for (const auto& d : dimensions) {
    if (!dimension_names.insert(d.name).second)
      throw Error(ErrorKind::DuplicateName, "dimension '" + d.name + "' declared twice");
    if (d.attributes.empty())
      throw Error(ErrorKind::ValidationError, "dimension '" + d.name + "' has no attributes");
    for (const auto& a : d.attributes) {
      if (!ctx.attribute_lookup_.emplace(a, ctx.attributes_.size()).second)
        throw Error(ErrorKind::DuplicateName, "attribute '" + a + "' declared twice");
      ctx.attributes_.push_back(a);
    }
  }
  for (std::size_t i = 0; i < objects.size(); ++i)
    if (!ctx.object_lookup_.emplace(objects[i], i).second)
      throw Error(ErrorKind::DuplicateName, "object '" + objects[i] + "' declared twice");

  const std::size_t n = objects.size(), m = ctx.attributes_.size();
  if (incidence.size() != n)
    throw Error(ErrorKind::ShapeMismatch,
                "expected " + std::to_string(n) + " incidence rows, got " + std::to_string(incidence.size()));
  for (std::size_t i = 0; i < n; ++i)
    if (incidence[i].size() != m)
      throw Error(ErrorKind::ShapeMismatch, "row " + std::to_string(i) + ": expected " + std::to_string(m) +
                                                " columns, got " + std::to_string(incidence[i].size()));

  ctx.granules_.assign(n, Granule{0});
  if (granules) {
    for (const auto& [name, g] : *granules) {
      auto it = ctx.object_lookup_.find(name);
      if (it == ctx.object_lookup_.end())
        throw Error(ErrorKind::ValidationError, "granule given for unknown object '" + name + "'");
      ctx.granules_[it->second] = g;
    }
    if (granules->size() != n)
      throw Error(ErrorKind::ValidationError, "granule map covers " + std::to_string(granules->size()) + " of " +
                                                  std::to_string(n) + " objects");
  }

  ctx.objects_ = std::move(objects);
  ctx.dimensions_ = std::move(dimensions);
  ctx.rows_.assign(n, AttributeSet(m));
  ctx.columns_.assign(m, ObjectSet(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j)
      if (incidence[i][j]) {
        ctx.rows_[i].set(j);
        ctx.columns_[j].set(i);
      }
  return ctx;
}

FormalContext FormalContext::attributes_only(std::vector<QualityDimension> dimensions) {
  return create({}, std::move(dimensions), {});
}

FormalContext FormalContext::with_object(const std::string& name, const AttributeSet& intent, Granule granule) const {
  if (find_object(name)) throw Error(ErrorKind::DuplicateName, "object '" + name + "' already present");
  if (intent.size() != attribute_count())
    throw Error(ErrorKind::ShapeMismatch, "intent width " + std::to_string(intent.size()) + " != " +
                                              std::to_string(attribute_count()));
  if (!objects_.empty() && granule < max_granule())
    throw Error(ErrorKind::GranuleRegression, "granule " + std::to_string(granule.index) + " precedes " +
                                                  std::to_string(max_granule().index));

  FormalContext out = *this;
  const std::size_t idx = objects_.size();
  out.objects_.push_back(name);
  out.object_lookup_.emplace(name, idx);
  out.rows_.push_back(intent);
  out.granules_.push_back(granule);
  for (auto& col : out.columns_) col = col.widened(idx + 1);
  intent.for_each([&](std::size_t a) { out.columns_[a].set(idx); });
  return out;
}

FormalContext FormalContext::with_object(const std::string& name, std::span<const std::string> intent,
                                         Granule granule) const {
  return with_object(name, attribute_set(intent), granule);
}

FormalContext FormalContext::restricted_to(Granule g) const {
  std::vector<std::string> names;
  Incidence inc;
  GranuleMap gm;
  for (std::size_t i = 0; i < objects_.size(); ++i) {
    if (granules_[i] > g) continue;
    names.push_back(objects_[i]);
    std::vector<bool> r(attribute_count());
    for (std::size_t j = 0; j < r.size(); ++j) r[j] = rows_[i].test(j);
    inc.push_back(std::move(r));
    gm.emplace(objects_[i], granules_[i]);
  }
  return create(std::move(names), dimensions_, inc, gm);
}

std::optional<std::size_t> FormalContext::find_object(std::string_view name) const {
  auto it = object_lookup_.find(std::string(name));
  if (it == object_lookup_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::size_t> FormalContext::find_attribute(std::string_view name) const {
  auto it = attribute_lookup_.find(std::string(name));
  if (it == attribute_lookup_.end()) return std::nullopt;
  return it->second;
}

std::size_t FormalContext::object_index(std::string_view name) const {
  if (auto i = find_object(name)) return *i;
  throw Error(ErrorKind::UnknownObject, "no object named '" + std::string(name) + "'");
}

std::size_t FormalContext::attribute_index(std::string_view name) const {
  if (auto i = find_attribute(name)) return *i;
  throw Error(ErrorKind::UnknownAttribute, "no attribute named '" + std::string(name) + "'");
}

ObjectSet FormalContext::object_set(std::span<const std::string> names) const {
  ObjectSet s(object_count());
  for (const auto& n : names) s.set(object_index(n));
  return s;
}

AttributeSet FormalContext::attribute_set(std::span<const std::string> names) const {
  AttributeSet s(attribute_count());
  for (const auto& n : names) s.set(attribute_index(n));
  return s;
}

ObjectSet FormalContext::object_set(std::initializer_list<std::string_view> names) const {
  ObjectSet s(object_count());
  for (auto n : names) s.set(object_index(n));
  return s;
}

AttributeSet FormalContext::attribute_set(std::initializer_list<std::string_view> names) const {
  AttributeSet s(attribute_count());
  for (auto n : names) s.set(attribute_index(n));
  return s;
}

std::vector<std::string> FormalContext::object_names(const ObjectSet& s) const {
  std::vector<std::string> out;
  s.for_each([&](std::size_t i) { out.push_back(objects_[i]); });
  return out;
}

std::vector<std::string> FormalContext::attribute_names(const AttributeSet& s) const {
  std::vector<std::string> out;
  s.for_each([&](std::size_t i) { out.push_back(attributes_[i]); });
  return out;
}

Granule FormalContext::max_granule() const {
  Granule g{0};
  for (auto x : granules_) g = std::max(g, x);
  return g;
}

bool FormalContext::all_granules_zero() const {
  return std::all_of(granules_.begin(), granules_.end(), [](Granule g) { return g.index == 0; });
}

std::pair<std::size_t, std::size_t> FormalContext::dimension_range(std::size_t dimension) const {
  std::size_t begin = 0;
  for (std::size_t d = 0; d < dimension; ++d) begin += dimensions_.at(d).attributes.size();
  return {begin, begin + dimensions_.at(dimension).attributes.size()};
}

}  // namespace noesis
