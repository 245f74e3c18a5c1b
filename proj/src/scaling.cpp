#include "noesis/scaling.hpp"

#include <set>
#include <unordered_map>

#include "json_util.hpp"

namespace noesis {

ScaleReport validate_scenario(const Scenario& s) {
  ScaleReport report;
  report.perspectives = s.perspectives.size();
  auto warn = [&](ErrorKind k, std::string msg) { report.warnings.push_back({k, std::move(msg)}); };

  std::set<std::string> propositions, dimension_names;
  for (const auto& p : s.perspectives) {
    if (!dimension_names.insert(p.name).second) warn(ErrorKind::DuplicateName, "perspective '" + p.name + "' repeated");
    if (p.propositions.empty()) warn(ErrorKind::ValidationError, "perspective '" + p.name + "' has no propositions");
    for (const auto& prop : p.propositions) {
      ++report.propositions;
      if (!propositions.insert(prop).second)
        warn(ErrorKind::DuplicateName, "proposition '" + prop + "' appears more than once");
    }
  }

  std::set<std::string> seen;
  Granule last{0};
  for (std::size_t t = 0; t < s.timeline.size(); ++t) {
    const auto& e = s.timeline[t];
    if (!seen.insert(e.instance).second) {
      warn(ErrorKind::DuplicateInstance,
           "instance '" + e.instance + "' appears again at granule " + std::to_string(e.granule.index));
      continue;
    }
    if (t > 0 && e.granule < last)
      warn(ErrorKind::GranuleRegression, "instance '" + e.instance + "' at granule " +
                                             std::to_string(e.granule.index) + " follows granule " +
                                             std::to_string(last.index));
    last = std::max(last, e.granule);
    for (const auto& p : s.perspectives)
      for (const auto& prop : p.propositions)
        if (!e.truth.contains(prop))
          warn(ErrorKind::MissingTruth, "instance '" + e.instance + "' has no truth value for '" + prop + "'");
    for (const auto& [prop, value] : e.truth)
      if (!propositions.contains(prop))
        warn(ErrorKind::ValidationError, "instance '" + e.instance + "' mentions undeclared proposition '" + prop + "'");
  }
  report.instances = seen.size();
  return report;
}

std::pair<FormalContext, ScaleReport> scale_scenario(const Scenario& s) {
  ScaleReport report = validate_scenario(s);
  if (!report.ok()) throw Error(report.warnings.front().kind, report.warnings.front().message);

  std::vector<std::string> instances;
  GranuleMap granules;
  for (const auto& e : s.timeline) {
    instances.push_back(e.instance);
    granules.emplace(e.instance, e.granule);
  }

  std::size_t width = 0;
  for (const auto& p : s.perspectives) width += p.propositions.size();
  Incidence inc(instances.size(), std::vector<bool>(width));

  std::vector<QualityDimension> dims;
  std::size_t column = 0;
  for (const auto& p : s.perspectives) {
    dims.push_back({p.name, p.propositions});
    for (const auto& prop : p.propositions) {
      for (std::size_t row = 0; row < s.timeline.size(); ++row) inc[row][column] = s.timeline[row].truth.at(prop);
      ++column;
    }
  }
  return {FormalContext::create(std::move(instances), std::move(dims), inc, granules), std::move(report)};
}

Scenario parse_scenario(std::string_view bytes) {
  using detail::json;
  json doc = detail::parse_json(bytes);
  Scenario s;
  const json& jp = detail::member(doc, "perspectives");
  if (!jp.is_array()) detail::schema_error("'perspectives' must be an array");
  for (const auto& p : jp)
    s.perspectives.push_back({detail::as_string(detail::member(p, "name"), "perspective name"),
                              detail::as_string_list(detail::member(p, "propositions"), "propositions")});
  const json& jt = detail::member(doc, "timeline");
  if (!jt.is_array()) detail::schema_error("'timeline' must be an array");
  for (const auto& e : jt) {
    TimelineEntry entry;
    entry.granule = Granule{detail::as_count(detail::member(e, "granule"), "granule")};
    entry.instance = detail::as_string(detail::member(e, "instance"), "instance");
    const json& truth = detail::member(e, "truth");
    if (!truth.is_object()) detail::schema_error("'truth' must be an object");
    for (const auto& [prop, v] : truth.items()) {
      if (!v.is_boolean()) detail::schema_error("truth values must be booleans");
      entry.truth.emplace(prop, v.get<bool>());
    }
    s.timeline.push_back(std::move(entry));
  }
  return s;
}

}  // namespace noesis
