#pragma once

#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "noesis/context.hpp"

namespace noesis {

// One point of view on the scenario; each proposition becomes an attribute.
struct Perspective {
  std::string name;
  std::vector<std::string> propositions;
};

struct TimelineEntry {
  Granule granule;
  std::string instance;
  std::map<std::string, bool> truth;
};

// Raw scenario: perspectives with their categorical propositions, and the
// instances as they appear over time with a truth value per proposition.
struct Scenario {
  std::vector<Perspective> perspectives;
  std::vector<TimelineEntry> timeline;
};

struct ScaleFinding {
  ErrorKind kind;
  std::string message;
};

struct ScaleReport {
  std::size_t instances = 0;
  std::size_t perspectives = 0;
  std::size_t propositions = 0;
  std::vector<ScaleFinding> warnings;

  bool ok() const { return warnings.empty(); }
};

// Collects every problem without building a context.
ScaleReport validate_scenario(const Scenario& s);

// Perspective by perspective, instance by instance: the incidence cell is 1
// iff the proposition is true for the instance. Throws the first finding of
// validate_scenario as an Error (MissingTruth, DuplicateInstance, ...).
std::pair<FormalContext, ScaleReport> scale_scenario(const Scenario& s);

Scenario parse_scenario(std::string_view bytes);

}  // namespace noesis
