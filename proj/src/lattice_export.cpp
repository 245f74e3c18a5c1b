#include <sstream>

#include "json_util.hpp"
#include "noesis/lattice.hpp"

namespace noesis {

namespace {

std::string dot_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

std::string joined(const std::vector<std::string>& names) {
  std::string out;
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (i) out += ", ";
    out += dot_escape(names[i]);
  }
  return out;
}

}  // namespace

std::string export_dot(const ConceptLattice& lat, LabelMode mode) {
  const FormalContext& ctx = lat.context();
  std::vector<std::vector<std::string>> own_attributes(lat.size()), own_objects(lat.size());
  if (mode == LabelMode::Reduced) {
    // Attribute m labels the concept with intent {m}''; object g the one with intent {g}'.
    for (std::size_t m = 0; m < ctx.attribute_count(); ++m) {
      AttributeSet single = ctx.no_attributes();
      single.set(m);
      own_attributes[*lat.find(closure(ctx, single))].push_back(ctx.attribute_name(m));
    }
    for (std::size_t g = 0; g < ctx.object_count(); ++g)
      own_objects[*lat.find(ctx.row(g))].push_back(ctx.object_name(g));
  }

  std::ostringstream out;
  out << "digraph lattice {\n";
  out << "  node [shape=box, fontname=\"Helvetica\"];\n";
  for (std::size_t i = 0; i < lat.size(); ++i) {
    std::string attrs, objs;
    if (mode == LabelMode::Full) {
      attrs = "{" + joined(ctx.attribute_names(lat[i].intent)) + "}";
      objs = "{" + joined(ctx.object_names(lat[i].extent)) + "}";
    } else {
      attrs = joined(own_attributes[i]);
      objs = joined(own_objects[i]);
    }
    out << "  c" << i << " [label=\"" << attrs << "\\n" << objs << "\"];\n";
  }
  out << "  { rank=source; c" << lat.top() << "; }\n";
  for (const auto& [lower, upper] : lat.hasse()) out << "  c" << upper << " -> c" << lower << ";\n";
  out << "}\n";
  return out.str();
}

std::string lattice_json(const ConceptLattice& lat) {
  using detail::json;
  const FormalContext& ctx = lat.context();
  json concepts = json::array();
  for (const auto& c : lat.concepts())
    concepts.push_back(json{{"extent", detail::names_json(ctx.object_names(c.extent))},
                            {"intent", detail::names_json(ctx.attribute_names(c.intent))}});
  json hasse = json::array();
  for (const auto& [lower, upper] : lat.hasse()) hasse.push_back(json::array({lower, upper}));
  json doc = json::object();
  doc["concepts"] = std::move(concepts);
  doc["hasse"] = std::move(hasse);
  return doc.dump() + "\n";
}

}  // namespace noesis
