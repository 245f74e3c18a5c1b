#include "json_util.hpp"
#include "noesis/session.hpp"

namespace noesis {

using detail::json;
using ordered = nlohmann::ordered_json;

namespace {

ordered names(const FormalContext& basis, const AttributeSet& s) {
  ordered a = ordered::array();
  for (const auto& n : basis.attribute_names(s)) a.push_back(n);
  return a;
}

ordered cue_json(const FormalContext& basis, const SupportingCue& cue) {
  ordered o = ordered::object();
  o["name"] = cue.name;
  o["intent"] = names(basis, cue.intent);
  return o;
}

ordered implication_json(const FormalContext& basis, const Implication& imp) {
  ordered o = ordered::object();
  o["premise"] = names(basis, imp.premise);
  o["conclusion"] = names(basis, imp.conclusion);
  return o;
}

AttributeSet attribute_list(const FormalContext& basis, const json& v, const char* what) {
  auto list = detail::as_string_list(v, what);
  return basis.attribute_set(list);
}

SupportingCue parse_cue(const FormalContext& basis, const json& v) {
  return {detail::as_string(detail::member(v, "name"), "object name"),
          attribute_list(basis, detail::member(v, "intent"), "intent")};
}

}  // namespace

std::vector<CueNames> parse_script(std::string_view bytes) {
  json doc = detail::parse_json(bytes);
  if (!doc.is_array()) detail::schema_error("script must be an array of implications");
  std::vector<CueNames> out;
  for (const auto& item : doc)
    out.push_back({detail::as_string_list(detail::member(item, "premise"), "premise"),
                   detail::as_string_list(detail::member(item, "conclusion"), "conclusion")});
  return out;
}

std::vector<Implication> resolve_script(const FormalContext& basis, std::span<const CueNames> cues) {
  std::vector<Implication> out;
  for (const auto& c : cues) out.push_back(Implication::from_names(basis, c.premise, c.conclusion));
  return out;
}

std::string script_json(const FormalContext& basis, std::span<const Implication> cues) {
  ordered doc = ordered::array();
  for (const auto& c : cues) doc.push_back(implication_json(basis, c));
  return doc.dump() + "\n";
}

std::string trace_event_json(const FormalContext& basis, const TraceEvent& ev) {
  ordered o = ordered::object();
  o["granule"] = ev.granule.index;
  o["learning_cue"] = ev.learning_cue ? cue_json(basis, *ev.learning_cue) : ordered(nullptr);
  o["measurement_cue"] = ev.measurement_cue ? implication_json(basis, *ev.measurement_cue) : ordered(nullptr);
  if (ev.local_verdict) {
    ordered v = ordered::object();
    v["kind"] = std::string(to_string(ev.local_verdict->kind));
    if (ev.local_verdict->counterexample) v["counterexample"] = *ev.local_verdict->counterexample;
    o["local_verdict"] = std::move(v);
  } else {
    o["local_verdict"] = nullptr;
  }
  if (!ev.oracle_answer) {
    o["oracle_answer"] = nullptr;
  } else if (ev.oracle_answer->accepted()) {
    o["oracle_answer"] = "accept";
  } else {
    ordered a = ordered::object();
    a["counterexample"] = cue_json(basis, *ev.oracle_answer->counterexample);
    o["oracle_answer"] = std::move(a);
  }
  o["resulting_phase"] = std::string(to_string(ev.resulting_phase));
  return o.dump();
}

std::string trace_jsonl(const FormalContext& basis, std::span<const TraceEvent> events) {
  std::string out;
  for (const auto& ev : events) out += trace_event_json(basis, ev) + "\n";
  return out;
}

std::vector<TraceEvent> parse_trace(const FormalContext& basis, std::string_view jsonl) {
  std::vector<TraceEvent> out;
  std::size_t pos = 0, line = 0;
  while (pos < jsonl.size()) {
    std::size_t end = jsonl.find('\n', pos);
    if (end == std::string_view::npos) end = jsonl.size();
    std::string_view text = jsonl.substr(pos, end - pos);
    pos = end + 1;
    ++line;
    if (text.empty()) continue;
    try {
      json o = detail::parse_json(text);
      TraceEvent ev;
      ev.granule = Granule{detail::as_count(detail::member(o, "granule"), "granule")};
      if (const json& l = detail::member(o, "learning_cue"); !l.is_null()) ev.learning_cue = parse_cue(basis, l);
      if (const json& m = detail::member(o, "measurement_cue"); !m.is_null())
        ev.measurement_cue = Implication::make(attribute_list(basis, detail::member(m, "premise"), "premise"),
                                               attribute_list(basis, detail::member(m, "conclusion"), "conclusion"));
      if (const json& v = detail::member(o, "local_verdict"); !v.is_null()) {
        auto kind = detail::as_string(detail::member(v, "kind"), "verdict kind");
        Verdict verdict;
        if (kind == "holds") verdict.kind = VerdictKind::Holds;
        else if (kind == "vacuous") verdict.kind = VerdictKind::Vacuous;
        else if (kind == "fails") {
          verdict.kind = VerdictKind::Fails;
          verdict.counterexample = detail::as_string(detail::member(v, "counterexample"), "counterexample");
        } else {
          detail::schema_error("unknown verdict kind '" + kind + "'");
        }
        ev.local_verdict = std::move(verdict);
      }
      if (const json& a = detail::member(o, "oracle_answer"); !a.is_null()) {
        if (a == "accept") ev.oracle_answer = OracleAnswer::accept();
        else ev.oracle_answer = OracleAnswer::refute(parse_cue(basis, detail::member(a, "counterexample")));
      }
      auto phase = phase_from_string(detail::as_string(detail::member(o, "resulting_phase"), "resulting_phase"));
      if (!phase) detail::schema_error("unknown phase");
      ev.resulting_phase = *phase;
      out.push_back(std::move(ev));
    } catch (const ParseError& e) {
      throw ParseError(e.what(), line);
    }
  }
  return out;
}

}  // namespace noesis
