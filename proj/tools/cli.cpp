#include "cli.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "noesis/ensemble.hpp"
#include "noesis/lattice.hpp"
#include "noesis/scaling.hpp"
#include "noesis/service.hpp"
#include "noesis/session.hpp"

namespace noesis::cli {

namespace {

// Failure that maps straight to an exit code.
struct Exit {
  int code;
  std::string message;
};

std::string read_input(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Exit{kParse, "cannot read " + path};
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out || !(out << text) || !out.flush()) throw Exit{kIoFailure, "cannot write " + path.string()};
}

int code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ParseError: return kParse;
    case ErrorKind::ProtocolViolation:
    case ErrorKind::NotACounterexample:
    case ErrorKind::OracleUnavailable: return kProtocol;
    default: return kValidation;
  }
}

FormalContext load_context(const std::string& path) {
  return parse_context(read_input(path), format_for_path(path));
}

std::string braces(const std::vector<std::string>& names) {
  std::string out = "{";
  for (std::size_t i = 0; i < names.size(); ++i) out += (i ? ", " : "") + names[i];
  return out + "}";
}

std::string show(const FormalContext& ctx, const Implication& imp) {
  return braces(ctx.attribute_names(imp.premise)) + " -> " + braces(ctx.attribute_names(imp.conclusion));
}

std::string trim(std::string_view s) {
  const char* ws = " \t\r\n";
  auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(ws);
  return std::string(s.substr(b, e - b + 1));
}

// "A, B" or "{A, B}"; blank items are dropped.
std::vector<std::string> attribute_list(std::string_view text) {
  std::string t = trim(text);
  if (t.size() >= 2 && t.front() == '{' && t.back() == '}') t = t.substr(1, t.size() - 2);
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos <= t.size()) {
    auto comma = t.find(',', pos);
    if (comma == std::string::npos) comma = t.size();
    if (auto item = trim(std::string_view(t).substr(pos, comma - pos)); !item.empty()) out.push_back(item);
    pos = comma + 1;
  }
  return out;
}

// ---------------------------------------------------------------------------

int cmd_scale(const std::string& scenario_path, const std::string& output, std::ostream& out, std::ostream& err) {
  Scenario scenario = parse_scenario(read_input(scenario_path));
  ScaleReport report = validate_scenario(scenario);
  if (!report.ok()) {
    for (const auto& w : report.warnings) err << to_string(w.kind) << ": " << w.message << "\n";
    return kValidation;
  }
  auto [ctx, final_report] = scale_scenario(scenario);
  if (output.empty()) {
    out << serialize_context(ctx, ContextFormat::Json);
    return kOk;
  }
  write_output(output, serialize_context(ctx, format_for_path(output)));
  out << "scaled " << final_report.instances << " instances over " << final_report.perspectives
      << " perspectives (" << final_report.propositions << " propositions) into " << output << "\n";
  return kOk;
}

int cmd_lattice(const std::string& context_path, const std::string& dot, const std::string& json_path,
                const std::string& labels, std::ostream& out) {
  ConceptLattice lat = enumerate_concepts(load_context(context_path));
  if (!dot.empty()) write_output(dot, export_dot(lat, labels == "full" ? LabelMode::Full : LabelMode::Reduced));
  if (!json_path.empty()) write_output(json_path, lattice_json(lat));
  out << lat.size() << " concepts\n";
  return kOk;
}

int cmd_replay(const std::string& reference_path, const std::string& script_path, const std::string& initial_path,
               const std::string& trace_path, const std::string& snapshot_dir, std::ostream& out) {
  FormalContext reference = load_context(reference_path);
  auto cue_names = parse_script(read_input(script_path));
  std::optional<FormalContext> initial;
  if (!initial_path.empty()) initial = load_context(initial_path);

  std::vector<Implication> script;
  try {
    script = resolve_script(reference, cue_names);
  } catch (const Error& e) {
    throw Exit{kProtocol, std::string("script: ") + e.what()};
  }

  ReplayResult result = replay(reference, script, initial);
  const FormalContext& basis = result.session.initial_context();
  std::string trace = trace_jsonl(basis, result.trace());

  if (!snapshot_dir.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(snapshot_dir, ec);
    if (ec) throw Exit{kIoFailure, "cannot create " + snapshot_dir};
    for (const auto& snap : result.snapshots) {
      char stem[32];
      std::snprintf(stem, sizeof stem, "granule-%03llu", static_cast<unsigned long long>(snap.granule.index));
      std::filesystem::path dir(snapshot_dir);
      write_output(dir / (std::string(stem) + ".lattice.json"), lattice_json(snap.lattice));
      write_output(dir / (std::string(stem) + ".ensemble.json"), ensemble_json(snap.belief));
    }
  }

  if (trace_path.empty()) {
    out << trace;
  } else {
    write_output(trace_path, trace);
    const Session& s = result.session;
    out << script.size() << " cues, " << s.context().object_count() - basis.object_count()
        << " objects added, final granule " << s.granule().index << ", " << s.lattice().size() << " concepts\n";
  }
  return kOk;
}

// Terminal session with the person at the keyboard as oracle.
class Explorer {
 public:
  Explorer(Session session, std::istream& in, std::ostream& out, bool color)
      : s_(std::move(session)), in_(in), out_(out), color_(color) {}

  void run() {
    const FormalContext& ctx = s_.context();
    out_ << "noesis explore: " << ctx.attribute_count() << " attributes in " << ctx.dimensions().size()
         << " dimension(s), " << ctx.object_count() << " objects\n";
    help();
    while (s_.phase() != Phase::Terminal) {
      status();
      std::string line;
      out_ << "> " << std::flush;
      if (!std::getline(in_, line)) break;
      line = trim(line);
      if (line.empty()) continue;
      auto space = line.find(' ');
      std::string cmd = line.substr(0, space), rest = space == std::string::npos ? "" : line.substr(space + 1);
      if (cmd == "quit" || cmd == "q") break;
      if (cmd == "help") help();
      else if (cmd == "show") show_context();
      else if (cmd == "ask") ask(rest);
      else out_ << "unknown command '" << cmd << "'; try help\n";
    }
    if (s_.phase() != Phase::Terminal) s_.give_up();
    out_ << "session ended at granule " << s_.granule().index << " with " << s_.context().object_count()
         << " objects and " << s_.lattice().size() << " concepts\n";
  }

  const Session& session() const { return s_; }

 private:
  void help() {
    out_ << "commands:\n"
            "  ask [PREMISE -> CONCLUSION]  pose a cue (the suggestion when blank)\n"
            "  show                         list the objects learned so far\n"
            "  quit                         end the session\n"
            "answers to a cue:\n"
            "  yes | no NAME: ATTR, ATTR... | quit\n";
  }

  std::string paint(std::string_view text) const {
    if (!color_) return std::string(text);
    return "\x1b[1;36m" + std::string(text) + "\x1b[0m";
  }

  void status() {
    out_ << "[granule " << s_.granule().index << ", " << paint(to_string(s_.phase())) << "]";
    if (auto cue = s_.suggest_cue()) out_ << " suggest: " << show(s_.context(), *cue);
    out_ << "\n";
  }

  void show_context() {
    const FormalContext& ctx = s_.context();
    if (ctx.object_count() == 0) out_ << "(no objects)\n";
    for (std::size_t g = 0; g < ctx.object_count(); ++g)
      out_ << "  " << ctx.object_name(g) << " @" << ctx.granule(g).index << ": "
           << braces(ctx.attribute_names(ctx.row(g))) << "\n";
  }

  void ask(const std::string& text) {
    std::optional<Implication> imp;
    try {
      if (trim(text).empty()) {
        imp = s_.suggest_cue();
        if (!imp) {
          out_ << "nothing left to suggest\n";
          return;
        }
      } else {
        auto arrow = text.find("->");
        if (arrow == std::string::npos) {
          out_ << "write the cue as PREMISE -> CONCLUSION\n";
          return;
        }
        imp = Implication::from_names(s_.context(), attribute_list(text.substr(0, arrow)),
                                      attribute_list(text.substr(arrow + 2)));
      }
    } catch (const Error& e) {
      out_ << "error: " << e.what() << "\n";
      return;
    }

    const FormalContext& ctx = s_.context();
    const Verdict local = s_.local_verdict(*imp);
    if (!local.satisfied()) {
      s_.pose_cue(*imp);
      out_ << show(ctx, *imp) << " is refuted by " << *local.counterexample << "\n";
      return;
    }
    out_ << show(ctx, *imp) << " " << (local.kind == VerdictKind::Vacuous ? "holds vacuously" : "holds")
         << " so far. Is it true?\n";
    while (true) {
      std::string line;
      out_ << "? " << std::flush;
      if (!std::getline(in_, line)) {
        s_.give_up();
        return;
      }
      line = trim(line);
      if (line == "quit" || line == "q") {
        s_.give_up();
        return;
      }
      if (line == "yes" || line == "y") {
        s_.pose_cue(*imp, OracleAnswer::accept());
        out_ << "accepted\n";
        return;
      }
      if (line.rfind("no ", 0) == 0 && line.find(':') != std::string::npos) {
        auto colon = line.find(':');
        std::string name = trim(std::string_view(line).substr(3, colon - 3));
        try {
          SupportingCue cue{name, s_.context().attribute_set(attribute_list(line.substr(colon + 1)))};
          s_.pose_cue(*imp, OracleAnswer::refute(cue));
          s_.resolve(cue);
          out_ << "learned " << name << " at granule " << s_.granule().index << "\n";
          return;
        } catch (const Error& e) {
          out_ << "error: " << e.what() << "\n";
          continue;
        }
      }
      out_ << "answer yes, no NAME: ATTR, ATTR..., or quit\n";
    }
  }

  Session s_;
  std::istream& in_;
  std::ostream& out_;
  bool color_;
};

int cmd_explore(const std::string& context_path, const std::string& trace_path, const std::string& output,
                std::istream& in, std::ostream& out, bool color) {
  Explorer ex(Session::start(load_context(context_path), InteractiveOracle{}), in, out, color);
  ex.run();
  const Session& s = ex.session();
  if (!trace_path.empty()) write_output(trace_path, trace_jsonl(s.initial_context(), s.trace()));
  if (!output.empty()) write_output(output, serialize_context(s.context(), format_for_path(output)));
  return kOk;
}

int cmd_serve(std::string addr, const std::string& trace_dir, std::ostream& out, std::ostream& err) {
  if (addr.empty()) {
    const char* env = std::getenv("NOESIS_ADDR");
    addr = env && *env ? env : "127.0.0.1:8080";
  }
  auto [host, port] = parse_address(addr);
  ServiceOptions options;
  if (!trace_dir.empty()) options.trace_dir = trace_dir;
  Service service(options);
  if (!service.bind(host, port)) {
    err << "error: cannot bind " << host << ":" << port << "\n";
    return kIoFailure;
  }
  out << "listening on http://" << host << ":" << service.port() << "/v1" << std::endl;
  return service.listen() ? kOk : kIoFailure;
}

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err, bool color) {
  CLI::App app{"Formal concept lattices, belief ensembles and cue-driven learning sessions", "noesis"};
  app.require_subcommand(1);

  std::string scenario, output, context, dot, json_out, labels = "reduced", reference, script, initial, trace,
                                                         snapshots, addr, trace_dir;

  auto* scale = app.add_subcommand("scale", "Scale a scenario into a formal context");
  scale->add_option("scenario", scenario, "Scenario JSON file")->required();
  scale->add_option("-o,--output", output, "Write the context here (.json or .cxt) instead of stdout");

  auto* lattice = app.add_subcommand("lattice", "Enumerate the concept lattice of a context");
  lattice->add_option("context", context, "Context file (.json or .cxt)")->required();
  lattice->add_option("--dot", dot, "Write the Hasse diagram as Graphviz DOT");
  lattice->add_option("--json", json_out, "Write concepts and covering pairs as JSON");
  lattice->add_option("--labels", labels, "DOT node labels")->check(CLI::IsMember({"reduced", "full"}));

  auto* rep = app.add_subcommand("replay", "Replay a cue script against a reference context");
  rep->add_option("--reference", reference, "Reference context answering the cues")->required();
  rep->add_option("--script", script, "Cue script JSON")->required();
  rep->add_option("--initial", initial, "Starting context (default: reference attributes, no objects)");
  rep->add_option("--trace", trace, "Write the trace (JSON Lines) here instead of stdout");
  rep->add_option("--snapshots", snapshots, "Directory for per-granule lattice and ensemble JSON");

  auto* explore = app.add_subcommand("explore", "Interactive session with you as the oracle");
  explore->add_option("--context", context, "Starting context")->required();
  explore->add_option("--trace", trace, "Write the session trace here on exit");
  explore->add_option("-o,--output", output, "Write the final context here on exit");

  auto* serve = app.add_subcommand("serve", "Run the HTTP service");
  serve->add_option("--addr", addr, "host:port to listen on (default $NOESIS_ADDR or 127.0.0.1:8080)");
  serve->add_option("--trace-dir", trace_dir, "Persist session contexts and traces here");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kParse;
  }

  try {
    if (*scale) return cmd_scale(scenario, output, out, err);
    if (*lattice) return cmd_lattice(context, dot, json_out, labels, out);
    if (*rep) return cmd_replay(reference, script, initial, trace, snapshots, out);
    if (*explore) return cmd_explore(context, trace, output, in, out, color);
    if (*serve) return cmd_serve(addr, trace_dir, out, err);
  } catch (const Exit& e) {
    err << "error: " << e.message << "\n";
    return e.code;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return code_for(e.kind());
  }
  return kParse;
}

}  // namespace noesis::cli
