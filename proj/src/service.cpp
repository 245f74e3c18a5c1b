#include "noesis/service.hpp"

#include <atomic>
#include <charconv>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <map>
#include <mutex>
#include <shared_mutex>

#include "httplib.h"
#include "json_util.hpp"
#include "noesis/scaling.hpp"
#include "noesis/session.hpp"

namespace noesis {

using detail::json;

std::pair<std::string, int> parse_address(std::string_view address) {
  std::string_view host = "127.0.0.1", port_text = address;
  if (auto colon = address.rfind(':'); colon != std::string_view::npos) {
    if (colon > 0) host = address.substr(0, colon);
    port_text = address.substr(colon + 1);
  }
  int port = -1;
  auto [end, ec] = std::from_chars(port_text.data(), port_text.data() + port_text.size(), port);
  if (ec != std::errc() || end != port_text.data() + port_text.size() || port < 0 || port > 65535)
    throw Error(ErrorKind::ValidationError, "bad address '" + std::string(address) + "', expected host:port");
  return {std::string(host), port};
}

namespace {

// An error that already knows its HTTP status.
struct HttpError {
  int status;
  std::string kind;
  std::string message;
};

int status_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ProtocolViolation:
    case ErrorKind::OracleUnavailable: return 409;
    case ErrorKind::EmptyBasis:
    case ErrorKind::BasisMismatch:
    case ErrorKind::NotACounterexample:
    case ErrorKind::DuplicateName: return 422;
    default: return 400;
  }
}

std::string error_body(std::string_view kind, std::string_view message) {
  return json{{"error", {{"kind", kind}, {"message", message}}}}.dump() + "\n";
}

std::string now_iso8601() {
  std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string etag_of(std::string_view body) {
  std::uint64_t h = 1469598103934665603ull;  // FNV-1a
  for (unsigned char c : body) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[24];
  std::snprintf(buf, sizeof buf, "\"%016llx\"", static_cast<unsigned long long>(h));
  return buf;
}

json names_of(const FormalContext& ctx, const AttributeSet& s) { return detail::names_json(ctx.attribute_names(s)); }

json implication_json(const FormalContext& ctx, const Implication& imp) {
  return {{"premise", names_of(ctx, imp.premise)}, {"conclusion", names_of(ctx, imp.conclusion)}};
}

json cue_json(const FormalContext& ctx, const SupportingCue& cue) {
  return {{"name", cue.name}, {"intent", names_of(ctx, cue.intent)}};
}

FormalContext context_from(const json& v, const char* what) {
  if (!v.is_object()) throw HttpError{400, "ParseError", std::string(what) + " must be a JSON object"};
  return parse_context(v.dump(), ContextFormat::Json);
}

struct Entry {
  Entry(std::string id_, Session s) : id(std::move(id_)), created_at(now_iso8601()), session(std::move(s)) {}

  const std::string id;
  const std::string created_at;
  mutable std::shared_mutex mutex;
  Session session;
  // Interactive cue posed but not yet answered by the person.
  std::optional<Implication> awaiting;
};

std::string phase_label(const Entry& e) {
  return e.awaiting ? "awaiting_oracle" : std::string(to_string(e.session.phase()));
}

json state_json(const Entry& e) {
  const Session& s = e.session;
  const FormalContext& ctx = s.context();
  json pending = nullptr;
  if (s.pending()) {
    pending = implication_json(ctx, *s.pending());
    pending["counterexample"] = s.pending_counterexample() ? cue_json(ctx, *s.pending_counterexample()) : json(nullptr);
  }
  json accepted = json::array();
  for (const auto& imp : s.accepted()) accepted.push_back(implication_json(ctx, imp));
  auto suggestion = e.awaiting ? std::nullopt : s.suggest_cue();
  return {
      {"id", e.id},
      {"created_at", e.created_at},
      {"oracle", is_scripted(s.oracle()) ? "scripted" : "interactive"},
      {"phase", phase_label(e)},
      {"granule", s.granule().index},
      {"objects", detail::names_json(ctx.objects())},
      {"attributes", detail::names_json(ctx.attributes())},
      {"concepts", s.lattice().size()},
      {"pending", pending},
      {"awaiting", e.awaiting ? implication_json(ctx, *e.awaiting) : json(nullptr)},
      {"accepted", accepted},
      {"suggestion", suggestion ? implication_json(ctx, *suggestion) : json(nullptr)},
  };
}

json verdict_json(const Verdict& v, std::string_view by) {
  json out{{"kind", to_string(v.kind)}, {"by", by}};
  if (v.counterexample) out["counterexample"] = *v.counterexample;
  return out;
}

Implication implication_from(const FormalContext& ctx, const json& body) {
  return Implication::from_names(ctx, detail::as_string_list(detail::member(body, "premise"), "premise"),
                                 detail::as_string_list(detail::member(body, "conclusion"), "conclusion"));
}

SupportingCue supporting_cue_from(const FormalContext& ctx, const json& v) {
  auto intent = detail::as_string_list(detail::member(v, "intent"), "intent");
  return {detail::as_string(detail::member(v, "name"), "name"), ctx.attribute_set(intent)};
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
}

}  // namespace

struct Service::Impl {
  ServiceOptions options;
  httplib::Server server;
  int port = -1;

  std::shared_mutex store_mutex;
  std::map<std::string, std::shared_ptr<Entry>> sessions;
  std::atomic<std::uint64_t> next_id{1};

  explicit Impl(ServiceOptions o) : options(std::move(o)) {
    // httplib also sets SO_REUSEPORT, which would let a second server share the port.
    server.set_socket_options([](socket_t sock) {
      int yes = 1;
      setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof yes);
    });
    routes();
  }

  std::shared_ptr<Entry> find(const std::string& id) {
    std::shared_lock lock(store_mutex);
    auto it = sessions.find(id);
    if (it == sessions.end()) throw HttpError{404, "NotFound", "no session '" + id + "'"};
    return it->second;
  }

  std::string new_id() {
    char buf[24];
    std::snprintf(buf, sizeof buf, "s%06llu", static_cast<unsigned long long>(next_id++));
    return buf;
  }

  // Caller holds the entry lock.
  void persist(const Entry& e, bool with_inputs) {
    if (!options.trace_dir) return;
    const auto& dir = *options.trace_dir;
    std::filesystem::create_directories(dir);
    const Session& s = e.session;
    if (with_inputs) {
      write_text(dir / (e.id + ".context.json"), serialize_context(s.initial_context(), ContextFormat::Json));
      if (const auto* o = std::get_if<ScriptedOracle>(&s.oracle()))
        write_text(dir / (e.id + ".reference.json"), serialize_context(o->reference(), ContextFormat::Json));
    }
    write_text(dir / (e.id + ".trace.jsonl"), trace_jsonl(s.initial_context(), s.trace()));
  }

  template <typename F>
  static void guarded(httplib::Response& res, F&& f) {
    try {
      f();
    } catch (const HttpError& e) {
      res.status = e.status;
      res.set_content(error_body(e.kind, e.message), "application/json");
    } catch (const Error& e) {
      res.status = status_for(e.kind());
      res.set_content(error_body(to_string(e.kind()), e.what()), "application/json");
    } catch (const json::exception& e) {
      res.status = 400;
      res.set_content(error_body("ParseError", e.what()), "application/json");
    }
  }

  static void reply(const httplib::Request& req, httplib::Response& res, std::string body,
                    const char* type = "application/json") {
    std::string tag = etag_of(body);
    res.set_header("ETag", tag);
    if (req.get_header_value("If-None-Match") == tag) {
      res.status = 304;
      return;
    }
    res.set_content(std::move(body), type);
  }

  static std::optional<Granule> granule_param(const httplib::Request& req) {
    if (!req.has_param("granule")) return std::nullopt;
    std::string text = req.get_param_value("granule");
    std::uint64_t g = 0;
    auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), g);
    if (ec != std::errc() || end != text.data() + text.size() || text.empty())
      throw HttpError{400, "ParseError", "granule must be a non-negative integer"};
    return Granule{g};
  }

  void create(const httplib::Request& req, httplib::Response& res) {
    json body = detail::parse_json(req.body);
    if (!body.is_object()) throw HttpError{400, "ParseError", "body must be a JSON object"};

    std::string oracle_kind = body.contains("oracle") ? detail::as_string(body["oracle"], "oracle") : "interactive";
    if (oracle_kind != "interactive" && oracle_kind != "scripted")
      throw HttpError{400, "ValidationError", "oracle must be \"interactive\" or \"scripted\""};

    const bool has_context = body.contains("context"), has_scenario = body.contains("scenario");
    if (has_context == has_scenario)
      throw HttpError{400, "ValidationError", "give exactly one of \"context\" or \"scenario\""};
    FormalContext initial = has_context ? context_from(body["context"], "context")
                                        : scale_scenario(parse_scenario(body["scenario"].dump())).first;

    Oracle oracle = InteractiveOracle{};
    if (oracle_kind == "scripted") {
      if (!body.contains("reference"))
        throw HttpError{422, "ValidationError", "a scripted oracle needs a \"reference\" context"};
      oracle = ScriptedOracle(context_from(body["reference"], "reference"));
    }

    std::optional<Session> session;
    if (body.contains("trace")) {
      auto events = parse_trace(initial, detail::as_string(body["trace"], "trace"));
      session.emplace(Session::restore(std::move(initial), std::move(oracle), events));
    } else {
      session.emplace(Session::start(std::move(initial), std::move(oracle)));
    }

    auto entry = std::make_shared<Entry>(new_id(), std::move(*session));
    {
      std::unique_lock lock(store_mutex);
      sessions.emplace(entry->id, entry);
    }
    std::string out;
    {
      std::unique_lock lock(entry->mutex);
      persist(*entry, true);
      out = state_json(*entry).dump() + "\n";
    }
    res.status = 201;
    res.set_header("Location", "/v1/sessions/" + entry->id);
    res.set_content(out, "application/json");
  }

  void cue(Entry& e, const httplib::Request& req, httplib::Response& res) {
    json body = detail::parse_json(req.body);
    std::unique_lock lock(e.mutex);
    Session& s = e.session;
    if (e.awaiting) throw HttpError{409, "ProtocolViolation", "waiting for the oracle's answer to the previous cue"};
    if (s.phase() == Phase::Uncertain || s.phase() == Phase::Terminal)
      throw Error(ErrorKind::ProtocolViolation, s.phase() == Phase::Terminal ? "session has ended"
                                                                              : "a cue is still pending; resolve it first");
    Implication imp = implication_from(s.context(), body);

    json verdict, answer = nullptr;
    const Verdict local = s.local_verdict(imp);
    if (!local.satisfied()) {
      s.pose_cue(imp);
      verdict = verdict_json(local, "context");
    } else if (!is_scripted(s.oracle())) {
      e.awaiting = imp;
      verdict = verdict_json(local, "context");
    } else {
      TraceEvent ev = s.pose_cue(imp);
      if (ev.oracle_answer->accepted()) {
        verdict = verdict_json(local, "oracle");
        answer = "accept";
      } else {
        const auto& cx = *ev.oracle_answer->counterexample;
        verdict = {{"kind", "fails"}, {"by", "oracle"}, {"counterexample", cx.name}};
        answer = {{"counterexample", cue_json(s.context(), cx)}};
      }
    }
    persist(e, false);
    json out = state_json(e);
    out["verdict"] = std::move(verdict);
    out["oracle_answer"] = std::move(answer);
    res.set_content(out.dump() + "\n", "application/json");
  }

  void answer(Entry& e, const httplib::Request& req, httplib::Response& res) {
    json body = detail::parse_json(req.body);
    if (!body.is_object()) throw HttpError{400, "ParseError", "body must be a JSON object"};
    std::unique_lock lock(e.mutex);
    Session& s = e.session;

    if (body.value("give_up", false)) {
      s.give_up();
      e.awaiting.reset();
    } else if (body.value("accept", false)) {
      if (!e.awaiting) throw HttpError{409, "ProtocolViolation", "no cue is waiting for the oracle"};
      s.pose_cue(*e.awaiting, OracleAnswer::accept());
      e.awaiting.reset();
    } else if (body.contains("counterexample")) {
      SupportingCue cue = supporting_cue_from(s.context(), body["counterexample"]);
      if (e.awaiting) {
        s.pose_cue(*e.awaiting, OracleAnswer::refute(cue));
        e.awaiting.reset();
        s.resolve(cue);
      } else if (s.phase() == Phase::Uncertain) {
        s.resolve(cue);
      } else {
        throw HttpError{409, "ProtocolViolation", "nothing to answer"};
      }
    } else {
      throw HttpError{400, "ValidationError", "expected accept, counterexample or give_up"};
    }
    persist(e, false);
    res.set_content(state_json(e).dump() + "\n", "application/json");
  }

  void routes() {
    using httplib::Request;
    using httplib::Response;
    const std::string id = "/v1/sessions/([^/]+)";

    server.Get("/v1/sessions", [this](const Request& req, Response& res) {
      guarded(res, [&] {
        std::vector<std::shared_ptr<Entry>> all;
        {
          std::shared_lock lock(store_mutex);
          for (const auto& [k, v] : sessions) all.push_back(v);
        }
        json list = json::array();
        for (const auto& e : all) {
          std::shared_lock lock(e->mutex);
          list.push_back({{"id", e->id},
                          {"created_at", e->created_at},
                          {"oracle", is_scripted(e->session.oracle()) ? "scripted" : "interactive"},
                          {"phase", phase_label(*e)},
                          {"granule", e->session.granule().index}});
        }
        reply(req, res, json{{"sessions", list}}.dump() + "\n");
      });
    });

    server.Post("/v1/sessions", [this](const Request& req, Response& res) { guarded(res, [&] { create(req, res); }); });

    server.Get(id, [this](const Request& req, Response& res) {
      guarded(res, [&] {
        auto e = find(req.matches[1]);
        std::shared_lock lock(e->mutex);
        reply(req, res, state_json(*e).dump() + "\n");
      });
    });

    server.Post(id + "/cue", [this](const Request& req, Response& res) {
      guarded(res, [&] { cue(*find(req.matches[1]), req, res); });
    });

    server.Post(id + "/answer", [this](const Request& req, Response& res) {
      guarded(res, [&] { answer(*find(req.matches[1]), req, res); });
    });

    server.Get(id + "/lattice", [this](const Request& req, Response& res) {
      guarded(res, [&] {
        auto e = find(req.matches[1]);
        auto g = granule_param(req);
        std::shared_lock lock(e->mutex);
        reply(req, res, lattice_json(e->session.snapshot(g.value_or(e->session.granule())).lattice));
      });
    });

    server.Get(id + "/ensemble", [this](const Request& req, Response& res) {
      guarded(res, [&] {
        auto e = find(req.matches[1]);
        auto g = granule_param(req);
        std::shared_lock lock(e->mutex);
        reply(req, res, ensemble_json(e->session.snapshot(g.value_or(e->session.granule())).belief));
      });
    });

    server.Get(id + "/trace", [this](const Request& req, Response& res) {
      guarded(res, [&] {
        auto e = find(req.matches[1]);
        std::shared_lock lock(e->mutex);
        reply(req, res, trace_jsonl(e->session.initial_context(), e->session.trace()), "application/x-ndjson");
      });
    });

    server.Get(id + "/suggest", [this](const Request& req, Response& res) {
      guarded(res, [&] {
        auto e = find(req.matches[1]);
        std::shared_lock lock(e->mutex);
        auto s = e->awaiting ? std::nullopt : e->session.suggest_cue();
        const FormalContext& ctx = e->session.context();
        reply(req, res, json{{"suggestion", s ? implication_json(ctx, *s) : json(nullptr)}}.dump() + "\n");
      });
    });

    server.set_error_handler([](const Request&, Response& res) {
      if (res.body.empty())
        res.set_content(error_body(res.status == 404 ? "NotFound" : "HttpError", httplib::status_message(res.status)),
                        "application/json");
    });
  }
};

Service::Service(ServiceOptions options) : impl_(std::make_unique<Impl>(std::move(options))) {}
Service::~Service() = default;

bool Service::bind(const std::string& host, int port) {
  if (port == 0) {
    impl_->port = impl_->server.bind_to_any_port(host);
    return impl_->port > 0;
  }
  if (!impl_->server.bind_to_port(host, port)) return false;
  impl_->port = port;
  return true;
}

int Service::port() const { return impl_->port; }
bool Service::listen() { return impl_->server.listen_after_bind(); }
void Service::stop() { impl_->server.stop(); }
void Service::wait_until_ready() const { impl_->server.wait_until_ready(); }

}  // namespace noesis
