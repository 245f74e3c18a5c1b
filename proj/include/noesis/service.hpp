#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

namespace noesis {

struct ServiceOptions {
  // When set, every session's initial context and trace are written here
  // after each mutation.
  std::optional<std::filesystem::path> trace_dir;
};

// "host:port", ":port" or "port". Throws ValidationError.
std::pair<std::string, int> parse_address(std::string_view address);

// HTTP+JSON front end over an in-memory session store. Routes live under /v1:
//
//   GET  /v1/sessions                      index
//   POST /v1/sessions                      {context|scenario, oracle, reference?, trace?}
//   GET  /v1/sessions/{id}                 session state
//   POST /v1/sessions/{id}/cue             {premise, conclusion}
//   POST /v1/sessions/{id}/answer          {accept:true} | {counterexample:{name,intent}} | {give_up:true}
//   GET  /v1/sessions/{id}/lattice?granule=n
//   GET  /v1/sessions/{id}/ensemble?granule=n
//   GET  /v1/sessions/{id}/trace           JSON Lines
//   GET  /v1/sessions/{id}/suggest
//
// Mutations of one session are serialized by a per-session lock; reads of a
// session share it.
class Service {
 public:
  explicit Service(ServiceOptions options = {});
  ~Service();
  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  // Port 0 picks a free port. Returns false if the address cannot be bound.
  bool bind(const std::string& host, int port);
  int port() const;

  // Blocks until stop() is called.
  bool listen();
  void stop();
  void wait_until_ready() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace noesis
