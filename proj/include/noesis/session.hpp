#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "noesis/context.hpp"
#include "noesis/ensemble.hpp"
#include "noesis/lattice.hpp"

namespace noesis {

// Mental-state lifecycle:
//   Belief    -> Conscious | Uncertain | Terminal
//   Conscious -> Conscious | Uncertain | Terminal
//   Uncertain -> Conscious | Uncertain | Terminal
enum class Phase { Belief, Conscious, Uncertain, Terminal };

std::string_view to_string(Phase phase);
std::optional<Phase> phase_from_string(std::string_view s);

// An object together with its intent, offered to resolve an uncertainty.
struct SupportingCue {
  std::string name;
  AttributeSet intent;

  friend bool operator==(const SupportingCue&, const SupportingCue&) = default;
};

struct OracleAnswer {
  enum class Kind { Accept, Counterexample };

  Kind kind = Kind::Accept;
  std::optional<SupportingCue> counterexample;

  static OracleAnswer accept() { return {Kind::Accept, std::nullopt}; }
  static OracleAnswer refute(SupportingCue cue) { return {Kind::Counterexample, std::move(cue)}; }
  bool accepted() const { return kind == Kind::Accept; }

  friend bool operator==(const OracleAnswer&, const OracleAnswer&) = default;
};

// Answers from a complete reference context: accept iff the implication holds
// (or holds vacuously) there, else the first violating reference object.
class ScriptedOracle {
 public:
  explicit ScriptedOracle(FormalContext reference) : reference_(std::move(reference)) {}

  const FormalContext& reference() const { return reference_; }
  OracleAnswer ask(const Implication& imp) const;

 private:
  FormalContext reference_;
};

// Answers arrive from outside (a person) with each cue.
struct InteractiveOracle {};

using Oracle = std::variant<ScriptedOracle, InteractiveOracle>;

inline bool is_scripted(const Oracle& o) { return std::holds_alternative<ScriptedOracle>(o); }

// One step of the protocol. Which fields are set tells the step apart:
//   start:   nothing but the phase (Belief)
//   cue:     measurement_cue, local_verdict, oracle_answer unless answered locally
//   resolve: learning_cue plus the re-checked pending cue
//   give up: nothing but the phase (Terminal)
struct TraceEvent {
  Granule granule;
  std::optional<SupportingCue> learning_cue;
  std::optional<Implication> measurement_cue;
  std::optional<Verdict> local_verdict;
  std::optional<OracleAnswer> oracle_answer;
  Phase resulting_phase = Phase::Belief;

  friend bool operator==(const TraceEvent&, const TraceEvent&) = default;
};

struct GranuleSnapshot {
  Granule granule;
  ConceptLattice lattice;
  BeliefState belief;
};

// The cue / measurement / uncertainty / supporting-cue loop over a growing
// context. A Session is a single sequential actor; callers serialize access.
class Session {
 public:
  // Phase Belief at the initial context's latest granule (0 for a fresh
  // context). Throws EmptyBasis, BasisMismatch (scripted reference with
  // different dimensions).
  static Session start(FormalContext initial, Oracle oracle);

  // Rebuilds a session by feeding a recorded trace back in. Throws
  // ValidationError if the replayed events differ from the recorded ones.
  static Session restore(FormalContext initial, Oracle oracle, std::span<const TraceEvent> events);

  Phase phase() const { return phase_; }
  Granule granule() const { return granule_; }
  const FormalContext& initial_context() const { return initial_; }
  const FormalContext& context() const { return lattice_.context(); }
  const ConceptLattice& lattice() const { return lattice_; }
  const Oracle& oracle() const { return oracle_; }
  const std::optional<Implication>& pending() const { return pending_; }
  // The oracle's counterexample to the pending cue, when it gave one.
  const std::optional<SupportingCue>& pending_counterexample() const { return pending_counterexample_; }
  const std::vector<TraceEvent>& trace() const { return trace_; }
  const std::vector<Implication>& accepted() const { return accepted_; }

  bool is_conscious() const { return phase_ == Phase::Conscious && !pending_; }

  // holds() against the current context. Throws BasisMismatch.
  Verdict local_verdict(const Implication& imp) const;
  // False when the current context already refutes the cue.
  bool needs_oracle(const Implication& imp) const { return local_verdict(imp).satisfied(); }

  // Poses a measurement cue. A cue the current context refutes is answered
  // without the oracle. Otherwise a scripted oracle is consulted; an
  // interactive session must pass the person's `answer` (OracleUnavailable if
  // missing). Acceptance moves to Conscious and advances the granule; a
  // counterexample moves to Uncertain with the cue pending.
  // Throws ProtocolViolation (Uncertain or Terminal), NotACounterexample,
  // DuplicateName.
  TraceEvent pose_cue(const Implication& imp, std::optional<OracleAnswer> answer = std::nullopt);

  // Adds the supporting object at the next granule and re-checks the pending
  // cue. Throws ProtocolViolation (nothing pending), NotACounterexample,
  // DuplicateName.
  TraceEvent resolve(const SupportingCue& offered);

  // Ends the session. Throws ProtocolViolation if already Terminal.
  TraceEvent give_up();

  // Least A -> {b} in lectic order of A where A is closed under the accepted
  // cues, b is outside A, and the current context says A -> {b} holds.
  std::optional<Implication> suggest_cue() const;

  // Lattice and support-weighted ensemble of the context as of `g` (uniform
  // prior while the context has no incidence). Throws UnknownGranule.
  GranuleSnapshot snapshot(Granule g) const;

 private:
  Session(FormalContext initial, Oracle oracle, ConceptLattice lattice)
      : initial_(std::move(initial)), oracle_(std::move(oracle)), lattice_(std::move(lattice)) {}

  void check_counterexample(const Implication& imp, const SupportingCue& cue) const;
  TraceEvent log(TraceEvent ev);

  FormalContext initial_;
  Oracle oracle_;
  ConceptLattice lattice_;
  Phase phase_ = Phase::Belief;
  Granule granule_;
  std::optional<Implication> pending_;
  std::optional<SupportingCue> pending_counterexample_;
  std::vector<Implication> accepted_;
  std::vector<TraceEvent> trace_;
};

struct ReplayResult {
  Session session;
  std::vector<GranuleSnapshot> snapshots;  // one per granule 0..final

  const std::vector<TraceEvent>& trace() const { return session.trace(); }
};

// Drives a scripted session through `script`, resolving every rejected cue
// with the oracle's own counterexample. Starts from `initial` when given,
// else from the reference's attributes with no objects.
ReplayResult replay(const FormalContext& reference, std::span<const Implication> script,
                    const std::optional<FormalContext>& initial = std::nullopt);

// ---------------------------------------------------------------------------
// File formats

struct CueNames {
  std::vector<std::string> premise;
  std::vector<std::string> conclusion;
};

// Script file: [{"premise":[...],"conclusion":[...]}, ...]. Throws ParseError.
std::vector<CueNames> parse_script(std::string_view bytes);
// Throws UnknownAttribute, ValidationError.
std::vector<Implication> resolve_script(const FormalContext& basis, std::span<const CueNames> cues);
std::string script_json(const FormalContext& basis, std::span<const Implication> cues);

// Trace: JSON Lines, one event per line, fields in protocol order.
std::string trace_event_json(const FormalContext& basis, const TraceEvent& ev);
std::string trace_jsonl(const FormalContext& basis, std::span<const TraceEvent> events);
std::vector<TraceEvent> parse_trace(const FormalContext& basis, std::string_view jsonl);

}  // namespace noesis
