#include "noesis/session.hpp"

namespace noesis {

namespace {

std::string joined(const std::vector<std::string>& names) {
  std::string out;
  for (const auto& n : names) out += (out.empty() ? "" : ", ") + n;
  return out;
}

}  // namespace

std::string_view to_string(Phase phase) {
  switch (phase) {
    case Phase::Belief: return "belief";
    case Phase::Conscious: return "conscious";
    case Phase::Uncertain: return "uncertain";
    case Phase::Terminal: return "terminal";
  }
  return "?";
}

std::optional<Phase> phase_from_string(std::string_view s) {
  for (Phase p : {Phase::Belief, Phase::Conscious, Phase::Uncertain, Phase::Terminal})
    if (to_string(p) == s) return p;
  return std::nullopt;
}

OracleAnswer ScriptedOracle::ask(const Implication& imp) const {
  Verdict v = holds(reference_, imp);
  if (v.satisfied()) return OracleAnswer::accept();
  const std::size_t g = reference_.object_index(*v.counterexample);
  return OracleAnswer::refute({*v.counterexample, reference_.row(g)});
}

Session Session::start(FormalContext initial, Oracle oracle) {
  if (initial.attribute_count() == 0) throw Error(ErrorKind::EmptyBasis, "context declares no attributes");
  if (const auto* s = std::get_if<ScriptedOracle>(&oracle); s && !s->reference().same_basis(initial))
    throw Error(ErrorKind::BasisMismatch, "reference context has different quality dimensions");
  ConceptLattice lattice = enumerate_concepts(initial);
  Session session(std::move(initial), std::move(oracle), std::move(lattice));
  session.granule_ = session.initial_.max_granule();
  session.log({session.granule_, std::nullopt, std::nullopt, std::nullopt, std::nullopt, Phase::Belief});
  return session;
}

TraceEvent Session::log(TraceEvent ev) {
  trace_.push_back(ev);
  return ev;
}

Verdict Session::local_verdict(const Implication& imp) const { return holds(context(), imp); }

void Session::check_counterexample(const Implication& imp, const SupportingCue& cue) const {
  if (cue.intent.size() != context().attribute_count())
    throw Error(ErrorKind::BasisMismatch, "counterexample intent has the wrong width");
  if (!imp.premise.is_subset_of(cue.intent))
    throw Error(ErrorKind::NotACounterexample,
                "'" + cue.name + "' lacks premise attribute(s) " + joined(context().attribute_names(imp.premise - cue.intent)));
  if (imp.conclusion.is_subset_of(cue.intent))
    throw Error(ErrorKind::NotACounterexample, "'" + cue.name + "' has every conclusion attribute");
  if (context().find_object(cue.name))
    throw Error(ErrorKind::DuplicateName, "object '" + cue.name + "' already present");
}

TraceEvent Session::pose_cue(const Implication& imp, std::optional<OracleAnswer> answer) {
  if (phase_ == Phase::Uncertain)
    throw Error(ErrorKind::ProtocolViolation, "a cue is still pending; resolve it first");
  if (phase_ == Phase::Terminal) throw Error(ErrorKind::ProtocolViolation, "session has ended");

  const Verdict local = local_verdict(imp);
  if (!local.satisfied()) {
    phase_ = Phase::Conscious;
    TraceEvent ev = log({granule_, std::nullopt, imp, local, std::nullopt, phase_});
    granule_ = granule_.next();
    return ev;
  }

  if (const auto* scripted = std::get_if<ScriptedOracle>(&oracle_)) {
    answer = scripted->ask(imp);
  } else if (!answer) {
    throw Error(ErrorKind::OracleUnavailable, "interactive session needs the oracle's answer to this cue");
  }

  if (answer->accepted()) {
    accepted_.push_back(imp);
    phase_ = Phase::Conscious;
    TraceEvent ev = log({granule_, std::nullopt, imp, local, answer, phase_});
    granule_ = granule_.next();
    return ev;
  }

  if (!answer->counterexample)
    throw Error(ErrorKind::ValidationError, "counterexample answer without an object");
  check_counterexample(imp, *answer->counterexample);
  phase_ = Phase::Uncertain;
  pending_ = imp;
  pending_counterexample_ = answer->counterexample;
  return log({granule_, std::nullopt, imp, local, answer, phase_});
}

TraceEvent Session::resolve(const SupportingCue& offered) {
  // The argument may alias pending_counterexample_, which is reset below.
  const SupportingCue cue = offered;
  if (phase_ != Phase::Uncertain || !pending_)
    throw Error(ErrorKind::ProtocolViolation, "no uncertain cue to resolve");
  check_counterexample(*pending_, cue);
  if (const auto* scripted = std::get_if<ScriptedOracle>(&oracle_)) {
    auto g = scripted->reference().find_object(cue.name);
    if (!g || scripted->reference().row(*g) != cue.intent)
      throw Error(ErrorKind::NotACounterexample,
                  "'" + cue.name + "' with that intent is not an object of the reference context");
  }

  const Granule next = granule_.next();
  lattice_ = insert_object(lattice_, cue.name, cue.intent, next);
  granule_ = next;

  const Implication cue_pending = *pending_;
  const Verdict local = local_verdict(cue_pending);
  std::optional<OracleAnswer> answer;
  if (!local.satisfied()) {
    phase_ = Phase::Conscious;
  } else if (const auto* scripted = std::get_if<ScriptedOracle>(&oracle_)) {
    answer = scripted->ask(cue_pending);
    if (answer->accepted()) {
      accepted_.push_back(cue_pending);
      phase_ = Phase::Conscious;
    }
  }

  if (phase_ == Phase::Conscious) {
    pending_.reset();
    pending_counterexample_.reset();
  } else {
    pending_counterexample_ = answer ? answer->counterexample : std::nullopt;
  }
  return log({granule_, cue, cue_pending, local, answer, phase_});
}

TraceEvent Session::give_up() {
  if (phase_ == Phase::Terminal) throw Error(ErrorKind::ProtocolViolation, "session has already ended");
  phase_ = Phase::Terminal;
  pending_.reset();
  pending_counterexample_.reset();
  return log({granule_, std::nullopt, std::nullopt, std::nullopt, std::nullopt, phase_});
}

std::optional<Implication> Session::suggest_cue() const {
  if (phase_ != Phase::Belief && phase_ != Phase::Conscious) return std::nullopt;
  const FormalContext& ctx = context();
  auto close = [&](const AttributeSet& a) { return implication_closure(a, accepted_); };
  std::optional<AttributeSet> premise = close(ctx.no_attributes());
  while (premise) {
    AttributeSet implied = closure(ctx, *premise) - *premise;
    if (implied.any()) {
      AttributeSet conclusion = ctx.no_attributes();
      conclusion.set(implied.first());
      return Implication{*premise, std::move(conclusion)};
    }
    premise = next_closed(*premise, close);
  }
  return std::nullopt;
}

GranuleSnapshot Session::snapshot(Granule g) const {
  if (g > granule_)
    throw Error(ErrorKind::UnknownGranule, "granule " + std::to_string(g.index) + " is beyond the current granule " +
                                               std::to_string(granule_.index));
  FormalContext ctx = context().restricted_to(g);
  bool any_incidence = false;
  for (std::size_t m = 0; m < ctx.attribute_count() && !any_incidence; ++m) any_incidence = ctx.column(m).any();
  BeliefState belief = any_incidence ? reinforce_from_support(ctx) : uniform_prior(ctx);
  ConceptLattice lat = enumerate_concepts(ctx);
  return {g, std::move(lat), std::move(belief)};
}

Session Session::restore(FormalContext initial, Oracle oracle, std::span<const TraceEvent> events) {
  Session s = start(std::move(initial), std::move(oracle));
  if (events.empty() || events.front() != s.trace().front())
    throw Error(ErrorKind::ValidationError, "trace does not begin with this session's start event");
  for (std::size_t i = 1; i < events.size(); ++i) {
    const TraceEvent& ev = events[i];
    if (ev.learning_cue) {
      s.resolve(*ev.learning_cue);
    } else if (ev.measurement_cue) {
      s.pose_cue(*ev.measurement_cue, ev.oracle_answer);
    } else if (ev.resulting_phase == Phase::Terminal) {
      s.give_up();
    } else {
      throw Error(ErrorKind::ValidationError, "trace event " + std::to_string(i) + " has no recognizable step");
    }
    if (s.trace().back() != ev)
      throw Error(ErrorKind::ValidationError, "trace event " + std::to_string(i) + " does not replay identically");
  }
  return s;
}

ReplayResult replay(const FormalContext& reference, std::span<const Implication> script,
                    const std::optional<FormalContext>& initial) {
  FormalContext start_ctx = initial ? *initial : FormalContext::attributes_only(reference.dimensions());
  Session s = Session::start(std::move(start_ctx), ScriptedOracle(reference));
  for (const auto& cue : script) {
    s.pose_cue(cue);
    // Each resolution adds a distinct reference object, so this terminates.
    while (s.phase() == Phase::Uncertain) s.resolve(*s.pending_counterexample());
  }
  std::vector<GranuleSnapshot> snapshots;
  for (std::uint64_t g = 0; g <= s.granule().index; ++g) snapshots.push_back(s.snapshot(Granule{g}));
  return {std::move(s), std::move(snapshots)};
}

}  // namespace noesis
