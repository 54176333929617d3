#pragma once

#include <algorithm>
#include <chrono>
#include <deque>
#include <istream>
#include <fstream>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <tuple>
#include <unordered_set>
#include <vector>

#include "dynamics.hpp"
#include "errors.hpp"
#include "network.hpp"
#include "reduction.hpp"
#include "state.hpp"
#include "trap_spaces.hpp"

namespace bnred {

enum class CandidateClass { Unclassified, Steady, Univocal, Nonunivocal, Nonminimal };
enum class Verdict { Pending, Confirmed, Rejected, Merged, Unresolved };

inline const char* to_string(CandidateClass c) {
  switch (c) {
    case CandidateClass::Unclassified: return "unclassified";
    case CandidateClass::Steady: return "steady";
    case CandidateClass::Univocal: return "univocal";
    case CandidateClass::Nonunivocal: return "nonunivocal";
    case CandidateClass::Nonminimal: return "nonminimal";
  }
  return "?";
}

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Pending: return "pending";
    case Verdict::Confirmed: return "confirmed";
    case Verdict::Rejected: return "rejected";
    case Verdict::Merged: return "merged";
    case Verdict::Unresolved: return "unresolved";
  }
  return "?";
}

/// Lifted sample of one reduced attractor.
struct CandidateState {
  State state;          // in the original space
  State reduced_state;  // the sampled reduced-attractor state
  std::size_t source = 0;                   // index of the reduced attractor (or candidates-file line)
  std::optional<bool> source_cyclic;        // unknown for externally supplied samples
  CandidateClass classification = CandidateClass::Unclassified;
  std::optional<std::size_t> trap_space;    // index into the minimal trap spaces
  std::optional<std::size_t> group;         // nonunivocal group id = trap space index
  Verdict verdict = Verdict::Pending;
  std::optional<std::size_t> attractor;     // index into AttractorReport::attractors
  std::size_t explored = 0;                 // states visited while screening
  std::string note;
};

/// One sample per reduced attractor (its lexicographically smallest state), lifted.
inline std::vector<CandidateState> sample_candidates(const BooleanNetwork& reduced, const ReductionTrace& trace,
                                                     const std::vector<Attractor>& reduced_attractors) {
  if (reduced.size() != trace.reduced.size())
    throw std::invalid_argument("sample_candidates: reduced network does not match trace");
  std::vector<CandidateState> out;
  for (std::size_t k = 0; k < reduced_attractors.size(); ++k) {
    const auto& a = reduced_attractors[k];
    const State& x = *std::min_element(a.states.begin(), a.states.end());
    CandidateState c;
    c.reduced_state = x;
    c.state = lift(trace, x);
    c.source = k;
    c.source_cyclic = !a.is_steady();
    out.push_back(std::move(c));
  }
  return out;
}

/// Steady if f fixes the state; otherwise Univocal when it is the only
/// non-steady candidate in its minimal trap space, Nonunivocal when it shares
/// one (group id = trap space index), Nonminimal when in none.
inline std::vector<CandidateState> classify(std::vector<CandidateState> candidates, const std::vector<Subspace>& mts,
                                            const BooleanNetwork& f) {
  std::map<std::size_t, std::size_t> occupancy;
  for (auto& c : candidates) {
    const bool steady = f.is_fixpoint(c.state);
    if (c.source_cyclic && *c.source_cyclic == steady)
      throw std::logic_error("lifted candidate " + c.state.to_string() +
                             (steady ? " is a steady state but its reduced attractor is cyclic"
                                     : " is not steady but its reduced attractor is a steady state"));
    c.trap_space.reset();
    c.group.reset();
    for (std::size_t k = 0; k < mts.size(); ++k) {
      if (mts[k].contains(c.state)) {
        c.trap_space = k;
        break;
      }
    }
    if (steady) {
      c.classification = CandidateClass::Steady;
      c.verdict = Verdict::Confirmed;
      continue;
    }
    if (c.trap_space) ++occupancy[*c.trap_space];
  }
  for (auto& c : candidates) {
    if (c.classification == CandidateClass::Steady) continue;
    if (!c.trap_space) {
      c.classification = CandidateClass::Nonminimal;
    } else if (occupancy[*c.trap_space] == 1) {
      c.classification = CandidateClass::Univocal;
      c.verdict = Verdict::Confirmed;
    } else {
      c.classification = CandidateClass::Nonunivocal;
      c.group = c.trap_space;
    }
  }
  return candidates;
}

/// Attractors inside the minimal trap space t shared by several candidates.
/// Candidates falling in the same attractor end up merged by the caller.
inline std::vector<Attractor> screen_nonunivocal(const BooleanNetwork& f, const Subspace& t,
                                                 const std::vector<CandidateState>& group,
                                                 std::size_t explicit_limit = kDefaultExplicitLimit) {
  for (const auto& c : group)
    if (!t.contains(c.state))
      throw std::invalid_argument("candidate " + c.state.to_string() + " is outside trap space " + t.to_string());
  return attractors_in_subspace(f, t, explicit_limit);
}

struct NonminimalVerdict {
  enum class Kind { ConfirmedAttractor, Rejected, Unresolved };
  Kind kind;
  std::optional<Attractor> attractor;
  std::size_t explored = 0;
  std::string note;
};

/// Screens a candidate lying in no minimal trap space. If it reaches a minimal
/// trap space or a known attractor not containing it, it cannot be in an
/// attractor. Otherwise membership is decided on its forward set.
inline NonminimalVerdict screen_nonminimal(const BooleanNetwork& f, const CandidateState& c,
                                           const std::vector<Subspace>& mts, const std::vector<Attractor>& known,
                                           std::size_t budget = kDefaultReachBudget) {
  for (const auto& t : mts)
    if (t.contains(c.state))
      throw std::invalid_argument("candidate " + c.state.to_string() + " lies in minimal trap space " + t.to_string());

  std::vector<const Attractor*> others;
  for (const auto& a : known)
    if (!a.contains(c.state)) others.push_back(&a);

  const ReachVerdict reach = reach_if(
      f, c.state,
      [&](const State& s) -> std::optional<std::size_t> {
        for (std::size_t k = 0; k < mts.size(); ++k)
          if (mts[k].contains(s)) return k;
        for (std::size_t k = 0; k < others.size(); ++k)
          if (others[k]->contains(s)) return mts.size() + k;
        return std::nullopt;
      },
      budget);
  if (reach.kind == ReachVerdict::Kind::Reached)
    return {NonminimalVerdict::Kind::Rejected, std::nullopt, reach.explored, "reaches a disjoint trap set"};
  // An exhausted forward search bounds the membership check's forward set too.
  if (reach.kind == ReachVerdict::Kind::NotReached) {
    const MembershipVerdict m = is_in_attractor(f, c.state, budget);
    switch (m.kind) {
      case MembershipVerdict::Kind::Yes:
        return {NonminimalVerdict::Kind::ConfirmedAttractor, m.attractor, m.explored, {}};
      case MembershipVerdict::Kind::No:
        return {NonminimalVerdict::Kind::Rejected, std::nullopt, m.explored, "forward set not strongly connected"};
      case MembershipVerdict::Kind::BudgetExhausted: break;
    }
  }
  return {NonminimalVerdict::Kind::Unresolved, std::nullopt, reach.explored,
          "exploration budget of " + std::to_string(budget) + " states exhausted"};
}

struct PipelineConfig {
  bool reduce = true;
  std::optional<std::size_t> stop_at;      // default: max(10, ceil(n/10))
  std::optional<std::size_t> max_product;  // default: n
  std::size_t budget = kDefaultReachBudget;
  std::size_t explicit_limit = kDefaultExplicitLimit;
  TrapSpaceOptions trap_spaces = {};
  DdBudget dd_budget = {};
  /// Replaces reduced-attractor search: one sample state per line over the
  /// reduced network's variables.
  std::optional<std::vector<State>> external_candidates;
};

enum class AttractorKind { Steady, Univocal, Nonunivocal, Nonminimal };

inline const char* to_string(AttractorKind k) {
  switch (k) {
    case AttractorKind::Steady: return "steady";
    case AttractorKind::Univocal: return "univocal";
    case AttractorKind::Nonunivocal: return "nonunivocal";
    case AttractorKind::Nonminimal: return "nonminimal";
  }
  return "?";
}

/// A certified attractor of f. Explicitly found attractors carry their
/// states; univocal ones are certified by their trap space alone.
struct ReportedAttractor {
  AttractorKind kind;
  State representative;
  std::optional<Subspace> trap_space;
  std::optional<std::vector<State>> states;
};

struct StepTimings {
  double reduce_ms = 0;
  double trap_spaces_ms = 0;
  double reduced_attractors_ms = 0;
  double classify_ms = 0;
  double screen_ms = 0;
  double total_ms = 0;
};

struct ReductionSummary {
  bool enabled = false;
  std::size_t nodes_before = 0, nodes_after = 0;
  std::size_t edges_before = 0, edges_after = 0;
  std::vector<std::string> eliminated;
  StopReason stop_reason = StopReason::None;
  std::string error;
};

struct AttractorReport {
  std::vector<std::string> variables;
  std::vector<std::string> reduced_variables;
  ReductionSummary reduction;
  std::vector<Subspace> min_trap_spaces;
  std::vector<CandidateState> candidates;
  std::vector<ReportedAttractor> attractors;
  StepTimings timings;

  std::size_t steady_count() const {
    return static_cast<std::size_t>(std::count_if(attractors.begin(), attractors.end(),
                                                  [](const auto& a) { return a.kind == AttractorKind::Steady; }));
  }
  std::size_t cyclic_count() const { return attractors.size() - steady_count(); }
  std::size_t unresolved_count() const { return count_verdict(Verdict::Unresolved); }
  bool complete() const { return unresolved_count() == 0; }

  std::vector<State> steady_states() const {
    std::vector<State> out;
    for (const auto& a : attractors)
      if (a.kind == AttractorKind::Steady) out.push_back(a.representative);
    std::sort(out.begin(), out.end());
    return out;
  }

  std::size_t count_class(CandidateClass c) const {
    return static_cast<std::size_t>(
        std::count_if(candidates.begin(), candidates.end(), [&](const auto& x) { return x.classification == c; }));
  }
  std::size_t count_verdict(Verdict v) const {
    return static_cast<std::size_t>(
        std::count_if(candidates.begin(), candidates.end(), [&](const auto& x) { return x.verdict == v; }));
  }
};

/// Reads a candidates file: one 0/1 string per line, blank lines and `#`
/// comments ignored. Each line must have `width` characters.
inline std::vector<State> read_candidates(std::istream& in, std::size_t width) {
  std::vector<State> out;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    line.erase(std::remove_if(line.begin(), line.end(), [](unsigned char ch) { return std::isspace(ch); }), line.end());
    if (line.empty()) continue;
    if (line.size() != width)
      throw ParseError("candidate state has " + std::to_string(line.size()) + " components, expected " +
                           std::to_string(width),
                       number, 1);
    try {
      out.push_back(State::from_string(line));
    } catch (const std::invalid_argument& e) {
      throw ParseError(e.what(), number, 1);
    }
  }
  return out;
}

namespace detail {

inline double elapsed_ms(std::chrono::steady_clock::time_point since) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - since).count();
}

}  // namespace detail

/// Reduce, compute minimal trap spaces, find reduced attractors, lift one
/// state of each, classify against the trap spaces and screen what remains.
/// Throws LimitExceeded when the reduced network is too large to enumerate;
/// exhausted screenings surface as Unresolved candidates.
inline AttractorReport run_pipeline(const BooleanNetwork& f, const PipelineConfig& config = {}) {
  using clock = std::chrono::steady_clock;
  const auto t_start = clock::now();
  AttractorReport report;
  report.variables = f.names();

  // 1. Reduce.
  auto t0 = clock::now();
  ReductionOptions ropts = default_reduction_options(f.size());
  if (config.stop_at) ropts.stop_at = *config.stop_at;
  if (config.max_product) ropts.max_product = *config.max_product;
  ropts.budget = config.dd_budget;
  ReductionTrace trace{f.names(), {}, f, StopReason::None, {}};
  BooleanNetwork reduced = f;
  if (config.reduce) std::tie(reduced, trace) = reduce(f, ropts);
  report.reduction.enabled = config.reduce;
  report.reduction.nodes_before = f.size();
  report.reduction.nodes_after = reduced.size();
  report.reduction.edges_before = influence_graph(f, config.dd_budget).size();
  report.reduction.edges_after = influence_graph(reduced, config.dd_budget).size();
  report.reduction.eliminated = trace.eliminated();
  report.reduction.stop_reason = trace.stop_reason;
  report.reduction.error = trace.error;
  report.reduced_variables = reduced.names();
  report.timings.reduce_ms = detail::elapsed_ms(t0);

  // 2. Minimal trap spaces of the original network.
  t0 = clock::now();
  report.min_trap_spaces = min_trap_spaces(f, config.trap_spaces);
  const auto& mts = report.min_trap_spaces;
  report.timings.trap_spaces_ms = detail::elapsed_ms(t0);

  // 3. Attractors of the reduced network, one lifted sample each.
  t0 = clock::now();
  std::vector<CandidateState> candidates;
  if (config.external_candidates) {
    std::unordered_set<State, StateHash> seen;
    for (const State& x : *config.external_candidates) {
      if (x.size() != reduced.size())
        throw std::invalid_argument("external candidate " + x.to_string() + " does not match reduced network size " +
                                    std::to_string(reduced.size()));
      if (!seen.insert(x).second) continue;
      CandidateState c;
      c.reduced_state = x;
      c.state = lift(trace, x);
      c.source = candidates.size();
      candidates.push_back(std::move(c));
    }
  } else {
    std::vector<Attractor> reduced_attractors;
    try {
      reduced_attractors = attractors_explicit(reduced, config.explicit_limit);
    } catch (const LimitExceeded& e) {
      throw LimitExceeded(std::string("step 3 (attractors of reduced network): ") + e.what());
    }
    candidates = sample_candidates(reduced, trace, reduced_attractors);
  }
  report.timings.reduced_attractors_ms = detail::elapsed_ms(t0);

  // 4. Steady and univocal states.
  t0 = clock::now();
  candidates = classify(std::move(candidates), mts, f);
  for (auto& c : candidates) {
    if (c.classification == CandidateClass::Steady) {
      c.attractor = report.attractors.size();
      report.attractors.push_back({AttractorKind::Steady, c.state, Subspace::of_state(c.state), {{c.state}}});
    } else if (c.classification == CandidateClass::Univocal) {
      c.attractor = report.attractors.size();
      report.attractors.push_back({AttractorKind::Univocal, c.state, mts[*c.trap_space], std::nullopt});
    }
  }
  report.timings.classify_ms = detail::elapsed_ms(t0);

  // 5. Screening: nonunivocal groups first, then nonminimal candidates, each
  // confirmed attractor becoming a reachability target for the next ones.
  t0 = clock::now();
  std::vector<Attractor> known;
  std::map<std::size_t, std::vector<std::size_t>> groups;
  for (std::size_t k = 0; k < candidates.size(); ++k)
    if (candidates[k].group) groups[*candidates[k].group].push_back(k);

  for (const auto& [tindex, members] : groups) {
    std::vector<CandidateState> group;
    for (auto k : members) group.push_back(candidates[k]);
    std::vector<Attractor> found;
    try {
      found = screen_nonunivocal(f, mts[tindex], group, config.explicit_limit);
    } catch (const LimitExceeded& e) {
      for (auto k : members) {
        candidates[k].verdict = Verdict::Unresolved;
        candidates[k].note = e.what();
      }
      continue;
    }
    for (auto& a : found) {
      const std::size_t id = report.attractors.size();
      bool first = true;
      for (auto k : members) {
        auto& c = candidates[k];
        if (!a.contains(c.state)) continue;
        c.attractor = id;
        c.verdict = first ? Verdict::Confirmed : Verdict::Merged;
        first = false;
      }
      report.attractors.push_back({AttractorKind::Nonunivocal, a.representative(), mts[tindex], a.states});
      known.push_back(std::move(a));
    }
    for (auto k : members)
      if (candidates[k].verdict == Verdict::Pending) {
        candidates[k].verdict = Verdict::Rejected;
        candidates[k].note = "not in any attractor of its trap space";
      }
  }

  for (auto& c : candidates) {
    if (c.classification != CandidateClass::Nonminimal) continue;
    if (auto it = std::find_if(known.begin(), known.end(), [&](const Attractor& a) { return a.contains(c.state); });
        it != known.end()) {
      c.verdict = Verdict::Merged;
      for (std::size_t id = 0; id < report.attractors.size(); ++id)
        if (report.attractors[id].states && *report.attractors[id].states == it->states) c.attractor = id;
      continue;
    }
    NonminimalVerdict v = screen_nonminimal(f, c, mts, known, config.budget);
    c.explored = v.explored;
    c.note = v.note;
    switch (v.kind) {
      case NonminimalVerdict::Kind::Rejected: c.verdict = Verdict::Rejected; break;
      case NonminimalVerdict::Kind::Unresolved: c.verdict = Verdict::Unresolved; break;
      case NonminimalVerdict::Kind::ConfirmedAttractor:
        c.verdict = Verdict::Confirmed;
        c.attractor = report.attractors.size();
        report.attractors.push_back({AttractorKind::Nonminimal, v.attractor->representative(), std::nullopt,
                                     v.attractor->states});
        known.push_back(std::move(*v.attractor));
        break;
    }
  }
  report.timings.screen_ms = detail::elapsed_ms(t0);

  report.candidates = std::move(candidates);
  report.timings.total_ms = detail::elapsed_ms(t_start);
  return report;
}

}  // namespace bnred
