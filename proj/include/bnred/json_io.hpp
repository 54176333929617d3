#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "bool_expr.hpp"
#include "errors.hpp"
#include "network.hpp"
#include "pipeline.hpp"
#include "reduction.hpp"

namespace bnred {

using json = nlohmann::json;

/// {"original": [...], "reduced": [...], "stop_reason": ..., "steps": [{"variable", "function"}]}
inline json trace_to_json(const ReductionTrace& trace) {
  json steps = json::array();
  for (const auto& s : trace.steps) steps.push_back({{"variable", s.variable}, {"function", s.expression}});
  json j = {{"original", trace.original_names},
            {"reduced", trace.reduced.names()},
            {"stop_reason", to_string(trace.stop_reason)},
            {"steps", std::move(steps)}};
  if (!trace.error.empty()) j["error"] = trace.error;
  return j;
}

/// Rebuilds a trace against `original`, replaying each recorded elimination
/// and checking that the stored function matches the replayed one.
inline ReductionTrace trace_from_json(const json& j, const BooleanNetwork& original, DdBudget budget = {}) {
  if (j.at("original").get<std::vector<std::string>>() != original.names())
    throw std::invalid_argument("trace does not belong to this network");
  ReductionTrace trace{original.names(), {}, original, StopReason::None, {}};
  BooleanNetwork current = original;
  for (const auto& step : j.at("steps")) {
    const auto name = step.at("variable").get<std::string>();
    const auto pos = current.index_of(name);
    if (!pos) throw std::invalid_argument("trace eliminates unknown variable '" + name + "'");
    const auto& names = current.names();
    NameResolver resolve = [&](std::string_view v) -> std::optional<VarId> {
      auto it = std::find(names.begin(), names.end(), v);
      if (it == names.end()) return std::nullopt;
      return static_cast<VarId>(it - names.begin());
    };
    const DecisionDiagram stored = to_diagram(parse_expr(step.at("function").get<std::string>(), resolve), budget);
    if (!(stored == current.function(*pos)))
      throw std::invalid_argument("trace function of '" + name + "' does not match the network");
    auto [next, lift_step] = eliminate(current, *pos, budget);
    current = std::move(next);
    trace.steps.push_back(std::move(lift_step));
  }
  trace.reduced = current;
  if (j.contains("stop_reason")) {
    const auto r = j.at("stop_reason").get<std::string>();
    for (auto sr : {StopReason::None, StopReason::StopAt, StopReason::NoCandidate, StopReason::BudgetExceeded})
      if (r == to_string(sr)) trace.stop_reason = sr;
  }
  return trace;
}

namespace detail {

inline json states_json(const std::vector<State>& states) {
  json a = json::array();
  for (const auto& s : states) a.push_back(s.to_string());
  return a;
}

}  // namespace detail

/// Machine-readable report. `timings_ms` is the only non-deterministic field
/// and is omitted when `with_timings` is false.
inline json report_to_json(const AttractorReport& r, bool with_timings = true) {
  json mts = json::array();
  for (const auto& t : r.min_trap_spaces) mts.push_back(t.to_string());

  json attractors = json::array();
  for (const auto& a : r.attractors) {
    json e = {{"kind", to_string(a.kind)}, {"representative", a.representative.to_string()}};
    if (a.trap_space) e["trap_space"] = a.trap_space->to_string();
    if (a.states) {
      e["size"] = a.states->size();
      e["states"] = detail::states_json(*a.states);
    }
    attractors.push_back(std::move(e));
  }

  json candidates = json::array();
  for (const auto& c : r.candidates) {
    json e = {{"state", c.state.to_string()},
              {"reduced_state", c.reduced_state.to_string()},
              {"source", c.source},
              {"classification", to_string(c.classification)},
              {"verdict", to_string(c.verdict)}};
    if (c.source_cyclic) e["source_cyclic"] = *c.source_cyclic;
    if (c.trap_space) e["trap_space"] = r.min_trap_spaces[*c.trap_space].to_string();
    if (c.group) e["group"] = *c.group;
    if (c.attractor) e["attractor"] = *c.attractor;
    if (c.explored) e["explored"] = c.explored;
    if (!c.note.empty()) e["note"] = c.note;
    candidates.push_back(std::move(e));
  }

  json unresolved = json::array();
  for (const auto& c : r.candidates)
    if (c.verdict == Verdict::Unresolved)
      unresolved.push_back({{"state", c.state.to_string()}, {"explored", c.explored}, {"reason", c.note}});

  const auto& red = r.reduction;
  json reduction = {{"enabled", red.enabled},
                    {"nodes_before", red.nodes_before},
                    {"nodes_after", red.nodes_after},
                    {"edges_before", red.edges_before},
                    {"edges_after", red.edges_after},
                    {"eliminated", red.eliminated},
                    {"stop_reason", to_string(red.stop_reason)},
                    {"reduced_variables", r.reduced_variables}};
  if (!red.error.empty()) reduction["error"] = red.error;

  json j = {
      {"variables", r.variables},
      {"counts",
       {{"steady", r.steady_count()},
        {"cyclic", r.cyclic_count()},
        {"total", r.attractors.size()},
        {"unresolved", r.unresolved_count()}}},
      {"classes",
       {{"steady", r.count_class(CandidateClass::Steady)},
        {"univocal", r.count_class(CandidateClass::Univocal)},
        {"nonunivocal", r.count_class(CandidateClass::Nonunivocal)},
        {"nonminimal", r.count_class(CandidateClass::Nonminimal)}}},
      {"complete", r.complete()},
      {"steady_states", detail::states_json(r.steady_states())},
      {"attractors", std::move(attractors)},
      {"candidates", std::move(candidates)},
      {"unresolved", std::move(unresolved)},
      {"minimal_trap_spaces", std::move(mts)},
      {"reduction", std::move(reduction)},
  };
  if (with_timings) {
    const auto& t = r.timings;
    j["timings_ms"] = {{"reduce", t.reduce_ms},
                       {"trap_spaces", t.trap_spaces_ms},
                       {"reduced_attractors", t.reduced_attractors_ms},
                       {"classify", t.classify_ms},
                       {"screen", t.screen_ms},
                       {"total", t.total_ms}};
  }
  return j;
}

}  // namespace bnred
