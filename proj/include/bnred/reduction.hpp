#pragma once

#include <algorithm>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bool_expr.hpp"
#include "decision_diagram.hpp"
#include "errors.hpp"
#include "network.hpp"
#include "state.hpp"

namespace bnred {

/// One elimination: the removed variable, its position in the network it was
/// removed from, and its update function over that network's positions.
struct LiftStep {
  std::string variable;
  std::size_t position = 0;
  DecisionDiagram function;
  std::string expression;  // `function` printed with the names of that network
};

enum class StopReason {
  None,           // no elimination attempted: size already within stop_at
  StopAt,         // reached the requested size
  NoCandidate,    // nothing eliminable within max_product
  BudgetExceeded  // a simplification ran out of nodes; reduction kept the last good network
};

inline const char* to_string(StopReason r) {
  switch (r) {
    case StopReason::None: return "none";
    case StopReason::StopAt: return "stop_at";
    case StopReason::NoCandidate: return "no_candidate";
    case StopReason::BudgetExceeded: return "budget_exceeded";
  }
  return "?";
}

/// Ordered record of eliminations; lifting replays them backwards to realize
/// the composed map from reduced to original states.
struct ReductionTrace {
  std::vector<std::string> original_names;
  std::vector<LiftStep> steps;
  BooleanNetwork reduced;
  StopReason stop_reason = StopReason::None;
  std::string error;  // message of the budget failure, if any

  std::vector<std::string> eliminated() const {
    std::vector<std::string> out;
    for (const auto& s : steps) out.push_back(s.variable);
    return out;
  }
};

/// Variables whose update function does not depend on themselves.
inline std::vector<std::size_t> eliminable(const BooleanNetwork& f) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < f.size(); ++i)
    if (!f.function(i).depends_on(static_cast<VarId>(i))) out.push_back(i);
  return out;
}

/// Removes non-autoregulated variable i, substituting f_i into its targets.
/// Throws std::invalid_argument if i is autoregulated or the network has a
/// single variable, BudgetExceeded if a substitution outgrows the budget.
inline std::pair<BooleanNetwork, LiftStep> eliminate(const BooleanNetwork& f, std::size_t i, DdBudget budget = {}) {
  if (i >= f.size()) throw std::invalid_argument("eliminate: variable index out of range");
  const auto vi = static_cast<VarId>(i);
  const DecisionDiagram& fi = f.function(i);
  if (fi.depends_on(vi)) throw std::invalid_argument("cannot eliminate autoregulated variable '" + f.name(i) + "'");
  if (f.size() == 1) throw std::invalid_argument("cannot eliminate the last variable of a network");

  auto shift = [vi](VarId v) { return v > vi ? v - 1 : v; };
  std::vector<std::string> names;
  std::vector<DecisionDiagram> functions;
  for (std::size_t j = 0; j < f.size(); ++j) {
    if (j == i) continue;
    names.push_back(f.name(j));
    functions.push_back(compose(f.function(j), vi, fi, budget).relabeled(shift));
  }
  LiftStep step{f.name(i), i, fi, to_string(to_expr(fi, budget), f.names())};
  return {BooleanNetwork(std::move(names), std::move(functions)), std::move(step)};
}

inline constexpr std::size_t kUnlimited = std::numeric_limits<std::size_t>::max();

/// Eliminable variable minimizing (distinct regulators) x (distinct targets),
/// lowest index on ties; nullopt if none or the minimum exceeds max_product.
inline std::optional<std::size_t> choose_variable(const BooleanNetwork& f, std::size_t max_product) {
  const Neighbourhood nb = neighbourhood(f);
  std::optional<std::size_t> best;
  std::size_t best_product = kUnlimited;
  for (std::size_t i : eliminable(f)) {
    const std::size_t product = nb.regulators[i].size() * nb.targets[i].size();
    if (product < best_product) {
      best_product = product;
      best = i;
    }
  }
  if (!best || best_product > max_product) return std::nullopt;
  return best;
}

struct ReductionOptions {
  std::size_t stop_at = 1;
  std::size_t max_product = kUnlimited;
  DdBudget budget = {};
};

/// Default stopping rule: stop_at = max(10, ceil(n/10)), max_product = n.
inline ReductionOptions default_reduction_options(std::size_t n) {
  ReductionOptions o;
  o.stop_at = std::max<std::size_t>(10, (n + 9) / 10);
  o.max_product = n;
  return o;
}

/// Iterated elimination. Stops once the size is within stop_at or no
/// candidate passes max_product; variables whose function has become constant
/// are eliminated after each step regardless of both thresholds.
inline std::pair<BooleanNetwork, ReductionTrace> reduce(const BooleanNetwork& f, const ReductionOptions& opts) {
  if (opts.stop_at < 1) throw std::invalid_argument("reduce: stop_at must be at least 1");
  ReductionTrace trace{f.names(), {}, f, StopReason::None, {}};
  BooleanNetwork current = f;

  auto step = [&](std::size_t i) -> bool {
    try {
      auto [next, lift] = eliminate(current, i, opts.budget);
      current = std::move(next);
      trace.steps.push_back(std::move(lift));
      return true;
    } catch (const BudgetExceeded& e) {
      trace.stop_reason = StopReason::BudgetExceeded;
      trace.error = e.what();
      return false;
    }
  };
  auto first_constant = [&]() -> std::optional<std::size_t> {
    for (std::size_t i = 0; i < current.size(); ++i)
      if (current.function(i).is_constant()) return i;
    return std::nullopt;
  };

  bool ok = true;
  while (ok && current.size() > opts.stop_at) {
    auto pick = choose_variable(current, opts.max_product);
    if (!pick) {
      trace.stop_reason = StopReason::NoCandidate;
      break;
    }
    ok = step(*pick);
    while (ok && current.size() > 1) {
      auto c = first_constant();
      if (!c) break;
      ok = step(*c);
    }
    if (ok && current.size() <= opts.stop_at) trace.stop_reason = StopReason::StopAt;
  }
  trace.reduced = current;
  return {std::move(current), std::move(trace)};
}

/// Maps a reduced state to the original space: replays the eliminations in
/// reverse, inserting each removed variable at the value of its stored function.
inline State lift(const ReductionTrace& trace, const State& x) {
  if (x.size() != trace.reduced.size()) throw std::invalid_argument("lift: state size does not match reduced network");
  State s = x;
  for (auto it = trace.steps.rbegin(); it != trace.steps.rend(); ++it) {
    State wider = s.inserted(it->position, false);
    wider.set(it->position, it->function.eval([&](VarId v) { return wider[v]; }));
    s = std::move(wider);
  }
  return s;
}

/// Projection of an original state onto the reduced variables.
inline State project(const ReductionTrace& trace, const State& y) {
  if (y.size() != trace.original_names.size()) throw std::invalid_argument("project: state size does not match original network");
  State x(trace.reduced.size());
  for (std::size_t k = 0; k < trace.reduced.size(); ++k) {
    const auto& name = trace.reduced.name(k);
    const auto pos = std::find(trace.original_names.begin(), trace.original_names.end(), name) - trace.original_names.begin();
    x.set(k, y[static_cast<std::size_t>(pos)]);
  }
  return x;
}

}  // namespace bnred
