#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "bool_expr.hpp"
#include "decision_diagram.hpp"
#include "state.hpp"

namespace bnred {

/// Boolean network f = (f_1, ..., f_n). Variable i is identified by its
/// declaration position; update functions are kept in canonical decision
/// form over those positions. Immutable after construction.
class BooleanNetwork {
 public:
  BooleanNetwork(std::vector<std::string> names, const std::vector<BoolExpr>& functions, DdBudget budget = {})
      : names_(std::move(names)) {
    if (functions.size() != names_.size()) throw std::invalid_argument("one update function per variable required");
    functions_.reserve(functions.size());
    for (const auto& e : functions) functions_.push_back(to_diagram(e, budget));
    validate();
  }

  BooleanNetwork(std::vector<std::string> names, std::vector<DecisionDiagram> functions)
      : names_(std::move(names)), functions_(std::move(functions)) {
    if (functions_.size() != names_.size()) throw std::invalid_argument("one update function per variable required");
    validate();
  }

  std::size_t size() const noexcept { return names_.size(); }
  const std::vector<std::string>& names() const noexcept { return names_; }
  const std::string& name(std::size_t i) const { return names_.at(i); }

  std::optional<std::size_t> index_of(std::string_view name) const {
    auto it = std::find(names_.begin(), names_.end(), name);
    if (it == names_.end()) return std::nullopt;
    return static_cast<std::size_t>(it - names_.begin());
  }

  const DecisionDiagram& function(std::size_t i) const { return functions_.at(i); }
  const std::vector<DecisionDiagram>& functions() const noexcept { return functions_; }

  /// Canonical expression of f_i.
  BoolExpr expression(std::size_t i, DdBudget budget = {}) const { return to_expr(functions_.at(i), budget); }

  /// f_i(x).
  bool update(std::size_t i, const State& x) const {
    return functions_[i].eval([&](VarId v) { return x[v]; });
  }

  /// f(x).
  State apply(const State& x) const {
    State y(size());
    for (std::size_t i = 0; i < size(); ++i) y.set(i, update(i, x));
    return y;
  }

  bool is_fixpoint(const State& x) const {
    for (std::size_t i = 0; i < size(); ++i)
      if (update(i, x) != x[i]) return false;
    return true;
  }

  /// Semantic equality: same names and per-component truth tables.
  friend bool operator==(const BooleanNetwork&, const BooleanNetwork&) = default;

 private:
  void validate() const {
    if (names_.empty()) throw std::invalid_argument("a Boolean network needs at least one variable");
    std::unordered_map<std::string_view, std::size_t> seen;
    for (std::size_t i = 0; i < names_.size(); ++i) {
      if (!seen.emplace(names_[i], i).second) throw std::invalid_argument("duplicate variable '" + names_[i] + "'");
    }
    for (std::size_t i = 0; i < functions_.size(); ++i)
      for (VarId v : functions_[i].support())
        if (v >= names_.size())
          throw std::invalid_argument("update function of '" + names_[i] + "' references undeclared variable " +
                                      std::to_string(v));
  }

  std::vector<std::string> names_;
  std::vector<DecisionDiagram> functions_;
};

/// Signed edge of the influence graph G(f).
struct InfluenceEdge {
  std::size_t source;
  std::size_t target;
  int sign;  // +1 or -1
  friend auto operator<=>(const InfluenceEdge&, const InfluenceEdge&) = default;
};

/// Exact signed influence graph: (i, j, s) is present iff flipping x_i can
/// change f_j in direction s. Sorted by (source, target, sign).
inline std::vector<InfluenceEdge> influence_graph(const BooleanNetwork& f, DdBudget budget = {}) {
  std::vector<InfluenceEdge> edges;
  for (std::size_t j = 0; j < f.size(); ++j) {
    for (VarId i : f.function(j).support()) {
      const auto [pos, neg] = dependence_signs(f.function(j), i, budget);
      if (neg) edges.push_back({i, j, -1});
      if (pos) edges.push_back({i, j, +1});
    }
  }
  std::sort(edges.begin(), edges.end());
  return edges;
}

/// Distinct regulators and targets of every variable.
struct Neighbourhood {
  std::vector<std::vector<std::size_t>> regulators;
  std::vector<std::vector<std::size_t>> targets;
};

inline Neighbourhood neighbourhood(const BooleanNetwork& f) {
  Neighbourhood nb;
  nb.regulators.resize(f.size());
  nb.targets.resize(f.size());
  for (std::size_t j = 0; j < f.size(); ++j) {
    for (VarId i : f.function(j).support()) {
      nb.regulators[j].push_back(i);
      nb.targets[i].push_back(j);
    }
  }
  return nb;
}

namespace detail {

/// Uniform integer in [0, bound) from raw 64-bit output, by rejection. Kept
/// explicit because std::uniform_int_distribution is implementation-defined.
inline std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t r;
  do {
    r = rng();
  } while (r >= limit);
  return r % bound;
}

}  // namespace detail

/// Truth table and regulators drawn for one variable of an NK network.
struct NkFunction {
  std::vector<std::size_t> regulators;  // first regulator = most significant input bit
  std::vector<bool> truth_table;        // 2^k entries
};

/// Draws one NK update function: k distinct regulators out of n (self
/// allowed) and a uniformly random truth table.
inline NkFunction random_nk_function(std::mt19937_64& rng, std::size_t n, std::size_t k) {
  std::vector<std::size_t> pool(n);
  std::iota(pool.begin(), pool.end(), 0);
  NkFunction fn;
  for (std::size_t r = 0; r < k; ++r) {
    const std::size_t pick = r + detail::uniform_below(rng, n - r);
    std::swap(pool[r], pool[pick]);
    fn.regulators.push_back(pool[r]);
  }
  std::sort(fn.regulators.begin(), fn.regulators.end());
  fn.truth_table.resize(std::size_t{1} << k);
  for (std::size_t row = 0; row < fn.truth_table.size(); ++row) fn.truth_table[row] = (rng() >> 63) != 0;
  return fn;
}

/// Random NK network with variables x1..xn. The generator is mt19937_64
/// seeded with `seed`; regulators by partial Fisher-Yates, truth-table bits
/// from the top bit of each draw.
inline BooleanNetwork random_nk(std::size_t n, std::size_t k, std::uint64_t seed) {
  if (n == 0) throw std::invalid_argument("random_nk: n must be positive");
  if (k > n) throw std::invalid_argument("random_nk: k must not exceed n");
  std::mt19937_64 rng(seed);
  std::vector<std::string> names;
  std::vector<BoolExpr> functions;
  for (std::size_t i = 0; i < n; ++i) names.push_back("x" + std::to_string(i + 1));
  for (std::size_t i = 0; i < n; ++i) {
    const NkFunction fn = random_nk_function(rng, n, k);
    std::vector<BoolExpr> minterms;
    for (std::size_t row = 0; row < fn.truth_table.size(); ++row) {
      if (!fn.truth_table[row]) continue;
      std::vector<BoolExpr> lits;
      for (std::size_t r = 0; r < k; ++r) {
        const bool bit = (row >> (k - 1 - r)) & 1U;
        BoolExpr v = BoolExpr::var(static_cast<VarId>(fn.regulators[r]));
        lits.push_back(bit ? v : BoolExpr::negate(v));
      }
      minterms.push_back(BoolExpr::conj(std::move(lits)));
    }
    functions.push_back(BoolExpr::disj(std::move(minterms)));
  }
  return BooleanNetwork(std::move(names), functions);
}

}  // namespace bnred
