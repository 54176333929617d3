#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "bool_expr.hpp"
#include "errors.hpp"

namespace bnred {

/// Node cap for a single decision-diagram construction.
struct DdBudget {
  std::size_t max_nodes = 1'000'000;
};

namespace detail {

struct DdNode {
  VarId var;
  std::uint32_t lo;
  std::uint32_t hi;
  friend bool operator==(const DdNode&, const DdNode&) = default;
};

inline constexpr VarId kTerminalVar = std::numeric_limits<VarId>::max();
inline constexpr std::uint32_t kFalse = 0;
inline constexpr std::uint32_t kTrue = 1;

class DdBuilder;

}  // namespace detail

/// Reduced ordered decision diagram of a single Boolean function, ordered by
/// ascending VarId. Self-contained and immutable: node 0 is the false
/// terminal, node 1 the true terminal, internal nodes are stored in the
/// post-order of a lo-first traversal from the root. Because of that layout two
/// diagrams are structurally equal iff they denote the same function.
class DecisionDiagram {
 public:
  DecisionDiagram() : DecisionDiagram(false) {}
  explicit DecisionDiagram(bool value) : nodes_(terminals()), root_(value ? detail::kTrue : detail::kFalse) {}

  static DecisionDiagram variable(VarId v) {
    DecisionDiagram d;
    d.nodes_.push_back({v, detail::kFalse, detail::kTrue});
    d.root_ = 2;
    return d;
  }

  bool is_constant() const noexcept { return root_ < 2; }
  /// nullopt unless constant.
  std::optional<bool> constant_value() const noexcept {
    if (!is_constant()) return std::nullopt;
    return root_ == detail::kTrue;
  }
  std::size_t node_count() const noexcept { return nodes_.size(); }

  template <class Get>
  bool eval(Get&& get) const {
    std::uint32_t u = root_;
    while (u >= 2) {
      const auto& n = nodes_[u];
      u = get(n.var) ? n.hi : n.lo;
    }
    return u == detail::kTrue;
  }

  /// Semantic support, ascending. In a reduced diagram every variable that
  /// labels a node is essential.
  std::vector<VarId> support() const {
    std::vector<VarId> out;
    for (std::size_t i = 2; i < nodes_.size(); ++i) out.push_back(nodes_[i].var);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

  bool depends_on(VarId v) const {
    for (std::size_t i = 2; i < nodes_.size(); ++i)
      if (nodes_[i].var == v) return true;
    return false;
  }

  /// Decides whether the function is constant when the variables with
  /// `fixed(v)` engaged are set to that value and all others range freely.
  /// Returns the constant, or nullopt if both outputs are reachable.
  template <class Fixed>
  std::optional<bool> constant_under(Fixed&& fixed) const {
    if (is_constant()) return root_ == detail::kTrue;
    bool seen[2] = {false, false};
    std::vector<std::uint8_t> visited(nodes_.size(), 0);
    std::vector<std::uint32_t> stack{root_};
    while (!stack.empty()) {
      const std::uint32_t u = stack.back();
      stack.pop_back();
      if (u < 2) {
        seen[u] = true;
        if (seen[0] && seen[1]) return std::nullopt;
        continue;
      }
      if (visited[u]) continue;
      visited[u] = 1;
      const auto& n = nodes_[u];
      const std::optional<bool> val = fixed(n.var);
      if (!val || !*val) stack.push_back(n.lo);
      if (!val || *val) stack.push_back(n.hi);
    }
    return seen[1];
  }

  /// Outputs reachable when each variable v ranges over the values in
  /// `allowed(v)` (bit 0: value 0, bit 1: value 1). Same bit layout in the result.
  template <class Allowed>
  unsigned reachable_outputs(Allowed&& allowed) const {
    if (is_constant()) return root_ == detail::kTrue ? 2U : 1U;
    // Children precede parents in the node array.
    std::vector<std::uint8_t> out(nodes_.size(), 0);
    out[detail::kFalse] = 1;
    out[detail::kTrue] = 2;
    for (std::size_t u = 2; u < nodes_.size(); ++u) {
      const auto& n = nodes_[u];
      const unsigned a = allowed(n.var);
      out[u] = static_cast<std::uint8_t>(((a & 1U) ? out[n.lo] : 0U) | ((a & 2U) ? out[n.hi] : 0U));
    }
    return out[root_];
  }

  /// Relabels variables through a strictly increasing map (order preserving).
  template <class Map>
  DecisionDiagram relabeled(Map&& map) const {
    DecisionDiagram d = *this;
    for (std::size_t i = 2; i < d.nodes_.size(); ++i) d.nodes_[i].var = map(d.nodes_[i].var);
    return d;
  }

  friend bool operator==(const DecisionDiagram&, const DecisionDiagram&) = default;

 private:
  friend class detail::DdBuilder;

  static std::vector<detail::DdNode> terminals() {
    return {{detail::kTerminalVar, 0, 0}, {detail::kTerminalVar, 1, 1}};
  }

  std::vector<detail::DdNode> nodes_;
  std::uint32_t root_;
};

namespace detail {

struct PairHash {
  std::size_t operator()(std::uint64_t k) const noexcept {
    k ^= k >> 33;
    k *= 0xff51afd7ed558ccdULL;
    k ^= k >> 33;
    return static_cast<std::size_t>(k);
  }
};

inline std::uint64_t pair_key(std::uint32_t a, std::uint32_t b) { return (std::uint64_t{a} << 32) | b; }

struct NodeKeyHash {
  std::size_t operator()(const DdNode& n) const noexcept {
    return PairHash{}(pair_key(n.lo, n.hi) ^ (std::uint64_t{n.var} * 0x9e3779b97f4a7c15ULL));
  }
};

/// A literal of a product term: variable and required polarity.
struct Literal {
  VarId var;
  bool positive;
};
using Cube = std::vector<Literal>;

/// Scratch manager for building and combining diagrams. One builder serves a
/// single operation and is then discarded.
class DdBuilder {
 public:
  explicit DdBuilder(DdBudget budget = {}) : budget_(budget) {
    nodes_.push_back({kTerminalVar, 0, 0});
    nodes_.push_back({kTerminalVar, 1, 1});
  }

  VarId var_of(std::uint32_t u) const { return nodes_[u].var; }
  std::uint32_t lo(std::uint32_t u) const { return nodes_[u].lo; }
  std::uint32_t hi(std::uint32_t u) const { return nodes_[u].hi; }

  std::uint32_t mk(VarId v, std::uint32_t lo, std::uint32_t hi) {
    if (lo == hi) return lo;
    const DdNode key{v, lo, hi};
    auto it = unique_.find(key);
    if (it != unique_.end()) return it->second;
    if (nodes_.size() >= budget_.max_nodes)
      throw BudgetExceeded("decision diagram exceeded node budget of " + std::to_string(budget_.max_nodes));
    const auto id = static_cast<std::uint32_t>(nodes_.size());
    nodes_.push_back(key);
    unique_.emplace(key, id);
    return id;
  }

  std::uint32_t import(const DecisionDiagram& d) {
    std::vector<std::uint32_t> map(d.nodes_.size());
    map[0] = kFalse;
    map[1] = kTrue;
    // Internal nodes are in post-order, so children precede parents.
    for (std::size_t i = 2; i < d.nodes_.size(); ++i) {
      const auto& n = d.nodes_[i];
      map[i] = mk(n.var, map[n.lo], map[n.hi]);
    }
    return map[d.root_];
  }

  DecisionDiagram export_diagram(std::uint32_t root) const {
    DecisionDiagram d;
    if (root < 2) {
      d.root_ = root;
      return d;
    }
    std::unordered_map<std::uint32_t, std::uint32_t> index;
    index.emplace(kFalse, kFalse);
    index.emplace(kTrue, kTrue);
    // Iterative post-order, lo before hi.
    std::vector<std::pair<std::uint32_t, bool>> stack{{root, false}};
    while (!stack.empty()) {
      auto [u, expanded] = stack.back();
      stack.pop_back();
      if (index.count(u)) continue;
      const auto& n = nodes_[u];
      if (expanded) {
        index.emplace(u, static_cast<std::uint32_t>(d.nodes_.size()));
        d.nodes_.push_back({n.var, index.at(n.lo), index.at(n.hi)});
        continue;
      }
      stack.push_back({u, true});
      if (!index.count(n.hi)) stack.push_back({n.hi, false});
      if (!index.count(n.lo)) stack.push_back({n.lo, false});
    }
    d.root_ = index.at(root);
    return d;
  }

  std::uint32_t var(VarId v) { return mk(v, kFalse, kTrue); }

  std::uint32_t negate(std::uint32_t u) {
    if (u < 2) return u ^ 1U;
    auto it = not_cache_.find(u);
    if (it != not_cache_.end()) return it->second;
    const DdNode n = nodes_[u];
    const std::uint32_t r = mk(n.var, negate(n.lo), negate(n.hi));
    not_cache_.emplace(u, r);
    return r;
  }

  std::uint32_t conj(std::uint32_t a, std::uint32_t b) {
    if (a == kFalse || b == kFalse) return kFalse;
    if (a == kTrue) return b;
    if (b == kTrue || a == b) return a;
    if (a > b) std::swap(a, b);
    const auto key = pair_key(a, b);
    auto it = and_cache_.find(key);
    if (it != and_cache_.end()) return it->second;
    const VarId v = std::min(var_of(a), var_of(b));
    const auto [a0, a1] = cofactors(a, v);
    const auto [b0, b1] = cofactors(b, v);
    const std::uint32_t lo_r = conj(a0, b0);
    const std::uint32_t hi_r = conj(a1, b1);
    const std::uint32_t r = mk(v, lo_r, hi_r);
    and_cache_.emplace(key, r);
    return r;
  }

  std::uint32_t disj(std::uint32_t a, std::uint32_t b) { return negate(conj(negate(a), negate(b))); }

  std::uint32_t ite(std::uint32_t c, std::uint32_t t, std::uint32_t e) {
    return disj(conj(c, t), conj(negate(c), e));
  }

  /// Cofactor of u with variable v set to `value`.
  std::uint32_t restrict(std::uint32_t u, VarId v, bool value) {
    std::unordered_map<std::uint32_t, std::uint32_t> memo;
    return restrict_rec(u, v, value, memo);
  }

  std::uint32_t from_expr(const BoolExpr& e) {
    using K = BoolExpr::Kind;
    switch (e.kind()) {
      case K::Const: return e.value() ? kTrue : kFalse;
      case K::Var: return var(e.var_id());
      case K::Not: return negate(from_expr(e.children()[0]));
      case K::And: {
        std::uint32_t r = kTrue;
        for (const auto& c : e.children()) {
          r = conj(r, from_expr(c));
          if (r == kFalse) break;
        }
        return r;
      }
      case K::Or: {
        std::uint32_t r = kFalse;
        for (const auto& c : e.children()) {
          r = disj(r, from_expr(c));
          if (r == kTrue) break;
        }
        return r;
      }
    }
    return kFalse;
  }

  /// Irredundant sum-of-products cover of f (Minato-Morreale with lower =
  /// upper = f). The cube list depends only on the function and the order.
  std::vector<Cube> isop(std::uint32_t f) {
    std::vector<Cube> cover;
    isop_rec(f, f, cover);
    return cover;
  }

 private:
  std::pair<std::uint32_t, std::uint32_t> cofactors(std::uint32_t u, VarId v) const {
    if (u < 2 || nodes_[u].var != v) return {u, u};
    return {nodes_[u].lo, nodes_[u].hi};
  }

  std::uint32_t restrict_rec(std::uint32_t u, VarId v, bool value,
                             std::unordered_map<std::uint32_t, std::uint32_t>& memo) {
    if (u < 2 || nodes_[u].var > v) return u;
    if (nodes_[u].var == v) return value ? nodes_[u].hi : nodes_[u].lo;
    auto it = memo.find(u);
    if (it != memo.end()) return it->second;
    const DdNode n = nodes_[u];
    const std::uint32_t lo_r = restrict_rec(n.lo, v, value, memo);
    const std::uint32_t hi_r = restrict_rec(n.hi, v, value, memo);
    const std::uint32_t r = mk(n.var, lo_r, hi_r);
    memo.emplace(u, r);
    return r;
  }

  // Appends the cubes of the cover to `out` and returns the diagram of the cover.
  std::uint32_t isop_rec(std::uint32_t lower, std::uint32_t upper, std::vector<Cube>& out) {
    if (lower == kFalse) return kFalse;
    if (upper == kTrue) {
      out.emplace_back();
      return kTrue;
    }
    const auto key = pair_key(lower, upper);
    if (auto it = isop_cache_.find(key); it != isop_cache_.end()) {
      out.insert(out.end(), it->second.second.begin(), it->second.second.end());
      return it->second.first;
    }
    VarId v = var_of(lower);
    if (upper >= 2) v = std::min(v, var_of(upper));
    const auto [l0, l1] = cofactors(lower, v);
    const auto [u0, u1] = cofactors(upper, v);

    std::vector<Cube> c0, c1, cs;
    const std::uint32_t r0 = isop_rec(conj(l0, negate(u1)), u0, c0);
    const std::uint32_t r1 = isop_rec(conj(l1, negate(u0)), u1, c1);
    const std::uint32_t l_star = disj(conj(l0, negate(r0)), conj(l1, negate(r1)));
    const std::uint32_t rs = isop_rec(l_star, conj(u0, u1), cs);

    std::vector<Cube> cover;
    cover.reserve(c0.size() + c1.size() + cs.size());
    for (auto& c : c0) {
      c.insert(c.begin(), Literal{v, false});
      cover.push_back(std::move(c));
    }
    for (auto& c : c1) {
      c.insert(c.begin(), Literal{v, true});
      cover.push_back(std::move(c));
    }
    for (auto& c : cs) cover.push_back(std::move(c));

    const std::uint32_t r = disj(mk(v, r0, r1), rs);
    out.insert(out.end(), cover.begin(), cover.end());
    isop_cache_.emplace(key, std::make_pair(r, std::move(cover)));
    return r;
  }

  DdBudget budget_;
  std::vector<DdNode> nodes_;
  std::unordered_map<DdNode, std::uint32_t, NodeKeyHash> unique_;
  std::unordered_map<std::uint32_t, std::uint32_t> not_cache_;
  std::unordered_map<std::uint64_t, std::uint32_t, PairHash> and_cache_;
  std::unordered_map<std::uint64_t, std::pair<std::uint32_t, std::vector<Cube>>, PairHash> isop_cache_;
};

}  // namespace detail

// ---------------------------------------------------------------------------
// Diagram-level operations.

inline DecisionDiagram to_diagram(const BoolExpr& e, DdBudget budget = {}) {
  detail::DdBuilder b(budget);
  return b.export_diagram(b.from_expr(e));
}

inline DecisionDiagram negate(const DecisionDiagram& f, DdBudget budget = {}) {
  detail::DdBuilder b(budget);
  return b.export_diagram(b.negate(b.import(f)));
}

inline DecisionDiagram restrict(const DecisionDiagram& f, VarId v, bool value, DdBudget budget = {}) {
  detail::DdBuilder b(budget);
  return b.export_diagram(b.restrict(b.import(f), v, value));
}

/// f with variable v replaced by the function g.
inline DecisionDiagram compose(const DecisionDiagram& f, VarId v, const DecisionDiagram& g,
                               DdBudget budget = {}) {
  if (!f.depends_on(v)) return f;
  detail::DdBuilder b(budget);
  const std::uint32_t fu = b.import(f);
  const std::uint32_t gu = b.import(g);
  return b.export_diagram(b.ite(gu, b.restrict(fu, v, true), b.restrict(fu, v, false)));
}

/// Signs of the dependence of f on v: {exists increasing flip, exists decreasing flip}.
inline std::pair<bool, bool> dependence_signs(const DecisionDiagram& f, VarId v, DdBudget budget = {}) {
  if (!f.depends_on(v)) return {false, false};
  detail::DdBuilder b(budget);
  const std::uint32_t fu = b.import(f);
  const std::uint32_t f0 = b.restrict(fu, v, false);
  const std::uint32_t f1 = b.restrict(fu, v, true);
  const bool positive = b.conj(b.negate(f0), f1) != detail::kFalse;
  const bool negative = b.conj(f0, b.negate(f1)) != detail::kFalse;
  return {positive, negative};
}

/// Canonical expression of a diagram: an irredundant sum of products, cubes
/// and literals in a fixed order determined by the function alone.
inline BoolExpr to_expr(const DecisionDiagram& f, DdBudget budget = {}) {
  if (auto c = f.constant_value()) return BoolExpr::constant(*c);
  detail::DdBuilder b(budget);
  const auto cubes = b.isop(b.import(f));
  std::vector<BoolExpr> terms;
  terms.reserve(cubes.size());
  for (const auto& cube : cubes) {
    std::vector<BoolExpr> lits;
    lits.reserve(cube.size());
    for (const auto& l : cube) {
      BoolExpr x = BoolExpr::var(l.var);
      lits.push_back(l.positive ? x : BoolExpr::negate(x));
    }
    terms.push_back(BoolExpr::conj(std::move(lits)));
  }
  return BoolExpr::disj(std::move(terms));
}

// ---------------------------------------------------------------------------
// Expression-level canonicalization.

/// Canonical simplification: equal truth tables give structurally equal
/// results and only essential variables remain.
inline BoolExpr simplify(const BoolExpr& e, DdBudget budget = {}) { return to_expr(to_diagram(e, budget), budget); }

/// Semantic support: variables whose flip changes the value for some input.
inline std::vector<VarId> support(const BoolExpr& e, DdBudget budget = {}) { return to_diagram(e, budget).support(); }

inline bool equivalent(const BoolExpr& a, const BoolExpr& b, DdBudget budget = {}) {
  return to_diagram(a, budget) == to_diagram(b, budget);
}

}  // namespace bnred
