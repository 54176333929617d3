#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <limits>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "errors.hpp"
#include "network.hpp"
#include "state.hpp"
#include "trap_spaces.hpp"

namespace bnred {

/// Attractor of the asynchronous dynamics, states sorted lexicographically.
struct Attractor {
  std::vector<State> states;

  bool is_steady() const noexcept { return states.size() == 1; }
  const State& representative() const { return states.front(); }
  bool contains(const State& x) const { return std::binary_search(states.begin(), states.end(), x); }
  friend bool operator==(const Attractor&, const Attractor&) = default;
};

/// Asynchronous successors of x: x with component i flipped for each i with
/// f_i(x) != x_i, in ascending i.
inline std::vector<State> successors(const BooleanNetwork& f, const State& x) {
  std::vector<State> out;
  for (std::size_t i = 0; i < f.size(); ++i)
    if (f.update(i, x) != x[i]) out.push_back(x.flipped(i));
  return out;
}

inline constexpr std::size_t kDefaultExplicitLimit = 22;
inline constexpr std::size_t kDefaultReachBudget = 1'000'000;

namespace detail {

// Explicit transition structure of Γ(f) restricted to a trap space. Local
// codes use m bits over the free variables with the first free variable as
// the most significant bit, so code order equals lexicographic state order.
class ExplicitSpace {
 public:
  ExplicitSpace(const BooleanNetwork& f, const Subspace& t, std::size_t limit) : base_(f.size()) {
    free_ = t.free_variables();
    m_ = free_.size();
    if (m_ > limit)
      throw LimitExceeded("explicit state space of " + std::to_string(m_) + " free variables exceeds limit of " +
                          std::to_string(limit));
    for (std::size_t i = 0; i < f.size(); ++i)
      if (t.is_fixed(i)) base_.set(i, *t.get(i));
    build_image(f);
  }

  std::size_t bits() const noexcept { return m_; }
  std::uint32_t state_count() const noexcept { return static_cast<std::uint32_t>(image_.size()); }

  /// XOR mask of the components that can change at `code`.
  std::uint32_t moves(std::uint32_t code) const noexcept { return image_[code] ^ code; }

  State decode(std::uint32_t code) const {
    State x = base_;
    for (std::size_t k = 0; k < m_; ++k) x.set(free_[k], (code >> (m_ - 1 - k)) & 1U);
    return x;
  }

  /// Terminal SCCs, each sorted by code; ordered by smallest member.
  std::vector<std::vector<std::uint32_t>> terminal_sccs() const;

 private:
  void build_image(const BooleanNetwork& f) {
    const std::uint32_t count = std::uint32_t{1} << m_;
    image_.assign(count, 0);
    std::vector<int> local(f.size(), -1);
    for (std::size_t k = 0; k < m_; ++k) local[free_[k]] = static_cast<int>(k);

    for (std::size_t k = 0; k < m_; ++k) {
      const DecisionDiagram& fn = f.function(free_[k]);
      const std::uint32_t out_bit = std::uint32_t{1} << (m_ - 1 - k);
      // Tabulate over the free part of the support, with fixed inputs bound.
      std::vector<std::uint32_t> shifts;
      std::vector<VarId> inputs;
      for (VarId v : fn.support()) {
        if (local[v] >= 0) {
          inputs.push_back(v);
          shifts.push_back(static_cast<std::uint32_t>(m_ - 1 - static_cast<std::size_t>(local[v])));
        }
      }
      const std::size_t width = inputs.size();
      if (width <= 20) {
        std::vector<std::uint8_t> table(std::size_t{1} << width);
        State x = base_;
        for (std::size_t row = 0; row < table.size(); ++row) {
          for (std::size_t r = 0; r < width; ++r) x.set(inputs[r], (row >> r) & 1U);
          table[row] = fn.eval([&](VarId v) { return x[v]; }) ? 1 : 0;
        }
        for (std::uint32_t code = 0; code < count; ++code) {
          std::size_t row = 0;
          for (std::size_t r = 0; r < width; ++r) row |= static_cast<std::size_t>((code >> shifts[r]) & 1U) << r;
          if (table[row]) image_[code] |= out_bit;
        }
      } else {
        for (std::uint32_t code = 0; code < count; ++code) {
          const bool val = fn.eval([&](VarId v) {
            return local[v] >= 0 ? ((code >> (m_ - 1 - static_cast<std::size_t>(local[v]))) & 1U) != 0 : base_[v];
          });
          if (val) image_[code] |= out_bit;
        }
      }
    }
  }

  State base_;
  std::vector<std::size_t> free_;
  std::size_t m_ = 0;
  std::vector<std::uint32_t> image_;
};

inline std::vector<std::vector<std::uint32_t>> ExplicitSpace::terminal_sccs() const {
  constexpr std::uint32_t kUnvisited = std::numeric_limits<std::uint32_t>::max();
  const std::uint32_t count = state_count();
  std::vector<std::uint32_t> index(count, kUnvisited);
  std::vector<std::uint32_t> lowlink(count, 0);
  std::vector<std::uint32_t> component(count, kUnvisited);
  std::vector<std::uint32_t> scc_stack;
  struct Frame {
    std::uint32_t node;
    std::uint32_t pending;  // moves not yet explored, highest bit = lowest variable
  };
  std::vector<Frame> call;
  std::uint32_t next_index = 0;
  std::uint32_t next_component = 0;
  std::vector<std::vector<std::uint32_t>> result;

  for (std::uint32_t root = 0; root < count; ++root) {
    if (index[root] != kUnvisited) continue;
    index[root] = lowlink[root] = next_index++;
    scc_stack.push_back(root);
    call.push_back({root, moves(root)});
    while (!call.empty()) {
      Frame& fr = call.back();
      if (fr.pending != 0) {
        // Ascending component order = descending bit order.
        const std::uint32_t bit = std::uint32_t{1} << (31 - __builtin_clz(fr.pending));
        fr.pending &= ~bit;
        const std::uint32_t succ = fr.node ^ bit;
        if (index[succ] == kUnvisited) {
          index[succ] = lowlink[succ] = next_index++;
          scc_stack.push_back(succ);
          call.push_back({succ, moves(succ)});
        } else if (component[succ] == kUnvisited) {
          lowlink[fr.node] = std::min(lowlink[fr.node], index[succ]);
        }
        continue;
      }
      const std::uint32_t v = fr.node;
      call.pop_back();
      if (!call.empty()) lowlink[call.back().node] = std::min(lowlink[call.back().node], lowlink[v]);
      if (lowlink[v] != index[v]) continue;

      std::vector<std::uint32_t> members;
      std::uint32_t w;
      do {
        w = scc_stack.back();
        scc_stack.pop_back();
        component[w] = next_component;
        members.push_back(w);
      } while (w != v);
      // Terminal iff no move leaves the component.
      bool terminal = true;
      for (std::uint32_t s : members) {
        std::uint32_t mv = moves(s);
        while (mv != 0 && terminal) {
          const std::uint32_t bit = mv & (~mv + 1);
          mv &= ~bit;
          if (component[s ^ bit] != next_component) terminal = false;
        }
        if (!terminal) break;
      }
      ++next_component;
      if (terminal) {
        std::sort(members.begin(), members.end());
        result.push_back(std::move(members));
      }
    }
  }
  std::sort(result.begin(), result.end(), [](const auto& a, const auto& b) { return a.front() < b.front(); });
  return result;
}

inline std::vector<Attractor> attractors_of(const ExplicitSpace& space) {
  std::vector<Attractor> out;
  for (const auto& scc : space.terminal_sccs()) {
    Attractor a;
    a.states.reserve(scc.size());
    for (std::uint32_t code : scc) a.states.push_back(space.decode(code));
    out.push_back(std::move(a));
  }
  return out;
}

}  // namespace detail

/// All attractors of Γ(f) as terminal SCCs of the explicit graph, ordered by
/// smallest member. Throws LimitExceeded when n > limit.
inline std::vector<Attractor> attractors_explicit(const BooleanNetwork& f,
                                                  std::size_t limit = kDefaultExplicitLimit) {
  return detail::attractors_of(detail::ExplicitSpace(f, Subspace(f.size()), limit));
}

/// Attractors of f inside the trap space t. Throws std::invalid_argument if t
/// is not a trap space, LimitExceeded if t has more than `limit` free variables.
inline std::vector<Attractor> attractors_in_subspace(const BooleanNetwork& f, const Subspace& t,
                                                     std::size_t limit = kDefaultExplicitLimit) {
  if (t.size() != f.size()) throw std::invalid_argument("subspace size does not match network");
  if (!is_trap_space(f, t)) throw std::invalid_argument("subspace " + t.to_string() + " is not a trap space");
  return detail::attractors_of(detail::ExplicitSpace(f, t, limit));
}

struct ReachVerdict {
  enum class Kind { Reached, NotReached, BudgetExhausted };
  Kind kind;
  std::size_t target = 0;    // index into targets when Reached
  std::size_t explored = 0;  // states visited
};

/// Breadth-first search from x, successors in ascending component order, for
/// the first state satisfying `is_target` (which returns the target index).
template <class Target>
ReachVerdict reach_if(const BooleanNetwork& f, const State& x, Target&& is_target,
                      std::size_t budget = kDefaultReachBudget) {
  if (budget == 0) throw std::invalid_argument("reach_targets: budget must be positive");
  std::unordered_set<State, StateHash> seen{x};
  std::deque<State> queue{x};
  while (!queue.empty()) {
    State s = std::move(queue.front());
    queue.pop_front();
    if (std::optional<std::size_t> k = is_target(s)) return {ReachVerdict::Kind::Reached, *k, seen.size()};
    for (std::size_t i = 0; i < f.size(); ++i) {
      if (f.update(i, s) == s[i]) continue;
      State next = s.flipped(i);
      if (seen.contains(next)) continue;
      if (seen.size() >= budget) return {ReachVerdict::Kind::BudgetExhausted, 0, seen.size()};
      seen.insert(next);
      queue.push_back(std::move(next));
    }
  }
  return {ReachVerdict::Kind::NotReached, 0, seen.size()};
}

/// Breadth-first search from x for a state inside any of `targets`.
inline ReachVerdict reach_targets(const BooleanNetwork& f, const State& x, const std::vector<Subspace>& targets,
                                  std::size_t budget = kDefaultReachBudget) {
  return reach_if(
      f, x,
      [&](const State& s) -> std::optional<std::size_t> {
        for (std::size_t k = 0; k < targets.size(); ++k)
          if (targets[k].contains(s)) return k;
        return std::nullopt;
      },
      budget);
}

struct MembershipVerdict {
  enum class Kind { Yes, No, BudgetExhausted };
  Kind kind;
  std::optional<Attractor> attractor;  // set when Yes
  std::size_t explored = 0;
};

/// Decides whether x lies in an attractor: x does iff every state reachable
/// from x can reach x back, in which case the forward set is the attractor.
inline MembershipVerdict is_in_attractor(const BooleanNetwork& f, const State& x,
                                         std::size_t budget = kDefaultReachBudget) {
  if (budget == 0) throw std::invalid_argument("is_in_attractor: budget must be positive");
  std::vector<State> order{x};
  std::unordered_map<State, std::size_t, StateHash> id{{x, 0}};
  for (std::size_t head = 0; head < order.size(); ++head) {
    const State s = order[head];
    for (std::size_t i = 0; i < f.size(); ++i) {
      if (f.update(i, s) == s[i]) continue;
      State next = s.flipped(i);
      if (id.contains(next)) continue;
      if (order.size() >= budget) return {MembershipVerdict::Kind::BudgetExhausted, std::nullopt, order.size()};
      id.emplace(next, order.size());
      order.push_back(std::move(next));
    }
  }
  // Backward search from x within the forward set.
  std::vector<char> back(order.size(), 0);
  back[0] = 1;
  std::vector<std::size_t> stack{0};
  std::size_t reached = 1;
  while (!stack.empty()) {
    const State y = order[stack.back()];
    stack.pop_back();
    for (std::size_t i = 0; i < f.size(); ++i) {
      State p = y.flipped(i);
      auto it = id.find(p);
      if (it == id.end() || back[it->second]) continue;
      if (f.update(i, p) == y[i]) {  // p -> y is a transition
        back[it->second] = 1;
        ++reached;
        stack.push_back(it->second);
      }
    }
  }
  if (reached != order.size()) return {MembershipVerdict::Kind::No, std::nullopt, order.size()};
  const std::size_t explored = order.size();
  Attractor a{std::move(order)};
  std::sort(a.states.begin(), a.states.end());
  return {MembershipVerdict::Kind::Yes, std::move(a), explored};
}

/// Graphviz rendering of Γ(f); nodes are labelled by their 0/1 strings.
inline std::string stg_to_dot(const BooleanNetwork& f, std::size_t limit = 10) {
  if (f.size() > limit)
    throw LimitExceeded("state transition graph export is limited to " + std::to_string(limit) + " variables");
  std::string out = "digraph stg {\n";
  const std::uint64_t count = std::uint64_t{1} << f.size();
  for (std::uint64_t c = 0; c < count; ++c) out += "  \"" + State::from_code(c, f.size()).to_string() + "\";\n";
  for (std::uint64_t c = 0; c < count; ++c) {
    const State x = State::from_code(c, f.size());
    for (const State& y : successors(f, x)) out += "  \"" + x.to_string() + "\" -> \"" + y.to_string() + "\";\n";
  }
  out += "}\n";
  return out;
}

}  // namespace bnred
