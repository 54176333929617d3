#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <cstdint>
#include <vector>

#include "errors.hpp"
#include "network.hpp"
#include "state.hpp"

namespace bnred {

/// f_i restricted to t, if constant there.
inline std::optional<bool> constant_on(const BooleanNetwork& f, std::size_t i, const Subspace& t) {
  return f.function(i).constant_under([&](VarId v) { return t.get(v); });
}

/// t is a trap space iff every fixed variable's update function is constant
/// on t and equal to the fixed value.
inline bool is_trap_space(const BooleanNetwork& f, const Subspace& t) {
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (!t.is_fixed(i)) continue;
    if (constant_on(f, i, t) != t.get(i)) return false;
  }
  return true;
}

/// Smallest trap space containing t: frees fixed variables whose update
/// function is not constantly their value until nothing changes.
inline Subspace percolation_closure(const BooleanNetwork& f, Subspace t) {
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < f.size(); ++i) {
      if (t.is_fixed(i) && constant_on(f, i, t) != t.get(i)) {
        t.free(i);
        changed = true;
      }
    }
  }
  return t;
}

struct TrapSpaceOptions {
  std::size_t max_expansions = 10'000'000;
};

inline void sort_subspaces(std::vector<Subspace>& v) {
  std::sort(v.begin(), v.end(), [](const Subspace& a, const Subspace& b) { return fixed_set_less(a, b); });
}

/// Keeps the inclusion-minimal elements; input may contain duplicates.
inline std::vector<Subspace> inclusion_minimal(std::vector<Subspace> spaces) {
  // Fewer free variables first so a candidate only needs checking against kept ones.
  std::sort(spaces.begin(), spaces.end(), [](const Subspace& a, const Subspace& b) {
    if (a.free_count() != b.free_count()) return a.free_count() < b.free_count();
    return a.to_string() < b.to_string();
  });
  spaces.erase(std::unique(spaces.begin(), spaces.end()), spaces.end());
  std::vector<Subspace> kept;
  for (const auto& t : spaces) {
    const bool dominated = std::any_of(kept.begin(), kept.end(), [&](const Subspace& k) { return t.contains(k); });
    if (!dominated) kept.push_back(t);
  }
  sort_subspaces(kept);
  return kept;
}

namespace detail {

// Search over value literals. For each variable, T records which values are
// known to occur in every minimal trap space below the current node and F
// which values are excluded. A value c is added for x_i whenever f_i can
// output c with every regulator restricted to its T values. Branching picks
// a variable with no value yet and tries "1 occurs" or "1 excluded, 0 occurs".
// A node whose T already covers a found trap space cannot lead to a new one.
class MinTrapSpaceSearch {
 public:
  MinTrapSpaceSearch(const BooleanNetwork& f, TrapSpaceOptions opts) : f_(f), opts_(opts), targets_(f.size()) {
    for (std::size_t i = 0; i < f.size(); ++i)
      for (VarId v : f.function(i).support()) targets_[v].push_back(i);
  }

  std::vector<Subspace> run() {
    const std::size_t n = f_.size();
    struct Node {
      std::vector<std::uint8_t> t, forbidden;
      std::vector<std::size_t> dirty;
    };
    std::vector<std::size_t> all(n);
    for (std::size_t i = 0; i < n; ++i) all[i] = i;
    std::vector<Node> stack{{std::vector<std::uint8_t>(n, 0), std::vector<std::uint8_t>(n, 0), std::move(all)}};
    while (!stack.empty()) {
      Node node = std::move(stack.back());
      stack.pop_back();
      if (++expansions_ > opts_.max_expansions)
        throw BudgetExceeded("minimal trap space search exceeded " + std::to_string(opts_.max_expansions) +
                             " expansions");
      if (!propagate(node.t, node.forbidden, node.dirty)) continue;
      if (covers_found(node.t)) continue;

      // Undecided variable regulating the most undecided variables.
      std::optional<std::size_t> branch;
      std::size_t best = 0;
      for (std::size_t i = 0; i < n; ++i) {
        if (node.t[i] != 0) continue;
        std::size_t score = 0;
        for (std::size_t k : targets_[i]) score += node.t[k] == 0;
        if (!branch || score > best) {
          branch = i;
          best = score;
        }
      }
      if (!branch) {
        found_.push_back(node.t);
        continue;
      }
      const std::size_t i = *branch;
      Node zero{node.t, node.forbidden, {i}};
      zero.t[i] = 1;
      zero.forbidden[i] = 2;
      node.t[i] = 2;
      node.dirty = {i};
      stack.push_back(std::move(zero));
      stack.push_back(std::move(node));
    }

    std::vector<Subspace> out;
    out.reserve(found_.size());
    for (const auto& t : found_) {
      Subspace s(n);
      for (std::size_t i = 0; i < n; ++i)
        if (t[i] != 3) s.fix(i, t[i] == 2);
      out.push_back(std::move(s));
    }
    return inclusion_minimal(std::move(out));
  }

  std::size_t expansions() const noexcept { return expansions_; }

 private:
  // Closes t under derivation starting from the functions of `dirty` and the
  // targets of `dirty`. False on a conflict with `forbidden`.
  bool propagate(std::vector<std::uint8_t>& t, const std::vector<std::uint8_t>& forbidden,
                 const std::vector<std::size_t>& dirty) {
    std::vector<std::size_t> queue;
    std::vector<char> queued(f_.size(), 0);
    const auto enqueue = [&](std::size_t i) {
      if (!queued[i]) {
        queued[i] = 1;
        queue.push_back(i);
      }
    };
    for (std::size_t j : dirty) {
      enqueue(j);
      for (std::size_t i : targets_[j]) enqueue(i);
    }
    while (!queue.empty()) {
      const std::size_t i = queue.back();
      queue.pop_back();
      queued[i] = 0;
      if (t[i] == 3) continue;
      const unsigned out = f_.function(i).reachable_outputs([&](VarId v) { return t[v]; });
      const unsigned added = out & ~t[i] & 3U;
      if (added == 0) continue;
      if (added & forbidden[i]) return false;
      t[i] = static_cast<std::uint8_t>(t[i] | added);
      for (std::size_t k : targets_[i]) enqueue(k);
    }
    return true;
  }

  bool covers_found(const std::vector<std::uint8_t>& t) const {
    return std::any_of(found_.begin(), found_.end(), [&](const std::vector<std::uint8_t>& m) {
      for (std::size_t i = 0; i < t.size(); ++i)
        if ((m[i] & ~t[i]) != 0) return false;
      return true;
    });
  }

  const BooleanNetwork& f_;
  TrapSpaceOptions opts_;
  std::vector<std::vector<std::size_t>> targets_;
  std::size_t expansions_ = 0;
  std::vector<std::vector<std::uint8_t>> found_;
};

}  // namespace detail

/// All inclusion-minimal trap spaces, ordered by (fixed-variable set, values).
/// Throws BudgetExceeded past `opts.max_expansions` search nodes.
inline std::vector<Subspace> min_trap_spaces(const BooleanNetwork& f, TrapSpaceOptions opts = {}) {
  return detail::MinTrapSpaceSearch(f, opts).run();
}

/// Brute-force reference: all 3^n subspaces, trap property checked state by
/// state through direct evaluation. Limited to n <= 10.
inline std::vector<Subspace> min_trap_spaces_oracle(const BooleanNetwork& f) {
  const std::size_t n = f.size();
  if (n > 10) throw LimitExceeded("trap space oracle is limited to 10 variables");
  std::size_t total = 1;
  for (std::size_t i = 0; i < n; ++i) total *= 3;

  std::vector<Subspace> traps;
  for (std::size_t code = 0; code < total; ++code) {
    Subspace t(n);
    std::size_t c = code;
    for (std::size_t i = 0; i < n; ++i, c /= 3)
      if (c % 3 != 2) t.fix(i, c % 3 == 1);
    const auto free = t.free_variables();
    bool trap = true;
    for (std::size_t m = 0; trap && m < (std::size_t{1} << free.size()); ++m) {
      State x(n);
      for (std::size_t i = 0; i < n; ++i)
        if (t.is_fixed(i)) x.set(i, *t.get(i));
      for (std::size_t k = 0; k < free.size(); ++k) x.set(free[k], (m >> k) & 1U);
      for (std::size_t i = 0; i < n; ++i) {
        if (t.is_fixed(i) && f.update(i, x) != x[i]) {
          trap = false;
          break;
        }
      }
    }
    if (trap) traps.push_back(t);
  }
  return inclusion_minimal(std::move(traps));
}

}  // namespace bnred
