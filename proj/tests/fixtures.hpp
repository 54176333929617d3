#pragma once

// Shared test networks and brute-force oracles. The oracles work on explicit
// transition tables built state by state and share no code with the library's
// SCC, trap-space or reduction routines.

#include <algorithm>
#include <cstdint>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "bnred/bnred.hpp"

namespace fixtures {

inline const char* const kF = "x1, x1 & x2 | !x1 & !x2\nx2, 0\n";
inline const char* const kG =
    "x1, x2 & !x1 | x1 & !x2\n"
    "x2, x1 & (x2 & x3 | !x2 & !x3) | !x1 & (x2 & !x3 | x3 & !x2)\n"
    "x3, x2 & x3 | !x2 & !x3\n";
inline const char* const kH = "x1, x1 & !x2 | !x1 & x2\nx2, x1 & !x2 | !x1 & x2\n";
inline const char* const kFhat =
    "x1, !x1 & !x2 | !x1 & !x3 | x2 & !x3\n"
    "x2, x1 & !x2 & !x3 | !x1 & !x2 & x3\n"
    "x3, x1 & !x2 | !x1 & x2\n";
inline const char* const kGhat =
    "x1, x2 & !x4 | !x2 & x4\n"
    "x2, x4 & (x2 & x3 | !x2 & !x3) | !x4 & (x2 & !x3 | x3 & !x2)\n"
    "x3, x2 & x3 | !x2 & !x3\n"
    "x4, x1\n";
inline const char* const kHhat = "x1, x1 & !x3 | x2 & !x3\nx2, x1 & !x3 | x2 & !x3\nx3, x1 & x2\n";

inline bnred::BooleanNetwork f() { return bnred::parse_bnet(kF); }
inline bnred::BooleanNetwork g() { return bnred::parse_bnet(kG); }
inline bnred::BooleanNetwork h() { return bnred::parse_bnet(kH); }
inline bnred::BooleanNetwork fhat() { return bnred::parse_bnet(kFhat); }
inline bnred::BooleanNetwork ghat() { return bnred::parse_bnet(kGhat); }
inline bnred::BooleanNetwork hhat() { return bnred::parse_bnet(kHhat); }

inline bnred::State st(const char* bits) { return bnred::State::from_string(bits); }
inline bnred::Subspace sub(const char* text) { return bnred::Subspace::from_string(text); }

inline std::vector<std::string> strings(const std::vector<bnred::State>& v) {
  std::vector<std::string> out;
  for (const auto& s : v) out.push_back(s.to_string());
  return out;
}

inline std::vector<std::string> strings(const std::vector<bnred::Subspace>& v) {
  std::vector<std::string> out;
  for (const auto& s : v) out.push_back(s.to_string());
  return out;
}

/// Random K=2 corpus member: (n, seed) determined by index.
struct CorpusEntry {
  std::size_t n;
  std::uint64_t seed;
};

inline std::vector<CorpusEntry> corpus(std::size_t count, std::vector<std::size_t> sizes, std::uint64_t base_seed) {
  std::vector<CorpusEntry> out;
  for (std::size_t i = 0; i < count; ++i) out.push_back({sizes[i % sizes.size()], base_seed + i});
  return out;
}

// ---------------------------------------------------------------------------
// Brute-force oracles. States are integer codes with variable 0 as the most
// significant bit, matching State::from_code.

inline std::vector<std::uint32_t> image_table(const bnred::BooleanNetwork& net) {
  const std::size_t n = net.size();
  std::vector<std::uint32_t> image(std::size_t{1} << n);
  for (std::uint32_t c = 0; c < image.size(); ++c) {
    const auto x = bnred::State::from_code(c, n);
    std::uint32_t y = 0;
    for (std::size_t i = 0; i < n; ++i)
      if (net.update(i, x)) y |= 1U << (n - 1 - i);
    image[c] = y;
  }
  return image;
}

inline std::vector<std::uint32_t> forward_set(const std::vector<std::uint32_t>& image, std::size_t n, std::uint32_t x) {
  std::vector<char> seen(image.size(), 0);
  std::vector<std::uint32_t> stack{x}, out;
  seen[x] = 1;
  while (!stack.empty()) {
    const auto s = stack.back();
    stack.pop_back();
    out.push_back(s);
    const auto mv = image[s] ^ s;
    for (std::size_t b = 0; b < n; ++b) {
      if (!((mv >> b) & 1U)) continue;
      const auto t = s ^ (1U << b);
      if (!seen[t]) {
        seen[t] = 1;
        stack.push_back(t);
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// Attractors as sorted code sets: x is in an attractor iff every state it
/// reaches reaches it back; the attractor is then its forward set.
inline std::set<std::vector<std::uint32_t>> oracle_attractors(const bnred::BooleanNetwork& net) {
  const std::size_t n = net.size();
  const auto image = image_table(net);
  std::vector<std::vector<std::uint32_t>> fwd(image.size());
  for (std::uint32_t x = 0; x < image.size(); ++x) fwd[x] = forward_set(image, n, x);
  std::set<std::vector<std::uint32_t>> out;
  for (std::uint32_t x = 0; x < image.size(); ++x) {
    const bool recurrent = std::all_of(fwd[x].begin(), fwd[x].end(), [&](std::uint32_t y) {
      return std::binary_search(fwd[y].begin(), fwd[y].end(), x);
    });
    if (recurrent) out.insert(fwd[x]);
  }
  return out;
}

/// Same result via Kosaraju's two-pass SCC algorithm; linear in 2^n * n, so
/// usable up to n = 16 or so. Returns, per state, its attractor id or -1.
struct OracleLabels {
  std::vector<int> label;
  std::vector<std::vector<std::uint32_t>> attractors;  // each sorted, in order of smallest member
};

inline OracleLabels oracle_labels(const std::vector<std::uint32_t>& image, std::size_t n) {
  const auto size = static_cast<std::uint32_t>(image.size());
  auto has_move = [&](std::uint32_t s, std::size_t b) { return ((image[s] ^ s) >> b) & 1U; };

  // Pass 1: finishing order on the forward graph.
  std::vector<std::uint32_t> order;
  order.reserve(size);
  std::vector<char> seen(size, 0);
  std::vector<std::pair<std::uint32_t, std::size_t>> stack;
  for (std::uint32_t root = 0; root < size; ++root) {
    if (seen[root]) continue;
    seen[root] = 1;
    stack.push_back({root, 0});
    while (!stack.empty()) {
      auto& [s, b] = stack.back();
      if (b == n) {
        order.push_back(s);
        stack.pop_back();
        continue;
      }
      const std::size_t bit = b++;
      if (!has_move(s, bit)) continue;
      const std::uint32_t t = s ^ (1U << bit);
      if (!seen[t]) {
        seen[t] = 1;
        stack.push_back({t, 0});
      }
    }
  }

  // Pass 2: components on the reverse graph in reverse finishing order.
  std::vector<int> comp(size, -1);
  int count = 0;
  std::vector<std::uint32_t> work;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    if (comp[*it] != -1) continue;
    comp[*it] = count;
    work.push_back(*it);
    while (!work.empty()) {
      const auto t = work.back();
      work.pop_back();
      for (std::size_t b = 0; b < n; ++b) {
        const std::uint32_t s = t ^ (1U << b);
        if (has_move(s, b) && comp[s] == -1) {
          comp[s] = count;
          work.push_back(s);
        }
      }
    }
    ++count;
  }

  std::vector<char> terminal(static_cast<std::size_t>(count), 1);
  for (std::uint32_t s = 0; s < size; ++s)
    for (std::size_t b = 0; b < n; ++b)
      if (has_move(s, b) && comp[s ^ (1U << b)] != comp[s]) terminal[static_cast<std::size_t>(comp[s])] = 0;

  OracleLabels out;
  out.label.assign(size, -1);
  std::vector<int> id(static_cast<std::size_t>(count), -1);
  for (std::uint32_t s = 0; s < size; ++s) {
    const auto c = static_cast<std::size_t>(comp[s]);
    if (!terminal[c]) continue;
    if (id[c] == -1) {
      id[c] = static_cast<int>(out.attractors.size());
      out.attractors.emplace_back();
    }
    out.label[s] = id[c];
    out.attractors[static_cast<std::size_t>(id[c])].push_back(s);
  }
  return out;
}

inline std::set<std::vector<std::uint32_t>> as_codes(const std::vector<bnred::Attractor>& as) {
  std::set<std::vector<std::uint32_t>> out;
  for (const auto& a : as) {
    std::vector<std::uint32_t> v;
    for (const auto& s : a.states) v.push_back(static_cast<std::uint32_t>(s.code()));
    std::sort(v.begin(), v.end());
    out.insert(v);
  }
  return out;
}

struct OracleCounts {
  std::vector<std::string> steady;
  std::size_t cyclic = 0;
};

inline OracleCounts oracle_counts(const bnred::BooleanNetwork& net) {
  OracleCounts c;
  for (const auto& a : oracle_attractors(net)) {
    if (a.size() == 1)
      c.steady.push_back(bnred::State::from_code(a.front(), net.size()).to_string());
    else
      ++c.cyclic;
  }
  std::sort(c.steady.begin(), c.steady.end());
  return c;
}

/// Trap-set test on an explicit set of codes.
inline bool oracle_is_trap_set(const std::vector<std::uint32_t>& image, std::size_t n,
                               const std::vector<std::uint32_t>& set) {
  for (auto s : set) {
    const auto mv = image[s] ^ s;
    for (std::size_t b = 0; b < n; ++b)
      if (((mv >> b) & 1U) && !std::binary_search(set.begin(), set.end(), s ^ (1U << b))) return false;
  }
  return true;
}

/// Random expression over `vars` variables; used for canonicity and printing properties.
inline bnred::BoolExpr random_expr(std::mt19937_64& rng, std::size_t vars, int depth) {
  using bnred::BoolExpr;
  const auto pick = rng() % 8;
  if (depth == 0 || pick == 0) {
    if (rng() % 10 == 0) return BoolExpr::constant(rng() % 2);
    return BoolExpr::var(static_cast<bnred::VarId>(rng() % vars));
  }
  if (pick == 1) return BoolExpr::negate(random_expr(rng, vars, depth - 1));
  std::vector<BoolExpr> ops;
  const auto arity = 2 + rng() % 2;
  for (std::size_t k = 0; k < arity; ++k) ops.push_back(random_expr(rng, vars, depth - 1));
  return pick % 2 ? BoolExpr::conj(std::move(ops)) : BoolExpr::disj(std::move(ops));
}

/// Truth table of e over variables 0..vars-1, row bit k = variable k.
inline std::vector<bool> truth_table(const bnred::BoolExpr& e, std::size_t vars) {
  std::vector<bool> t(std::size_t{1} << vars);
  for (std::size_t row = 0; row < t.size(); ++row) t[row] = e.eval([&](bnred::VarId v) { return (row >> v) & 1U; });
  return t;
}

/// Sum of minterms for a truth table: a syntactically different route to the same function.
inline bnred::BoolExpr minterm_expr(const std::vector<bool>& table, std::size_t vars) {
  using bnred::BoolExpr;
  std::vector<BoolExpr> terms;
  for (std::size_t row = 0; row < table.size(); ++row) {
    if (!table[row]) continue;
    std::vector<BoolExpr> lits;
    for (std::size_t v = 0; v < vars; ++v) {
      auto x = BoolExpr::var(static_cast<bnred::VarId>(v));
      lits.push_back((row >> v) & 1U ? x : BoolExpr::negate(x));
    }
    terms.push_back(BoolExpr::conj(std::move(lits)));
  }
  return BoolExpr::disj(std::move(terms));
}

}  // namespace fixtures
