// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "fixtures.hpp"

namespace {

using clock_type = std::chrono::steady_clock;
using bnred::State;

double seconds_since(clock_type::time_point t) {
  return std::chrono::duration<double>(clock_type::now() - t).count();
}

struct Outcome {
  bool pass;
  std::string detail;
};

// Tolerances.
constexpr double kExamplesSeconds = 1.0;
constexpr double kOracleSeconds = 600.0;
constexpr double kTrapSpaceSeconds = 300.0;
constexpr double kEffectivenessSeconds = 300.0;
constexpr double kMeanReducedMax = 30.0;

// Criterion-2 corpus: 200 networks, n cycling through 8, 10, 12, K = 2.
std::vector<fixtures::CorpusEntry> oracle_corpus() { return fixtures::corpus(200, {8, 10, 12}, 20'000); }

bnred::PipelineConfig full_reduction() {
  bnred::PipelineConfig c;
  c.stop_at = 1;
  c.max_product = bnred::kUnlimited;
  return c;
}

std::uint32_t drop(std::uint32_t code, std::size_t n, std::size_t i) {
  const std::size_t bit = n - 1 - i;
  return ((code >> (bit + 1)) << bit) | (code & ((1U << bit) - 1));
}

bool contains_state(const bnred::Attractor& a, const char* bits) { return a.contains(State::from_string(bits)); }

Outcome examples() {
  const auto t0 = clock_type::now();
  std::vector<std::string> failures;
  auto check = [&](bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  };
  using fixtures::strings;

  const auto fa = bnred::attractors_explicit(fixtures::f());
  check(fa.size() == 1 && strings(fa[0].states) == std::vector<std::string>{"00", "10"}, "f attractor");
  check(strings(bnred::min_trap_spaces(fixtures::f())) == std::vector<std::string>{"-0"}, "f trap space");

  const auto ga = bnred::attractors_explicit(fixtures::g());
  check(ga.size() == 2 && !ga[0].is_steady() && !ga[1].is_steady(), "g attractors");
  check(strings(bnred::min_trap_spaces(fixtures::g())) == std::vector<std::string>{"---"}, "g trap space");

  const auto ha = bnred::attractors_explicit(fixtures::h());
  check(ha.size() == 2 && strings(ha[0].states) == std::vector<std::string>{"00"} &&
            strings(ha[1].states) == std::vector<std::string>{"01", "10", "11"},
        "h attractors");
  check(strings(bnred::min_trap_spaces(fixtures::h())) == std::vector<std::string>{"00"}, "h trap space");

  const auto hh = bnred::run_pipeline(fixtures::hhat(), full_reduction());
  check(hh.attractors.size() == 1 && strings(hh.steady_states()) == std::vector<std::string>{"000"}, "hhat steady");

  const auto gh = bnred::run_pipeline(fixtures::ghat(), full_reduction());
  check(gh.attractors.size() == 1 && gh.attractors[0].states && gh.attractors[0].states->size() == 16,
        "ghat attractor");

  const auto fh = bnred::attractors_explicit(fixtures::fhat());
  const auto fr = bnred::run_pipeline(fixtures::fhat(), full_reduction());
  const auto [fred, fstep] = bnred::eliminate(fixtures::fhat(), 2);
  const bnred::ReductionTrace ftrace{fixtures::fhat().names(), {fstep}, fred, bnred::StopReason::StopAt, {}};
  const auto projected = bnred::project(ftrace, State::from_string("011"));
  check(fred == fixtures::f(), "fhat without x3 is f");
  check(fh.size() == 1 && contains_state(fh[0], "011") && fr.cyclic_count() == 1 && fr.steady_count() == 0,
        "fhat attractor");
  check(projected.to_string() == "01" &&
            std::none_of(fa.begin(), fa.end(), [&](const auto& a) { return a.contains(projected); }),
        "fhat projection");

  for (const auto& [net, label] : {std::pair{fixtures::f(), "f"}, std::pair{fixtures::g(), "g"},
                                   std::pair{fixtures::h(), "h"}}) {
    const auto r = bnred::run_pipeline(net, full_reduction());
    const auto o = fixtures::oracle_counts(net);
    check(r.complete() && strings(r.steady_states()) == o.steady && r.cyclic_count() == o.cyclic,
          std::string(label) + " pipeline");
  }

  const double secs = seconds_since(t0);
  std::ostringstream d;
  d << "runtime " << secs << " s (limit " << kExamplesSeconds << " s)";
  for (const auto& f : failures) d << "; failed: " << f;
  return {failures.empty() && secs < kExamplesSeconds, d.str()};
}

struct CorpusStats {
  std::size_t nonminimal = 0, nonunivocal = 0, misjudged = 0, unresolved = 0;
};

CorpusStats corpus_stats;  // filled by criterion 2, reported by criterion 7

Outcome oracle_equivalence() {
  const auto t0 = clock_type::now();
  std::size_t mismatches = 0, unresolved = 0, reduced_total = 0;
  for (const auto& e : oracle_corpus()) {
    const auto net = bnred::random_nk(e.n, 2, e.seed);
    const auto labels = fixtures::oracle_labels(fixtures::image_table(net), net.size());
    std::vector<std::string> steady;
    std::size_t cyclic = 0;
    for (const auto& a : labels.attractors) {
      if (a.size() == 1) steady.push_back(State::from_code(a[0], net.size()).to_string());
      else ++cyclic;
    }
    std::sort(steady.begin(), steady.end());

    for (const auto& cfg : {full_reduction(), bnred::PipelineConfig{}}) {
      const auto r = bnred::run_pipeline(net, cfg);
      reduced_total += r.reduction.nodes_after;
      unresolved += r.unresolved_count();
      if (fixtures::strings(r.steady_states()) != steady || r.cyclic_count() != cyclic) ++mismatches;
      for (const auto& c : r.candidates) {
        const bool nonmin = c.classification == bnred::CandidateClass::Nonminimal;
        const bool nonuni = c.classification == bnred::CandidateClass::Nonunivocal;
        if (!nonmin && !nonuni) continue;
        corpus_stats.nonminimal += nonmin;
        corpus_stats.nonunivocal += nonuni;
        const bool in_oracle = labels.label[c.state.code()] != -1;
        switch (c.verdict) {
          case bnred::Verdict::Confirmed:
          case bnred::Verdict::Merged: corpus_stats.misjudged += !in_oracle; break;
          case bnred::Verdict::Rejected: corpus_stats.misjudged += in_oracle; break;
          default: ++corpus_stats.unresolved;
        }
      }
    }
  }
  const double secs = seconds_since(t0);
  std::ostringstream d;
  d << "200 networks x {full reduction, default reduction}: " << mismatches << " mismatches, " << unresolved
    << " unresolved, mean reduced size " << double(reduced_total) / 400 << ", runtime " << secs << " s (limit "
    << kOracleSeconds << " s)";
  return {mismatches == 0 && unresolved == 0 && secs < kOracleSeconds, d.str()};
}

Outcome trap_space_exactness() {
  const auto t0 = clock_type::now();
  std::size_t mismatches = 0, total_spaces = 0;
  for (std::uint64_t i = 0; i < 100; ++i) {
    const std::size_t n = 1 + i % 10;
    const std::size_t k = std::min<std::size_t>(n, 1 + i % 3);
    const auto net = bnred::random_nk(n, k, 30'000 + i);
    const auto fast = bnred::min_trap_spaces(net);
    total_spaces += fast.size();
    if (fast != bnred::min_trap_spaces_oracle(net)) ++mismatches;
  }
  const double secs = seconds_since(t0);
  std::ostringstream d;
  d << "100 networks, n <= 10, K in {1,2,3}: " << mismatches << " mismatches over " << total_spaces
    << " minimal trap spaces, runtime " << secs << " s (limit " << kTrapSpaceSeconds << " s)";
  return {mismatches == 0 && secs < kTrapSpaceSeconds, d.str()};
}

Outcome reduction_theorems() {
  std::size_t steps = 0, bijection = 0, monotone = 0, lift_fail = 0;
  for (const auto& e : oracle_corpus()) {
    const auto net = bnred::random_nk(e.n, 2, e.seed);
    const auto [reduced, trace] = bnred::reduce(net, {1, bnred::kUnlimited, {}});
    bnred::BooleanNetwork cur = net;
    auto img_cur = fixtures::image_table(cur);
    auto lab_cur = fixtures::oracle_labels(img_cur, cur.size());
    for (const auto& step : trace.steps) {
      ++steps;
      const std::size_t i = step.position, n = cur.size();
      const auto next = bnred::eliminate(cur, i).first;
      const bnred::ReductionTrace one{cur.names(), {step}, next, bnred::StopReason::StopAt, {}};
      const auto img_next = fixtures::image_table(next);
      const auto lab_next = fixtures::oracle_labels(img_next, next.size());

      std::vector<std::uint32_t> fix_cur, fix_next;
      for (std::uint32_t c = 0; c < img_cur.size(); ++c)
        if (img_cur[c] == c) fix_cur.push_back(drop(c, n, i));
      for (std::uint32_t c = 0; c < img_next.size(); ++c)
        if (img_next[c] == c) fix_next.push_back(c);
      std::sort(fix_cur.begin(), fix_cur.end());
      if (fix_cur != fix_next) ++bijection;
      for (auto c : fix_next) {
        const auto y = bnred::lift(one, State::from_code(c, n - 1)).code();
        if (img_cur[y] != y) ++bijection;
      }

      if (lab_next.attractors.size() < lab_cur.attractors.size()) ++monotone;

      for (std::size_t a = 0; a < lab_cur.attractors.size(); ++a) {
        bool some = false;
        for (auto s : lab_cur.attractors[a]) {
          const auto y = drop(s, n, i);
          if (lab_next.label[y] == -1) continue;
          some = true;
          const auto lifted = bnred::lift(one, State::from_code(y, n - 1)).code();
          if (lab_cur.label[lifted] != static_cast<int>(a)) ++lift_fail;
        }
        if (!some) ++lift_fail;
      }
      cur = next;
      img_cur = img_next;
      lab_cur = std::move(lab_next);
    }
  }
  std::ostringstream d;
  d << steps << " elimination steps: " << bijection << " steady-state bijection failures, " << monotone
    << " attractor-count decreases, " << lift_fail << " lift-property failures";
  return {steps > 0 && bijection == 0 && monotone == 0 && lift_fail == 0, d.str()};
}

Outcome reduction_effectiveness() {
  const auto t0 = clock_type::now();
  double total = 0;
  std::size_t smallest = 100, largest = 0;
  for (std::uint64_t i = 0; i < 10; ++i) {
    const auto net = bnred::random_nk(100, 2, 40'000 + i);
    const auto [reduced, trace] = bnred::reduce(net, {10, 50, {}});
    total += static_cast<double>(reduced.size());
    smallest = std::min(smallest, reduced.size());
    largest = std::max(largest, reduced.size());
  }
  const double mean = total / 10, secs = seconds_since(t0);
  std::ostringstream d;
  d << "n = 100, K = 2, max_product = 50, stop_at = 10: mean reduced size " << mean << " (limit " << kMeanReducedMax
    << ", range " << smallest << ".." << largest << "), runtime " << secs << " s (limit " << kEffectivenessSeconds
    << " s)";
  return {mean <= kMeanReducedMax && secs < kEffectivenessSeconds, d.str()};
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : (v[m - 1] + v[m]) / 2;
}

Outcome speedup() {
  std::vector<double> with, without;
  for (std::uint64_t i = 0; i < 20; ++i) {
    const auto net = bnred::random_nk(14, 2, 50'000 + i);
    bnred::PipelineConfig plain;
    plain.reduce = false;
    auto t0 = clock_type::now();
    bnred::run_pipeline(net, bnred::PipelineConfig{});
    with.push_back(seconds_since(t0));
    t0 = clock_type::now();
    bnred::run_pipeline(net, plain);
    without.push_back(seconds_since(t0));
  }
  const double a = median(with) * 1e3, b = median(without) * 1e3;
  std::ostringstream d;
  d << "20 networks, n = 14, K = 2: median " << a << " ms with reduction vs " << b << " ms without";
  return {a <= b, d.str()};
}

Outcome rarity() {
  std::ostringstream d;
  d << "criterion-2 corpus: " << corpus_stats.nonminimal << " nonminimal and " << corpus_stats.nonunivocal
    << " nonunivocal candidates, " << corpus_stats.misjudged << " misjudged, " << corpus_stats.unresolved
    << " unresolved";
  return {corpus_stats.misjudged == 0 && corpus_stats.unresolved == 0, d.str()};
}

Outcome determinism() {
  std::size_t runs = 0, differ = 0;
  std::vector<bnred::BooleanNetwork> nets{fixtures::f(), fixtures::g(), fixtures::h(),
                                          fixtures::fhat(), fixtures::ghat(), fixtures::hhat()};
  for (std::uint64_t i = 0; i < 10; ++i) nets.push_back(bnred::random_nk(8 + i % 7, 2, 60'000 + i));
  for (std::uint64_t i = 0; i < 3; ++i) nets.push_back(bnred::random_nk(60, 2, 61'000 + i));
  for (const auto& net : nets) {
    for (const auto& cfg : {full_reduction(), bnred::PipelineConfig{}}) {
      ++runs;
      const std::string a = bnred::report_to_json(bnred::run_pipeline(net, cfg), false).dump(2);
      const std::string b = bnred::report_to_json(bnred::run_pipeline(net, cfg), false).dump(2);
      differ += a != b;
    }
  }
  std::ostringstream d;
  d << runs << " paired runs, " << differ << " differing JSON reports";
  return {differ == 0, d.str()};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "example-network fidelity", examples},
      {2, "oracle equivalence", oracle_equivalence},
      {3, "trap-space exactness", trap_space_exactness},
      {4, "reduction theorems", reduction_theorems},
      {5, "reduction effectiveness", reduction_effectiveness},
      {6, "speedup from reduction", speedup},
      {7, "nonminimal/nonunivocal resolution", rarity},
      {8, "determinism", determinism},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << "  [" << c.id << "] " << c.name << ": " << o.detail << std::endl;
  }
  std::cout << (failed ? "acceptance: " + std::to_string(failed) + " criteria failed" : "acceptance: all criteria passed")
            << std::endl;
  return failed ? 1 : 0;
}
