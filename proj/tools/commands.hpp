#pragma once

// Subcommands of the bnred executable. Kept in a header so the test suite
// can drive them with captured streams.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bnred/bnred.hpp"

namespace bnred::cli {

enum ExitCode : int { kComplete = 0, kError = 1, kUnresolved = 2 };

/// Parses a max-product scenario: a number, "n", "n/D" or "Mn".
inline std::size_t scenario_value(const std::string& text, std::size_t n) {
  auto number = [&](const std::string& s) -> std::size_t {
    if (s.empty() || !std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); }))
      throw std::invalid_argument("invalid max-product scenario '" + text + "'");
    return std::stoull(s);
  };
  if (text == "inf" || text == "unlimited") return kUnlimited;
  if (auto pos = text.find('n'); pos != std::string::npos) {
    const std::string head = text.substr(0, pos), tail = text.substr(pos + 1);
    std::size_t v = n;
    if (!head.empty()) v *= number(head);
    if (!tail.empty()) {
      if (tail[0] != '/') throw std::invalid_argument("invalid max-product scenario '" + text + "'");
      const std::size_t d = number(tail.substr(1));
      if (d == 0) throw std::invalid_argument("max-product scenario divides by zero");
      v /= d;
    }
    return v;
  }
  return number(text);
}

struct RunConfig {
  std::string input;
  std::optional<std::size_t> stop_at;
  std::optional<std::string> max_product;
  bool no_reduce = false;
  std::size_t budget = kDefaultReachBudget;
  std::size_t explicit_limit = kDefaultExplicitLimit;
  bool json = false;
  bool no_timings = false;
  std::optional<std::string> dot;
  std::optional<std::string> candidates;
  std::optional<std::string> output;
  std::optional<std::string> trace;
  std::uint64_t seed = 1;
  std::size_t n = 10, k = 2, count = 20;
  std::vector<std::string> scenarios;
};

namespace detail {

inline std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::ios_base::failure("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) throw std::ios_base::failure("cannot write '" + path + "'");
}

inline BooleanNetwork load(const std::string& path) {
  return parse_bnet(read_text(path));
}

inline PipelineConfig pipeline_config(const RunConfig& rc, std::size_t n) {
  PipelineConfig pc;
  pc.reduce = !rc.no_reduce;
  pc.stop_at = rc.stop_at;
  if (rc.max_product) pc.max_product = scenario_value(*rc.max_product, n);
  pc.budget = rc.budget;
  pc.explicit_limit = rc.explicit_limit;
  return pc;
}

inline double ms_since(std::chrono::steady_clock::time_point t) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t).count();
}

}  // namespace detail

inline int cmd_attractors(const RunConfig& rc, std::ostream& out) {
  const BooleanNetwork f = detail::load(rc.input);
  PipelineConfig pc = detail::pipeline_config(rc, f.size());
  if (rc.candidates) {
    // Width is the reduced size, which depends on the reduction options.
    std::size_t width = f.size();
    if (pc.reduce) {
      ReductionOptions ro = default_reduction_options(f.size());
      if (pc.stop_at) ro.stop_at = *pc.stop_at;
      if (pc.max_product) ro.max_product = *pc.max_product;
      width = reduce(f, ro).first.size();
    }
    std::istringstream in(detail::read_text(*rc.candidates));
    pc.external_candidates = read_candidates(in, width);
  }
  const AttractorReport r = run_pipeline(f, pc);

  if (rc.json) {
    out << report_to_json(r, !rc.no_timings).dump(2) << '\n';
  } else {
    out << "steady: " << r.steady_count() << ", cyclic: " << r.cyclic_count() << '\n';
    out << "nodes: " << r.reduction.nodes_before << " -> " << r.reduction.nodes_after
        << ", edges: " << r.reduction.edges_before << " -> " << r.reduction.edges_after << '\n';
    out << "minimal trap spaces: " << r.min_trap_spaces.size() << '\n';
    for (const auto& a : r.attractors) {
      out << "  " << to_string(a.kind) << ' ' << a.representative.to_string();
      if (a.states) out << " (" << a.states->size() << (a.states->size() == 1 ? " state)" : " states)");
      else if (a.trap_space) out << " in " << a.trap_space->to_string();
      out << '\n';
    }
    for (const auto& c : r.candidates)
      if (c.verdict == Verdict::Unresolved)
        out << "unresolved: " << c.state.to_string() << " (" << to_string(c.classification) << ", " << c.note << ")\n";
  }
  return r.complete() ? kComplete : kUnresolved;
}

inline int cmd_reduce(const RunConfig& rc, std::ostream& out) {
  const BooleanNetwork f = detail::load(rc.input);
  ReductionOptions ro;
  ro.stop_at = rc.stop_at.value_or(1);
  ro.max_product = rc.max_product ? scenario_value(*rc.max_product, f.size()) : kUnlimited;
  const auto t0 = std::chrono::steady_clock::now();
  const auto [reduced, trace] = reduce(f, ro);
  const double elapsed = detail::ms_since(t0);
  const std::size_t e0 = influence_graph(f).size(), e1 = influence_graph(reduced).size();
  const std::string bnet = write_bnet(reduced);

  if (rc.output) detail::write_text(*rc.output, bnet);
  if (rc.trace) detail::write_text(*rc.trace, trace_to_json(trace).dump(2) + "\n");

  if (rc.json) {
    json j = {{"nodes_before", f.size()},   {"nodes_after", reduced.size()}, {"edges_before", e0},
              {"edges_after", e1},          {"trace", trace_to_json(trace)}, {"network", bnet}};
    if (!rc.no_timings) j["reduce_ms"] = elapsed;
    out << j.dump(2) << '\n';
    return kComplete;
  }
  out << "# nodes: " << f.size() << " -> " << reduced.size() << ", edges: " << e0 << " -> " << e1 << '\n';
  out << "# eliminated:";
  for (const auto& v : trace.eliminated()) out << ' ' << v;
  out << "\n# stop: " << to_string(trace.stop_reason) << '\n';
  if (!trace.error.empty()) out << "# error: " << trace.error << '\n';
  if (!rc.output) out << bnet;
  return kComplete;
}

inline int cmd_trapspaces(const RunConfig& rc, std::ostream& out) {
  const BooleanNetwork f = detail::load(rc.input);
  const auto mts = min_trap_spaces(f);
  if (rc.json) {
    json a = json::array();
    for (const auto& t : mts) a.push_back(t.to_string());
    out << json{{"variables", f.names()}, {"minimal_trap_spaces", a}}.dump(2) << '\n';
    return kComplete;
  }
  for (const auto& t : mts) out << t.to_string() << '\n';
  return kComplete;
}

inline int cmd_stg(const RunConfig& rc, std::ostream& out) {
  const BooleanNetwork f = detail::load(rc.input);
  const std::string dot = stg_to_dot(f);
  if (rc.dot && *rc.dot != "-") detail::write_text(*rc.dot, dot);
  else out << dot;
  return kComplete;
}

/// One CSV row per generated network and scenario.
inline int cmd_bench(const RunConfig& rc, std::ostream& out, std::ostream& err) {
  out << "index,seed,n,k,max_product,stop_at,nodes_before,nodes_after,edges_before,edges_after,reduce_ms,"
         "pipeline_ms,pipeline_noreduce_ms,steady,cyclic,unresolved,oracle_match,error\n";
  const std::vector<std::string> scenarios = rc.scenarios.empty() ? std::vector<std::string>{"n"} : rc.scenarios;
  const std::size_t stop_at = rc.stop_at.value_or(default_reduction_options(rc.n).stop_at);
  std::vector<std::size_t> mismatches;
  std::vector<double> after_sum(scenarios.size(), 0.0);
  out << std::fixed << std::setprecision(3);

  for (std::size_t idx = 0; idx < rc.count; ++idx) {
    const std::uint64_t seed = rc.seed + idx;
    const BooleanNetwork f = random_nk(rc.n, rc.k, seed);
    std::optional<std::pair<std::vector<State>, std::size_t>> oracle;
    if (rc.n <= 12) {
      std::vector<State> steady;
      std::size_t cyclic = 0;
      for (const auto& a : attractors_explicit(f, rc.explicit_limit)) {
        if (a.is_steady()) steady.push_back(a.states.front());
        else ++cyclic;
      }
      oracle.emplace(std::move(steady), cyclic);
    }

    // The unreduced run does not depend on the scenario.
    std::optional<double> noreduce_ms;
    if (rc.n <= rc.explicit_limit) {
      PipelineConfig pc;
      pc.reduce = false;
      pc.budget = rc.budget;
      pc.explicit_limit = rc.explicit_limit;
      const auto t0 = std::chrono::steady_clock::now();
      run_pipeline(f, pc);
      noreduce_ms = detail::ms_since(t0);
    }

    for (std::size_t s = 0; s < scenarios.size(); ++s) {
      PipelineConfig pc;
      pc.stop_at = stop_at;
      pc.max_product = scenario_value(scenarios[s], rc.n);
      pc.budget = rc.budget;
      pc.explicit_limit = rc.explicit_limit;
      out << idx << ',' << seed << ',' << rc.n << ',' << rc.k << ',' << scenarios[s] << ',' << stop_at << ',';

      ReductionOptions ro{stop_at, *pc.max_product, {}};
      const auto t0 = std::chrono::steady_clock::now();
      const auto [reduced, trace] = reduce(f, ro);
      const double reduce_ms = detail::ms_since(t0);
      after_sum[s] += static_cast<double>(reduced.size());
      out << f.size() << ',' << reduced.size() << ',' << influence_graph(f).size() << ','
          << influence_graph(reduced).size() << ',' << reduce_ms << ',';

      try {
        const auto t1 = std::chrono::steady_clock::now();
        const AttractorReport r = run_pipeline(f, pc);
        const double pipeline_ms = detail::ms_since(t1);
        out << pipeline_ms << ',';
        if (noreduce_ms) out << *noreduce_ms;
        out << ',' << r.steady_count() << ',' << r.cyclic_count() << ',' << r.unresolved_count() << ',';
        if (oracle) {
          const bool match = r.complete() && r.steady_states() == oracle->first && r.cyclic_count() == oracle->second;
          out << (match ? "yes" : "no");
          if (!match) mismatches.push_back(idx);
        }
        out << ",\n";
      } catch (const std::exception& e) {
        std::string msg = e.what();
        std::replace(msg.begin(), msg.end(), ',', ';');
        out << ',';
        if (noreduce_ms) out << *noreduce_ms;
        out << ",,,,," << '"' << msg << '"' << '\n';
      }
    }
  }
  if (rc.count > 0)
    for (std::size_t s = 0; s < scenarios.size(); ++s)
      err << "scenario max_product=" << scenarios[s] << ": mean nodes after reduction "
          << after_sum[s] / static_cast<double>(rc.count) << '\n';
  if (!mismatches.empty()) {
    err << "oracle mismatch on " << mismatches.size() << " network(s)\n";
    return kError;
  }
  return kComplete;
}

/// Entry point; `args` excludes the program name.
inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Attractor identification for Boolean networks by variable elimination", "bnred"};
  app.require_subcommand(1);
  RunConfig rc;

  auto add_reduction = [&](CLI::App* sc) {
    sc->add_option("--stop-at", rc.stop_at, "stop once the network has at most this many variables")
        ->check(CLI::PositiveNumber);
    sc->add_option("--max-product", rc.max_product,
                   "largest regulators x targets product allowed for an elimination (number, n, n/D or Mn)");
  };

  auto* att = app.add_subcommand("attractors", "find all attractors");
  att->add_option("file", rc.input, "bnet file")->required();
  add_reduction(att);
  att->add_flag("--no-reduce", rc.no_reduce, "skip the reduction step");
  att->add_option("--budget", rc.budget, "state budget for each reachability screening")->check(CLI::PositiveNumber);
  att->add_option("--explicit-limit", rc.explicit_limit, "largest variable count enumerated explicitly")
      ->check(CLI::Range(1, 30));
  att->add_option("--candidates", rc.candidates, "file of reduced-attractor sample states, one per line");
  att->add_flag("--json", rc.json, "print a JSON report");
  att->add_flag("--no-timings", rc.no_timings, "omit timings from the JSON report");

  auto* red = app.add_subcommand("reduce", "eliminate variables and print the reduced network");
  red->add_option("file", rc.input, "bnet file")->required();
  add_reduction(red);
  red->add_option("-o,--output", rc.output, "write the reduced network here instead of stdout");
  red->add_option("--trace", rc.trace, "write the elimination trace as JSON");
  red->add_flag("--json", rc.json, "print statistics, trace and network as JSON");
  red->add_flag("--no-timings", rc.no_timings, "omit timings from the JSON output");

  auto* trap = app.add_subcommand("trapspaces", "print the minimal trap spaces");
  trap->add_option("file", rc.input, "bnet file")->required();
  trap->add_flag("--json", rc.json, "print JSON");

  auto* stg = app.add_subcommand("stg", "export the state transition graph (at most 10 variables)");
  stg->add_option("file", rc.input, "bnet file")->required();
  stg->add_option("--dot", rc.dot, "output path for the DOT graph, - for stdout");

  auto* bench = app.add_subcommand("bench", "benchmark on random NK networks, CSV output");
  bench->add_option("--n", rc.n, "variables per network")->check(CLI::PositiveNumber);
  bench->add_option("--k", rc.k, "regulators per variable");
  bench->add_option("--count", rc.count, "number of networks");
  bench->add_option("--seed", rc.seed, "seed of the first network");
  bench->add_option("--stop-at", rc.stop_at, "reduced size to stop at")->check(CLI::PositiveNumber);
  bench->add_option("--max-product", rc.scenarios, "max-product scenario, repeatable (number, n, n/D or Mn)");
  bench->add_option("--budget", rc.budget, "state budget for each reachability screening")->check(CLI::PositiveNumber);
  bench->add_option("--explicit-limit", rc.explicit_limit, "largest variable count enumerated explicitly")
      ->check(CLI::Range(1, 30));

  try {
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kComplete : kError;
  }

  try {
    if (*att) return cmd_attractors(rc, out);
    if (*red) return cmd_reduce(rc, out);
    if (*trap) return cmd_trapspaces(rc, out);
    if (*stg) return cmd_stg(rc, out);
    if (*bench) return cmd_bench(rc, out, err);
  } catch (const ParseError& e) {
    err << "parse error in " << rc.input << ": " << e.what() << '\n';
  } catch (const LimitExceeded& e) {
    err << "size limit exceeded: " << e.what() << '\n';
  } catch (const BudgetExceeded& e) {
    err << "budget exceeded: " << e.what() << '\n';
  } catch (const std::ios_base::failure& e) {
    err << "I/O error: " << e.what() << '\n';
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
  }
  return kError;
}

}  // namespace bnred::cli
