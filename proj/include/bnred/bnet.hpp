#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "errors.hpp"
#include "network.hpp"

namespace bnred {

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

inline bool iequals(std::string_view a, std::string_view b) {
  return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
           return std::tolower(static_cast<unsigned char>(x)) == std::tolower(static_cast<unsigned char>(y));
         });
}

inline bool is_identifier(std::string_view s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  return std::all_of(s.begin(), s.end(), [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; });
}

}  // namespace detail

/// Parses bnet text: one `target, expression` per line, optional
/// `targets, factors` header, `#` comments, blank lines, LF or CRLF.
/// Variables are numbered in order of first appearance as a target.
inline BooleanNetwork parse_bnet(std::string_view text, DdBudget budget = {}) {
  struct Line {
    std::size_t number;
    std::size_t expr_column;
    std::string_view expr;
  };
  std::vector<std::string> names;
  std::vector<Line> lines;

  std::size_t number = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view raw = text.substr(start, end - start);
    start = end + 1;
    ++number;
    if (auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
    if (detail::trim(raw).empty()) continue;

    const auto comma = raw.find(',');
    if (comma == std::string_view::npos) throw ParseError("expected 'target, expression'", number, 1);
    const std::string_view target = detail::trim(raw.substr(0, comma));
    const std::string_view expr = raw.substr(comma + 1);
    if (detail::iequals(target, "targets") && detail::iequals(detail::trim(expr), "factors")) continue;
    if (!detail::is_identifier(target)) throw ParseError("invalid target name '" + std::string(target) + "'", number, 1);
    if (std::find(names.begin(), names.end(), target) != names.end())
      throw ParseError("duplicate target '" + std::string(target) + "'", number, 1);
    names.emplace_back(target);
    lines.push_back({number, comma + 2, expr});
  }
  if (names.empty()) throw ParseError("no variables declared", 0, 1);

  NameResolver resolve = [&](std::string_view name) -> std::optional<VarId> {
    auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end()) return std::nullopt;
    return static_cast<VarId>(it - names.begin());
  };
  std::vector<BoolExpr> functions;
  functions.reserve(lines.size());
  for (const auto& l : lines) {
    try {
      functions.push_back(parse_expr(l.expr, resolve));
    } catch (const ParseError& e) {
      const std::string msg = e.what();
      throw ParseError(msg.substr(msg.find(": ") + 2), l.number, l.expr_column + e.column() - 1);
    }
  }
  return BooleanNetwork(std::move(names), functions, budget);
}

inline BooleanNetwork read_bnet_file(const std::string& path, DdBudget budget = {}) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_bnet(ss.str(), budget);
}

/// Writes the `targets, factors` header and one canonical line per variable.
inline std::string write_bnet(const BooleanNetwork& f, DdBudget budget = {}) {
  std::string out = "targets, factors\n";
  for (std::size_t i = 0; i < f.size(); ++i) {
    out += f.name(i);
    out += ", ";
    out += to_string(f.expression(i, budget), f.names());
    out += '\n';
  }
  return out;
}

}  // namespace bnred
