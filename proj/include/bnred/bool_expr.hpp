#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "errors.hpp"

namespace bnred {

/// Variables are referenced by index. In a network the index is the
/// declaration position, which also fixes the global variable order.
using VarId = std::uint32_t;

/// Immutable Boolean expression tree over { constant, variable, NOT, AND, OR }
/// with n-ary AND/OR. Copies share structure.
class BoolExpr {
 public:
  enum class Kind : std::uint8_t { Const, Var, Not, And, Or };

  BoolExpr() : BoolExpr(constant(false)) {}

  static BoolExpr constant(bool value) {
    static const BoolExpr f{make(Kind::Const, value, 0, {})};
    static const BoolExpr t{make(Kind::Const, true, 0, {})};
    return value ? t : f;
  }
  static BoolExpr var(VarId v) { return BoolExpr{make(Kind::Var, false, v, {})}; }
  static BoolExpr negate(BoolExpr e) { return BoolExpr{make(Kind::Not, false, 0, {std::move(e)})}; }
  static BoolExpr conj(std::vector<BoolExpr> operands) { return nary(Kind::And, std::move(operands)); }
  static BoolExpr disj(std::vector<BoolExpr> operands) { return nary(Kind::Or, std::move(operands)); }

  Kind kind() const noexcept { return node_->kind; }
  bool is_const() const noexcept { return kind() == Kind::Const; }
  /// Only meaningful for Kind::Const.
  bool value() const noexcept { return node_->value; }
  /// Only meaningful for Kind::Var.
  VarId var_id() const noexcept { return node_->var; }
  std::span<const BoolExpr> children() const noexcept { return node_->children; }

  /// Evaluates with `get(v)` supplying the value of variable v.
  template <class Get>
  bool eval(Get&& get) const {
    switch (kind()) {
      case Kind::Const: return value();
      case Kind::Var: return static_cast<bool>(get(var_id()));
      case Kind::Not: return !children()[0].eval(get);
      case Kind::And:
        for (const auto& c : children())
          if (!c.eval(get)) return false;
        return true;
      case Kind::Or:
        for (const auto& c : children())
          if (c.eval(get)) return true;
        return false;
    }
    return false;
  }

  /// Variables occurring syntactically, ascending and without duplicates.
  std::vector<VarId> variables() const {
    std::vector<VarId> out;
    collect(out);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

  /// Structural equality.
  friend bool operator==(const BoolExpr& a, const BoolExpr& b) {
    if (a.node_ == b.node_) return true;
    if (a.kind() != b.kind()) return false;
    switch (a.kind()) {
      case Kind::Const: return a.value() == b.value();
      case Kind::Var: return a.var_id() == b.var_id();
      default: break;
    }
    auto ca = a.children(), cb = b.children();
    return std::equal(ca.begin(), ca.end(), cb.begin(), cb.end());
  }

 private:
  struct Node {
    Kind kind;
    bool value;
    VarId var;
    std::vector<BoolExpr> children;
  };

  explicit BoolExpr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

  static std::shared_ptr<const Node> make(Kind k, bool value, VarId v, std::vector<BoolExpr> ch) {
    return std::make_shared<const Node>(Node{k, value, v, std::move(ch)});
  }

  static BoolExpr nary(Kind k, std::vector<BoolExpr> operands) {
    if (operands.empty()) return constant(k == Kind::And);
    if (operands.size() == 1) return std::move(operands.front());
    return BoolExpr{make(k, false, 0, std::move(operands))};
  }

  void collect(std::vector<VarId>& out) const {
    if (kind() == Kind::Var) out.push_back(var_id());
    for (const auto& c : children()) c.collect(out);
  }

  std::shared_ptr<const Node> node_;
};

/// Replaces every occurrence of `v` in `e` by `replacement`. No simplification.
inline BoolExpr substitute(const BoolExpr& e, VarId v, const BoolExpr& replacement) {
  using K = BoolExpr::Kind;
  switch (e.kind()) {
    case K::Const: return e;
    case K::Var: return e.var_id() == v ? replacement : e;
    case K::Not: return BoolExpr::negate(substitute(e.children()[0], v, replacement));
    case K::And:
    case K::Or: {
      std::vector<BoolExpr> ch;
      ch.reserve(e.children().size());
      for (const auto& c : e.children()) ch.push_back(substitute(c, v, replacement));
      return e.kind() == K::And ? BoolExpr::conj(std::move(ch)) : BoolExpr::disj(std::move(ch));
    }
  }
  return e;
}

/// Evaluates `e` on a dense assignment indexed by VarId.
/// Throws std::out_of_range if `e` references a variable outside the assignment.
template <class Assignment>
bool eval(const BoolExpr& e, const Assignment& x) {
  return e.eval([&](VarId v) -> bool {
    if (v >= x.size()) throw std::out_of_range("expression references unassigned variable " + std::to_string(v));
    return x[v];
  });
}

// ---------------------------------------------------------------------------
// Text form. Grammar (precedence ! > & > |):
//   or    := and ('|' and)*
//   and   := unary ('&' unary)*
//   unary := '!' unary | '(' or ')' | '0' | '1' | identifier
//   identifier := [A-Za-z_][A-Za-z0-9_]*

/// Maps an identifier to its variable, or nullopt if unknown.
using NameResolver = std::function<std::optional<VarId>(std::string_view)>;

namespace detail {

class ExprParser {
 public:
  ExprParser(std::string_view text, const NameResolver& resolve) : text_(text), resolve_(resolve) {}

  BoolExpr parse() {
    BoolExpr e = parse_or();
    skip_ws();
    if (pos_ < text_.size()) fail(std::string("unexpected '") + text_[pos_] + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, 0, pos_ + 1); }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  BoolExpr parse_or() {
    std::vector<BoolExpr> ops{parse_and()};
    while (accept('|')) ops.push_back(parse_and());
    return BoolExpr::disj(std::move(ops));
  }

  BoolExpr parse_and() {
    std::vector<BoolExpr> ops{parse_unary()};
    while (accept('&')) ops.push_back(parse_unary());
    return BoolExpr::conj(std::move(ops));
  }

  BoolExpr parse_unary() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of expression");
    const char c = text_[pos_];
    if (c == '!') {
      ++pos_;
      return BoolExpr::negate(parse_unary());
    }
    if (c == '(') {
      ++pos_;
      BoolExpr inner = parse_or();
      if (!accept(')')) fail("expected ')'");
      return inner;
    }
    if (c == '0' || c == '1') {
      const std::size_t start = pos_++;
      if (pos_ < text_.size() && is_ident_char(text_[pos_])) {
        pos_ = start;
        fail("identifiers cannot start with a digit");
      }
      return BoolExpr::constant(c == '1');
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const std::size_t start = pos_;
      while (pos_ < text_.size() && is_ident_char(text_[pos_])) ++pos_;
      const std::string_view name = text_.substr(start, pos_ - start);
      auto id = resolve_(name);
      if (!id) {
        pos_ = start;
        fail("unknown variable '" + std::string(name) + "'");
      }
      return BoolExpr::var(*id);
    }
    fail(std::string("unknown token '") + c + "'");
  }

  static bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

  std::string_view text_;
  const NameResolver& resolve_;
  std::size_t pos_ = 0;
};

}  // namespace detail

/// Parses an expression; identifiers are resolved through `resolve`.
inline BoolExpr parse_expr(std::string_view text, const NameResolver& resolve) {
  return detail::ExprParser(text, resolve).parse();
}

/// Parses an expression, interning unseen identifiers into `symbols`.
inline BoolExpr parse_expr(std::string_view text, std::vector<std::string>& symbols) {
  NameResolver r = [&](std::string_view name) -> std::optional<VarId> {
    auto it = std::find(symbols.begin(), symbols.end(), name);
    if (it == symbols.end()) {
      symbols.emplace_back(name);
      return static_cast<VarId>(symbols.size() - 1);
    }
    return static_cast<VarId>(it - symbols.begin());
  };
  return parse_expr(text, r);
}

namespace detail {

inline int precedence(BoolExpr::Kind k) {
  switch (k) {
    case BoolExpr::Kind::Or: return 1;
    case BoolExpr::Kind::And: return 2;
    default: return 3;
  }
}

template <class Names>
void print_expr(const BoolExpr& e, const Names& names, std::string& out) {
  using K = BoolExpr::Kind;
  auto child = [&](const BoolExpr& c, int parent_prec) {
    const bool parens = precedence(c.kind()) < parent_prec;
    if (parens) out += '(';
    print_expr(c, names, out);
    if (parens) out += ')';
  };
  switch (e.kind()) {
    case K::Const: out += e.value() ? '1' : '0'; return;
    case K::Var: out += names(e.var_id()); return;
    case K::Not:
      out += '!';
      child(e.children()[0], 3);
      return;
    case K::And:
    case K::Or: {
      const char* sep = e.kind() == K::And ? " & " : " | ";
      bool first = true;
      for (const auto& c : e.children()) {
        if (!first) out += sep;
        first = false;
        child(c, precedence(e.kind()));
      }
      return;
    }
  }
}

}  // namespace detail

/// Prints with minimal parenthesization; `names(v)` gives the identifier of v.
template <class Names>
  requires std::is_invocable_v<const Names&, VarId>
std::string to_string(const BoolExpr& e, const Names& names) {
  std::string out;
  detail::print_expr(e, names, out);
  return out;
}

inline std::string to_string(const BoolExpr& e, const std::vector<std::string>& names) {
  return to_string(e, [&](VarId v) -> const std::string& { return names.at(v); });
}

}  // namespace bnred
