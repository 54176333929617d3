#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace bnred {

/// Full assignment of a network's variables, component i = value of
/// variable i. Bits are packed most-significant first so that comparing the
/// word arrays orders states like their 0/1 strings.
class State {
 public:
  State() = default;
  explicit State(std::size_t n) : n_(n), words_((n + 63) / 64, 0) {}

  /// Parses a 0/1 string, first character = first variable.
  static State from_string(std::string_view bits) {
    State s(bits.size());
    for (std::size_t i = 0; i < bits.size(); ++i) {
      if (bits[i] == '1')
        s.set(i, true);
      else if (bits[i] != '0')
        throw std::invalid_argument("state string may contain only '0' and '1': " + std::string(bits));
    }
    return s;
  }

  /// Decodes an integer whose most significant of n bits is variable 0.
  static State from_code(std::uint64_t code, std::size_t n) {
    State s(n);
    for (std::size_t i = 0; i < n; ++i) s.set(i, (code >> (n - 1 - i)) & 1U);
    return s;
  }

  std::size_t size() const noexcept { return n_; }

  bool get(std::size_t i) const noexcept { return (words_[i / 64] >> (63 - i % 64)) & 1U; }
  bool operator[](std::size_t i) const noexcept { return get(i); }

  void set(std::size_t i, bool v) noexcept {
    const std::uint64_t m = std::uint64_t{1} << (63 - i % 64);
    if (v)
      words_[i / 64] |= m;
    else
      words_[i / 64] &= ~m;
  }
  void flip(std::size_t i) noexcept { words_[i / 64] ^= std::uint64_t{1} << (63 - i % 64); }

  State flipped(std::size_t i) const {
    State s = *this;
    s.flip(i);
    return s;
  }

  /// Copy with a new component inserted at `pos`.
  State inserted(std::size_t pos, bool value) const {
    State s(n_ + 1);
    for (std::size_t i = 0; i < pos; ++i) s.set(i, get(i));
    s.set(pos, value);
    for (std::size_t i = pos; i < n_; ++i) s.set(i + 1, get(i));
    return s;
  }

  std::uint64_t code() const {
    if (n_ > 64) throw std::length_error("state too wide for an integer code");
    std::uint64_t c = 0;
    for (std::size_t i = 0; i < n_; ++i) c = (c << 1) | (get(i) ? 1U : 0U);
    return c;
  }

  std::string to_string() const {
    std::string s(n_, '0');
    for (std::size_t i = 0; i < n_; ++i)
      if (get(i)) s[i] = '1';
    return s;
  }

  std::size_t hash() const noexcept {
    std::size_t h = n_;
    for (auto w : words_) h ^= std::hash<std::uint64_t>{}(w) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h;
  }

  friend bool operator==(const State&, const State&) = default;
  /// Lexicographic on the 0/1 string (for equal sizes).
  friend std::strong_ordering operator<=>(const State& a, const State& b) {
    if (auto c = a.words_ <=> b.words_; c != 0) return c;
    return a.n_ <=> b.n_;
  }

 private:
  std::size_t n_ = 0;
  std::vector<std::uint64_t> words_;
};

struct StateHash {
  std::size_t operator()(const State& s) const noexcept { return s.hash(); }
};

/// Partial assignment: the fixed variables carry a value, the others are
/// free. Denotes the set of states agreeing on all fixed variables.
class Subspace {
 public:
  Subspace() = default;
  /// The full space over n variables.
  explicit Subspace(std::size_t n) : values_(n, kFree) {}

  static Subspace of_state(const State& x) {
    Subspace t(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) t.fix(i, x[i]);
    return t;
  }

  /// Parses the {0,1,-} text form, e.g. "-0".
  static Subspace from_string(std::string_view text) {
    Subspace t(text.size());
    for (std::size_t i = 0; i < text.size(); ++i) {
      switch (text[i]) {
        case '0': t.fix(i, false); break;
        case '1': t.fix(i, true); break;
        case '-': break;
        default: throw std::invalid_argument("subspace string may contain only '0', '1' and '-': " + std::string(text));
      }
    }
    return t;
  }

  std::size_t size() const noexcept { return values_.size(); }

  std::optional<bool> get(std::size_t i) const noexcept {
    if (values_[i] == kFree) return std::nullopt;
    return values_[i] == 1;
  }
  bool is_fixed(std::size_t i) const noexcept { return values_[i] != kFree; }
  void fix(std::size_t i, bool v) noexcept { values_[i] = v ? 1 : 0; }
  void free(std::size_t i) noexcept { values_[i] = kFree; }

  std::size_t fixed_count() const noexcept {
    return static_cast<std::size_t>(std::count_if(values_.begin(), values_.end(), [](auto v) { return v != kFree; }));
  }
  std::size_t free_count() const noexcept { return size() - fixed_count(); }

  std::vector<std::size_t> free_variables() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < size(); ++i)
      if (!is_fixed(i)) out.push_back(i);
    return out;
  }

  bool contains(const State& x) const {
    for (std::size_t i = 0; i < size(); ++i)
      if (is_fixed(i) && (values_[i] == 1) != x[i]) return false;
    return true;
  }

  /// Set inclusion: every state of `other` is in *this.
  bool contains(const Subspace& other) const {
    for (std::size_t i = 0; i < size(); ++i)
      if (is_fixed(i) && values_[i] != other.values_[i]) return false;
    return true;
  }

  bool intersects(const Subspace& other) const {
    for (std::size_t i = 0; i < size(); ++i)
      if (is_fixed(i) && other.is_fixed(i) && values_[i] != other.values_[i]) return false;
    return true;
  }

  std::string to_string() const {
    std::string s(size(), '-');
    for (std::size_t i = 0; i < size(); ++i)
      if (is_fixed(i)) s[i] = values_[i] == 1 ? '1' : '0';
    return s;
  }

  std::size_t hash() const noexcept {
    std::size_t h = 1469598103934665603ULL;
    for (auto v : values_) h = (h ^ static_cast<unsigned char>(v)) * 1099511628211ULL;
    return h;
  }

  friend bool operator==(const Subspace&, const Subspace&) = default;

  /// Output order: lexicographic by the ascending list of fixed variables,
  /// then by their values.
  friend bool fixed_set_less(const Subspace& a, const Subspace& b) {
    std::vector<std::size_t> fa, fb;
    std::string va, vb;
    for (std::size_t i = 0; i < a.size(); ++i)
      if (a.is_fixed(i)) fa.push_back(i), va.push_back(static_cast<char>('0' + a.values_[i]));
    for (std::size_t i = 0; i < b.size(); ++i)
      if (b.is_fixed(i)) fb.push_back(i), vb.push_back(static_cast<char>('0' + b.values_[i]));
    if (fa != fb) return fa < fb;
    return va < vb;
  }

 private:
  static constexpr signed char kFree = -1;
  std::vector<signed char> values_;
};

struct SubspaceHash {
  std::size_t operator()(const Subspace& t) const noexcept { return t.hash(); }
};

}  // namespace bnred
