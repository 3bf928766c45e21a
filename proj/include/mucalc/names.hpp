// Names for nu-variables and the orders on name sequences that drive the
// Thin and Reset rules.

#pragma once

#include <algorithm>
#include <cctype>
#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "mucalc/formula.hpp"

namespace mucalc {

// The index-th name of the variable at position var of the VarOrdering.
struct Name {
  std::uint32_t var = 0;
  std::uint32_t index = 1;

  friend auto operator<=>(const Name&, const Name&) = default;
};

using NameSeq = std::vector<Name>;

class NameBudgetExhausted : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

namespace detail {

inline std::optional<std::size_t> position_in(const NameSeq& w, const Name& n) {
  auto it = std::find(w.begin(), w.end(), n);
  if (it == w.end()) return std::nullopt;
  return static_cast<std::size_t>(it - w.begin());
}

inline void require_subsequence(const NameSeq& u, const NameSeq& w) {
  std::size_t j = 0;
  for (const Name& n : u) {
    while (j < w.size() && w[j] != n) ++j;
    if (j == w.size()) throw std::invalid_argument("name sequence is not a subsequence of the context");
    ++j;
  }
}

}  // namespace detail

inline bool is_subsequence(const NameSeq& u, const NameSeq& w) {
  std::size_t j = 0;
  for (const Name& n : u) {
    while (j < w.size() && w[j] != n) ++j;
    if (j == w.size()) return false;
    ++j;
  }
  return true;
}

// u <_w v: at the first position j where u and v differ (both defined),
// u(j) and v(j) name the same variable and u(j) comes first in w.
inline bool lt_under(const NameSeq& u, const NameSeq& v, const NameSeq& w) {
  detail::require_subsequence(u, w);
  detail::require_subsequence(v, w);
  std::size_t j = 0;
  while (j < u.size() && j < v.size() && u[j] == v[j]) ++j;
  if (j == u.size() || j == v.size()) return false;
  if (u[j].var != v[j].var) return false;
  return *detail::position_in(w, u[j]) < *detail::position_in(w, v[j]);
}

// u restricted to X_i: drops the names of variables after position var in
// the ordering.
inline NameSeq restrict(const NameSeq& u, std::uint32_t var) {
  NameSeq out;
  for (const Name& n : u)
    if (n.var <= var) out.push_back(n);
  return out;
}

inline NameSeq restrict(const NameSeq& u, std::string_view var, const VarOrdering& ord) {
  auto i = ord.index_of(var);
  if (!i) throw std::invalid_argument("unknown variable " + std::string(var));
  return restrict(u, static_cast<std::uint32_t>(*i));
}

inline bool is_proper_prefix(const NameSeq& p, const NameSeq& s) {
  return p.size() < s.size() && std::equal(p.begin(), p.end(), s.begin());
}

// u is below v under w: u <_w v, or for some nu-variable X_i the restriction
// of v to X_i is a proper prefix of the restriction of u.
inline bool sqsubset_under(const NameSeq& u, const NameSeq& v, const NameSeq& w, const VarOrdering& ord) {
  if (lt_under(u, v, w)) return true;
  for (std::uint32_t i = 0; i < ord.size(); ++i)
    if (ord.is_nu[i] && is_proper_prefix(restrict(v, i), restrict(u, i))) return true;
  return false;
}

// The least-index name of var that does not occur in w.
inline Name fresh_name(std::uint32_t var, const NameSeq& w, std::size_t budget) {
  for (std::uint32_t i = 1; i <= budget; ++i) {
    Name n{var, i};
    if (std::find(w.begin(), w.end(), n) == w.end()) return n;
  }
  throw NameBudgetExhausted("all " + std::to_string(budget) + " names of a variable are in use");
}

// Printing and parsing of names: the lowercased variable name followed by the
// index (z1, x2). Falls back to "<Var>_<index>" when lowercasing would be
// ambiguous or the variable name ends in a digit.
class NameCodec {
 public:
  explicit NameCodec(const VarOrdering& ord) {
    bool plain = true;
    for (const auto& v : ord.vars) {
      std::string low;
      for (char c : v) low += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
      if (std::isdigit(static_cast<unsigned char>(low.back())) ||
          std::find(bases_.begin(), bases_.end(), low) != bases_.end())
        plain = false;
      bases_.push_back(low);
    }
    if (!plain)
      for (std::size_t i = 0; i < ord.vars.size(); ++i) bases_[i] = ord.vars[i] + "_";
  }

  std::string print(const Name& n) const { return bases_.at(n.var) + std::to_string(n.index); }

  std::string print(const NameSeq& seq, std::string_view sep = " ") const {
    std::string out;
    for (std::size_t i = 0; i < seq.size(); ++i) {
      if (i) out += sep;
      out += print(seq[i]);
    }
    return out;
  }

  std::optional<Name> parse(std::string_view text) const {
    for (std::uint32_t v = 0; v < bases_.size(); ++v) {
      const auto& b = bases_[v];
      if (text.size() <= b.size() || text.substr(0, b.size()) != b) continue;
      auto digits = text.substr(b.size());
      if (!std::all_of(digits.begin(), digits.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
        continue;
      if (digits.size() > 9) return std::nullopt;
      return Name{v, static_cast<std::uint32_t>(std::stoul(std::string(digits)))};
    }
    return std::nullopt;
  }

 private:
  std::vector<std::string> bases_;
};

}  // namespace mucalc
