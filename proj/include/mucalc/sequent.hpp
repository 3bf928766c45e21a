// The closure of a prover input and name-annotated sequents over it.
//
// Fixpoint subformulas of the input are represented by their bound
// variable, so a closure node of kind Var stands for sigma Z. phi and its
// unfolding is the node body(Z).

#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "mucalc/formula.hpp"
#include "mucalc/names.hpp"

namespace mucalc {

using FormulaId = std::uint32_t;

enum class CKind { True, False, Prop, NegProp, And, Or, Box, Diamond, Var };

struct ClosureNode {
  CKind kind;
  std::string label;  // proposition or action
  FormulaId lhs = 0;  // child of Box/Diamond, left of And/Or
  FormulaId rhs = 0;
  std::uint32_t var = 0;  // Var: position in the VarOrdering
};

class Closure {
 public:
  // gamma must be closed, guarded and in positive normal form.
  explicit Closure(const Formula& gamma)
      : gamma_(gamma), ordering_(variable_ordering(gamma)), codec_(ordering_) {
    if (!is_closed(gamma)) throw FormulaError("prover input must be closed");
    if (!is_positive_normal_form(gamma)) throw FormulaError("prover input must be in positive normal form");
    if (!is_guarded(gamma)) throw FormulaError("prover input must be guarded");
    bodies_.assign(ordering_.size(), 0);
    root_ = build(gamma);
  }

  const Formula& gamma() const noexcept { return gamma_; }
  const VarOrdering& ordering() const noexcept { return ordering_; }
  const NameCodec& codec() const noexcept { return codec_; }
  FormulaId root() const noexcept { return root_; }
  std::size_t size() const noexcept { return nodes_.size(); }
  const ClosureNode& node(FormulaId id) const { return nodes_.at(id); }
  FormulaId body(std::uint32_t var) const { return bodies_.at(var); }
  bool is_nu(std::uint32_t var) const { return ordering_.is_nu.at(var); }

  // The closure node of a formula written with variables as abbreviations.
  std::optional<FormulaId> find(const Formula& f) const {
    std::optional<Key> key;
    switch (f.kind()) {
      case Kind::True:
        key = Key{CKind::True, "", 0, 0, 0};
        break;
      case Kind::False:
        key = Key{CKind::False, "", 0, 0, 0};
        break;
      case Kind::Prop:
        key = Key{CKind::Prop, f.label(), 0, 0, 0};
        break;
      case Kind::Not:
        if (f.child().kind() != Kind::Prop) return std::nullopt;
        key = Key{CKind::NegProp, f.child().label(), 0, 0, 0};
        break;
      case Kind::Var: {
        auto v = ordering_.index_of(f.label());
        if (!v) return std::nullopt;
        key = Key{CKind::Var, "", 0, 0, static_cast<std::uint32_t>(*v)};
        break;
      }
      case Kind::And:
      case Kind::Or: {
        auto l = find(f.lhs());
        auto r = find(f.rhs());
        if (!l || !r) return std::nullopt;
        key = Key{f.kind() == Kind::And ? CKind::And : CKind::Or, "", *l, *r, 0};
        break;
      }
      case Kind::Box:
      case Kind::Diamond: {
        auto c = find(f.child());
        if (!c) return std::nullopt;
        key = Key{f.kind() == Kind::Box ? CKind::Box : CKind::Diamond, f.label(), *c, 0, 0};
        break;
      }
      default:
        return std::nullopt;
    }
    auto it = index_.find(*key);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  // The node as a formula with free abbreviation variables.
  Formula to_formula(FormulaId id) const {
    const ClosureNode& n = node(id);
    switch (n.kind) {
      case CKind::True:
        return Formula::tt();
      case CKind::False:
        return Formula::ff();
      case CKind::Prop:
        return Formula::prop(n.label);
      case CKind::NegProp:
        return Formula::neg(Formula::prop(n.label));
      case CKind::And:
        return Formula::conj(to_formula(n.lhs), to_formula(n.rhs));
      case CKind::Or:
        return Formula::disj(to_formula(n.lhs), to_formula(n.rhs));
      case CKind::Box:
        return Formula::box(n.label, to_formula(n.lhs));
      case CKind::Diamond:
        return Formula::diamond(n.label, to_formula(n.lhs));
      case CKind::Var:
        return Formula::var(ordering_.vars[n.var]);
    }
    return Formula::tt();
  }

  std::string text(FormulaId id) const { return render(to_formula(id)); }

 private:
  using Key = std::tuple<CKind, std::string, FormulaId, FormulaId, std::uint32_t>;

  FormulaId intern(CKind kind, std::string label, FormulaId l, FormulaId r, std::uint32_t var) {
    Key key{kind, label, l, r, var};
    auto it = index_.find(key);
    if (it != index_.end()) return it->second;
    auto id = static_cast<FormulaId>(nodes_.size());
    nodes_.push_back(ClosureNode{kind, std::move(label), l, r, var});
    index_.emplace(std::move(key), id);
    return id;
  }

  FormulaId build(const Formula& f) {
    switch (f.kind()) {
      case Kind::True:
        return intern(CKind::True, "", 0, 0, 0);
      case Kind::False:
        return intern(CKind::False, "", 0, 0, 0);
      case Kind::Prop:
        return intern(CKind::Prop, f.label(), 0, 0, 0);
      case Kind::Not:
        return intern(CKind::NegProp, f.child().label(), 0, 0, 0);
      case Kind::And:
      case Kind::Or: {
        FormulaId l = build(f.lhs());
        FormulaId r = build(f.rhs());
        return intern(f.kind() == Kind::And ? CKind::And : CKind::Or, "", l, r, 0);
      }
      case Kind::Box:
      case Kind::Diamond: {
        FormulaId c = build(f.child());
        return intern(f.kind() == Kind::Box ? CKind::Box : CKind::Diamond, f.label(), c, 0, 0);
      }
      case Kind::Var:
        return intern(CKind::Var, "", 0, 0, var_index(f.label()));
      case Kind::Mu:
      case Kind::Nu: {
        std::uint32_t v = var_index(f.label());
        FormulaId id = intern(CKind::Var, "", 0, 0, v);
        bodies_[v] = build(f.child());
        return id;
      }
    }
    return 0;
  }

  std::uint32_t var_index(const std::string& v) const {
    auto i = ordering_.index_of(v);
    if (!i) throw FormulaError("unbound variable " + v);
    return static_cast<std::uint32_t>(*i);
  }

  Formula gamma_;
  VarOrdering ordering_;
  NameCodec codec_;
  std::vector<ClosureNode> nodes_;
  std::map<Key, FormulaId> index_;
  std::vector<FormulaId> bodies_;
  FormulaId root_ = 0;
};

// phi^u
struct Entry {
  FormulaId formula = 0;
  NameSeq annotation;

  friend auto operator<=>(const Entry&, const Entry&) = default;
};

// w |- Gamma. Entries are kept sorted and duplicate-free.
struct Sequent {
  NameSeq context;
  std::vector<Entry> entries;

  bool contains(const Entry& e) const { return std::binary_search(entries.begin(), entries.end(), e); }

  friend bool operator==(const Sequent&, const Sequent&) = default;
};

inline std::size_t hash_value(const Sequent& s) {
  std::size_t h = 0xcbf29ce484222325ULL;
  auto mix = [&](std::size_t v) { h = (h ^ v) * 0x100000001b3ULL; };
  for (const Name& n : s.context) mix((std::size_t{n.var} << 32) | n.index);
  mix(0xffff);
  for (const Entry& e : s.entries) {
    mix(e.formula);
    for (const Name& n : e.annotation) mix((std::size_t{n.var} << 32) | n.index);
    mix(0xfffe);
  }
  return h;
}

inline bool mentions(const NameSeq& seq, const Name& n) { return std::find(seq.begin(), seq.end(), n) != seq.end(); }

// Sorts and deduplicates entries, and keeps only the names of w that still
// occur in some annotation (the w' convention).
inline Sequent make_sequent(const NameSeq& w, std::vector<Entry> entries) {
  std::sort(entries.begin(), entries.end());
  entries.erase(std::unique(entries.begin(), entries.end()), entries.end());
  Sequent s;
  for (const Name& n : w)
    if (std::any_of(entries.begin(), entries.end(), [&](const Entry& e) { return mentions(e.annotation, n); }))
      s.context.push_back(n);
  s.entries = std::move(entries);
  return s;
}

// ---------------------------------------------------------------------------
// Text form:  z1 z2 |- X^{z1 z2}, ([a]Z \/ <a>X)^{z1}

inline std::string entry_text(const Closure& c, const Entry& e) {
  const ClosureNode& n = c.node(e.formula);
  std::string f = c.text(e.formula);
  if (n.kind == CKind::And || n.kind == CKind::Or) f = "(" + f + ")";
  if (e.annotation.empty()) return f;
  return f + "^{" + c.codec().print(e.annotation) + "}";
}

// Entries are printed in lexicographic order of their text.
inline std::string sequent_text(const Closure& c, const Sequent& s) {
  std::vector<std::string> parts;
  for (const Entry& e : s.entries) parts.push_back(entry_text(c, e));
  std::sort(parts.begin(), parts.end());
  std::string out = c.codec().print(s.context);
  out += out.empty() ? "|- " : " |- ";
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += ", ";
    out += parts[i];
  }
  return out;
}

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

inline NameSeq parse_names(const Closure& c, std::string_view text) {
  NameSeq out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    std::size_t j = i;
    while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j]))) ++j;
    if (j > i) {
      auto n = c.codec().parse(text.substr(i, j - i));
      if (!n || n->index == 0) throw ParseError("unknown name '" + std::string(text.substr(i, j - i)) + "'", i);
      out.push_back(*n);
    }
    i = j;
  }
  return out;
}

}  // namespace detail

inline Entry parse_entry(const Closure& c, std::string_view text) {
  text = detail::trim(text);
  Entry e;
  std::string_view formula = text;
  if (!text.empty() && text.back() == '}') {
    auto at = text.rfind("^{");
    if (at == std::string_view::npos) throw ParseError("unbalanced annotation", text.size());
    e.annotation = detail::parse_names(c, text.substr(at + 2, text.size() - at - 3));
    formula = text.substr(0, at);
  }
  ParseOptions opts;
  opts.free_variables = {c.ordering().vars.begin(), c.ordering().vars.end()};
  opts.check_positivity = false;
  auto id = c.find(parse(formula, opts));
  if (!id) throw ParseError("formula '" + std::string(formula) + "' is not in the closure", 0);
  e.formula = *id;
  return e;
}

// Parses the text form. The context is kept verbatim (no name dropping), so
// a malformed sequent survives parsing and fails validation instead.
inline Sequent parse_sequent(const Closure& c, std::string_view text) {
  auto turnstile = text.find("|-");
  if (turnstile == std::string_view::npos) throw ParseError("sequent needs '|-'", 0);
  Sequent s;
  s.context = detail::parse_names(c, text.substr(0, turnstile));
  std::string_view rest = text.substr(turnstile + 2);
  while (!detail::trim(rest).empty()) {
    auto comma = rest.find(',');
    s.entries.push_back(parse_entry(c, rest.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    rest.remove_prefix(comma + 1);
  }
  std::sort(s.entries.begin(), s.entries.end());
  s.entries.erase(std::unique(s.entries.begin(), s.entries.end()), s.entries.end());
  return s;
}

}  // namespace mucalc
