// Modal mu-calculus formulas: AST, concrete syntax, positive normal form,
// guarding, and the syntactic metadata used by the tableau engine.
//
// Concrete grammar (precedence from tightest to loosest):
//
//   atom    := tt | ff | Ident | ( formula )
//   unary   := ~unary | [act]unary | <act>unary | binder | atom
//   conj    := unary ( /\ unary )*
//   formula := conj ( \/ conj )*
//   binder  := (mu | nu) Ident . formula        (scope extends maximally right)
//
// Propositions and variables both start with an uppercase letter; an
// identifier is a variable iff an enclosing binder binds it.

#pragma once

#include <cctype>
#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace mucalc {

enum class Kind { True, False, Prop, Not, Var, And, Or, Box, Diamond, Mu, Nu };

enum class FixKind { Mu, Nu };

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : std::runtime_error(what + " at offset " + std::to_string(offset)),
        offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

// Raised when a binder variable occurs under an odd number of negations.
class PositivityError : public ParseError {
 public:
  using ParseError::ParseError;
};

// Structural precondition violations (open formula, not in PNF, ...).
class FormulaError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Immutable formula handle. Copies share structure.
class Formula {
 public:
  Formula() : Formula(Kind::True, {}, {}, {}) {}

  static Formula tt() { return Formula(Kind::True, {}, {}, {}); }
  static Formula ff() { return Formula(Kind::False, {}, {}, {}); }
  static Formula prop(std::string name) { return Formula(Kind::Prop, std::move(name), {}, {}); }
  static Formula var(std::string name) { return Formula(Kind::Var, std::move(name), {}, {}); }
  static Formula neg(const Formula& f) { return Formula(Kind::Not, {}, f.node_, {}); }
  static Formula conj(const Formula& l, const Formula& r) { return Formula(Kind::And, {}, l.node_, r.node_); }
  static Formula disj(const Formula& l, const Formula& r) { return Formula(Kind::Or, {}, l.node_, r.node_); }
  static Formula box(std::string act, const Formula& f) { return Formula(Kind::Box, std::move(act), f.node_, {}); }
  static Formula diamond(std::string act, const Formula& f) {
    return Formula(Kind::Diamond, std::move(act), f.node_, {});
  }
  static Formula mu(std::string v, const Formula& body) { return Formula(Kind::Mu, std::move(v), body.node_, {}); }
  static Formula nu(std::string v, const Formula& body) { return Formula(Kind::Nu, std::move(v), body.node_, {}); }
  static Formula fix(FixKind k, std::string v, const Formula& body) {
    return k == FixKind::Mu ? mu(std::move(v), body) : nu(std::move(v), body);
  }

  Kind kind() const noexcept { return node_->kind; }
  // Proposition, variable, action or bound-variable name depending on kind().
  const std::string& label() const noexcept { return node_->label; }
  // Single child of Not, Box, Diamond, Mu, Nu; left child of And, Or.
  Formula child() const { return Formula(node_->lhs); }
  Formula lhs() const { return Formula(node_->lhs); }
  Formula rhs() const { return Formula(node_->rhs); }
  // Source offset recorded by the parser (0 for constructed formulas).
  std::size_t offset() const noexcept { return node_->offset; }

  bool is_fixpoint() const noexcept { return kind() == Kind::Mu || kind() == Kind::Nu; }
  bool is_modal() const noexcept { return kind() == Kind::Box || kind() == Kind::Diamond; }
  bool is_binary() const noexcept { return kind() == Kind::And || kind() == Kind::Or; }
  FixKind fix_kind() const { return kind() == Kind::Mu ? FixKind::Mu : FixKind::Nu; }

  // Number of AST nodes.
  std::size_t size() const {
    std::size_t n = 1;
    if (node_->lhs) n += Formula(node_->lhs).size();
    if (node_->rhs) n += Formula(node_->rhs).size();
    return n;
  }

  Formula with_offset(std::size_t offset) const {
    auto n = std::make_shared<Node>(*node_);
    n->offset = offset;
    return Formula(std::move(n));
  }

  friend bool operator==(const Formula& a, const Formula& b) {
    if (a.node_ == b.node_) return true;
    if (a.kind() != b.kind() || a.label() != b.label()) return false;
    if (bool(a.node_->lhs) != bool(b.node_->lhs) || bool(a.node_->rhs) != bool(b.node_->rhs)) return false;
    if (a.node_->lhs && !(a.lhs() == b.lhs())) return false;
    if (a.node_->rhs && !(a.rhs() == b.rhs())) return false;
    return true;
  }

 private:
  struct Node {
    Kind kind;
    std::string label;
    std::shared_ptr<const Node> lhs;
    std::shared_ptr<const Node> rhs;
    std::size_t offset = 0;
  };

  Formula(Kind k, std::string label, std::shared_ptr<const Node> l, std::shared_ptr<const Node> r)
      : node_(std::make_shared<const Node>(Node{k, std::move(label), std::move(l), std::move(r), 0})) {}
  explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

  std::shared_ptr<const Node> node_;
};

// ---------------------------------------------------------------------------
// Free variables, propositions, actions

namespace detail {

inline void collect_free(const Formula& f, std::vector<std::string>& bound, std::set<std::string>& out) {
  switch (f.kind()) {
    case Kind::Var:
      for (const auto& b : bound)
        if (b == f.label()) return;
      out.insert(f.label());
      return;
    case Kind::Mu:
    case Kind::Nu:
      bound.push_back(f.label());
      collect_free(f.child(), bound, out);
      bound.pop_back();
      return;
    case Kind::Not:
    case Kind::Box:
    case Kind::Diamond:
      collect_free(f.child(), bound, out);
      return;
    case Kind::And:
    case Kind::Or:
      collect_free(f.lhs(), bound, out);
      collect_free(f.rhs(), bound, out);
      return;
    default:
      return;
  }
}

template <class Visit>
void visit_preorder(const Formula& f, Visit&& visit) {
  visit(f);
  switch (f.kind()) {
    case Kind::Not:
    case Kind::Box:
    case Kind::Diamond:
    case Kind::Mu:
    case Kind::Nu:
      visit_preorder(f.child(), visit);
      break;
    case Kind::And:
    case Kind::Or:
      visit_preorder(f.lhs(), visit);
      visit_preorder(f.rhs(), visit);
      break;
    default:
      break;
  }
}

}  // namespace detail

inline std::set<std::string> free_variables(const Formula& f) {
  std::vector<std::string> bound;
  std::set<std::string> out;
  detail::collect_free(f, bound, out);
  return out;
}

inline bool is_closed(const Formula& f) { return free_variables(f).empty(); }

inline std::set<std::string> propositions(const Formula& f) {
  std::set<std::string> out;
  detail::visit_preorder(f, [&](const Formula& g) {
    if (g.kind() == Kind::Prop) out.insert(g.label());
  });
  return out;
}

inline std::set<std::string> actions(const Formula& f) {
  std::set<std::string> out;
  detail::visit_preorder(f, [&](const Formula& g) {
    if (g.is_modal()) out.insert(g.label());
  });
  return out;
}

// Capture is impossible for the callers in this library: the substituted
// term's free variables are bound outside every binder it is placed under.
inline Formula substitute(const Formula& f, const std::string& var, const Formula& replacement) {
  switch (f.kind()) {
    case Kind::Var:
      return f.label() == var ? replacement : f;
    case Kind::Mu:
    case Kind::Nu:
      if (f.label() == var) return f;
      return Formula::fix(f.fix_kind(), f.label(), substitute(f.child(), var, replacement));
    case Kind::Not:
      return Formula::neg(substitute(f.child(), var, replacement));
    case Kind::Box:
      return Formula::box(f.label(), substitute(f.child(), var, replacement));
    case Kind::Diamond:
      return Formula::diamond(f.label(), substitute(f.child(), var, replacement));
    case Kind::And:
      return Formula::conj(substitute(f.lhs(), var, replacement), substitute(f.rhs(), var, replacement));
    case Kind::Or:
      return Formula::disj(substitute(f.lhs(), var, replacement), substitute(f.rhs(), var, replacement));
    default:
      return f;
  }
}

// ---------------------------------------------------------------------------
// Parser

struct ParseOptions {
  // Identifiers treated as (free) variables rather than propositions.
  std::set<std::string> free_variables;
  bool check_positivity = true;
};

namespace detail {

class Parser {
 public:
  Parser(std::string_view text, const ParseOptions& opts) : text_(text), opts_(opts) {}

  Formula parse() {
    Formula f = formula();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    return f;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(std::string_view tok) {
    skip_ws();
    if (text_.substr(pos_, tok.size()) == tok) {
      pos_ += tok.size();
      return true;
    }
    return false;
  }

  void expect(std::string_view tok) {
    if (!accept(tok)) fail("expected '" + std::string(tok) + "'");
  }

  static bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
  static bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\''; }

  std::optional<std::string> peek_ident() {
    skip_ws();
    if (pos_ >= text_.size() || !ident_start(text_[pos_])) return std::nullopt;
    std::size_t end = pos_;
    while (end < text_.size() && ident_char(text_[end])) ++end;
    return std::string(text_.substr(pos_, end - pos_));
  }

  std::string ident() {
    auto id = peek_ident();
    if (!id) fail("expected identifier");
    pos_ += id->size();
    return *id;
  }

  Formula formula() {
    Formula f = conjunction();
    for (;;) {
      std::size_t at = (skip_ws(), pos_);
      if (!accept("\\/")) break;
      f = Formula::disj(f, conjunction()).with_offset(at);
    }
    return f;
  }

  Formula conjunction() {
    Formula f = unary();
    for (;;) {
      std::size_t at = (skip_ws(), pos_);
      if (!accept("/\\")) break;
      f = Formula::conj(f, unary()).with_offset(at);
    }
    return f;
  }

  Formula unary() {
    skip_ws();
    std::size_t at = pos_;
    if (accept("~")) return Formula::neg(unary()).with_offset(at);
    if (accept("[")) {
      std::string act = ident();
      expect("]");
      return Formula::box(std::move(act), unary()).with_offset(at);
    }
    if (accept("<")) {
      std::string act = ident();
      expect(">");
      return Formula::diamond(std::move(act), unary()).with_offset(at);
    }
    if (auto id = peek_ident(); id && (*id == "mu" || *id == "nu")) {
      pos_ += 2;
      std::string v = ident();
      if (!std::isupper(static_cast<unsigned char>(v[0]))) fail("variable names must start with an uppercase letter");
      expect(".");
      scope_.push_back(v);
      Formula body = formula();
      scope_.pop_back();
      return Formula::fix(*id == "mu" ? FixKind::Mu : FixKind::Nu, v, body).with_offset(at);
    }
    return atom();
  }

  Formula atom() {
    skip_ws();
    std::size_t at = pos_;
    if (accept("(")) {
      Formula f = formula();
      expect(")");
      return f;
    }
    auto id = peek_ident();
    if (!id) fail(pos_ >= text_.size() ? "unexpected end of input" : "unexpected character");
    if (*id == "tt") return pos_ += 2, Formula::tt().with_offset(at);
    if (*id == "ff") return pos_ += 2, Formula::ff().with_offset(at);
    if (!std::isupper(static_cast<unsigned char>((*id)[0])))
      fail("propositions and variables must start with an uppercase letter: '" + *id + "'");
    pos_ += id->size();
    for (auto it = scope_.rbegin(); it != scope_.rend(); ++it)
      if (*it == *id) return Formula::var(*id).with_offset(at);
    if (opts_.free_variables.count(*id)) return Formula::var(*id).with_offset(at);
    return Formula::prop(*id).with_offset(at);
  }

  std::string_view text_;
  const ParseOptions& opts_;
  std::size_t pos_ = 0;
  std::vector<std::string> scope_;
};

// Parity of negations between each binder and the occurrences of its variable.
inline void check_positivity(const Formula& f, std::map<std::string, bool>& odd, bool parity) {
  switch (f.kind()) {
    case Kind::Var: {
      auto it = odd.find(f.label());
      if (it != odd.end() && it->second != parity)
        throw PositivityError("variable " + f.label() + " occurs under an odd number of negations", f.offset());
      return;
    }
    case Kind::Not:
      check_positivity(f.child(), odd, !parity);
      return;
    case Kind::Mu:
    case Kind::Nu: {
      auto saved = odd.find(f.label()) == odd.end() ? std::nullopt : std::optional<bool>(odd[f.label()]);
      odd[f.label()] = parity;
      check_positivity(f.child(), odd, parity);
      if (saved)
        odd[f.label()] = *saved;
      else
        odd.erase(f.label());
      return;
    }
    case Kind::Box:
    case Kind::Diamond:
      check_positivity(f.child(), odd, parity);
      return;
    case Kind::And:
    case Kind::Or:
      check_positivity(f.lhs(), odd, parity);
      check_positivity(f.rhs(), odd, parity);
      return;
    default:
      return;
  }
}

}  // namespace detail

inline void check_positivity(const Formula& f) {
  std::map<std::string, bool> odd;
  detail::check_positivity(f, odd, false);
}

inline Formula parse(std::string_view text, const ParseOptions& opts = {}) {
  Formula f = detail::Parser(text, opts).parse();
  if (opts.check_positivity) check_positivity(f);
  return f;
}

// ---------------------------------------------------------------------------
// Printer

namespace detail {

// Operand contexts: binary operands and modal/negation operands.
inline void render(const Formula& f, std::string& out);

inline void render_operand(const Formula& f, std::string& out, bool parenthesize) {
  if (parenthesize) out += '(';
  render(f, out);
  if (parenthesize) out += ')';
}

inline void render(const Formula& f, std::string& out) {
  switch (f.kind()) {
    case Kind::True:
      out += "tt";
      return;
    case Kind::False:
      out += "ff";
      return;
    case Kind::Prop:
    case Kind::Var:
      out += f.label();
      return;
    case Kind::Not:
      out += '~';
      render_operand(f.child(), out, f.child().is_binary() || f.child().is_fixpoint());
      return;
    case Kind::Box:
    case Kind::Diamond:
      out += f.kind() == Kind::Box ? "[" : "<";
      out += f.label();
      out += f.kind() == Kind::Box ? "]" : ">";
      render_operand(f.child(), out, f.child().is_binary() || f.child().is_fixpoint());
      return;
    case Kind::And:
      render_operand(f.lhs(), out, f.lhs().kind() == Kind::Or || f.lhs().is_fixpoint());
      out += " /\\ ";
      render_operand(f.rhs(), out, f.rhs().is_binary() || f.rhs().is_fixpoint());
      return;
    case Kind::Or:
      render_operand(f.lhs(), out, f.lhs().is_fixpoint());
      out += " \\/ ";
      render_operand(f.rhs(), out, f.rhs().kind() == Kind::Or || f.rhs().is_fixpoint());
      return;
    case Kind::Mu:
    case Kind::Nu:
      out += f.kind() == Kind::Mu ? "mu " : "nu ";
      out += f.label();
      out += ". ";
      render_operand(f.child(), out, f.child().is_binary());
      return;
  }
}

}  // namespace detail

inline std::string render(const Formula& f) {
  std::string out;
  detail::render(f, out);
  return out;
}

// ---------------------------------------------------------------------------
// Positive normal form

namespace detail {

inline Formula push_negations(const Formula& f, bool negated, std::map<std::string, bool>& flipped) {
  switch (f.kind()) {
    case Kind::True:
      return negated ? Formula::ff() : f;
    case Kind::False:
      return negated ? Formula::tt() : f;
    case Kind::Prop:
      return negated ? Formula::neg(f) : f;
    case Kind::Not:
      return push_negations(f.child(), !negated, flipped);
    case Kind::Var: {
      auto it = flipped.find(f.label());
      if (it == flipped.end()) throw FormulaError("formula is not closed: free variable " + f.label());
      if (it->second != negated)
        throw PositivityError("variable " + f.label() + " occurs under an odd number of negations", f.offset());
      return Formula::var(f.label());
    }
    case Kind::And:
    case Kind::Or: {
      Formula l = push_negations(f.lhs(), negated, flipped);
      Formula r = push_negations(f.rhs(), negated, flipped);
      return (f.kind() == Kind::And) != negated ? Formula::conj(l, r) : Formula::disj(l, r);
    }
    case Kind::Box:
    case Kind::Diamond: {
      Formula c = push_negations(f.child(), negated, flipped);
      return (f.kind() == Kind::Box) != negated ? Formula::box(f.label(), c) : Formula::diamond(f.label(), c);
    }
    case Kind::Mu:
    case Kind::Nu: {
      auto saved = flipped.find(f.label()) == flipped.end() ? std::nullopt
                                                            : std::optional<bool>(flipped[f.label()]);
      flipped[f.label()] = negated;
      Formula body = push_negations(f.child(), negated, flipped);
      if (saved)
        flipped[f.label()] = *saved;
      else
        flipped.erase(f.label());
      bool mu = (f.kind() == Kind::Mu) != negated;
      return Formula::fix(mu ? FixKind::Mu : FixKind::Nu, f.label(), body);
    }
  }
  return f;
}

inline Formula rename_bound(const Formula& f, const std::vector<std::string>& fresh, std::size_t& next,
                            std::vector<std::pair<std::string, std::string>>& scope) {
  switch (f.kind()) {
    case Kind::Var:
      for (auto it = scope.rbegin(); it != scope.rend(); ++it)
        if (it->first == f.label()) return Formula::var(it->second);
      return f;
    case Kind::Mu:
    case Kind::Nu: {
      const std::string& name = fresh[next++];
      scope.emplace_back(f.label(), name);
      Formula body = rename_bound(f.child(), fresh, next, scope);
      scope.pop_back();
      return Formula::fix(f.fix_kind(), name, body);
    }
    case Kind::Not:
      return Formula::neg(rename_bound(f.child(), fresh, next, scope));
    case Kind::Box:
      return Formula::box(f.label(), rename_bound(f.child(), fresh, next, scope));
    case Kind::Diamond:
      return Formula::diamond(f.label(), rename_bound(f.child(), fresh, next, scope));
    case Kind::And: {
      Formula l = rename_bound(f.lhs(), fresh, next, scope);
      return Formula::conj(l, rename_bound(f.rhs(), fresh, next, scope));
    }
    case Kind::Or: {
      Formula l = rename_bound(f.lhs(), fresh, next, scope);
      return Formula::disj(l, rename_bound(f.rhs(), fresh, next, scope));
    }
    default:
      return f;
  }
}

}  // namespace detail

// Renames binders so that all bound variables are pairwise distinct and
// distinct from every proposition and free variable. A base name that is
// bound more than once (or clashes) is replaced at every binder by
// base + counter; names bound exactly once are kept.
inline Formula rename_apart(const Formula& f) {
  std::vector<std::string> binders;
  detail::visit_preorder(f, [&](const Formula& g) {
    if (g.is_fixpoint()) binders.push_back(g.label());
  });
  std::set<std::string> taken = propositions(f);
  for (const auto& v : free_variables(f)) taken.insert(v);
  std::map<std::string, int> count;
  for (const auto& b : binders) ++count[b];
  std::set<std::string> used = taken;
  for (const auto& b : binders) used.insert(b);

  std::map<std::string, int> counter;
  std::vector<std::string> fresh;
  for (const auto& b : binders) {
    if (count[b] == 1 && !taken.count(b)) {
      fresh.push_back(b);
      continue;
    }
    std::string candidate;
    do {
      candidate = b + std::to_string(++counter[b]);
    } while (used.count(candidate));
    used.insert(candidate);
    fresh.push_back(candidate);
  }
  std::size_t next = 0;
  std::vector<std::pair<std::string, std::string>> scope;
  return detail::rename_bound(f, fresh, next, scope);
}

// Negation only on propositions, all binders distinct from each other and
// from free identifiers.
inline bool is_positive_normal_form(const Formula& f) {
  bool ok = true;
  std::set<std::string> seen;
  std::set<std::string> taken = propositions(f);
  for (const auto& v : free_variables(f)) taken.insert(v);
  detail::visit_preorder(f, [&](const Formula& g) {
    if (g.kind() == Kind::Not && g.child().kind() != Kind::Prop) ok = false;
    if (g.is_fixpoint()) {
      if (!seen.insert(g.label()).second || taken.count(g.label())) ok = false;
    }
  });
  return ok;
}

inline Formula to_pnf(const Formula& f) {
  if (!is_closed(f)) throw FormulaError("formula is not closed: free variable " + *free_variables(f).begin());
  std::map<std::string, bool> flipped;
  return rename_apart(detail::push_negations(f, false, flipped));
}

// ---------------------------------------------------------------------------
// Guardedness

namespace detail {

// True if a free occurrence of var is reachable from f without crossing a
// modality.
inline bool occurs_unguarded(const Formula& f, const std::string& var) {
  switch (f.kind()) {
    case Kind::Var:
      return f.label() == var;
    case Kind::Mu:
    case Kind::Nu:
      return f.label() != var && occurs_unguarded(f.child(), var);
    case Kind::Not:
      return occurs_unguarded(f.child(), var);
    case Kind::And:
    case Kind::Or:
      return occurs_unguarded(f.lhs(), var) || occurs_unguarded(f.rhs(), var);
    default:
      return false;
  }
}

// Unfolds every binder on an unguarded path that hides an unguarded
// occurrence of var, so those occurrences end up in boolean context.
inline Formula flatten_unguarded(const Formula& f, const std::string& var) {
  switch (f.kind()) {
    case Kind::And:
      return Formula::conj(flatten_unguarded(f.lhs(), var), flatten_unguarded(f.rhs(), var));
    case Kind::Or:
      return Formula::disj(flatten_unguarded(f.lhs(), var), flatten_unguarded(f.rhs(), var));
    case Kind::Mu:
    case Kind::Nu:
      if (f.label() != var && occurs_unguarded(f.child(), var))
        return flatten_unguarded(substitute(f.child(), f.label(), f), var);
      return f;
    default:
      return f;
  }
}

inline Formula replace_unguarded(const Formula& f, const std::string& var, const Formula& constant) {
  switch (f.kind()) {
    case Kind::Var:
      return f.label() == var ? constant : f;
    case Kind::And:
      return Formula::conj(replace_unguarded(f.lhs(), var, constant), replace_unguarded(f.rhs(), var, constant));
    case Kind::Or:
      return Formula::disj(replace_unguarded(f.lhs(), var, constant), replace_unguarded(f.rhs(), var, constant));
    case Kind::Mu:
    case Kind::Nu:
      if (f.label() == var) return f;
      return Formula::fix(f.fix_kind(), f.label(), replace_unguarded(f.child(), var, constant));
    default:
      return f;
  }
}

inline Formula guard(const Formula& f) {
  switch (f.kind()) {
    case Kind::And:
      return Formula::conj(guard(f.lhs()), guard(f.rhs()));
    case Kind::Or:
      return Formula::disj(guard(f.lhs()), guard(f.rhs()));
    case Kind::Box:
      return Formula::box(f.label(), guard(f.child()));
    case Kind::Diamond:
      return Formula::diamond(f.label(), guard(f.child()));
    case Kind::Mu:
    case Kind::Nu: {
      Formula body = guard(f.child());
      if (occurs_unguarded(body, f.label())) {
        body = flatten_unguarded(body, f.label());
        body = replace_unguarded(body, f.label(), f.kind() == Kind::Mu ? Formula::ff() : Formula::tt());
      }
      return Formula::fix(f.fix_kind(), f.label(), body);
    }
    default:
      return f;
  }
}

}  // namespace detail

inline bool is_guarded(const Formula& f) {
  bool ok = true;
  detail::visit_preorder(f, [&](const Formula& g) {
    if (g.is_fixpoint() && detail::occurs_unguarded(g.child(), g.label())) ok = false;
  });
  return ok;
}

// Unguarded occurrences of a mu-variable become ff, of a nu-variable tt,
// after unfolding the inner binders that hide them. Identity on guarded
// input.
inline Formula make_guarded(const Formula& f) {
  if (!is_positive_normal_form(f)) throw FormulaError("make_guarded expects positive normal form");
  if (is_guarded(f)) return f;
  return rename_apart(detail::guard(f));
}

// ---------------------------------------------------------------------------
// Variable ordering and binding map

// Linear order on the bound variables of a PNF formula: outer binders first,
// incomparable binders by leftmost occurrence.
struct VarOrdering {
  std::vector<std::string> vars;
  std::vector<bool> is_nu;
  // Names available per nu-variable.
  std::size_t name_budget = 0;

  std::size_t size() const noexcept { return vars.size(); }

  std::optional<std::size_t> index_of(std::string_view v) const {
    for (std::size_t i = 0; i < vars.size(); ++i)
      if (vars[i] == v) return i;
    return std::nullopt;
  }
};

inline VarOrdering variable_ordering(const Formula& gamma) {
  VarOrdering ord;
  detail::visit_preorder(gamma, [&](const Formula& g) {
    if (g.is_fixpoint()) {
      ord.vars.push_back(g.label());
      ord.is_nu.push_back(g.kind() == Kind::Nu);
    }
  });
  ord.name_budget = gamma.size();
  return ord;
}

using BindingMap = std::map<std::string, Formula>;

inline BindingMap binding_map(const Formula& gamma) {
  BindingMap map;
  detail::visit_preorder(gamma, [&](const Formula& g) {
    if (g.is_fixpoint()) map.emplace(g.label(), g);
  });
  return map;
}

// Parse, normalize and guard in one step; the usual entry for prover input.
inline Formula prepare(const Formula& raw) { return make_guarded(to_pnf(raw)); }

}  // namespace mucalc
