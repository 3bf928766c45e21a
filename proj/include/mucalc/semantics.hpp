// Denotational semantics of formulas over finite transition systems, the
// finite approximant chains of fixpoints, and brute-force oracles.

#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mucalc/formula.hpp"
#include "mucalc/lts.hpp"

namespace mucalc {

// Interpretation of free variables.
using VarValuation = std::map<std::string, StateSet>;

inline StateSet eval(const Lts& lts, const VarValuation& env, const Formula& f);

namespace detail {

inline StateSet box_of(const Lts& lts, const std::string& act, const StateSet& target) {
  StateSet out(lts.size());
  for (StateId s = 0; s < lts.size(); ++s) {
    bool all = true;
    for (StateId t : lts.successors(s, act))
      if (!target.contains(t)) {
        all = false;
        break;
      }
    if (all) out.insert(s);
  }
  return out;
}

inline StateSet diamond_of(const Lts& lts, const std::string& act, const StateSet& target) {
  StateSet out(lts.size());
  for (StateId s = 0; s < lts.size(); ++s)
    for (StateId t : lts.successors(s, act))
      if (target.contains(t)) {
        out.insert(s);
        break;
      }
  return out;
}

inline StateSet eval_in(const Lts& lts, VarValuation& env, const Formula& f) {
  switch (f.kind()) {
    case Kind::True:
      return StateSet::all(lts.size());
    case Kind::False:
      return StateSet::none(lts.size());
    case Kind::Prop:
      return lts.prop(f.label());
    case Kind::Var: {
      auto it = env.find(f.label());
      if (it == env.end()) throw FormulaError("unbound variable " + f.label());
      return it->second;
    }
    case Kind::Not:
      return eval_in(lts, env, f.child()).complement();
    case Kind::And:
      return eval_in(lts, env, f.lhs()) & eval_in(lts, env, f.rhs());
    case Kind::Or:
      return eval_in(lts, env, f.lhs()) | eval_in(lts, env, f.rhs());
    case Kind::Box:
      return box_of(lts, f.label(), eval_in(lts, env, f.child()));
    case Kind::Diamond:
      return diamond_of(lts, f.label(), eval_in(lts, env, f.child()));
    case Kind::Mu:
    case Kind::Nu: {
      auto saved = env.find(f.label()) == env.end() ? std::nullopt : std::optional<StateSet>(env[f.label()]);
      StateSet current = f.kind() == Kind::Mu ? StateSet::none(lts.size()) : StateSet::all(lts.size());
      for (;;) {
        env[f.label()] = current;
        StateSet next = eval_in(lts, env, f.child());
        if (next == current) break;
        current = std::move(next);
      }
      if (saved)
        env[f.label()] = *saved;
      else
        env.erase(f.label());
      return current;
    }
  }
  return StateSet::none(lts.size());
}

}  // namespace detail

// Fixpoints are computed by Kleene iteration from the empty set (mu) or the
// full state set (nu); on a finite lattice the chain stabilizes.
inline StateSet eval(const Lts& lts, const VarValuation& env, const Formula& f) {
  VarValuation scratch = env;
  return detail::eval_in(lts, scratch, f);
}

inline StateSet eval(const Lts& lts, const Formula& f) { return eval(lts, VarValuation{}, f); }

inline bool holds(const Lts& lts, StateId s, const Formula& f) { return eval(lts, f).contains(s); }

// The n-th stage of the iteration for kind var. body: n = 0 gives the empty
// set (mu) or all states (nu), stage k+1 evaluates body with var bound to
// stage k.
inline StateSet eval_approx(const Lts& lts, const VarValuation& env, FixKind kind, const std::string& var,
                            const Formula& body, std::size_t n) {
  VarValuation scratch = env;
  StateSet stage = kind == FixKind::Mu ? StateSet::none(lts.size()) : StateSet::all(lts.size());
  for (std::size_t i = 0; i < n; ++i) {
    scratch[var] = stage;
    stage = detail::eval_in(lts, scratch, body);
  }
  return stage;
}

// Stages 0..n of the approximant chain.
inline std::vector<StateSet> approximant_chain(const Lts& lts, const VarValuation& env, FixKind kind,
                                               const std::string& var, const Formula& body, std::size_t n) {
  std::vector<StateSet> chain;
  VarValuation scratch = env;
  StateSet stage = kind == FixKind::Mu ? StateSet::none(lts.size()) : StateSet::all(lts.size());
  chain.push_back(stage);
  for (std::size_t i = 0; i < n; ++i) {
    scratch[var] = stage;
    stage = detail::eval_in(lts, scratch, body);
    chain.push_back(stage);
  }
  return chain;
}

// Knaster-Tarski by enumeration: the union of all post-fixed points (nu) or
// the intersection of all pre-fixed points (mu) of S -> [[body]]_{env[var:=S]}.
inline StateSet subset_fixpoint_oracle(const Lts& lts, const VarValuation& env, FixKind kind,
                                       const std::string& var, const Formula& body, std::size_t max_states = 4) {
  if (lts.size() > max_states)
    throw ResourceLimit("subset oracle limited to " + std::to_string(max_states) + " states");
  const std::size_t n = lts.size();
  VarValuation scratch = env;
  StateSet acc = kind == FixKind::Nu ? StateSet::none(n) : StateSet::all(n);
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    StateSet s(n);
    for (StateId i = 0; i < n; ++i)
      if ((mask >> i) & 1U) s.insert(i);
    scratch[var] = s;
    StateSet image = detail::eval_in(lts, scratch, body);
    if (kind == FixKind::Nu && s.subset_of(image)) acc |= s;
    if (kind == FixKind::Mu && image.subset_of(s)) acc &= s;
  }
  return acc;
}

// First pointed LTS (by size, then enumeration index, then root) whose root
// falsifies the closed formula f, over the actions and propositions of f.
inline std::optional<PointedLts> brute_force_countermodel(const Formula& f, std::size_t max_states = 3,
                                                          std::uint64_t cap = LtsEnumeration::kDefaultCap) {
  if (!is_closed(f)) throw FormulaError("brute_force_countermodel needs a closed formula");
  for (std::size_t n = 1; n <= max_states; ++n) {
    LtsEnumeration all(n, actions(f), propositions(f), cap);
    for (std::uint64_t i = 0; i < all.size(); ++i) {
      Lts lts = all.at(i);
      StateSet sat = eval(lts, f);
      for (StateId s = 0; s < n; ++s)
        if (!sat.contains(s)) return PointedLts{std::move(lts), s};
    }
  }
  return std::nullopt;
}

}  // namespace mucalc
