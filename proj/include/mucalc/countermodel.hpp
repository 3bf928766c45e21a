// Countermodels from failed proof searches.
//
// Each region of the failure tree (a stretch of non-branching steps ending
// in a modal node) becomes one state. A repeat leaf belongs to the region of
// its companion. The modal node at the end of a region supplies the
// outgoing transitions and the valuation of the state.

#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mucalc/formula.hpp"
#include "mucalc/lts.hpp"
#include "mucalc/semantics.hpp"
#include "mucalc/tableau.hpp"

namespace mucalc {

class MalformedFailureTree : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

namespace detail {

class Extractor {
 public:
  Extractor(const ProofSystem& sys, const FailureTree& ft) : sys_(sys), ft_(ft), state_(ft.nodes.size()) {}

  PointedLts run() {
    if (ft_.nodes.empty()) throw MalformedFailureTree("empty failure tree");
    for (const auto& a : actions(sys_.gamma())) lts_.declare_action(a);
    for (const auto& p : propositions(sys_.gamma())) lts_.declare_prop(p);
    StateId root = state_of(0);
    // Transitions are added once every state exists.
    for (std::size_t i = 0; i < ft_.nodes.size(); ++i) {
      const FailureNode& n = ft_.nodes[i];
      if (n.kind != FailureKind::Modal) continue;
      if (n.rules.size() != n.children.size()) throw MalformedFailureTree("modal node with mismatched children");
      for (std::size_t k = 0; k < n.children.size(); ++k) {
        const std::string& act = sys_.closure().node(n.rules[k].principal.formula).label;
        lts_.add_transition(*state_[i], act, state_of(n.children[k]));
      }
    }
    return PointedLts{std::move(lts_), root};
  }

 private:
  // The state of a node: that of the modal node closing its region.
  StateId state_of(std::size_t start) {
    std::vector<std::size_t> visited;
    std::size_t i = start;
    for (;;) {
      if (i >= ft_.nodes.size()) throw MalformedFailureTree("node index out of range");
      if (state_[i]) break;
      const FailureNode& n = ft_.nodes[i];
      if (n.kind == FailureKind::Modal) {
        state_[i] = new_state(n);
        break;
      }
      if (std::find(visited.begin(), visited.end(), i) != visited.end())
        throw MalformedFailureTree("cycle of repeats without a modal step");
      visited.push_back(i);
      if (n.kind == FailureKind::Repeat)
        i = n.companion;
      else if (n.children.size() == 1)
        i = n.children.front();
      else
        throw MalformedFailureTree("non-modal node must have exactly one child");
    }
    for (std::size_t v : visited) state_[v] = state_[i];
    return *state_[i];
  }

  StateId new_state(const FailureNode& n) {
    StateId s = lts_.add_state("s" + std::to_string(lts_.size()));
    for (const Entry& e : n.sequent.entries) {
      const ClosureNode& c = sys_.closure().node(e.formula);
      if (c.kind == CKind::NegProp) lts_.set_prop(c.label, s);
    }
    return s;
  }

  const ProofSystem& sys_;
  const FailureTree& ft_;
  std::vector<std::optional<StateId>> state_;
  Lts lts_;
};

}  // namespace detail

inline PointedLts extract_countermodel(const ProofSystem& sys, const FailureTree& ft) {
  return detail::Extractor(sys, ft).run();
}

inline PointedLts extract_countermodel(const SearchOutcome& outcome) {
  if (outcome.valid()) throw std::invalid_argument("formula is valid; there is no countermodel");
  return extract_countermodel(*outcome.system, outcome.failure());
}

// True iff the root of m falsifies gamma.
inline bool verify_countermodel(const PointedLts& m, const Formula& gamma) {
  if (!is_closed(gamma)) throw FormulaError("verify_countermodel needs a closed formula");
  if (m.root >= m.lts.size()) return false;
  return !holds(m.lts, m.root, gamma);
}

}  // namespace mucalc
