// Tableau proof system with names for validity of guarded mu-calculus
// formulas: logical rules, the Thin and Reset structural rules, the repeat
// condition, exhaustive proof search and an independent proof checker.
//
// Rule application order at a node:
//   1. Thin, then Reset (structural rules have priority),
//   2. Or, then fixpoint unfolding (outermost variable first), then And,
//   3. the modal rule, one instance per box formula, tried in order.
// Only the modal choice is backtracked over; the other rules preserve
// validity in both directions.

#pragma once

#include <algorithm>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <variant>
#include <vector>

#include "mucalc/formula.hpp"
#include "mucalc/lts.hpp"
#include "mucalc/names.hpp"
#include "mucalc/sequent.hpp"

namespace mucalc {

enum class RuleTag { Or, And, Modal, MuUnfold, NuUnfold, Thin, Reset };

inline const char* rule_tag_name(RuleTag t) {
  switch (t) {
    case RuleTag::Or:
      return "Or";
    case RuleTag::And:
      return "And";
    case RuleTag::Modal:
      return "Modal";
    case RuleTag::MuUnfold:
      return "MuUnfold";
    case RuleTag::NuUnfold:
      return "NuUnfold";
    case RuleTag::Thin:
      return "Thin";
    case RuleTag::Reset:
      return "Reset";
  }
  return "?";
}

inline std::optional<RuleTag> rule_tag_from_name(std::string_view s) {
  for (RuleTag t : {RuleTag::Or, RuleTag::And, RuleTag::Modal, RuleTag::MuUnfold, RuleTag::NuUnfold, RuleTag::Thin,
                    RuleTag::Reset})
    if (s == rule_tag_name(t)) return t;
  return std::nullopt;
}

struct RuleInstance {
  RuleTag tag = RuleTag::Or;
  // The decomposed formula; the box formula for Modal; the kept copy for Thin.
  Entry principal;
  // Thin only: the discarded copy.
  std::optional<Entry> dropped;
  // Reset only.
  Name name{};

  friend bool operator==(const RuleInstance&, const RuleInstance&) = default;
};

enum class AxiomKind { Literal, True };

class RuleNotApplicable : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A sequent or search invariant failed; always a bug, never a user error.
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// One step of a root-to-leaf path: the sequent at a node and the rule applied
// there to reach the next node of the path.
struct PathStep {
  const Sequent* sequent;
  const RuleInstance* rule;
};

struct Companion {
  std::size_t index;  // position in the path
  Name witness;
};

class ProofSystem {
 public:
  explicit ProofSystem(const Formula& gamma) : closure_(gamma) {}

  const Closure& closure() const noexcept { return closure_; }
  const Formula& gamma() const noexcept { return closure_.gamma(); }

  Sequent initial() const { return Sequent{{}, {Entry{closure_.root(), {}}}}; }

  std::optional<AxiomKind> axiom(const Sequent& s) const {
    for (const Entry& e : s.entries)
      if (kind(e) == CKind::True) return AxiomKind::True;
    for (const Entry& p : s.entries) {
      if (kind(p) != CKind::Prop) continue;
      for (const Entry& q : s.entries)
        if (kind(q) == CKind::NegProp && label(q) == label(p)) return AxiomKind::Literal;
    }
    return std::nullopt;
  }

  bool is_axiom(const Sequent& s) const { return axiom(s).has_value(); }

  // Structural instances if any apply (Thin before Reset); otherwise the
  // Or/unfold/And instances in application order; otherwise the modal
  // instances. Empty means the sequent is stuck.
  std::vector<RuleInstance> enumerate_rule_instances(const Sequent& s) const {
    std::vector<RuleInstance> out = thin_instances(s);
    for (const Name& z : s.context)
      if (reset_applicable(s, z)) out.push_back(RuleInstance{RuleTag::Reset, {}, std::nullopt, z});
    if (!out.empty()) return out;

    for (const Entry& e : s.entries)
      if (kind(e) == CKind::Or) out.push_back(RuleInstance{RuleTag::Or, e, std::nullopt, {}});
    std::vector<RuleInstance> unfolds;
    for (const Entry& e : s.entries)
      if (kind(e) == CKind::Var)
        unfolds.push_back(RuleInstance{is_nu_entry(e) ? RuleTag::NuUnfold : RuleTag::MuUnfold, e, std::nullopt, {}});
    std::stable_sort(unfolds.begin(), unfolds.end(), [&](const RuleInstance& a, const RuleInstance& b) {
      return closure_.node(a.principal.formula).var < closure_.node(b.principal.formula).var;
    });
    out.insert(out.end(), unfolds.begin(), unfolds.end());
    for (const Entry& e : s.entries)
      if (kind(e) == CKind::And) out.push_back(RuleInstance{RuleTag::And, e, std::nullopt, {}});
    if (!out.empty()) return out;

    for (const Entry& e : s.entries)
      if (kind(e) == CKind::Box) out.push_back(RuleInstance{RuleTag::Modal, e, std::nullopt, {}});
    return out;
  }

  // Side conditions of the rule on this sequent; priority is not checked.
  bool applicable(const Sequent& s, const RuleInstance& r) const {
    if (r.tag == RuleTag::Reset) return mentions(s.context, r.name) && reset_applicable(s, r.name);
    if (!s.contains(r.principal)) return false;
    switch (r.tag) {
      case RuleTag::Or:
        return kind(r.principal) == CKind::Or;
      case RuleTag::And:
        return kind(r.principal) == CKind::And;
      case RuleTag::Modal:
        return kind(r.principal) == CKind::Box;
      case RuleTag::MuUnfold:
        return kind(r.principal) == CKind::Var && !is_nu_entry(r.principal);
      case RuleTag::NuUnfold:
        return kind(r.principal) == CKind::Var && is_nu_entry(r.principal);
      case RuleTag::Thin:
        return r.dropped && s.contains(*r.dropped) && r.dropped->formula == r.principal.formula &&
               r.dropped->annotation != r.principal.annotation &&
               sqsubset_under(r.principal.annotation, r.dropped->annotation, s.context, closure_.ordering());
      case RuleTag::Reset:
        break;
    }
    return false;
  }

  std::vector<Sequent> apply_rule_instance(const Sequent& s, const RuleInstance& r) const {
    if (!applicable(s, r)) throw RuleNotApplicable(std::string(rule_tag_name(r.tag)) + " does not apply");
    const ClosureNode& n = closure_.node(r.principal.formula);
    const NameSeq& u = r.principal.annotation;
    switch (r.tag) {
      case RuleTag::Or: {
        auto rest = without(s, r.principal);
        rest.push_back(Entry{n.lhs, u});
        rest.push_back(Entry{n.rhs, u});
        return {make_sequent(s.context, std::move(rest))};
      }
      case RuleTag::And: {
        auto left = without(s, r.principal);
        auto right = left;
        left.push_back(Entry{n.lhs, u});
        right.push_back(Entry{n.rhs, u});
        return {make_sequent(s.context, std::move(left)), make_sequent(s.context, std::move(right))};
      }
      case RuleTag::Modal: {
        std::vector<Entry> next;
        for (const Entry& e : s.entries) {
          const ClosureNode& m = closure_.node(e.formula);
          if (m.kind == CKind::Diamond && m.label == n.label) next.push_back(Entry{m.lhs, e.annotation});
        }
        next.push_back(Entry{n.lhs, u});
        return {make_sequent(s.context, std::move(next))};
      }
      case RuleTag::MuUnfold: {
        auto rest = without(s, r.principal);
        rest.push_back(Entry{closure_.body(n.var), restrict(u, n.var)});
        return {make_sequent(s.context, std::move(rest))};
      }
      case RuleTag::NuUnfold: {
        Name z = fresh_name(n.var, s.context, closure_.ordering().name_budget);
        auto rest = without(s, r.principal);
        NameSeq annotation = restrict(u, n.var);
        annotation.push_back(z);
        rest.push_back(Entry{closure_.body(n.var), std::move(annotation)});
        NameSeq w = s.context;
        w.push_back(z);
        return {make_sequent(w, std::move(rest))};
      }
      case RuleTag::Thin:
        return {make_sequent(s.context, without(s, *r.dropped))};
      case RuleTag::Reset: {
        std::vector<Entry> next;
        for (const Entry& e : s.entries) {
          auto it = std::find(e.annotation.begin(), e.annotation.end(), r.name);
          if (it == e.annotation.end())
            next.push_back(e);
          else
            next.push_back(Entry{e.formula, NameSeq(e.annotation.begin(), it + 1)});
        }
        return {make_sequent(s.context, std::move(next))};
      }
    }
    return {};
  }

  // The nearest ancestor on path with the same sequent as leaf for which
  // some name z stays in every context from that ancestor to the leaf and a
  // Reset_z is applied in between.
  std::optional<Companion> find_successful_companion(std::span<const PathStep> path, const Sequent& leaf) const {
    for (std::size_t m = path.size(); m-- > 0;) {
      if (!(*path[m].sequent == leaf)) continue;
      for (std::size_t k = m; k < path.size(); ++k) {
        const RuleInstance* r = path[k].rule;
        if (!r || r->tag != RuleTag::Reset) continue;
        const Name z = r->name;
        bool everywhere = mentions(leaf.context, z);
        for (std::size_t j = m; everywhere && j < path.size(); ++j) everywhere = mentions(path[j].sequent->context, z);
        if (everywhere) return Companion{m, z};
      }
    }
    return std::nullopt;
  }

  // Sequent invariants: distinct context names, annotations are
  // subsequences of the context, no orphan context names, names within the
  // budget of a nu-variable, and the dichotomy between distinct annotations
  // of the same formula.
  std::optional<std::string> check_sequent(const Sequent& s) const {
    const VarOrdering& ord = closure_.ordering();
    for (std::size_t i = 0; i < s.context.size(); ++i) {
      const Name& n = s.context[i];
      if (n.var >= ord.size() || !ord.is_nu[n.var]) return "context names a non-nu variable";
      if (n.index < 1 || n.index > ord.name_budget) return "name index outside the budget";
      for (std::size_t j = i + 1; j < s.context.size(); ++j)
        if (s.context[j] == n) return "context repeats a name";
      bool used = std::any_of(s.entries.begin(), s.entries.end(),
                              [&](const Entry& e) { return mentions(e.annotation, n); });
      if (!used) return "context name " + closure_.codec().print(n) + " occurs in no annotation";
    }
    for (const Entry& e : s.entries) {
      if (e.formula >= closure_.size()) return "unknown formula";
      if (!is_subsequence(e.annotation, s.context)) return "annotation is not a subsequence of the context";
    }
    for (std::size_t i = 0; i < s.entries.size(); ++i)
      for (std::size_t j = i + 1; j < s.entries.size() && s.entries[j].formula == s.entries[i].formula; ++j) {
        bool ab = sqsubset_under(s.entries[i].annotation, s.entries[j].annotation, s.context, ord);
        bool ba = sqsubset_under(s.entries[j].annotation, s.entries[i].annotation, s.context, ord);
        if (ab == ba) return "annotations of " + closure_.text(s.entries[i].formula) + " are not strictly ordered";
      }
    return std::nullopt;
  }

  std::string text(const Sequent& s) const { return sequent_text(closure_, s); }
  std::string text(const Entry& e) const { return entry_text(closure_, e); }

  std::string text(const RuleInstance& r) const {
    switch (r.tag) {
      case RuleTag::Reset:
        return "Reset_" + closure_.codec().print(r.name);
      case RuleTag::Thin:
        return "Thin " + text(*r.dropped) + " by " + text(r.principal);
      default:
        return std::string(rule_tag_name(r.tag)) + " " + text(r.principal);
    }
  }

  Sequent parse(std::string_view sequent_text) const { return parse_sequent(closure_, sequent_text); }

 private:
  CKind kind(const Entry& e) const { return closure_.node(e.formula).kind; }
  const std::string& label(const Entry& e) const { return closure_.node(e.formula).label; }
  bool is_nu_entry(const Entry& e) const { return closure_.is_nu(closure_.node(e.formula).var); }

  static std::vector<Entry> without(const Sequent& s, const Entry& drop) {
    std::vector<Entry> out;
    for (const Entry& e : s.entries)
      if (!(e == drop)) out.push_back(e);
    return out;
  }

  // Ordered by (formula, dropped annotation read as positions in w).
  std::vector<RuleInstance> thin_instances(const Sequent& s) const {
    std::vector<RuleInstance> out;
    const auto& es = s.entries;
    for (std::size_t i = 0; i < es.size(); ++i)
      for (std::size_t j = 0; j < es.size(); ++j) {
        if (i == j || es[i].formula != es[j].formula) continue;
        if (sqsubset_under(es[i].annotation, es[j].annotation, s.context, closure_.ordering()))
          out.push_back(RuleInstance{RuleTag::Thin, es[i], es[j], {}});
      }
    auto positions = [&](const NameSeq& u) {
      std::vector<std::size_t> p;
      for (const Name& n : u) p.push_back(static_cast<std::size_t>(std::find(s.context.begin(), s.context.end(), n) -
                                                                   s.context.begin()));
      return p;
    };
    std::stable_sort(out.begin(), out.end(), [&](const RuleInstance& a, const RuleInstance& b) {
      if (a.dropped->formula != b.dropped->formula) return a.dropped->formula < b.dropped->formula;
      return positions(a.dropped->annotation) < positions(b.dropped->annotation);
    });
    return out;
  }

  // Every annotation containing z continues with another name of z's
  // variable after a common prefix, and at least one annotation contains z.
  bool reset_applicable(const Sequent& s, const Name& z) const {
    std::optional<NameSeq> prefix;
    for (const Entry& e : s.entries) {
      auto it = std::find(e.annotation.begin(), e.annotation.end(), z);
      if (it == e.annotation.end()) continue;
      if (it + 1 == e.annotation.end() || (it + 1)->var != z.var) return false;
      NameSeq p(e.annotation.begin(), it);
      if (prefix && *prefix != p) return false;
      prefix = std::move(p);
    }
    return prefix.has_value();
  }

  Closure closure_;
};

// ---------------------------------------------------------------------------
// Trees

enum class LeafKind { None, Axiom, Repeat };

struct ProofNode {
  Sequent sequent;
  std::optional<std::size_t> parent;
  std::optional<RuleInstance> rule;  // rule applied at an internal node
  std::vector<std::size_t> children;
  LeafKind leaf = LeafKind::None;
  std::size_t companion = 0;  // Repeat leaves
  Name witness{};             // Repeat leaves: the reset name
};

// Node 0 is the root.
struct ProofTree {
  std::vector<ProofNode> nodes;
};

enum class FailureKind { Step, Modal, Repeat };

// Failed search, pruned so that only modal nodes branch: a Step keeps one
// failing child, a Modal node keeps every modal alternative, a Repeat leaf
// points at its (unsuccessful) companion.
struct FailureNode {
  Sequent sequent;
  std::optional<std::size_t> parent;
  FailureKind kind = FailureKind::Step;
  std::vector<RuleInstance> rules;  // Step: one rule; Modal: one per child
  std::vector<std::size_t> children;
  std::size_t companion = 0;
};

struct FailureTree {
  std::vector<FailureNode> nodes;
};

struct SearchStats {
  std::size_t nodes = 0;
  std::size_t distinct_sequents = 0;
  std::size_t max_branch_length = 0;
  std::size_t repeat_leaves = 0;
};

struct SearchOptions {
  std::size_t max_nodes = 4'000'000;
  // Called once per explored node with its depth and a description.
  std::function<void(std::size_t, const std::string&)> trace;
  bool check_invariants = true;
};

struct SearchOutcome {
  std::shared_ptr<const ProofSystem> system;
  std::variant<ProofTree, FailureTree> result;
  SearchStats stats;

  bool valid() const noexcept { return std::holds_alternative<ProofTree>(result); }
  const ProofTree& proof() const { return std::get<ProofTree>(result); }
  const FailureTree& failure() const { return std::get<FailureTree>(result); }
};

namespace detail {

struct SequentHash {
  std::size_t operator()(const Sequent& s) const { return hash_value(s); }
};

class Search {
 public:
  Search(std::shared_ptr<const ProofSystem> sys, const SearchOptions& opts) : sys_(std::move(sys)), opts_(opts) {}

  SearchOutcome run() {
    explore(sys_->initial(), std::nullopt);
    SearchOutcome out;
    out.system = sys_;
    stats_.distinct_sequents = seen_.size();
    out.stats = stats_;
    if (arena_[0].success)
      out.result = extract_proof();
    else
      out.result = extract_failure();
    return out;
  }

 private:
  enum class NodeKind { Axiom, Repeat, Step, Modal };

  struct Explored {
    Sequent sequent;
    std::optional<std::size_t> parent;
    NodeKind kind = NodeKind::Step;
    std::vector<RuleInstance> rules;
    std::vector<std::size_t> children;
    bool success = false;
    std::size_t companion = 0;
    Name witness{};
    std::size_t chosen = 0;
  };

  bool explore(Sequent seq, std::optional<std::size_t> parent) {
    if (arena_.size() >= opts_.max_nodes)
      throw ResourceLimit("proof search exceeded " + std::to_string(opts_.max_nodes) + " nodes");
    const std::size_t id = arena_.size();
    arena_.emplace_back();
    arena_.back().sequent = std::move(seq);
    arena_.back().parent = parent;
    ++stats_.nodes;
    const std::size_t depth = path_nodes_.size();
    stats_.max_branch_length = std::max(stats_.max_branch_length, depth + 1);
    const Sequent& s = arena_[id].sequent;
    seen_.insert(s);

    if (opts_.check_invariants)
      if (auto err = sys_->check_sequent(s)) throw InvariantViolation(*err + " in " + sys_->text(s));

    if (sys_->is_axiom(s)) {
      arena_[id].kind = NodeKind::Axiom;
      arena_[id].success = true;
      trace(depth, s, "axiom");
      return true;
    }

    bool repeated = false;
    for (std::size_t anc : path_nodes_)
      if (arena_[anc].sequent == s) {
        repeated = true;
        break;
      }
    if (repeated) {
      arena_[id].kind = NodeKind::Repeat;
      ++stats_.repeat_leaves;
      std::vector<PathStep> path;
      for (std::size_t k = 0; k < path_nodes_.size(); ++k) path.push_back({&arena_[path_nodes_[k]].sequent, &path_rules_[k]});
      auto comp = sys_->find_successful_companion(path, s);
      if (comp) {
        arena_[id].success = true;
        arena_[id].companion = path_nodes_[comp->index];
        arena_[id].witness = comp->witness;
      } else {
        // The nearest identical ancestor serves as the companion of an
        // unsuccessful repeat.
        for (std::size_t k = path_nodes_.size(); k-- > 0;)
          if (arena_[path_nodes_[k]].sequent == s) {
            arena_[id].companion = path_nodes_[k];
            break;
          }
      }
      trace(depth, s, comp ? "successful repeat" : "unsuccessful repeat");
      return arena_[id].success;
    }

    std::vector<RuleInstance> instances = sys_->enumerate_rule_instances(s);
    if (instances.empty() || instances.front().tag == RuleTag::Modal) {
      arena_[id].kind = NodeKind::Modal;
      trace(depth, s, instances.empty() ? "stuck" : "modal");
      for (std::size_t i = 0; i < instances.size(); ++i) {
        Sequent child = sys_->apply_rule_instance(arena_[id].sequent, instances[i]).front();
        arena_[id].rules.push_back(instances[i]);
        path_nodes_.push_back(id);
        path_rules_.push_back(instances[i]);
        const std::size_t child_id = arena_.size();
        arena_[id].children.push_back(child_id);
        bool ok = explore(std::move(child), id);
        path_nodes_.pop_back();
        path_rules_.pop_back();
        if (ok) {
          arena_[id].success = true;
          arena_[id].chosen = i;
          return true;
        }
      }
      return false;
    }

    const RuleInstance rule = instances.front();
    arena_[id].kind = NodeKind::Step;
    arena_[id].rules.push_back(rule);
    trace(depth, s, sys_->text(rule));
    std::vector<Sequent> children = sys_->apply_rule_instance(arena_[id].sequent, rule);
    path_nodes_.push_back(id);
    path_rules_.push_back(rule);
    bool ok = true;
    for (auto& child : children) {
      arena_[id].children.push_back(arena_.size());
      if (!explore(std::move(child), id)) {
        ok = false;
        break;
      }
    }
    path_nodes_.pop_back();
    path_rules_.pop_back();
    arena_[id].success = ok;
    return ok;
  }

  void trace(std::size_t depth, const Sequent& s, const std::string& what) const {
    if (opts_.trace) opts_.trace(depth, sys_->text(s) + "    [" + what + "]");
  }

  ProofTree extract_proof() const {
    ProofTree t;
    std::unordered_map<std::size_t, std::size_t> remap;
    std::function<std::size_t(std::size_t, std::optional<std::size_t>)> copy = [&](std::size_t a,
                                                                                     std::optional<std::size_t> parent) {
      const Explored& e = arena_[a];
      const std::size_t id = t.nodes.size();
      remap[a] = id;
      t.nodes.emplace_back();
      t.nodes[id].sequent = e.sequent;
      t.nodes[id].parent = parent;
      switch (e.kind) {
        case NodeKind::Axiom:
          t.nodes[id].leaf = LeafKind::Axiom;
          break;
        case NodeKind::Repeat:
          t.nodes[id].leaf = LeafKind::Repeat;
          t.nodes[id].companion = remap.at(e.companion);
          t.nodes[id].witness = e.witness;
          break;
        case NodeKind::Step: {
          t.nodes[id].rule = e.rules.front();
          for (std::size_t c : e.children) {
            std::size_t cid = copy(c, id);
            t.nodes[id].children.push_back(cid);
          }
          break;
        }
        case NodeKind::Modal: {
          t.nodes[id].rule = e.rules[e.chosen];
          std::size_t cid = copy(e.children[e.chosen], id);
          t.nodes[id].children.push_back(cid);
          break;
        }
      }
      return id;
    };
    copy(0, std::nullopt);
    return t;
  }

  FailureTree extract_failure() const {
    FailureTree t;
    std::unordered_map<std::size_t, std::size_t> remap;
    std::function<std::size_t(std::size_t, std::optional<std::size_t>)> copy = [&](std::size_t a,
                                                                                     std::optional<std::size_t> parent) {
      const Explored& e = arena_[a];
      if (e.success) throw InvariantViolation("successful node inside a failure tree");
      const std::size_t id = t.nodes.size();
      remap[a] = id;
      t.nodes.emplace_back();
      t.nodes[id].sequent = e.sequent;
      t.nodes[id].parent = parent;
      switch (e.kind) {
        case NodeKind::Axiom:
          throw InvariantViolation("axiom inside a failure tree");
        case NodeKind::Repeat:
          t.nodes[id].kind = FailureKind::Repeat;
          t.nodes[id].companion = remap.at(e.companion);
          break;
        case NodeKind::Step: {
          t.nodes[id].kind = FailureKind::Step;
          t.nodes[id].rules = e.rules;
          auto failing = std::find_if(e.children.begin(), e.children.end(),
                                      [&](std::size_t c) { return !arena_[c].success; });
          std::size_t cid = copy(*failing, id);
          t.nodes[id].children.push_back(cid);
          break;
        }
        case NodeKind::Modal:
          t.nodes[id].kind = FailureKind::Modal;
          t.nodes[id].rules = e.rules;
          for (std::size_t c : e.children) {
            std::size_t cid = copy(c, id);
            t.nodes[id].children.push_back(cid);
          }
          break;
      }
      return id;
    };
    copy(0, std::nullopt);
    return t;
  }

  std::shared_ptr<const ProofSystem> sys_;
  const SearchOptions& opts_;
  std::vector<Explored> arena_;
  std::vector<std::size_t> path_nodes_;
  std::vector<RuleInstance> path_rules_;
  std::unordered_set<Sequent, SequentHash> seen_;
  SearchStats stats_;
};

}  // namespace detail

// Decides validity of a closed, guarded formula in positive normal form.
inline SearchOutcome prove(const Formula& gamma, const SearchOptions& opts = {}) {
  auto sys = std::make_shared<const ProofSystem>(gamma);
  return detail::Search(std::move(sys), opts).run();
}

// ---------------------------------------------------------------------------
// Proof checking

struct ValidationResult {
  bool ok = true;
  std::string message;
  std::optional<std::size_t> node;

  explicit operator bool() const noexcept { return ok; }
};

// Re-checks a proof tree from scratch: root sequent, tree shape, every rule
// application, axiom leaves and the repeat condition at repeat leaves.
inline ValidationResult validate_proof(const ProofSystem& sys, const ProofTree& t) {
  auto fail = [](std::string msg, std::optional<std::size_t> at = std::nullopt) {
    return ValidationResult{false, std::move(msg), at};
  };
  if (t.nodes.empty()) return fail("empty tree");
  if (t.nodes[0].parent) return fail("root has a parent", 0);
  if (!(t.nodes[0].sequent == sys.initial())) return fail("root is not labelled |- gamma", 0);

  // Shape: every non-root node is the child of exactly its recorded parent.
  std::vector<int> parents(t.nodes.size(), 0);
  for (std::size_t i = 0; i < t.nodes.size(); ++i)
    for (std::size_t c : t.nodes[i].children) {
      if (c >= t.nodes.size() || c == 0) return fail("child index out of range", i);
      if (t.nodes[c].parent != i) return fail("child does not point back to its parent", c);
      ++parents[c];
    }
  for (std::size_t i = 1; i < t.nodes.size(); ++i)
    if (parents[i] != 1) return fail("node is not reachable exactly once", i);
  // Parent links strictly climb towards the root (no cycles).
  for (std::size_t i = 0; i < t.nodes.size(); ++i) {
    std::size_t steps = 0;
    for (auto p = t.nodes[i].parent; p; p = t.nodes[*p].parent)
      if (*p >= t.nodes.size() || ++steps > t.nodes.size()) return fail("parent chain does not reach the root", i);
  }

  auto ancestors = [&](std::size_t i) {
    std::vector<std::size_t> out;  // nearest first
    for (auto p = t.nodes[i].parent; p; p = t.nodes[*p].parent) out.push_back(*p);
    return out;
  };

  for (std::size_t i = 0; i < t.nodes.size(); ++i) {
    const ProofNode& n = t.nodes[i];
    if (auto err = sys.check_sequent(n.sequent)) return fail("sequent invariant: " + *err, i);
    const auto anc = ancestors(i);

    switch (n.leaf) {
      case LeafKind::Axiom:
        if (!n.children.empty()) return fail("axiom leaf has children", i);
        if (!sys.is_axiom(n.sequent)) return fail("leaf is not an axiom", i);
        break;
      case LeafKind::Repeat: {
        if (!n.children.empty()) return fail("repeat leaf has children", i);
        if (std::find(anc.begin(), anc.end(), n.companion) == anc.end())
          return fail("companion is not an ancestor", i);
        const ProofNode& m = t.nodes[n.companion];
        if (!(m.sequent == n.sequent)) return fail("companion carries a different sequent", i);
        bool reset = false;
        bool everywhere = mentions(n.sequent.context, n.witness);
        for (std::size_t a : anc) {
          const ProofNode& between = t.nodes[a];
          everywhere = everywhere && mentions(between.sequent.context, n.witness);
          if (between.rule && between.rule->tag == RuleTag::Reset && between.rule->name == n.witness) reset = true;
          if (a == n.companion) break;
        }
        if (!everywhere) return fail("witness name leaves the context between companion and leaf", i);
        if (!reset) return fail("no Reset of the witness name between companion and leaf", i);
        break;
      }
      case LeafKind::None: {
        if (!n.rule) return fail("internal node without a rule", i);
        for (std::size_t a : anc)
          if (t.nodes[a].sequent == n.sequent) return fail("repeated sequent is not treated as a leaf", i);
        if (!sys.applicable(n.sequent, *n.rule)) return fail("rule side condition fails: " + sys.text(*n.rule), i);
        std::vector<Sequent> expected = sys.apply_rule_instance(n.sequent, *n.rule);
        if (expected.size() != n.children.size()) return fail("wrong number of premises for " + sys.text(*n.rule), i);
        for (std::size_t k = 0; k < expected.size(); ++k)
          if (!(t.nodes[n.children[k]].sequent == expected[k]))
            return fail("premise does not follow by " + sys.text(*n.rule), n.children[k]);
        break;
      }
    }
  }
  return {};
}

inline ValidationResult validate_proof(const Formula& gamma, const ProofTree& t) {
  ProofSystem sys(gamma);
  return validate_proof(sys, t);
}

}  // namespace mucalc
