// Finite labelled transition systems with a proposition valuation, their
// JSON/DOT forms, and exhaustive enumeration of small systems.

#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <boost/container/small_vector.hpp>
#include <json.hpp>

namespace mucalc {

using StateId = std::size_t;

class LtsFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised when an enumeration or search would exceed a configured cap.
class ResourceLimit : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Subset of {0, ..., universe-1}.
class StateSet {
 public:
  StateSet() = default;
  explicit StateSet(std::size_t universe, bool full = false) : universe_(universe), words_((universe + 63) / 64, 0) {
    if (full) {
      for (auto& w : words_) w = ~std::uint64_t{0};
      trim();
    }
  }

  static StateSet all(std::size_t universe) { return StateSet(universe, true); }
  static StateSet none(std::size_t universe) { return StateSet(universe, false); }

  std::size_t universe() const noexcept { return universe_; }

  bool contains(StateId s) const { return s < universe_ && (words_[s / 64] >> (s % 64)) & 1U; }
  void insert(StateId s) { words_[s / 64] |= std::uint64_t{1} << (s % 64); }
  void erase(StateId s) { words_[s / 64] &= ~(std::uint64_t{1} << (s % 64)); }

  std::size_t count() const {
    std::size_t n = 0;
    for (auto w : words_) n += static_cast<std::size_t>(std::popcount(w));
    return n;
  }
  bool empty() const {
    return std::all_of(words_.begin(), words_.end(), [](std::uint64_t w) { return w == 0; });
  }

  bool subset_of(const StateSet& o) const {
    for (std::size_t i = 0; i < words_.size(); ++i)
      if (words_[i] & ~o.words_[i]) return false;
    return true;
  }

  StateSet& operator|=(const StateSet& o) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
    return *this;
  }
  StateSet& operator&=(const StateSet& o) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
    return *this;
  }
  friend StateSet operator|(StateSet a, const StateSet& b) { return a |= b; }
  friend StateSet operator&(StateSet a, const StateSet& b) { return a &= b; }

  StateSet complement() const {
    StateSet r = *this;
    for (auto& w : r.words_) w = ~w;
    r.trim();
    return r;
  }

  std::vector<StateId> members() const {
    std::vector<StateId> out;
    for (StateId s = 0; s < universe_; ++s)
      if (contains(s)) out.push_back(s);
    return out;
  }

  friend bool operator==(const StateSet& a, const StateSet& b) {
    return a.universe_ == b.universe_ && a.words_ == b.words_;
  }

 private:
  void trim() {
    if (universe_ % 64 != 0 && !words_.empty()) words_.back() &= (std::uint64_t{1} << (universe_ % 64)) - 1;
  }

  std::size_t universe_ = 0;
  boost::container::small_vector<std::uint64_t, 1> words_;
};

class Lts {
 public:
  StateId add_state(const std::string& name) {
    if (index_.count(name)) throw LtsFormatError("duplicate state '" + name + "'");
    StateId id = names_.size();
    names_.push_back(name);
    index_.emplace(name, id);
    for (auto& [act, succ] : successors_) succ.emplace_back();
    for (auto& [prop, set] : valuation_) set = grow(set);
    return id;
  }

  void declare_action(const std::string& act) {
    successors_.try_emplace(act, std::vector<std::vector<StateId>>(names_.size()));
  }

  void add_transition(StateId from, const std::string& act, StateId to) {
    check(from);
    check(to);
    declare_action(act);
    auto& succ = successors_[act][from];
    auto it = std::lower_bound(succ.begin(), succ.end(), to);
    if (it == succ.end() || *it != to) succ.insert(it, to);
  }

  void declare_prop(const std::string& prop) { valuation_.try_emplace(prop, StateSet::none(names_.size())); }

  void set_prop(const std::string& prop, StateId s, bool value = true) {
    check(s);
    declare_prop(prop);
    if (value)
      valuation_[prop].insert(s);
    else
      valuation_[prop].erase(s);
  }

  std::size_t size() const noexcept { return names_.size(); }
  const std::string& state_name(StateId s) const { return names_.at(s); }
  const std::vector<std::string>& state_names() const noexcept { return names_; }

  std::optional<StateId> find_state(std::string_view name) const {
    auto it = index_.find(std::string(name));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  std::set<std::string> action_names() const {
    std::set<std::string> out;
    for (const auto& [a, _] : successors_) out.insert(a);
    return out;
  }
  std::set<std::string> prop_names() const {
    std::set<std::string> out;
    for (const auto& [p, _] : valuation_) out.insert(p);
    return out;
  }

  // Sorted successor list; empty for unknown actions.
  const std::vector<StateId>& successors(StateId s, const std::string& act) const {
    static const std::vector<StateId> kNone;
    auto it = successors_.find(act);
    if (it == successors_.end()) return kNone;
    return it->second.at(s);
  }

  // States where the proposition holds; empty for undeclared propositions.
  StateSet prop(const std::string& name) const {
    auto it = valuation_.find(name);
    if (it == valuation_.end()) return StateSet::none(size());
    return it->second;
  }

  std::size_t transition_count() const {
    std::size_t n = 0;
    for (const auto& [a, succ] : successors_)
      for (const auto& s : succ) n += s.size();
    return n;
  }

 private:
  void check(StateId s) const {
    if (s >= names_.size()) throw LtsFormatError("state index out of range");
  }

  StateSet grow(const StateSet& old) const {
    StateSet s(names_.size());
    for (StateId i = 0; i < old.universe(); ++i)
      if (old.contains(i)) s.insert(i);
    return s;
  }

  std::vector<std::string> names_;
  std::map<std::string, StateId> index_;
  std::map<std::string, std::vector<std::vector<StateId>>> successors_;
  std::map<std::string, StateSet> valuation_;
};

struct PointedLts {
  Lts lts;
  StateId root = 0;
};

// ---------------------------------------------------------------------------
// JSON and DOT

struct LoadedLts {
  Lts lts;
  std::optional<StateId> root;
};

inline LoadedLts load_lts(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw LtsFormatError(std::string("malformed LTS document: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("states") || !doc["states"].is_array())
    throw LtsFormatError("LTS document needs a \"states\" array");

  std::vector<std::string> states;
  for (const auto& s : doc["states"]) {
    if (!s.is_string()) throw LtsFormatError("state ids must be strings");
    states.push_back(s.get<std::string>());
  }
  std::sort(states.begin(), states.end());
  LoadedLts out;
  for (const auto& s : states) out.lts.add_state(s);

  auto lookup = [&](const nlohmann::json& j) {
    if (!j.is_string()) throw LtsFormatError("state references must be strings");
    auto id = out.lts.find_state(j.get<std::string>());
    if (!id) throw LtsFormatError("dangling state reference '" + j.get<std::string>() + "'");
    return *id;
  };

  if (doc.contains("transitions")) {
    if (!doc["transitions"].is_array()) throw LtsFormatError("\"transitions\" must be an array");
    for (const auto& t : doc["transitions"]) {
      if (!t.is_array() || t.size() != 3 || !t[1].is_string())
        throw LtsFormatError("transitions are [source, action, target] triples");
      out.lts.add_transition(lookup(t[0]), t[1].get<std::string>(), lookup(t[2]));
    }
  }
  if (doc.contains("valuation")) {
    if (!doc["valuation"].is_object()) throw LtsFormatError("\"valuation\" must be an object");
    for (const auto& [prop, holders] : doc["valuation"].items()) {
      if (!holders.is_array()) throw LtsFormatError("valuation entries must be arrays of states");
      out.lts.declare_prop(prop);
      for (const auto& s : holders) out.lts.set_prop(prop, lookup(s));
    }
  }
  if (doc.contains("root")) out.root = lookup(doc["root"]);
  return out;
}

inline nlohmann::json lts_to_json(const Lts& lts, std::optional<StateId> root = std::nullopt) {
  std::vector<std::string> states = lts.state_names();
  std::sort(states.begin(), states.end());
  std::vector<std::array<std::string, 3>> edges;
  for (const auto& act : lts.action_names())
    for (StateId s = 0; s < lts.size(); ++s)
      for (StateId t : lts.successors(s, act)) edges.push_back({lts.state_name(s), act, lts.state_name(t)});
  std::sort(edges.begin(), edges.end());

  nlohmann::json doc = nlohmann::json::object();
  doc["states"] = states;
  doc["transitions"] = nlohmann::json::array();
  for (const auto& e : edges) doc["transitions"].push_back({e[0], e[1], e[2]});
  doc["valuation"] = nlohmann::json::object();
  for (const auto& p : lts.prop_names()) {
    std::vector<std::string> holders;
    for (StateId s : lts.prop(p).members()) holders.push_back(lts.state_name(s));
    std::sort(holders.begin(), holders.end());
    doc["valuation"][p] = holders;
  }
  if (root) doc["root"] = lts.state_name(*root);
  return doc;
}

inline std::string save_lts(const Lts& lts, std::optional<StateId> root = std::nullopt) {
  return lts_to_json(lts, root).dump(2);
}

inline std::string lts_to_dot(const Lts& lts, std::optional<StateId> root = std::nullopt) {
  std::ostringstream os;
  os << "digraph lts {\n";
  for (StateId s = 0; s < lts.size(); ++s) {
    std::string label = lts.state_name(s);
    std::string props;
    for (const auto& p : lts.prop_names())
      if (lts.prop(p).contains(s)) props += (props.empty() ? "" : ",") + p;
    if (!props.empty()) label += "\\n{" + props + "}";
    os << "  \"" << lts.state_name(s) << "\" [label=\"" << label << "\""
       << (root && *root == s ? ", shape=doublecircle" : "") << "];\n";
  }
  for (const auto& act : lts.action_names())
    for (StateId s = 0; s < lts.size(); ++s)
      for (StateId t : lts.successors(s, act))
        os << "  \"" << lts.state_name(s) << "\" -> \"" << lts.state_name(t) << "\" [label=\"" << act << "\"];\n";
  os << "}\n";
  return os.str();
}

// Canonical equality: same states, transitions and valuation by name.
inline bool same_lts(const Lts& a, const Lts& b) { return lts_to_json(a) == lts_to_json(b); }

// ---------------------------------------------------------------------------
// Enumeration

// Every LTS with exactly n states s0..s{n-1} over the given actions and
// propositions, indexed by a bit pattern: n*n bits per action for the
// transition relation, then n bits per proposition.
class LtsEnumeration {
 public:
  static constexpr std::uint64_t kDefaultCap = std::uint64_t{1} << 22;

  LtsEnumeration(std::size_t n_states, std::set<std::string> acts, std::set<std::string> props,
                 std::uint64_t cap = kDefaultCap)
      : n_(n_states), actions_(acts.begin(), acts.end()), props_(props.begin(), props.end()) {
    if (n_ == 0) throw std::invalid_argument("enumeration needs at least one state");
    std::size_t bits = n_ * n_ * actions_.size() + n_ * props_.size();
    if (bits >= 63 || (std::uint64_t{1} << bits) > cap)
      throw ResourceLimit("LTS enumeration of 2^" + std::to_string(bits) + " structures exceeds the cap");
    count_ = std::uint64_t{1} << bits;
  }

  std::uint64_t size() const noexcept { return count_; }

  Lts at(std::uint64_t index) const {
    Lts lts;
    for (std::size_t i = 0; i < n_; ++i) lts.add_state("s" + std::to_string(i));
    std::size_t bit = 0;
    for (const auto& a : actions_) {
      lts.declare_action(a);
      for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = 0; j < n_; ++j, ++bit)
          if ((index >> bit) & 1U) lts.add_transition(i, a, j);
    }
    for (const auto& p : props_) {
      lts.declare_prop(p);
      for (std::size_t i = 0; i < n_; ++i, ++bit)
        if ((index >> bit) & 1U) lts.set_prop(p, i);
    }
    return lts;
  }

  class iterator {
   public:
    using value_type = Lts;
    using difference_type = std::ptrdiff_t;
    iterator(const LtsEnumeration* e, std::uint64_t i) : e_(e), i_(i) {}
    Lts operator*() const { return e_->at(i_); }
    iterator& operator++() {
      ++i_;
      return *this;
    }
    bool operator==(const iterator& o) const { return i_ == o.i_; }

   private:
    const LtsEnumeration* e_;
    std::uint64_t i_;
  };

  iterator begin() const { return {this, 0}; }
  iterator end() const { return {this, count_}; }

 private:
  std::size_t n_;
  std::vector<std::string> actions_;
  std::vector<std::string> props_;
  std::uint64_t count_ = 0;
};

inline LtsEnumeration enumerate_lts(std::size_t n_states, std::set<std::string> acts, std::set<std::string> props,
                                    std::uint64_t cap = LtsEnumeration::kDefaultCap) {
  return LtsEnumeration(n_states, std::move(acts), std::move(props), cap);
}

}  // namespace mucalc
