// Proof trees as JSON, indented text and Graphviz DOT.
//
// JSON layout:
//   {"formula": "...", "root": 0,
//    "nodes": [{"id": 0, "sequent": "|- Z", "children": [1],
//               "rule": {"tag": "NuUnfold", "principal": "Z"}}, ...,
//              {"id": 7, "sequent": "z1 |- X^{z1}", "children": [],
//               "leaf": "repeat", "companion": 1, "witness": "z1"}]}

#pragma once

#include <memory>
#include <sstream>
#include <string>

#include <json.hpp>

#include "mucalc/formula.hpp"
#include "mucalc/tableau.hpp"

namespace mucalc {

class ProofFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline nlohmann::json rule_to_json(const ProofSystem& sys, const RuleInstance& r) {
  nlohmann::json j;
  j["tag"] = rule_tag_name(r.tag);
  switch (r.tag) {
    case RuleTag::Reset:
      j["name"] = sys.closure().codec().print(r.name);
      break;
    case RuleTag::Thin:
      j["keep"] = sys.text(r.principal);
      j["drop"] = sys.text(*r.dropped);
      break;
    case RuleTag::Modal:
      j["principal"] = sys.text(r.principal);
      j["action"] = sys.closure().node(r.principal.formula).label;
      break;
    default:
      j["principal"] = sys.text(r.principal);
  }
  return j;
}

inline nlohmann::json proof_to_json(const ProofSystem& sys, const ProofTree& t) {
  nlohmann::json nodes = nlohmann::json::array();
  for (std::size_t i = 0; i < t.nodes.size(); ++i) {
    const ProofNode& n = t.nodes[i];
    nlohmann::json j;
    j["id"] = i;
    j["sequent"] = sys.text(n.sequent);
    j["children"] = n.children;
    if (n.rule) j["rule"] = rule_to_json(sys, *n.rule);
    if (n.leaf == LeafKind::Axiom) j["leaf"] = "axiom";
    if (n.leaf == LeafKind::Repeat) {
      j["leaf"] = "repeat";
      j["companion"] = n.companion;
      j["witness"] = sys.closure().codec().print(n.witness);
    }
    nodes.push_back(std::move(j));
  }
  return {{"formula", render(sys.gamma())}, {"root", 0}, {"nodes", std::move(nodes)}};
}

struct LoadedProof {
  std::shared_ptr<const ProofSystem> system;
  ProofTree tree;
};

namespace detail {

inline Name parse_name_field(const ProofSystem& sys, const nlohmann::json& j) {
  auto n = sys.closure().codec().parse(j.get<std::string>());
  if (!n) throw ProofFormatError("unknown name " + j.dump());
  return *n;
}

inline RuleInstance rule_from_json(const ProofSystem& sys, const nlohmann::json& j) {
  auto tag = rule_tag_from_name(j.at("tag").get<std::string>());
  if (!tag) throw ProofFormatError("unknown rule " + j.at("tag").dump());
  RuleInstance r;
  r.tag = *tag;
  const Closure& c = sys.closure();
  switch (r.tag) {
    case RuleTag::Reset:
      r.name = parse_name_field(sys, j.at("name"));
      break;
    case RuleTag::Thin:
      r.principal = parse_entry(c, j.at("keep").get<std::string>());
      r.dropped = parse_entry(c, j.at("drop").get<std::string>());
      break;
    default:
      r.principal = parse_entry(c, j.at("principal").get<std::string>());
  }
  return r;
}

}  // namespace detail

// Reads a proof document. Only the format is checked here; use
// validate_proof for the proof conditions.
inline LoadedProof proof_from_json(const nlohmann::json& doc) {
  try {
    Formula gamma = parse(doc.at("formula").get<std::string>());
    auto sys = std::make_shared<const ProofSystem>(gamma);
    if (doc.value("root", 0) != 0) throw ProofFormatError("root must be node 0");
    const auto& nodes = doc.at("nodes");
    if (!nodes.is_array()) throw ProofFormatError("nodes must be an array");
    ProofTree t;
    t.nodes.resize(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      const auto& j = nodes[i];
      if (j.value("id", i) != i) throw ProofFormatError("node ids must be 0, 1, 2, ... in order");
      ProofNode& n = t.nodes[i];
      n.sequent = sys->parse(j.at("sequent").get<std::string>());
      n.children = j.at("children").get<std::vector<std::size_t>>();
      if (j.contains("rule")) n.rule = detail::rule_from_json(*sys, j["rule"]);
      std::string leaf = j.value("leaf", "");
      if (leaf == "axiom") {
        n.leaf = LeafKind::Axiom;
      } else if (leaf == "repeat") {
        n.leaf = LeafKind::Repeat;
        n.companion = j.at("companion").get<std::size_t>();
        n.witness = detail::parse_name_field(*sys, j.at("witness"));
      } else if (!leaf.empty()) {
        throw ProofFormatError("unknown leaf kind '" + leaf + "'");
      }
    }
    // Parent links are derived from the children lists.
    for (std::size_t i = 0; i < t.nodes.size(); ++i)
      for (std::size_t c : t.nodes[i].children) {
        if (c >= t.nodes.size()) throw ProofFormatError("child index out of range");
        if (t.nodes[c].parent) throw ProofFormatError("node " + std::to_string(c) + " has two parents");
        t.nodes[c].parent = i;
      }
    return LoadedProof{std::move(sys), std::move(t)};
  } catch (const nlohmann::json::exception& e) {
    throw ProofFormatError(std::string("malformed proof document: ") + e.what());
  }
}

inline LoadedProof load_proof(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ProofFormatError(std::string("invalid JSON: ") + e.what());
  }
  return proof_from_json(doc);
}

// One line per node, children indented below their parent.
inline std::string proof_to_text(const ProofSystem& sys, const ProofTree& t) {
  std::ostringstream out;
  auto walk = [&](auto&& self, std::size_t i, std::size_t depth) -> void {
    const ProofNode& n = t.nodes[i];
    out << std::string(depth * 2, ' ') << sys.text(n.sequent);
    if (n.rule) out << "    [" << sys.text(*n.rule) << "]";
    if (n.leaf == LeafKind::Axiom) out << "    [axiom]";
    if (n.leaf == LeafKind::Repeat)
      out << "    [repeat of node " << n.companion << " by " << sys.closure().codec().print(n.witness) << "]";
    out << "  #" << i << "\n";
    for (std::size_t c : n.children) self(self, c, depth + 1);
  };
  if (!t.nodes.empty()) walk(walk, 0, 0);
  return out.str();
}

namespace detail {

inline std::string dot_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

}  // namespace detail

// Repeat leaves get a dashed edge back to their companion.
inline std::string proof_to_dot(const ProofSystem& sys, const ProofTree& t) {
  std::ostringstream out;
  out << "digraph proof {\n  node [shape=box, fontname=\"monospace\"];\n";
  for (std::size_t i = 0; i < t.nodes.size(); ++i) {
    const ProofNode& n = t.nodes[i];
    out << "  n" << i << " [label=\"" << detail::dot_escape(sys.text(n.sequent)) << "\"];\n";
    for (std::size_t c : n.children)
      out << "  n" << i << " -> n" << c << " [label=\"" << detail::dot_escape(n.rule ? rule_tag_name(n.rule->tag) : "")
          << "\"];\n";
    if (n.leaf == LeafKind::Repeat)
      out << "  n" << i << " -> n" << n.companion << " [style=dashed, label=\""
          << detail::dot_escape(sys.closure().codec().print(n.witness)) << "\"];\n";
  }
  out << "}\n";
  return out.str();
}

inline std::string failure_to_text(const ProofSystem& sys, const FailureTree& t) {
  std::ostringstream out;
  auto walk = [&](auto&& self, std::size_t i, std::size_t depth) -> void {
    const FailureNode& n = t.nodes[i];
    out << std::string(depth * 2, ' ') << sys.text(n.sequent);
    switch (n.kind) {
      case FailureKind::Step:
        out << "    [" << sys.text(n.rules.front()) << "]";
        break;
      case FailureKind::Modal:
        out << (n.children.empty() ? "    [stuck]" : "    [modal]");
        break;
      case FailureKind::Repeat:
        out << "    [unsuccessful repeat of node " << n.companion << "]";
        break;
    }
    out << "  #" << i << "\n";
    for (std::size_t c : n.children) self(self, c, depth + 1);
  };
  if (!t.nodes.empty()) walk(walk, 0, 0);
  return out.str();
}

}  // namespace mucalc
