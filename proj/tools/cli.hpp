// Command-line front end. Exit status: 0 valid (or artifact accepted),
// 1 invalid (or artifact rejected), 2 error.

#pragma once

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mucalc/mucalc.hpp"

namespace mucalc::cli {

enum Exit { kValid = 0, kInvalid = 1, kError = 2 };

struct RunConfig {
  std::string command;  // prove, refute, eval, normalize, check-proof, check-model
  std::string formula;
  std::string formula_file;
  std::string lts_file;    // eval, check-model
  std::string proof_file;  // check-proof
  std::string root;        // check-model: overrides the document's root
  std::string format = "text";
  std::size_t max_model_states = 3;
  std::uint64_t enumeration_cap = LtsEnumeration::kDefaultCap;
  std::size_t max_nodes = SearchOptions{}.max_nodes;
  std::optional<std::size_t> approximant;  // eval: print stages 0..n of the outermost fixpoint
  bool trace = false;
  bool no_guard_transform = false;
};

namespace detail {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline Formula input_formula(const RunConfig& cfg) {
  if (!cfg.formula.empty() && !cfg.formula_file.empty())
    throw std::invalid_argument("give the formula either inline or with --file, not both");
  if (!cfg.formula_file.empty()) return parse(read_file(cfg.formula_file));
  if (cfg.formula.empty()) throw std::invalid_argument("no formula given");
  return parse(cfg.formula);
}

inline Formula prover_input(const RunConfig& cfg, const Formula& raw) {
  if (!is_closed(raw)) throw FormulaError("formula must be closed");
  Formula pnf = to_pnf(raw);
  if (cfg.no_guard_transform) {
    if (!is_guarded(pnf)) throw FormulaError("formula is not guarded");
    return pnf;
  }
  return make_guarded(pnf);
}

inline std::string state_list(const Lts& lts, const StateSet& s) {
  std::vector<std::string> names;
  for (StateId i : s.members()) names.push_back(lts.state_name(i));
  std::sort(names.begin(), names.end());
  std::string out = "{";
  for (std::size_t i = 0; i < names.size(); ++i) out += (i ? ", " : "") + names[i];
  return out + "}";
}

inline nlohmann::json state_json(const Lts& lts, const StateSet& s) {
  std::vector<std::string> names;
  for (StateId i : s.members()) names.push_back(lts.state_name(i));
  std::sort(names.begin(), names.end());
  return names;
}

inline std::string model_text(const PointedLts& m) {
  std::ostringstream out;
  const Lts& lts = m.lts;
  out << "root " << lts.state_name(m.root) << "\n";
  for (StateId s = 0; s < lts.size(); ++s) {
    out << lts.state_name(s) << ":";
    for (const auto& p : lts.prop_names())
      if (lts.prop(p).contains(s)) out << " " << p;
    out << "\n";
    for (const auto& a : lts.action_names())
      for (StateId t : lts.successors(s, a)) out << "  --" << a << "--> " << lts.state_name(t) << "\n";
  }
  return out.str();
}

inline void emit_model(const RunConfig& cfg, const PointedLts& m, std::ostream& out) {
  if (cfg.format == "json")
    out << save_lts(m.lts, m.root) << "\n";
  else if (cfg.format == "dot")
    out << lts_to_dot(m.lts, m.root);
  else
    out << "invalid\n" << model_text(m);
}

inline int prove_cmd(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  Formula raw = input_formula(cfg);
  Formula gamma = prover_input(cfg, raw);
  SearchOptions opts;
  opts.max_nodes = cfg.max_nodes;
  if (cfg.trace) opts.trace = [&](std::size_t depth, const std::string& line) { err << std::string(2 * depth, ' ') << line << "\n"; };
  SearchOutcome r = prove(gamma, opts);
  if (r.valid()) {
    const ProofSystem& sys = *r.system;
    if (auto v = validate_proof(sys, r.proof()); !v)
      throw InvariantViolation("produced proof fails validation: " + v.message);
    if (cfg.format == "json") {
      auto doc = proof_to_json(sys, r.proof());
      doc["stats"] = {{"nodes", r.stats.nodes},
                      {"distinct_sequents", r.stats.distinct_sequents},
                      {"max_branch_length", r.stats.max_branch_length}};
      out << doc.dump(2) << "\n";
    } else if (cfg.format == "dot") {
      out << proof_to_dot(sys, r.proof());
    } else {
      out << "valid\n" << proof_to_text(sys, r.proof());
    }
    return kValid;
  }
  PointedLts m = extract_countermodel(r);
  if (!verify_countermodel(m, gamma) || !verify_countermodel(m, raw))
    throw InvariantViolation("extracted countermodel does not refute the formula");
  emit_model(cfg, m, out);
  return kInvalid;
}

inline int refute_cmd(const RunConfig& cfg, std::ostream& out) {
  Formula raw = input_formula(cfg);
  if (!is_closed(raw)) throw FormulaError("formula must be closed");
  auto m = brute_force_countermodel(raw, cfg.max_model_states, cfg.enumeration_cap);
  if (m) {
    emit_model(cfg, *m, out);
    return kInvalid;
  }
  if (cfg.format == "json")
    out << nlohmann::json{{"countermodel", nullptr}, {"max_states", cfg.max_model_states}}.dump(2) << "\n";
  else
    out << "no countermodel with at most " << cfg.max_model_states << " states\n";
  return kValid;
}

inline LoadedLts input_lts(const RunConfig& cfg) {
  if (cfg.lts_file.empty()) throw std::invalid_argument("no LTS given (--lts)");
  return load_lts(read_file(cfg.lts_file));
}

inline int eval_cmd(const RunConfig& cfg, std::ostream& out) {
  Formula f = input_formula(cfg);
  if (!is_closed(f)) throw FormulaError("formula must be closed");
  LoadedLts m = input_lts(cfg);
  if (cfg.approximant) {
    if (!f.is_fixpoint()) throw FormulaError("--approximant needs a fixpoint formula");
    auto chain = approximant_chain(m.lts, {}, f.fix_kind(), f.label(), f.child(), *cfg.approximant);
    nlohmann::json stages = nlohmann::json::array();
    for (std::size_t i = 0; i < chain.size(); ++i) {
      if (cfg.format == "json")
        stages.push_back(state_json(m.lts, chain[i]));
      else
        out << i << ": " << state_list(m.lts, chain[i]) << "\n";
    }
    if (cfg.format == "json") out << nlohmann::json{{"stages", stages}}.dump(2) << "\n";
    return kValid;
  }
  StateSet s = eval(m.lts, f);
  if (cfg.format == "json")
    out << nlohmann::json{{"states", state_json(m.lts, s)}}.dump(2) << "\n";
  else
    out << state_list(m.lts, s) << "\n";
  return kValid;
}

inline int normalize_cmd(const RunConfig& cfg, std::ostream& out) {
  Formula raw = input_formula(cfg);
  Formula gamma = prover_input(cfg, raw);
  if (cfg.format == "json") {
    VarOrdering ord = variable_ordering(gamma);
    nlohmann::json vars = nlohmann::json::array();
    for (std::size_t i = 0; i < ord.size(); ++i) vars.push_back({{"name", ord.vars[i]}, {"kind", ord.is_nu[i] ? "nu" : "mu"}});
    out << nlohmann::json{{"input", render(raw)}, {"normalized", render(gamma)}, {"size", gamma.size()}, {"variables", vars}}
               .dump(2)
        << "\n";
  } else {
    out << render(gamma) << "\n";
  }
  return kValid;
}

inline int check_proof_cmd(const RunConfig& cfg, std::ostream& out) {
  if (cfg.proof_file.empty()) throw std::invalid_argument("no proof given (--proof)");
  LoadedProof p = load_proof(read_file(cfg.proof_file));
  if (!cfg.formula.empty() || !cfg.formula_file.empty()) {
    Formula expected = prover_input(cfg, input_formula(cfg));
    if (!(expected == p.system->gamma())) {
      out << "rejected: proof is for " << render(p.system->gamma()) << ", not " << render(expected) << "\n";
      return kInvalid;
    }
  }
  ValidationResult v = validate_proof(*p.system, p.tree);
  if (!v) {
    out << "rejected";
    if (v.node) out << " at node " << *v.node;
    out << ": " << v.message << "\n";
    return kInvalid;
  }
  out << "accepted: proof of " << render(p.system->gamma()) << " with " << p.tree.nodes.size() << " nodes\n";
  return kValid;
}

inline int check_model_cmd(const RunConfig& cfg, std::ostream& out) {
  Formula f = input_formula(cfg);
  if (!is_closed(f)) throw FormulaError("formula must be closed");
  LoadedLts m = input_lts(cfg);
  std::optional<StateId> root = m.root;
  if (!cfg.root.empty()) {
    root = m.lts.find_state(cfg.root);
    if (!root) throw LtsFormatError("unknown root state '" + cfg.root + "'");
  }
  if (!root) throw LtsFormatError("model has no root; pass --root");
  if (verify_countermodel(PointedLts{m.lts, *root}, f)) {
    out << "accepted: " << m.lts.state_name(*root) << " falsifies the formula\n";
    return kValid;
  }
  out << "rejected: " << m.lts.state_name(*root) << " satisfies the formula\n";
  return kInvalid;
}

}  // namespace detail

inline int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    if (cfg.format != "text" && cfg.format != "json" && cfg.format != "dot")
      throw std::invalid_argument("unknown format " + cfg.format);
    if (cfg.max_model_states == 0) throw std::invalid_argument("--max-model-states must be positive");
    if (cfg.command == "prove") return detail::prove_cmd(cfg, out, err);
    if (cfg.command == "refute") return detail::refute_cmd(cfg, out);
    if (cfg.command == "eval") return detail::eval_cmd(cfg, out);
    if (cfg.command == "normalize") return detail::normalize_cmd(cfg, out);
    if (cfg.command == "check-proof") return detail::check_proof_cmd(cfg, out);
    if (cfg.command == "check-model") return detail::check_model_cmd(cfg, out);
    throw std::invalid_argument("unknown command '" + cfg.command + "'");
  } catch (const InvariantViolation& e) {
    err << "internal error: " << e.what() << "\n";
  } catch (const NameBudgetExhausted& e) {
    err << "internal error: " << e.what() << "\n";
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
  }
  return kError;
}

// Parses argv into a RunConfig and runs it.
inline int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Validity checker for the modal mu-calculus"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("formula", cfg.formula, "Formula text");
    sub->add_option("-f,--file", cfg.formula_file, "Read the formula from a file");
    sub->add_option("--format", cfg.format, "Output format")->check(CLI::IsMember({"text", "json", "dot"}));
  };

  auto* prove_sub = app.add_subcommand("prove", "Decide validity; print a proof or a countermodel");
  add_common(prove_sub);
  prove_sub->add_flag("--trace", cfg.trace, "Log each rule application to stderr");
  prove_sub->add_flag("--no-guard-transform", cfg.no_guard_transform, "Reject unguarded input instead of rewriting it");
  prove_sub->add_option("--max-nodes", cfg.max_nodes, "Proof search node limit")->check(CLI::PositiveNumber);

  auto* refute_sub = app.add_subcommand("refute", "Search small LTSs for a countermodel");
  add_common(refute_sub);
  refute_sub->add_option("--max-model-states", cfg.max_model_states, "Largest LTS tried")->check(CLI::PositiveNumber);
  refute_sub->add_option("--enumeration-cap", cfg.enumeration_cap, "Most LTSs enumerated per size")
      ->check(CLI::PositiveNumber);

  auto* eval_sub = app.add_subcommand("eval", "Print the states satisfying a formula");
  add_common(eval_sub);
  eval_sub->add_option("--lts", cfg.lts_file, "LTS JSON file")->required();
  eval_sub->add_option("--approximant", cfg.approximant, "Print approximant stages 0..n of the outer fixpoint");

  auto* norm_sub = app.add_subcommand("normalize", "Print the positive normal, guarded form");
  add_common(norm_sub);
  norm_sub->add_flag("--no-guard-transform", cfg.no_guard_transform, "Reject unguarded input instead of rewriting it");

  auto* cp_sub = app.add_subcommand("check-proof", "Validate a proof JSON document");
  add_common(cp_sub);
  cp_sub->add_option("--proof", cfg.proof_file, "Proof JSON file")->required();

  auto* cm_sub = app.add_subcommand("check-model", "Check that a pointed LTS falsifies a formula");
  add_common(cm_sub);
  cm_sub->add_option("--model,--lts", cfg.lts_file, "LTS JSON file")->required();
  cm_sub->add_option("--root", cfg.root, "Root state (defaults to the document's root)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kValid : kError;
  }
  for (auto* sub : app.get_subcommands()) cfg.command = sub->get_name();
  return run(cfg, out, err);
}

}  // namespace mucalc::cli
