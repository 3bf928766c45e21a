// Prints one PASS/FAIL line per acceptance criterion; exits nonzero if any
// criterion fails.

#include <chrono>
#include <cstdio>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "mucalc/mucalc.hpp"
#include "support/mutations.hpp"
#include "support/oracles.hpp"

using namespace mucalc;
namespace mt = mucalc::testing;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Report {
  int failures = 0;

  void line(int n, bool ok, const std::string& what, const std::string& detail) {
    if (!ok) ++failures;
    std::cout << "criterion " << n << ": " << (ok ? "PASS" : "FAIL") << "  " << what;
    if (!detail.empty()) std::cout << " (" << detail << ")";
    std::cout << std::endl;
  }
};

std::string fmt_time(double s) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3fs", s);
  return buf;
}

bool has_reset(const SearchOutcome& r, const std::string& name) {
  for (const auto& n : r.proof().nodes)
    if (n.rule && n.rule->tag == RuleTag::Reset && r.system->closure().codec().print(n.rule->name) == name) return true;
  return false;
}

// ---------------------------------------------------------------------------

bool nested_loop(std::string& detail) {
  auto t0 = Clock::now();
  auto r = prove(prepare(parse("nu Z. mu X. ([a]Z \\/ <a>X)")));
  double dt = seconds_since(t0);
  detail = fmt_time(dt);
  if (!r.valid()) return false;
  const std::vector<std::string> expected = {
      "|- Z",          "z1 |- X^{z1}",       "z1 |- ([a]Z \\/ <a>X)^{z1}",
      "z1 |- <a>X^{z1}, [a]Z^{z1}", "z1 |- X^{z1}, Z^{z1}", "z1 z2 |- X^{z1 z2}, X^{z1}",
      "z1 z2 |- X^{z1 z2}", "z1 |- X^{z1}",
  };
  const auto& nodes = r.proof().nodes;
  if (nodes.size() != expected.size()) return false;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (r.system->text(nodes[i].sequent) != expected[i]) return false;
    if (i + 1 < nodes.size() && nodes[i].children != std::vector<std::size_t>{i + 1}) return false;
  }
  // nu-unfold introducing z2, then Thin, then Reset_z1, then the repeat.
  const auto& sys = *r.system;
  bool order = nodes[4].rule->tag == RuleTag::NuUnfold && sys.text(nodes[5].sequent).rfind("z1 z2 ", 0) == 0 &&
               nodes[5].rule->tag == RuleTag::Thin && sys.text(*nodes[6].rule) == "Reset_z1" &&
               nodes[7].leaf == LeafKind::Repeat && nodes[7].companion == 1 &&
               sys.closure().codec().print(nodes[7].witness) == "z1";
  return order && validate_proof(sys, r.proof()) && dt < 1.0;
}

bool two_loops(std::string& detail) {
  auto t0 = Clock::now();
  auto r = prove(prepare(
      parse("(nu X. (<a>X /\\ mu Y. (<a>Y \\/ P))) \\/ (nu Z. ([a]Z \\/ mu W. ([a]W \\/ ~P)))")));
  double dt = seconds_since(t0);
  if (!r.valid()) {
    detail = "no proof, " + fmt_time(dt);
    return false;
  }
  std::size_t matching = 0, repeats = 0;
  for (const auto& n : r.proof().nodes)
    if (n.leaf == LeafKind::Repeat) {
      ++repeats;
      if (r.system->text(n.sequent) == "x1 z1 |- (<a>X /\\ Y)^{x1}, ([a]Z \\/ W)^{z1}") ++matching;
    }
  detail = std::to_string(r.proof().nodes.size()) + " nodes, " + std::to_string(matching) + "/" +
           std::to_string(repeats) + " repeats on the expected leaf, " + fmt_time(dt);
  return has_reset(r, "x1") && has_reset(r, "z1") && matching >= 1 && validate_proof(*r.system, r.proof()) &&
         dt < 5.0;
}

bool invalid_with_model(std::string& detail) {
  const std::string text = "mu X. ([a]X \\/ <a>X)";
  auto t0 = Clock::now();
  cli::RunConfig cfg;
  cfg.command = "prove";
  cfg.formula = text;
  cfg.format = "json";
  std::ostringstream out, err;
  int code = cli::run(cfg, out, err);
  double dt = seconds_since(t0);
  detail = "exit " + std::to_string(code) + ", " + fmt_time(dt);
  if (code != cli::kInvalid) return false;
  LoadedLts m = load_lts(out.str());
  if (!m.root) return false;
  Formula f = parse(text);
  bool refuted = !holds(m.lts, *m.root, f) && ((mt::eval_raw(m.lts, f) >> *m.root) & 1U) == 0;
  // An a-cycle reachable from the root.
  std::set<StateId> seen;
  StateId s = *m.root;
  bool cycle = false;
  while (!cycle) {
    auto next = m.lts.successors(s, "a");
    if (next.empty()) break;
    if (!seen.insert(s).second) cycle = true;
    s = next.front();
  }
  return refuted && cycle && dt < 1.0;
}

// ---------------------------------------------------------------------------
// Corpus criteria

struct CorpusResult {
  std::size_t formulas = 0, valid = 0, invalid = 0;
  std::size_t soundness_violations = 0, completeness_violations = 0;
  std::size_t proofs_rejected = 0, mutants = 0, mutants_accepted = 0;
  std::size_t bound_violations = 0, budget_exhausted = 0, other_errors = 0;
  double seconds = 0;
};

std::vector<Formula> corpus() {
  std::vector<Formula> out;
  std::set<std::string> seen;
  auto add = [&](const Formula& raw) {
    Formula f = prepare(raw);
    if (f.size() > 12 || propositions(f).size() > 2) return;
    if (seen.insert(render(f)).second) out.push_back(f);
  };
  mt::FormulaGenerator gen(2024, 2);
  for (int i = 0; out.size() < 200; ++i) add(gen.next(1 + i % 12));
  mt::FormulaGenerator taut(4048, 2);
  for (int i = 0; out.size() < 300 && i < 20000; ++i) add(mt::tautology(taut, 1 + i % 5));
  return out;
}

// Semantic validity on every LTS with at most two states, from the clauses.
bool raw_valid_small(const Formula& f) {
  bool ok = true;
  mt::for_each_lts(2, {"a"}, {"P", "Q"}, [&](const Lts& m) {
    if (ok && mt::eval_raw(m, f) != (1U << m.size()) - 1) ok = false;
  });
  return ok;
}

// Every mutation of one proof: each Reset deleted, each repeat's companion
// moved to every node whose sequent differs from the leaf, and each
// annotation changed.
void mutate(const ProofSystem& sys, const ProofTree& t, CorpusResult& res) {
  auto check = [&](const ProofTree& m) {
    ++res.mutants;
    if (validate_proof(sys, m)) ++res.mutants_accepted;
  };
  for (std::size_t i = 0; i < t.nodes.size(); ++i) {
    const ProofNode& n = t.nodes[i];
    if (n.rule && n.rule->tag == RuleTag::Reset) check(mt::splice_out(t, i));
    if (n.leaf == LeafKind::Repeat)
      for (std::size_t c = 0; c < t.nodes.size(); ++c) {
        if (t.nodes[c].sequent == n.sequent) continue;
        ProofTree m = t;
        m.nodes[i].companion = c;
        check(m);
      }
    for (std::size_t k = 0; k < n.sequent.entries.size(); ++k) check(mt::change_annotation(t, i, k));
  }
}

CorpusResult run_corpus() {
  CorpusResult res;
  auto t0 = Clock::now();
  for (const Formula& f : corpus()) {
    ++res.formulas;
    try {
      SearchOutcome r = prove(f);
      if (r.stats.max_branch_length > r.stats.distinct_sequents + 1) ++res.bound_violations;
      if (r.valid()) {
        ++res.valid;
        if (brute_force_countermodel(f, 3) || !raw_valid_small(f)) ++res.soundness_violations;
        if (!validate_proof(*r.system, r.proof())) ++res.proofs_rejected;
        mutate(*r.system, r.proof(), res);
      } else {
        ++res.invalid;
        PointedLts m = extract_countermodel(r);
        bool ok = verify_countermodel(m, f);
        if (ok && m.lts.size() <= 4) ok = ((mt::eval_raw(m.lts, f) >> m.root) & 1U) == 0;
        if (!ok) ++res.completeness_violations;
      }
    } catch (const NameBudgetExhausted&) {
      ++res.budget_exhausted;
    } catch (const std::exception& e) {
      std::cerr << "error on " << render(f) << ": " << e.what() << "\n";
      ++res.other_errors;
    }
  }
  res.seconds = seconds_since(t0);
  return res;
}

// ---------------------------------------------------------------------------

bool semantics(std::string& detail) {
  std::size_t checks = 0, mismatches = 0;
  // (i) fixpoints against subset enumeration, (ii) approximants at |S|.
  for (const auto& text : mt::fixpoint_suite()) {
    Formula f = mt::parse_open(text);
    mt::for_each_lts(2, {"a"}, {"P"}, [&](const Lts& m) {
      for (std::uint32_t v = 0; v < (1U << m.size()); ++v) {
        VarValuation env{{"V", mt::as_set(v, m.size())}};
        StateSet full = eval(m, env, f);
        checks += 2;
        if (full != subset_fixpoint_oracle(m, env, f.fix_kind(), f.label(), f.child())) ++mismatches;
        if (eval_approx(m, env, f.fix_kind(), f.label(), f.child(), m.size()) != full) ++mismatches;
      }
    });
  }
  // (iii) normal forms, on generated raw formulas and the closed suite members.
  std::vector<Formula> inputs;
  mt::FormulaGenerator gen(77, 1, true);
  for (int i = 0; i < 200; ++i) inputs.push_back(gen.next(1 + i % 12));
  for (const auto& text : mt::fixpoint_suite()) {
    Formula f = mt::parse_open(text);
    if (is_closed(f)) inputs.push_back(Formula::neg(f));
  }
  for (const Formula& f : inputs) {
    Formula pnf = to_pnf(f);
    Formula guarded = make_guarded(pnf);
    mt::for_each_lts(2, {"a"}, {"P"}, [&](const Lts& m) {
      StateSet expected = eval(m, f);
      checks += 2;
      if (eval(m, pnf) != expected) ++mismatches;
      if (eval(m, guarded) != expected) ++mismatches;
    });
  }
  detail = std::to_string(checks) + " checks, " + std::to_string(mismatches) + " mismatches";
  return mismatches == 0;
}

}  // namespace

int main() {
  Report rep;
  std::string d;

  bool ok = nested_loop(d);
  rep.line(1, ok, "nu Z. mu X. ([a]Z \\/ <a>X) proved node for node as expected", d);
  ok = two_loops(d);
  rep.line(2, ok, "two-loop disjunction proved with Reset_x1 and Reset_z1", d);
  ok = invalid_with_model(d);
  rep.line(3, ok, "invalid formula exits 1 with a verified cyclic countermodel", d);

  CorpusResult c = run_corpus();
  std::string corpus_info = std::to_string(c.formulas) + " formulas, " + std::to_string(c.valid) + " valid, " +
                            std::to_string(c.invalid) + " invalid, " + fmt_time(c.seconds);
  bool corpus_ok = c.formulas >= 200 && c.other_errors == 0 && c.budget_exhausted == 0;
  rep.line(4, corpus_ok && c.valid > 0 && c.soundness_violations == 0, "no countermodel for any proved formula",
           corpus_info + ", " + std::to_string(c.soundness_violations) + " violations");
  rep.line(5, corpus_ok && c.invalid > 0 && c.completeness_violations == 0,
           "every extracted countermodel verifies",
           std::to_string(c.completeness_violations) + " violations");

  ok = semantics(d);
  rep.line(6, ok, "fixpoint, approximant and normal form invariants on 1-2 state LTSs", d);

  rep.line(7, corpus_ok && c.proofs_rejected == 0 && c.mutants > 0 && c.mutants_accepted == 0,
           "validator accepts every proof and rejects every mutant",
           std::to_string(c.proofs_rejected) + " proofs rejected, " + std::to_string(c.mutants_accepted) + "/" +
               std::to_string(c.mutants) + " mutants accepted");
  rep.line(8, c.formulas >= 200 && c.other_errors == 0 && c.bound_violations == 0 && c.budget_exhausted == 0,
           "branch length bound holds and the name budget is never exhausted",
           std::to_string(c.bound_violations) + " bound violations, " + std::to_string(c.budget_exhausted) +
               " budget exhaustions");

  return rep.failures == 0 ? 0 : 1;
}
