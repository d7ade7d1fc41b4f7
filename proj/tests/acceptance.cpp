// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.
#include <chrono>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>

#include "lp3/consequence.hpp"
#include "lp3/debugger.hpp"
#include "lp3/modelcheck.hpp"
#include "lp3/slddnf.hpp"
#include "random_programs.hpp"
#include "test_support.hpp"

using namespace lp3;
using lp3::testing::evenodd_program;
using lp3::testing::read_corpus;

namespace {

struct Result {
  bool pass = true;
  std::string detail;

  // Records the first failure only.
  void require(bool ok, const std::string& what) {
    if (ok || !pass) return;
    pass = false;
    detail = what;
  }
};

Interpretation3 corpus_interp(const std::string& name) { return load_interpretation(read_corpus(name)); }
DisjunctiveProgram corpus_program(const std::string& name) { return to_disjunctive(parse_program(read_corpus(name))); }

std::string str(std::size_t n) { return std::to_string(n); }

Result truth_tables() {
  using enum TruthValue;
  const TruthValue vals[] = {T, F, I};
  // Rows are the left operand (the head for the arrow), columns the right.
  const TruthValue conj[3][3] = {{T, F, I}, {F, F, F}, {I, F, I}};
  const TruthValue disj[3][3] = {{T, T, T}, {T, F, I}, {T, I, I}};
  const TruthValue arrow[3][3] = {{T, F, F}, {F, T, F}, {T, T, T}};
  const TruthValue neg[3] = {F, T, I};
  Result r;
  std::size_t checked = 0;
  for (int a = 0; a < 3; ++a) {
    r.require(not3(vals[a]) == neg[a], "not " + to_string(vals[a]));
    ++checked;
    for (int b = 0; b < 3; ++b) {
      std::string cell = to_string(vals[a]) + "," + to_string(vals[b]);
      r.require(and3(vals[a], vals[b]) == conj[a][b], "and " + cell);
      r.require(or3(vals[a], vals[b]) == disj[a][b], "or " + cell);
      r.require(arrow3(vals[a], vals[b]) == arrow[a][b], "arrow " + cell);
      checked += 3;
    }
  }
  if (r.pass) r.detail = str(checked) + "/30 entries";
  return r;
}

Result merge_models() {
  auto p = corpus_program("fig1_merge.pl");
  auto m = corpus_interp("merge.interp");
  Result r;
  r.require(check_model_program(p, m).holds, "not a model of P");
  r.require(check_model_completion(p, m).holds, "not a model of comp(P)");
  CheckReport strong = check_strong_model(p, m, StrongMode::Program);
  r.require(!strong.holds, "unexpectedly a strong model");
  const Violation* witness = nullptr;
  for (const auto& v : strong.violations)
    if (v.kind == ViolationKind::StrongMismatch && v.head_value == TruthValue::I && v.body_value == TruthValue::T) {
      witness = &v;
      break;
    }
  r.require(witness != nullptr, "no I-head/T-body witness");
  if (r.pass) r.detail = "model yes, comp yes, strong no; witness " + witness->head.to_string();
  return r;
}

Result evenodd_models() {
  auto m = corpus_interp("evenodd.interp");
  Result r;
  std::size_t ok = 0;
  for (int e = 1; e <= 4; ++e)
    for (int o = 1; o <= 4; ++o) {
      bool holds = check_model_completion(to_disjunctive(evenodd_program(e, o)), m).holds;
      r.require(holds, "e" + str(e) + "/o" + str(o) + " is not a comp model");
      ok += holds;
    }
  r.detail = str(ok) + "/16 combinations";
  return r;
}

Result evenodd_operational() {
  auto m = corpus_interp("evenodd.interp");
  Result r;
  auto loop = to_disjunctive(evenodd_program(4, 4));
  auto lfp = fitting_lfp(loop, m.universe());
  r.require(lfp.converged, "e4/o4 fitting did not converge");
  r.require(lfp.model.count(TruthValue::T) == 0 && lfp.model.count(TruthValue::F) == 0, "e4/o4 fitting not all I");
  for (SelectionRule rule : {SelectionRule::LeftmostDelay, SelectionRule::FairRoundRobin}) {
    SolveOptions so;
    so.rule = rule;
    so.budget = 10000;
    Outcome o = solve(loop, "even(0)", so);
    r.require(o.budget_exhausted && o.answers.empty() && !o.finitely_failed,
              "e4/o4 even(0) under " + to_string(rule) + ": " + o.summary());
  }
  std::size_t atoms = 0;
  for (int e = 1; e <= 4; ++e)
    for (int o = 1; o <= 4; ++o) {
      if (e == 4 && o == 4) continue;
      auto p = to_disjunctive(evenodd_program(e, o));
      SolveOptions so;
      so.rule = SelectionRule::FairRoundRobin;
      so.budget = 100000;
      for (const auto& f : p.predicates()) {
        for (const auto& atom : enumerate_atoms(*m.universe(), f)) {
          TruthValue v = m.truth_of(atom);
          if (v == TruthValue::I) continue;
          Outcome out = solve(p, std::vector<Literal>{Literal::positive(atom)}, so);
          bool ok = v == TruthValue::T ? out.succeeded() && !out.finitely_failed : out.finitely_failed;
          r.require(ok, "e" + str(e) + "/o" + str(o) + " " + atom.to_string() + " is " + to_string(v) + " but " +
                            out.summary());
          ++atoms;
        }
      }
    }
  if (r.pass) r.detail = "e4/o4 loops; " + str(atoms) + " admissible atoms agree over 15 combinations";
  return r;
}

Result floundering() {
  auto p = corpus_program("fig3_floundering.pl");
  Result r;
  SolveOptions fair;
  fair.rule = SelectionRule::FairRoundRobin;
  fair.budget = 10000;
  Outcome a = solve(p, "p", fair);
  r.require(a.exhaustive && a.answers.size() == 1, "fair: " + a.summary());
  SolveOptions strict = fair;
  strict.rule = SelectionRule::StrictLeftmost;
  Outcome b = solve(p, "p", strict);
  r.require(b.budget_exhausted && b.answers.empty(), "strict_leftmost: " + b.summary());
  if (r.pass) r.detail = "fair: " + a.summary() + "; strict_leftmost: " + b.summary();
  return r;
}

// Duplicate-free orderings of subsets of xs, as printed lists.
std::set<std::string> orderings(const std::vector<int>& xs) {
  std::set<std::string> out;
  std::function<void(std::vector<int>&, std::vector<bool>&)> go = [&](std::vector<int>& cur, std::vector<bool>& used) {
    std::string s = "[";
    for (std::size_t i = 0; i < cur.size(); ++i) s += (i ? "," : "") + std::to_string(cur[i]);
    out.insert(s + "]");
    for (std::size_t i = 0; i < xs.size(); ++i) {
      if (used[i]) continue;
      used[i] = true;
      cur.push_back(xs[i]);
      go(cur, used);
      cur.pop_back();
      used[i] = false;
    }
  };
  std::vector<int> cur;
  std::vector<bool> used(xs.size(), false);
  go(cur, used);
  return out;
}

std::vector<std::vector<Literal>> ground_goals(const BoundedUniverse& u, const Functor& f) {
  std::vector<std::vector<Literal>> goals;
  for (const auto& a : enumerate_atoms(u, f)) goals.push_back({Literal::positive(a)});
  return goals;
}

Result subset_programs() {
  Result r;
  auto p4 = corpus_program("fig4_subset.pl");
  auto m4 = corpus_interp("subset.interp");
  auto p5 = corpus_program("fig5_subs.pl");
  auto m5 = corpus_interp("subs.interp");
  r.require(check_model_completion(p4, m4).holds, "subset program is not a comp model");
  r.require(check_model_completion(p5, m5).holds, "subs program is not a comp model");

  SolveOptions all;
  Outcome o = solve(p5, "subs(X,[1,2])", all);
  std::set<std::string> got;
  for (const auto& a : o.answers) got.insert(a.bindings.apply(Term::var("X")).to_string());
  r.require(o.exhaustive && o.answers.size() == 5 && got == orderings({1, 2}),
            "subs(X,[1,2]): " + o.summary());

  const BoundedUniverse& u = *m5.universe();
  TheoremReport t4, t5;
  {
    std::vector<std::vector<Literal>> goals;
    for (const Functor f : {Functor{"subset", 2}, Functor{"notsubset", 2}, Functor{"member", 2}})
      for (auto& g : ground_goals(*m4.universe(), f)) goals.push_back(std::move(g));
    t4 = check_operational_theorems(p4, m4, goals);
  }
  {
    std::vector<std::vector<Literal>> goals;
    for (const Functor f : {Functor{"subs", 2}, Functor{"member", 2}})
      for (auto& g : ground_goals(u, f)) goals.push_back(std::move(g));
    // select/3 is queried the way subs/2 calls it: element and rest unbound.
    for (const auto& l : u.terms())
      goals.push_back(parse_goal("select(E, " + l.to_string() + ", M)"));
    t5 = check_operational_theorems(p5, m5, goals);
  }
  r.require(t4.holds(), "subset theorems: " + t4.to_string());
  r.require(t5.holds(), "subs theorems: " + t5.to_string());
  r.require(t4.unresolved_goals == 0 && t5.unresolved_goals == 0, "some goals were unresolved");
  if (r.pass)
    r.detail = "comp models; 5 subs answers; theorems over " + str(t4.goals.size() + t5.goals.size()) + " goals, " +
               str(t4.instances + t5.instances) + " instances";
  return r;
}

Result crosscheck_routes() {
  lp3::testing::ProgramGen gen(7001);
  auto u = lp3::testing::tiny_universe();
  Result r;
  std::size_t pairs = 0, comp = 0, model = 0;
  for (int i = 0; i < 1200; ++i) {
    auto p = to_disjunctive(parse_program(gen.random_program({})));
    auto m = i % 4 == 0 ? fitting_lfp(p, u).model : gen.random_interpretation(u);
    for (const auto& f : lp3::testing::tiny_predicates())
      if (!m.declared(f)) m.declare_dense(f, std::vector<TruthValue>(m.atom_count(f), TruthValue::I));
    auto c = crosscheck_fixpoint_props(p, m, false);
    r.require(c.consistent(), "routes disagree on\n" + p.to_string() + save_interpretation(m) + c.to_string());
    ++pairs;
    comp += c.comp_direct;
    model += c.model_direct;
  }
  r.detail = str(pairs) + " pairs (" + str(model) + " models of P, " + str(comp) + " models of comp(P))";
  return r;
}

Result model_algebra() {
  lp3::testing::ProgramGen gen(8001);
  auto u = lp3::testing::tiny_universe();
  lp3::testing::GenOptions o;
  o.negation = false;
  Result r;
  std::size_t pairs = 0;
  for (int i = 0; i < 300 && r.pass; ++i) {
    auto p = to_disjunctive(parse_program(gen.random_program(o)));
    auto seed = gen.random_interpretation(u);
    auto m1 = lp3::testing::repair_to_model(p, seed, TruthValue::T);
    auto other = seed;
    for (const auto& a : seed.atoms_with(TruthValue::T)) other.set(a, TruthValue::F);
    for (const auto& a : seed.atoms_with(TruthValue::F))
      if (gen.pick(2)) other.set(a, TruthValue::T);
    auto m2 = lp3::testing::repair_to_model(p, other, TruthValue::T);
    r.require(check_model_definite(p, intersect_true(m1, m2)).holds, "T-intersection is not a model:\n" + p.to_string());

    auto n1 = lp3::testing::repair_to_model(p, seed, TruthValue::I);
    auto seed2 = seed;
    for (const auto& a : seed.atoms_with(TruthValue::I)) seed2.set(a, TruthValue::F);
    for (const auto& a : seed.atoms_with(TruthValue::F))
      if (gen.pick(2)) seed2.set(a, TruthValue::I);
    auto n2 = lp3::testing::repair_to_model(p, seed2, TruthValue::I);
    r.require(check_model_definite(p, intersect_inadmissible(n1, n2)).holds,
              "I-intersection is not a model:\n" + p.to_string());

    std::vector<Term> new_i;
    for (const auto& a : m1.atoms_with(TruthValue::T))
      if (gen.pick(2)) new_i.push_back(a);
    for (const auto& a : m1.atoms_with(TruthValue::I))
      if (gen.pick(2)) new_i.push_back(a);
    r.require(check_model_definite(p, repartition(m1, new_i)).holds, "repartition is not a model:\n" + p.to_string());
    r.require(check_model_definite(p, seed).holds == check_model_definite(p, repartition(seed, {})).holds,
              "two-valued collapse disagrees:\n" + p.to_string());
    pairs += 2;
  }

  auto lists = std::make_shared<const BoundedUniverse>(
      BoundedUniverse::parse("universe depth=0 ints=0..3 functors=[]/0,./2 lists=3").config());
  std::vector<std::pair<std::string, DisjunctiveProgram>> corpus = {
      {"pnotp", corpus_program("pnotp.pl")},
      {"merge", corpus_program("fig1_merge.pl")},
      {"floundering", corpus_program("fig3_floundering.pl")},
      {"subset", corpus_program("fig4_subset.pl")},
      {"subs", corpus_program("fig5_subs.pl")},
  };
  for (int e = 1; e <= 4; ++e)
    for (int o2 = 1; o2 <= 4; ++o2)
      corpus.emplace_back("e" + str(e) + "/o" + str(o2), to_disjunctive(evenodd_program(e, o2)));
  auto evenodd = corpus_interp("evenodd.interp").universe();
  auto tiny = lp3::testing::tiny_universe();
  for (const auto& [name, p] : corpus) {
    UniversePtr u2 = name == "pnotp" || name == "floundering" ? tiny : name[0] == 'e' ? evenodd : lists;
    auto lfp = fitting_lfp(p, u2);
    r.require(lfp.converged && check_strong_model(p, lfp.model, StrongMode::Completion).holds,
              "fitting model of " + name + " is not a strong comp model");
  }
  if (r.pass)
    r.detail = str(pairs) + " model pairs; " + str(corpus.size()) + " corpus fitting models are strong";
  return r;
}

std::string mutate(std::string text, const std::string& from, const std::string& to) {
  auto at = text.find(from);
  if (at == std::string::npos) throw Error("mutation site not found: " + from);
  return text.replace(at, from.size(), to);
}

Result debugger() {
  Interpretation3 merge4 = load_interpretation(
      "universe depth=0 ints=0..3 functors=[]/0,./2 lists=4\nspec merge/3 builtin:merge_sorted_numbers\n");
  Interpretation3 subs = corpus_interp("subs.interp");
  Interpretation3 evenodd = corpus_interp("evenodd.interp");
  std::string merge = read_corpus("fig1_merge.pl");
  std::string e1o1 = evenodd_program(1, 1).to_string();
  std::string e3o3 = evenodd_program(3, 3).to_string();

  struct Mutant {
    std::string name;
    std::string program;
    std::string goal;
    DebugMode mode;
    const Interpretation3* m;
    Functor pred;
    std::size_t clause;
  };
  std::vector<Mutant> mutants = {
      {"merge head", mutate(merge, "merge(A.As, B.Bs, B.Cs) :- A > B", "merge(A.As, B.Bs, A.Cs) :- A > B"),
       "merge([2,3],[1,2],X)", DebugMode::WrongAnswer, &merge4, {"merge", 3}, 4},
      {"merge test", mutate(merge, "A =< B, ", ""), "merge([2],[1],X)", DebugMode::WrongAnswer, &merge4, {"merge", 3}, 3},
      {"subs negation", mutate(read_corpus("fig5_subs.pl"), "not member(H, T)", "not member(H, LH)"), "subs([1],[1])",
       DebugMode::MissingAnswer, &subs, {"subs", 2}, 2},
      {"e1 body", mutate(e1o1, "e1(s(s(N))) :- e1(N)", "e1(s(s(N))) :- e1(s(N))"), "even(s(s(0)))",
       DebugMode::MissingAnswer, &evenodd, {"e1", 1}, 2},
      {"e3 negation", mutate(e3o3, "not e3(N)", "e3(N)"), "even(s(0))", DebugMode::WrongAnswer, &evenodd, {"e3", 1}, 2},
  };
  Result r;
  std::size_t located = 0;
  for (const auto& mu : mutants) {
    auto p = to_disjunctive(parse_program(mu.program));
    InterpretationOracle o(*mu.m);
    OracleSession s(o);
    DebugOptions opts;
    opts.mode = mu.mode;
    auto d = debug_goal(p, parse_term(mu.goal), s, opts);
    bool ok = d && (d->kind == DiagnosisKind::IncorrectClauseInstance || d->kind == DiagnosisKind::UncoveredAtom) &&
              d->predicate == mu.pred && d->clause_number == mu.clause;
    r.require(ok, mu.name + ": " + (d ? d->to_string() : std::string("no diagnosis")));
    located += ok;

    // Replaying the transcript twice gives byte-identical results.
    if (d) {
      std::string text = format_transcript(d->transcript);
      std::string first;
      for (int k = 0; k < 2; ++k) {
        TranscriptOracle t(parse_transcript(text));
        OracleSession ts(t);
        auto again = debug_goal(p, parse_term(mu.goal), ts, opts);
        std::string out = again ? again->to_string() + format_transcript(again->transcript) : "none";
        if (k == 0) first = out;
        r.require(again && *again == *d && out == first && out == d->to_string() + text,
                  mu.name + ": transcript replay differs");
      }
    }
  }
  {
    InterpretationOracle o(merge4);
    OracleSession s(o);
    auto d = debug_goal(corpus_program("fig1_merge.pl"), parse_term("merge([2,3],[2,1],X)"), s);
    r.require(d && d->kind == DiagnosisKind::GoalInadmissibleNoBug, "inadmissible root was not reported as such");
  }
  r.detail = str(located) + "/5 mutants located; inadmissible root; replay deterministic";
  return r;
}

Result p_not_p() {
  auto p = corpus_program("pnotp.pl");
  auto m = corpus_interp("pnotp.interp");
  Result r;
  r.require(m.truth_of(parse_term("p")) == TruthValue::I, "interpretation does not map p to I");
  r.require(check_model_completion(p, m).holds, "p=I is not a comp model");
  r.require(check_strong_model(p, m, StrongMode::Completion).holds, "p=I is not a strong comp model");
  auto lfp = fitting_lfp(p, m.universe());
  r.require(lfp.converged && lfp.iterations <= 2, "fitting took " + str(lfp.iterations) + " iterations");
  r.require(lfp.model.truth_of(parse_term("p")) == TruthValue::I, "fitting model does not map p to I");
  if (r.pass) r.detail = "strong model p=I; fitting in " + str(lfp.iterations) + " iteration(s)";
  return r;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Result()>>> criteria = {
      {"truth tables", truth_tables},
      {"merge model, comp model, not strong", merge_models},
      {"even/odd combinations share one comp model", evenodd_models},
      {"even/odd operational agreement", evenodd_operational},
      {"floundering rule", floundering},
      {"subset and subs programs", subset_programs},
      {"fixpoint cross-check routes", crosscheck_routes},
      {"model algebra and strong fitting models", model_algebra},
      {"declarative debugger", debugger},
      {"p <- not p", p_not_p},
  };
  int failed = 0;
  auto start = std::chrono::steady_clock::now();
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    auto t0 = std::chrono::steady_clock::now();
    Result r;
    try {
      r = criteria[i].second();
    } catch (const std::exception& e) {
      r.pass = false;
      r.detail = std::string("exception: ") + e.what();
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    failed += !r.pass;
    std::ostringstream line;
    line.setf(std::ios::fixed);
    line.precision(1);
    line << "criterion " << (i + 1) << ": " << (r.pass ? "PASS" : "FAIL") << "  " << criteria[i].first << " ("
         << r.detail << ") [" << secs << "s]";
    std::cout << line.str() << std::endl;
  }
  double total = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::cout << (failed ? std::to_string(failed) + " criteria failed" : std::string("all criteria passed")) << " in "
            << total << "s" << std::endl;
  return failed ? 1 : 0;
}
