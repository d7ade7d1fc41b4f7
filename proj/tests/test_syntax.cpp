#include <gtest/gtest.h>

#include <random>
#include <set>

#include "lp3/program.hpp"
#include "test_support.hpp"

using namespace lp3;
using lp3::testing::read_corpus;

namespace {

// Two-valued least model of a definite clausal program, by naive grounding of
// every clause over the universe.
std::set<Term, TermLess> clausal_least_model(const ClausalProgram& p, const BoundedUniverse& u) {
  std::set<Term, TermLess> model;
  const auto& terms = u.terms();
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& c : p.clauses) {
      std::vector<VarKey> vs = variables(c.head);
      for (const auto& l : c.body) collect_variables(l.atom, vs);
      for_each_tuple(u, vs.size(), [&](const std::vector<Term>& vals) {
        Substitution s;
        for (std::size_t i = 0; i < vs.size(); ++i) s.bind(vs[i], vals[i]);
        Term h = s.apply(c.head);
        if (!u.contains(h) && h.arity() > 0) {
          bool inside = true;
          for (const auto& a : h.args()) inside = inside && u.contains(a);
          if (!inside) return true;
        }
        for (const auto& l : c.body) {
          Term a = s.apply(l.atom);
          if (l.kind == LiteralKind::Equality) {
            if (a.arg(0) != a.arg(1)) return true;
          } else if (!model.count(a)) {
            return true;
          }
        }
        if (model.insert(h).second) changed = true;
        return true;
      });
      (void)terms;
    }
  }
  return model;
}

// Same, but through the disjunctive form: head tuples over the universe, then
// each disjunct's locals.
std::set<Term, TermLess> disjunctive_least_model(const DisjunctiveProgram& p, const BoundedUniverse& u) {
  std::set<Term, TermLess> model;
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& def : p.definitions()) {
      for_each_tuple(u, def.predicate.arity, [&](const std::vector<Term>& args) {
        Term head = def.predicate.arity ? Term::compound(def.predicate.name, args) : Term::constant(def.predicate.name);
        if (model.count(head)) return true;
        for (std::size_t di = 0; di < def.disjuncts.size(); ++di) {
          const auto& locals = def.disjuncts[di].locals;
          auto conj = def.conjunction(di);
          bool found = false;
          for_each_tuple(u, locals.size(), [&](const std::vector<Term>& vals) {
            Substitution s;
            for (std::size_t i = 0; i < def.head_vars.size(); ++i) s.bind(var_key(def.head_vars[i]), args[i]);
            for (std::size_t i = 0; i < locals.size(); ++i) s.bind(locals[i], vals[i]);
            for (const auto& l : conj) {
              Term a = s.apply(l.atom);
              if (l.kind == LiteralKind::Equality) {
                if (a.arg(0) != a.arg(1)) return true;
              } else if (!model.count(a)) {
                return true;
              }
            }
            found = true;
            return false;
          });
          if (found) {
            model.insert(head);
            changed = true;
            break;
          }
        }
        return true;
      });
    }
  }
  return model;
}

std::string random_definite_program(std::mt19937& rng) {
  const char* preds[] = {"p", "q", "r"};
  const char* args[] = {"X", "Y", "a", "b", "f(X)"};
  std::string text;
  int nclauses = 1 + static_cast<int>(rng() % 5);
  for (int c = 0; c < nclauses; ++c) {
    text += std::string(preds[rng() % 3]) + "(" + args[rng() % 5] + ")";
    int nbody = static_cast<int>(rng() % 3);
    for (int b = 0; b < nbody; ++b) {
      text += b == 0 ? " :- " : ", ";
      if (rng() % 4 == 0)
        text += std::string(args[rng() % 5]) + " = " + args[rng() % 5];
      else
        text += std::string(preds[rng() % 3]) + "(" + args[rng() % 5] + ")";
    }
    text += ".\n";
  }
  return text;
}

}  // namespace

TEST(Parse, MergeFigure) {
  auto p = parse_program(read_corpus("fig1_merge.pl"));
  ASSERT_EQ(p.clauses.size(), 4u);
  for (const auto& c : p.clauses) EXPECT_EQ(c.predicate(), (Functor{"merge", 3}));
  EXPECT_EQ(p.clauses[2].to_string(), "merge([A|As],[B|Bs],[A|Cs]) :- A =< B, merge(As,[B|Bs],Cs).");
  EXPECT_EQ(p.clauses[0].pos.line, 2);
  EXPECT_EQ(p.clauses[2].body[0].kind, LiteralKind::Builtin);
}

TEST(Parse, NegativeLiteral) {
  auto p = parse_program("p :- not q.");
  ASSERT_EQ(p.clauses.size(), 1u);
  ASSERT_EQ(p.clauses[0].body.size(), 1u);
  EXPECT_TRUE(p.clauses[0].body[0].negated);
  EXPECT_EQ(p.clauses[0].body[0].atom.to_string(), "q");
  auto q = parse_program("p :- \\+ q(X), not(r(X)).");
  EXPECT_TRUE(q.clauses[0].body[0].negated);
  EXPECT_TRUE(q.clauses[0].body[1].negated);
  EXPECT_EQ(q.clauses[0].body[1].atom.to_string(), "r(X)");
}

TEST(Parse, RejectsImpurity) {
  EXPECT_THROW(parse_program("p :- !."), ParseError);
  EXPECT_THROW(parse_program("p(X) :- var(X)."), ParseError);
  EXPECT_THROW(parse_program("p :- assert(q)."), ParseError);
  EXPECT_THROW(parse_program("p :- q ; r."), ParseError);
  EXPECT_THROW(parse_program("p :- call(q)."), ParseError);
  EXPECT_THROW(parse_program("p(X) :- X is 1."), ParseError);
  EXPECT_THROW(parse_program("p(X) :- not X = 1."), ParseError);
  EXPECT_THROW(parse_program("X :- q."), ParseError);
  EXPECT_THROW(parse_program("p :- X."), ParseError);
}

TEST(Parse, ErrorPositions) {
  try {
    parse_program("p.\nq :- r,\n   !.");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.pos().line, 3);
    EXPECT_EQ(e.pos().column, 4);
  }
  try {
    parse_program("p(a");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.pos().line, 1);
  }
}

TEST(Parse, NegatedBuiltinWarns) {
  auto p = parse_program("p(X,Y) :- not X =< Y.");
  ASSERT_EQ(p.warnings.size(), 1u);
  EXPECT_TRUE(p.clauses[0].body[0].negated);
  EXPECT_EQ(p.clauses[0].body[0].kind, LiteralKind::Builtin);
}

TEST(Parse, AnonymousVariablesAreDistinct) {
  auto p = parse_program("r :- not t(_, _).");
  const Term& t = p.clauses[0].body[0].atom;
  EXPECT_NE(t.arg(0), t.arg(1));
}

TEST(Parse, GoalsAndTerms) {
  auto g = parse_goal("merge([1],[2],X), X = [1,2].");
  ASSERT_EQ(g.size(), 2u);
  EXPECT_EQ(g[1].kind, LiteralKind::Equality);
  EXPECT_EQ(parse_term("s(s(0))").depth(), 2u);
  EXPECT_THROW(parse_goal("p,"), ParseError);
}

TEST(Parse, RoundTripCorpus) {
  for (const char* f : {"fig1_merge.pl", "fig2_defs.pl", "fig3_floundering.pl", "fig4_subset.pl", "fig5_subs.pl", "pnotp.pl"}) {
    auto p = parse_program(read_corpus(f));
    auto q = parse_program(p.to_string());
    ASSERT_EQ(p.clauses.size(), q.clauses.size()) << f;
    for (std::size_t i = 0; i < p.clauses.size(); ++i) {
      EXPECT_EQ(p.clauses[i].head, q.clauses[i].head) << f;
      EXPECT_EQ(p.clauses[i].body, q.clauses[i].body) << f;
    }
    EXPECT_EQ(p.to_string(), q.to_string());
  }
}

TEST(Parse, RoundTripRandom) {
  std::mt19937 rng(3);
  for (int i = 0; i < 300; ++i) {
    auto p = parse_program(random_definite_program(rng));
    auto q = parse_program(p.to_string());
    EXPECT_EQ(p.to_string(), q.to_string());
  }
}

TEST(Disjunctive, MemberDefinition) {
  auto d = to_disjunctive(parse_program(read_corpus("fig4_subset.pl")));
  const auto& member = d.at({"member", 2});
  ASSERT_EQ(member.disjuncts.size(), 2u);
  ASSERT_EQ(member.head_vars.size(), 2u);
  auto c0 = member.conjunction(0);
  auto c1 = member.conjunction(1);
  ASSERT_EQ(c0.size(), 2u);
  ASSERT_EQ(c1.size(), 3u);
  EXPECT_EQ(c0[0].to_string(), "A0 = X");
  EXPECT_EQ(c0[1].to_string(), "A1 = [X|L]");
  EXPECT_EQ(c1[1].to_string(), "A1 = [Y|L]");
  EXPECT_EQ(c1[2].to_string(), "member(X,L)");
}

TEST(Disjunctive, MergeFirstDisjunctAndHeadVarClash) {
  auto d = to_disjunctive(parse_program(read_corpus("fig1_merge.pl")));
  auto c = d.at({"merge", 3}).conjunction(0);
  ASSERT_EQ(c.size(), 3u);
  EXPECT_EQ(c[0].to_string(), "A0 = []");
  EXPECT_EQ(c[1].to_string(), "A1 = Bs");
  EXPECT_EQ(c[2].to_string(), "A2 = Bs");

  auto clash = to_disjunctive(parse_program("p(A0, A1) :- q(A1)."));
  const auto& def = clash.at({"p", 2});
  for (const auto& hv : def.head_vars) {
    EXPECT_NE(hv.name(), "A0");
    EXPECT_NE(hv.name(), "A1");
  }
}

TEST(Disjunctive, UndefinedPredicateIsEmpty) {
  auto d = to_disjunctive(parse_program(read_corpus("fig3_floundering.pl")));
  const Definition* t = d.find({"t", 1});
  ASSERT_NE(t, nullptr);
  EXPECT_TRUE(t->disjuncts.empty());
  ASSERT_EQ(d.warnings().size(), 1u);
  EXPECT_NE(d.warnings()[0].find("t/1"), std::string::npos);
}

TEST(Completion, PNotP) {
  auto c = completion(to_disjunctive(parse_program("p :- not p.")));
  ASSERT_EQ(c.clauses.size(), 1u);
  ASSERT_EQ(c.clauses[0].disjuncts.size(), 1u);
  EXPECT_TRUE(c.clauses[0].disjuncts[0].locals.empty());
  EXPECT_EQ(c.to_string(), "p <-> (not p).\n");
}

TEST(Completion, MergeLocalsAndStructure) {
  auto d = to_disjunctive(parse_program(read_corpus("fig1_merge.pl")));
  auto c = completion(d);
  ASSERT_EQ(c.clauses.size(), 1u);
  const auto& cl = c.clauses[0];
  ASSERT_EQ(cl.disjuncts.size(), 4u);
  auto names = [](const std::vector<VarKey>& vs) {
    std::set<std::string> out;
    for (const auto& v : vs) out.insert(v.name);
    return out;
  };
  EXPECT_EQ(names(cl.disjuncts[0].locals), (std::set<std::string>{"Bs"}));
  EXPECT_EQ(names(cl.disjuncts[1].locals), (std::set<std::string>{"A", "As"}));
  EXPECT_EQ(names(cl.disjuncts[2].locals), (std::set<std::string>{"A", "As", "B", "Bs", "Cs"}));
  // Completion keeps the disjunct structure: same count, same literal multiset.
  const auto& def = d.at({"merge", 3});
  for (std::size_t i = 0; i < 4; ++i) EXPECT_EQ(cl.disjuncts[i].conjunction, def.conjunction(i));

  auto empty = completion(to_disjunctive(parse_program(read_corpus("fig3_floundering.pl"))));
  EXPECT_NE(empty.to_string().find("t(A0) <-> false."), std::string::npos);
}

TEST(HeadInstance, MergeInstances) {
  auto d = to_disjunctive(parse_program(read_corpus("fig1_merge.pl")));
  const auto& def = d.at({"merge", 3});
  VarGen gen;
  std::vector<Term> args{parse_term("[]"), parse_term("a"), parse_term("a")};
  auto hi = head_instance(def, args, gen);
  ASSERT_EQ(hi.disjuncts.size(), 4u);
  EXPECT_TRUE(hi.disjuncts[0].satisfiable);
  EXPECT_EQ(hi.disjuncts[0].equalities[0].first, parse_term("[]"));
  EXPECT_EQ(hi.disjuncts[0].equalities[1].second, hi.disjuncts[0].equalities[2].second);
  EXPECT_GT(var_key(hi.disjuncts[0].equalities[1].second).id, 0u);
  EXPECT_FALSE(hi.disjuncts[1].satisfiable);

  std::vector<Term> args2{parse_term("[1]"), parse_term("[]"), parse_term("[1]")};
  auto hi2 = head_instance(def, args2, gen);
  EXPECT_FALSE(hi2.disjuncts[0].satisfiable);
  EXPECT_TRUE(hi2.disjuncts[1].satisfiable);
  EXPECT_FALSE(hi2.disjuncts[2].satisfiable);

  // Fresh instances never share variables.
  std::vector<VarKey> v1, v2;
  for (const auto& l : hi.disjuncts[2].body) collect_variables(l.atom, v1);
  for (const auto& l : hi2.disjuncts[2].body) collect_variables(l.atom, v2);
  for (const auto& v : v1) EXPECT_EQ(std::count(v2.begin(), v2.end(), v), 0);

  std::vector<Term> bad{parse_term("a")};
  EXPECT_THROW(head_instance(def, bad, gen), Error);
}

TEST(HeadInstance, NegatedBody) {
  auto d = to_disjunctive(parse_program(read_corpus("fig2_defs.pl")));
  VarGen gen;
  std::vector<Term> args{parse_term("0")};
  auto hi = head_instance(d.at({"e4", 1}), args, gen);
  ASSERT_EQ(hi.disjuncts.size(), 1u);
  ASSERT_TRUE(hi.disjuncts[0].satisfiable);
  ASSERT_EQ(hi.disjuncts[0].body.size(), 1u);
  const Literal& l = hi.disjuncts[0].body[0];
  EXPECT_TRUE(l.negated);
  EXPECT_EQ(hi.disjuncts[0].solution->apply(l.atom).to_string(), "odd(0)");
}

TEST(Disjunctive, EquivalentToClausalProperty) {
  auto u = BoundedUniverse::parse("universe depth=1 functors=a/0,b/0,f/1");
  std::mt19937 rng(5);
  for (int i = 0; i < 200; ++i) {
    auto p = parse_program(random_definite_program(rng));
    auto d = to_disjunctive(p);
    EXPECT_EQ(clausal_least_model(p, u), disjunctive_least_model(d, u)) << p.to_string();
  }
  auto e1 = parse_program("e(0). e(s(s(N))) :- e(N). o(s(0)). o(s(s(N))) :- o(N).");
  auto nu = BoundedUniverse::parse("universe depth=5 functors=0/0,s/1");
  auto m = disjunctive_least_model(to_disjunctive(e1), nu);
  EXPECT_EQ(clausal_least_model(e1, nu), m);
  EXPECT_EQ(m.size(), 6u);
}
