#include <gtest/gtest.h>

#include <random>

#include "lp3/program.hpp"
#include "lp3/term.hpp"

using namespace lp3;

namespace {

Term T(const char* s) { return parse_term(s); }

bool equal_up_to_renaming(const Substitution& a, const Substitution& b, const std::vector<VarKey>& vars) {
  // Compare the images of vars under a and b modulo a consistent variable bijection.
  std::map<VarKey, VarKey> fwd, bwd;
  std::function<bool(const Term&, const Term&)> same = [&](const Term& x, const Term& y) {
    if (x.is_var() != y.is_var()) return false;
    if (x.is_var()) {
      auto kx = var_key(x), ky = var_key(y);
      auto [it1, ins1] = fwd.emplace(kx, ky);
      auto [it2, ins2] = bwd.emplace(ky, kx);
      return it1->second == ky && it2->second == kx;
    }
    if (x.is_int() || y.is_int()) return x == y;
    if (x.name() != y.name() || x.arity() != y.arity()) return false;
    for (std::size_t i = 0; i < x.arity(); ++i)
      if (!same(x.arg(i), y.arg(i))) return false;
    return true;
  };
  for (const auto& v : vars)
    if (!same(a.apply(var_term(v)), b.apply(var_term(v)))) return false;
  return true;
}

Term random_term(std::mt19937& rng, int depth) {
  static const char* vars[] = {"X", "Y", "Z"};
  static const char* consts[] = {"a", "b"};
  int pick = static_cast<int>(rng() % 4);
  if (depth == 0 || pick == 0) return Term::var(vars[rng() % 3]);
  if (pick == 1) return Term::constant(consts[rng() % 2]);
  if (pick == 2) return Term::compound("f", {random_term(rng, depth - 1)});
  return Term::compound("g", {random_term(rng, depth - 1), random_term(rng, depth - 1)});
}

}  // namespace

TEST(Unify, DirectBinding) {
  auto s = unify(T("X"), T("f(Y)"));
  ASSERT_TRUE(s);
  EXPECT_EQ(s->apply(T("X")), T("f(Y)"));
  EXPECT_EQ(s->size(), 1u);
}

TEST(Unify, OccursCheck) { EXPECT_FALSE(unify(T("X"), T("f(X)"))); }

TEST(Unify, MergeClauseTwoHead) {
  auto s = unify(T("m(A.As, [], A.As)"), T("m([1],[],[1])"));
  ASSERT_TRUE(s);
  EXPECT_EQ(s->apply(T("A")), T("1"));
  EXPECT_EQ(s->apply(T("As")), T("[]"));
  EXPECT_EQ(s->size(), 2u);
}

TEST(Unify, ClashAndArity) {
  EXPECT_FALSE(unify(T("f(a)"), T("f(b)")));
  EXPECT_FALSE(unify(T("f(a)"), T("f(a,b)")));
  EXPECT_FALSE(unify(T("1"), T("'1'")));
  EXPECT_TRUE(unify(T("g(X,X)"), T("g(Y,a)")));
}

TEST(Unify, SymmetricAndIdempotentProperty) {
  std::mt19937 rng(7);
  int succeeded = 0;
  for (int i = 0; i < 3000; ++i) {
    Term a = random_term(rng, 3), b = random_term(rng, 3);
    auto s1 = unify(a, b);
    auto s2 = unify(b, a);
    ASSERT_EQ(s1.has_value(), s2.has_value()) << a.to_string() << " ~ " << b.to_string();
    if (!s1) continue;
    ++succeeded;
    EXPECT_EQ(s1->apply(a), s1->apply(b));
    EXPECT_EQ(s1->apply(s1->apply(a)), s1->apply(a));
    std::vector<VarKey> vs = variables(a);
    collect_variables(b, vs);
    EXPECT_TRUE(equal_up_to_renaming(*s1, *s2, vs)) << a.to_string() << " ~ " << b.to_string();
  }
  EXPECT_GT(succeeded, 100);
}

TEST(Constraints, Examples) {
  ConstraintSet c1;
  c1.add(T("X"), T("a"));
  c1.add(T("X"), T("b"));
  EXPECT_FALSE(c1.satisfiable());
  EXPECT_THROW(c1.solution(), Error);

  ConstraintSet c2;
  c2.add(T("X"), T("Y"));
  c2.add(T("Y"), T("a"));
  ASSERT_TRUE(c2.satisfiable());
  EXPECT_EQ(c2.solution().apply(T("X")), T("a"));
  EXPECT_EQ(c2.solution().apply(T("Y")), T("a"));

  ConstraintSet c3;
  c3.add(T("X"), T("f(Y)"));
  ASSERT_TRUE(c3.satisfiable());
  EXPECT_FALSE(c3.solution().apply(T("X")).ground());
}

TEST(Constraints, SolutionEqualizesEveryEquationProperty) {
  std::mt19937 rng(11);
  for (int i = 0; i < 1000; ++i) {
    ConstraintSet c;
    int n = 1 + static_cast<int>(rng() % 3);
    for (int k = 0; k < n; ++k) c.add(random_term(rng, 2), random_term(rng, 2));
    if (!c.satisfiable()) continue;
    const auto& s = c.solution();
    for (const auto& [l, r] : c.equations()) EXPECT_EQ(s.apply(l), s.apply(r));
    for (const auto& [v, t] : s.bindings()) EXPECT_EQ(s.apply(t), t);
  }
}

TEST(Constraints, LiteralGrounded) {
  ConstraintSet c1;
  c1.add(T("X"), T("1"));
  EXPECT_TRUE(literal_grounded(Literal::negative(T("member(X,[1])")), c1));
  ConstraintSet c2;
  c2.add(T("L"), T("[1]"));
  EXPECT_FALSE(literal_grounded(Literal::negative(T("member(X,L)")), c2));
  EXPECT_TRUE(literal_grounded(Literal::negative(T("r")), ConstraintSet{}));
  ConstraintSet bad;
  bad.add(T("a"), T("b"));
  EXPECT_THROW(literal_grounded(Literal::negative(T("r")), bad), Error);
}

TEST(Term, PrintingAndOrder) {
  EXPECT_EQ(T("A.As").to_string(), "[A|As]");
  EXPECT_EQ(T("[1,2|T]").to_string(), "[1,2|T]");
  EXPECT_EQ(T("'hello world'").to_string(), "'hello world'");
  EXPECT_EQ(T("-3").int_value(), -3);
  EXPECT_LT(compare(T("a"), T("f(a)")), 0);
  EXPECT_EQ(T("f(g(a),b)").depth(), 2u);
  EXPECT_TRUE(T("f(g(a),b)").ground());
  EXPECT_FALSE(T("f(g(X),b)").ground());
}

TEST(Term, RenameApartGivesFreshVariables) {
  VarGen gen;
  std::map<VarKey, Term> m1, m2;
  Term t = T("f(X,Y,X)");
  Term r1 = rename_apart(t, m1, gen);
  Term r2 = rename_apart(t, m2, gen);
  EXPECT_EQ(r1.arg(0), r1.arg(2));
  EXPECT_NE(r1.arg(0), r2.arg(0));
  for (const auto& v : variables(r1)) EXPECT_GT(v.id, 0u);
}
