#include "lp3/evaluator.hpp"

namespace lp3 {

namespace {

struct Context {
  const Interpretation3& m;
  const LookupObserver* observer;
  const BoundedUniverse& u;
  std::vector<VarKey> locals;
};

std::vector<Literal> substitute_all(const std::vector<Literal>& lits, const Substitution& s) {
  std::vector<Literal> out;
  out.reserve(lits.size());
  for (const auto& l : lits) out.push_back(l.substituted(s));
  return out;
}

bool locals_inside(const Context& ctx, const Substitution& s) {
  for (const auto& v : ctx.locals) {
    const Term* t = s.lookup(v);
    if (t && t->ground() && !ctx.u.contains(*t)) return false;
  }
  return true;
}

ExistsValue search(const Context& ctx, std::vector<Literal> lits, Substitution s) {
  // Non-ground equalities narrow the quantified instances to those of their mgu.
  for (bool again = true; again;) {
    again = false;
    for (std::size_t i = 0; i < lits.size(); ++i) {
      const Literal& l = lits[i];
      if (l.kind != LiteralKind::Equality || l.atom.ground()) continue;
      Substitution e;
      if (!unify_into(l.atom.arg(0), l.atom.arg(1), e)) return {TruthValue::F, false, std::nullopt};
      for (const auto& [v, t] : e.bindings()) s.bind(v, t);
      lits.erase(lits.begin() + static_cast<std::ptrdiff_t>(i));
      lits = substitute_all(lits, e);
      again = true;
      break;
    }
  }
  if (!locals_inside(ctx, s)) return {TruthValue::F, true, std::nullopt};

  TruthValue acc = TruthValue::T;
  std::vector<Literal> pending;
  for (const auto& l : lits) {
    if (!l.atom.ground()) {
      pending.push_back(l);
      continue;
    }
    TruthValue v = eval_ground_literal(ctx.m, l, ctx.observer);
    if (v == TruthValue::F) return {TruthValue::F, false, std::nullopt};
    acc = and3(acc, v);
  }
  if (pending.empty()) {
    ExistsValue r{acc, false, std::nullopt};
    if (acc != TruthValue::F) r.witness = s;
    return r;
  }

  VarKey var = variables(pending.front().atom).front();
  ExistsValue result{TruthValue::F, true, std::nullopt};
  for (const auto& t : ctx.u.terms()) {
    Substitution one;
    one.bind(var, t);
    Substitution s2 = s;
    s2.bind(var, t);
    ExistsValue r = search(ctx, substitute_all(pending, one), std::move(s2));
    if (r.value == TruthValue::T) {
      // The ground part is T or I, and nothing can raise it past that.
      if (acc == TruthValue::T) return r;
      result.value = TruthValue::I;
      result.witness = r.witness;
      return result;
    }
    if (r.value == TruthValue::I && !result.witness) result.witness = r.witness;
    result.value = or3(result.value, r.value);
  }
  result.value = and3(result.value, acc);
  if (result.value == TruthValue::F) result.witness.reset();
  return result;
}

}  // namespace

TruthValue eval_ground_literal(const Interpretation3& m, const Literal& l, const LookupObserver* observer) {
  TruthValue v;
  if (l.kind == LiteralKind::Atom) {
    v = m.truth_of(l.atom);
    if (observer) (*observer)(l.atom);
  } else {
    v = builtin_truth(l.atom);
  }
  return l.negated ? not3(v) : v;
}

ExistsValue eval_exists(const Interpretation3& m, const std::vector<Literal>& conj, const Substitution& s,
                        const LookupObserver* observer) {
  Context ctx{m, observer, *m.universe(), {}};
  auto lits = substitute_all(conj, s);
  for (const auto& l : lits) collect_variables(l.atom, ctx.locals);
  return search(ctx, std::move(lits), Substitution{});
}

ExistsValue eval_disjunct(const Interpretation3& m, const Definition& def, std::size_t i, std::span<const Term> args,
                          const LookupObserver* observer) {
  const Disjunct& d = def.disjuncts.at(i);
  if (args.size() != def.predicate.arity) throw Error("arity mismatch evaluating " + def.predicate.to_string());
  Substitution s;
  for (std::size_t k = 0; k < args.size(); ++k)
    if (!match_ground(d.head_patterns[k], args[k], s)) return {TruthValue::F, false, std::nullopt};
  Context ctx{m, observer, *m.universe(), d.locals};
  if (!locals_inside(ctx, s)) return {TruthValue::F, true, std::nullopt};
  ExistsValue r = search(ctx, substitute_all(d.body, s), s);
  if (r.witness) r.witness = r.witness->restrict_to(d.locals);
  return r;
}

BodyValue eval_body(const Interpretation3& m, const Definition& def, std::span<const Term> args,
                    const LookupObserver* observer) {
  BodyValue out;
  out.value = TruthValue::F;
  bool any_bounded = false;
  for (std::size_t i = 0; i < def.disjuncts.size(); ++i) {
    ExistsValue r = eval_disjunct(m, def, i, args, observer);
    out.disjunct_values.push_back(r.value);
    any_bounded = any_bounded || r.bounded;
    if (r.value == TruthValue::T && out.value != TruthValue::T) {
      out.witness_disjunct = i;
      out.witness = r.witness ? *r.witness : Substitution{};
    } else if (r.value == TruthValue::I && out.value == TruthValue::F) {
      out.witness_disjunct = i;
      out.witness = r.witness ? *r.witness : Substitution{};
    }
    out.value = or3(out.value, r.value);
  }
  out.bounded = any_bounded && out.value != TruthValue::T;
  return out;
}

}  // namespace lp3
