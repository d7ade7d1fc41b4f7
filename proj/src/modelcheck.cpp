#include "lp3/modelcheck.hpp"

#include <algorithm>
#include <sstream>

#include "lp3/consequence.hpp"
#include "lp3/evaluator.hpp"

namespace lp3 {

namespace {

std::optional<ViolationKind> classify(ModelCondition cond, TruthValue head, TruthValue body) {
  if (head == TruthValue::F) {
    if (body == TruthValue::T) return ViolationKind::FalseFromTrue;
    if (body == TruthValue::I) return ViolationKind::FalseFromInadmissible;
    return std::nullopt;
  }
  const bool completion = cond == ModelCondition::Completion || cond == ModelCondition::StrongCompletion;
  if (head == TruthValue::T) {
    if (!completion) return std::nullopt;
    if (body == TruthValue::F) return ViolationKind::TrueFromFalse;
    if (body == TruthValue::I) return ViolationKind::TrueFromInadmissible;
    return std::nullopt;
  }
  if (cond == ModelCondition::StrongProgram && body == TruthValue::T) return ViolationKind::StrongMismatch;
  if (cond == ModelCondition::StrongCompletion && body != TruthValue::I) return ViolationKind::StrongMismatch;
  return std::nullopt;
}

// Heads whose value can never violate the condition need no body evaluation.
bool needs_body(ModelCondition cond, TruthValue head) {
  switch (cond) {
    case ModelCondition::Program:
      return head == TruthValue::F;
    case ModelCondition::StrongProgram:
      return head != TruthValue::T;
    case ModelCondition::Completion:
      return head != TruthValue::I;
    case ModelCondition::StrongCompletion:
      break;
  }
  return true;
}

CheckReport run_check(const DisjunctiveProgram& p, const Interpretation3& m, ModelCondition cond,
                      const CheckOptions& opts) {
  CheckReport r;
  r.condition = cond;
  std::vector<const Definition*> defs;
  for (const auto& d : p.definitions()) defs.push_back(&d);
  std::sort(defs.begin(), defs.end(), [](const Definition* a, const Definition* b) { return a->predicate < b->predicate; });
  for (const Definition* def : defs) {
    std::vector<TruthValue> heads = m.values(def->predicate);
    std::size_t i = 0;
    for_each_tuple(*m.universe(), def->predicate.arity, [&](const std::vector<Term>& args) {
      TruthValue h = heads[i++];
      ++r.atoms_checked;
      if (!needs_body(cond, h)) return true;
      BodyValue body = eval_body(m, *def, args);
      r.bounded = r.bounded || body.bounded;
      auto kind = classify(cond, h, body.value);
      if (!kind) return true;
      ++r.violation_count;
      if (r.violations.size() < opts.max_witnesses) {
        Violation v;
        v.predicate = def->predicate;
        v.head = def->predicate.arity ? Term::compound(def->predicate.name, args) : Term::constant(def->predicate.name);
        v.head_value = h;
        v.body_value = body.value;
        v.kind = *kind;
        v.bounded = body.bounded;
        if (body.value == TruthValue::F) {
          v.note = "all disjuncts";
        } else {
          v.disjunct = body.witness_disjunct;
          v.witness = body.witness;
        }
        r.violations.push_back(std::move(v));
      }
      return true;
    });
  }
  r.holds = r.violation_count == 0;
  return r;
}

bool true_subset(const DisjunctiveProgram& p, const Interpretation3& a, const Interpretation3& b, TruthValue v) {
  for (const auto& def : p.definitions()) {
    auto va = a.values(def.predicate), vb = b.values(def.predicate);
    for (std::size_t i = 0; i < va.size(); ++i)
      if (va[i] == v && vb[i] != v) return false;
  }
  return true;
}

bool same_on_program(const DisjunctiveProgram& p, const Interpretation3& a, const Interpretation3& b) {
  for (const auto& def : p.definitions())
    if (a.values(def.predicate) != b.values(def.predicate)) return false;
  return true;
}

bool leq_on_program(const DisjunctiveProgram& p, const Interpretation3& a, const Interpretation3& b) {
  for (const auto& def : p.definitions()) {
    auto va = a.values(def.predicate), vb = b.values(def.predicate);
    for (std::size_t i = 0; i < va.size(); ++i)
      if (!leq_info(va[i], vb[i])) return false;
  }
  return true;
}

TruthValue eval_instance_body(const Interpretation3& m, const std::vector<Literal>& body, const Substitution& s) {
  TruthValue acc = TruthValue::T;
  for (const auto& l : body) acc = and3(acc, eval_ground_literal(m, l.substituted(s)));
  return acc;
}

}  // namespace

const char* to_string(ViolationKind k) {
  switch (k) {
    case ViolationKind::FalseFromTrue:
      return "F<-T";
    case ViolationKind::FalseFromInadmissible:
      return "F<-I";
    case ViolationKind::TrueFromFalse:
      return "T<-F";
    case ViolationKind::TrueFromInadmissible:
      return "T<-I";
    case ViolationKind::StrongMismatch:
      break;
  }
  return "strong-mismatch";
}

const char* to_string(ModelCondition c) {
  switch (c) {
    case ModelCondition::Program:
      return "model of P";
    case ModelCondition::StrongProgram:
      return "strong model of P";
    case ModelCondition::Completion:
      return "model of comp(P)";
    case ModelCondition::StrongCompletion:
      break;
  }
  return "strong model of comp(P)";
}

std::string Violation::to_string() const {
  std::ostringstream os;
  os << lp3::to_string(kind) << ": " << head.to_string() << " is " << lp3::to_string(head_value) << ", body is "
     << lp3::to_string(body_value);
  if (disjunct) {
    os << " (disjunct " << *disjunct + 1;
    if (!witness.empty()) os << " with " << witness.to_string();
    os << ")";
  } else if (!note.empty()) {
    os << " (" << note << ")";
  }
  if (bounded) os << " [bounded]";
  return os.str();
}

CheckReport check_model_definite(const DisjunctiveProgram& p, const Interpretation3& m, CheckOptions opts) {
  if (!p.definite()) throw Error("check_model_definite: the program uses negation; check the completion instead");
  return run_check(p, m, ModelCondition::Program, opts);
}

CheckReport check_model_program(const DisjunctiveProgram& p, const Interpretation3& m, CheckOptions opts) {
  return run_check(p, m, ModelCondition::Program, opts);
}

CheckReport check_strong_model(const DisjunctiveProgram& p, const Interpretation3& m, StrongMode mode,
                               CheckOptions opts) {
  return run_check(p, m, mode == StrongMode::Program ? ModelCondition::StrongProgram : ModelCondition::StrongCompletion,
                   opts);
}

DisjunctiveProgram from_completion(const CompletedProgram& c) {
  std::vector<Definition> defs;
  for (const auto& cl : c.clauses) {
    Definition d;
    d.predicate = Functor{cl.head.name(), cl.head.arity()};
    d.head_vars.assign(cl.head.args().begin(), cl.head.args().end());
    for (std::size_t i = 0; i < cl.disjuncts.size(); ++i) {
      const auto& cd = cl.disjuncts[i];
      Disjunct dj;
      for (std::size_t k = 0; k < d.head_vars.size(); ++k) {
        const Literal& eq = cd.conjunction.at(k);
        if (eq.kind != LiteralKind::Equality || eq.atom.arg(0) != d.head_vars[k])
          throw Error("completion disjunct does not start with its head equalities");
        dj.head_patterns.push_back(eq.atom.arg(1));
      }
      dj.body.assign(cd.conjunction.begin() + static_cast<std::ptrdiff_t>(d.head_vars.size()), cd.conjunction.end());
      dj.locals = cd.locals;
      dj.source_clause = i;
      d.disjuncts.push_back(std::move(dj));
    }
    defs.push_back(std::move(d));
  }
  return DisjunctiveProgram(std::move(defs), {});
}

CheckReport check_model_completion(const CompletedProgram& p, const Interpretation3& m, CheckOptions opts) {
  return run_check(from_completion(p), m, ModelCondition::Completion, opts);
}

CheckReport check_model_completion(const DisjunctiveProgram& p, const Interpretation3& m, CheckOptions opts) {
  return run_check(p, m, ModelCondition::Completion, opts);
}

std::string SynopsisEvidence::to_string() const {
  std::ostringstream os;
  os << atom.to_string() << " is " << lp3::to_string(value) << ": ";
  if (value == TruthValue::T) {
    if (ok)
      os << "matched by clause " << *clause + 1 << " with a true body"
         << (instance.empty() ? std::string() : " (" + instance.to_string() + ")");
    else
      os << "no matching clause instance has a true body (" << instances_checked << " instances)";
  } else {
    if (ok)
      os << "all " << instances_checked << " matching clause instances have false bodies";
    else
      os << "clause " << *clause + 1 << " has an instance with a " << lp3::to_string(instance_body) << " body"
         << (instance.empty() ? std::string() : " (" + instance.to_string() + ")");
  }
  return os.str();
}

std::string SynopsisReport::to_text() const {
  std::ostringstream os;
  os << "synopsis: " << (holds ? "holds" : "fails") << " (" << true_atoms << " true atoms, " << false_atoms
     << " false atoms, " << failures << " failures" << (bounded ? ", bounded" : "") << ")\n";
  for (const auto& e : evidence) os << "  " << (e.ok ? "ok   " : "FAIL ") << e.to_string() << "\n";
  return os.str();
}

SynopsisEvidence synopsis_evidence(const ClausalProgram& p, const Interpretation3& m, const Term& atom,
                                   bool* bounded) {
  SynopsisEvidence ev;
  ev.atom = atom;
  ev.value = m.truth_of(atom);
  const TruthValue v = ev.value;
  ev.ok = v != TruthValue::T;
  if (v == TruthValue::I) return ev;
  const Functor f{atom.name(), atom.arity()};
  for (std::size_t ci = 0; ci < p.clauses.size(); ++ci) {
    const Clause& c = p.clauses[ci];
    Substitution s;
    if (c.predicate() != f || !match_ground(c.head, atom, s)) continue;
    std::vector<VarKey> free;
    for (const auto& l : c.body) collect_variables(l.atom, free);
    free.erase(std::remove_if(free.begin(), free.end(), [&](const VarKey& k) { return s.lookup(k) != nullptr; }),
               free.end());
    if (!free.empty() && bounded) *bounded = true;
    bool decided = false;
    for_each_tuple(*m.universe(), free.size(), [&](const std::vector<Term>& vals) {
      Substitution inst = s;
      for (std::size_t k = 0; k < free.size(); ++k) inst.bind(free[k], vals[k]);
      TruthValue b = eval_instance_body(m, c.body, inst);
      ++ev.instances_checked;
      if ((v == TruthValue::T && b == TruthValue::T) || (v == TruthValue::F && b != TruthValue::F)) {
        ev.ok = v == TruthValue::T;
        ev.clause = ci;
        ev.instance = inst;
        ev.instance_body = b;
        decided = true;
      }
      return !decided;
    });
    if (decided) break;
  }
  return ev;
}

SynopsisReport verify_synopsis(const ClausalProgram& p, const Interpretation3& m, std::size_t max_evidence) {
  SynopsisReport r;
  std::vector<Functor> preds = p.defined_predicates();
  for (const auto& c : p.clauses)
    for (const auto& l : c.body)
      if (l.kind == LiteralKind::Atom) {
        Functor f{l.atom.name(), l.atom.arity()};
        if (std::find(preds.begin(), preds.end(), f) == preds.end()) preds.push_back(f);
      }
  std::sort(preds.begin(), preds.end());

  std::vector<SynopsisEvidence> failures, passes;
  for (const auto& f : preds) {
    std::vector<TruthValue> vals = m.values(f);
    std::size_t idx = 0;
    for_each_tuple(*m.universe(), f.arity, [&](const std::vector<Term>& args) {
      TruthValue v = vals[idx++];
      if (v == TruthValue::I) return true;
      Term atom = f.arity ? Term::compound(f.name, args) : Term::constant(f.name);
      SynopsisEvidence ev = synopsis_evidence(p, m, atom, &r.bounded);
      (v == TruthValue::T ? r.true_atoms : r.false_atoms)++;
      if (!ev.ok) {
        ++r.failures;
        if (failures.size() < max_evidence) failures.push_back(std::move(ev));
      } else if (passes.size() < max_evidence) {
        passes.push_back(std::move(ev));
      }
      return true;
    });
  }
  r.holds = r.failures == 0;
  r.evidence = std::move(failures);
  r.evidence.insert(r.evidence.end(), passes.begin(), passes.end());
  return r;
}

bool CrosscheckReport::consistent() const {
  return model_direct == model_via_tplus && model_direct == model_via_t3_false && comp_direct == comp_via_fixpoints &&
         comp_direct == comp_via_leq && strong_direct == strong_via_t3;
}

std::string CrosscheckReport::to_string() const {
  auto yn = [](bool b) { return b ? "yes" : "no"; };
  std::ostringstream os;
  os << "model of P: direct " << yn(model_direct) << ", T3+ true atoms within M " << yn(model_via_tplus)
     << ", false atoms of M false in T3(M) " << yn(model_via_t3_false) << "\n";
  os << "model of comp(P): direct " << yn(comp_direct) << ", fixpoint of T3+ and T3- " << yn(comp_via_fixpoints)
     << ", M below T3(M) " << yn(comp_via_leq) << "\n";
  os << "strong model of comp(P): direct " << yn(strong_direct) << ", fixpoint of T3 " << yn(strong_via_t3) << "\n";
  return os.str();
}

CrosscheckReport crosscheck_fixpoint_props(const DisjunctiveProgram& p, const Interpretation3& m,
                                           bool throw_on_mismatch) {
  CheckOptions quiet{0};
  CrosscheckReport r;
  r.model_direct = check_model_program(p, m, quiet).holds;
  r.comp_direct = check_model_completion(p, m, quiet).holds;
  r.strong_direct = check_strong_model(p, m, StrongMode::Completion, quiet).holds;

  Interpretation3 tm = t3(p, m);
  Interpretation3 plus = t3_plus(p, m);
  Interpretation3 minus = t3_minus(p, m);
  r.model_via_tplus = true_subset(p, plus, m, TruthValue::T);
  r.model_via_t3_false = true_subset(p, m, tm, TruthValue::F);
  r.comp_via_fixpoints = same_on_program(p, plus, m) && same_on_program(p, minus, m);
  r.comp_via_leq = leq_on_program(p, m, tm);
  r.strong_via_t3 = same_on_program(p, tm, m);
  if (throw_on_mismatch && !r.consistent())
    throw InternalInconsistency("model checks disagree with the consequence operators:\n" + r.to_string());
  return r;
}

}  // namespace lp3
