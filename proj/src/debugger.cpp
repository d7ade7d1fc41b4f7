#include "lp3/debugger.hpp"

#include <algorithm>
#include <functional>
#include <iostream>
#include <sstream>
#include <unordered_map>

namespace lp3 {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Correct:
      return "correct";
    case Verdict::Erroneous:
      return "erroneous";
    case Verdict::Inadmissible:
      return "inadmissible";
  }
  return "?";
}

std::optional<Verdict> verdict_from_string(const std::string& s) {
  if (s == "correct" || s == "c") return Verdict::Correct;
  if (s == "erroneous" || s == "e") return Verdict::Erroneous;
  if (s == "inadmissible" || s == "i") return Verdict::Inadmissible;
  return std::nullopt;
}

std::string to_string(OracleSource s) {
  switch (s) {
    case OracleSource::Human:
      return "human";
    case OracleSource::Interpretation:
      return "interpretation";
    case OracleSource::Transcript:
      return "transcript";
    case OracleSource::Cached:
      return "cached";
  }
  return "?";
}

Question Question::about_atom(const Term& atom) {
  Question q;
  q.kind = Kind::Atom;
  q.atom = atom;
  q.text = atom.to_string();
  return q;
}

Question Question::about_call(const Term& call, const std::vector<Term>& answers) {
  Question q;
  q.kind = Kind::Completeness;
  q.atom = call;
  q.answers = answers;
  q.text = "missing? " + call.to_string() + " -> {";
  for (std::size_t i = 0; i < answers.size(); ++i) q.text += (i ? ", " : "") + answers[i].to_string();
  q.text += "}";
  return q;
}

namespace {

Verdict from_truth(TruthValue v) {
  switch (v) {
    case TruthValue::T:
      return Verdict::Correct;
    case TruthValue::F:
      return Verdict::Erroneous;
    case TruthValue::I:
      break;
  }
  return Verdict::Inadmissible;
}

}  // namespace

Verdict InterpretationOracle::ask(const Question& q) {
  if (q.kind == Question::Kind::Atom) return from_truth(m_.truth_of(q.atom));
  std::vector<VarKey> vars = variables(q.atom);
  bool any = false, all_inadmissible = true, missing = false;
  for_each_tuple(*m_.universe(), vars.size(), [&](const std::vector<Term>& vals) {
    Substitution s;
    for (std::size_t i = 0; i < vars.size(); ++i) s.bind(vars[i], vals[i]);
    Term inst = s.apply(q.atom);
    TruthValue v;
    try {
      v = m_.truth_of(inst);
    } catch (const OutsideUniverse&) {
      return true;
    }
    any = true;
    if (v != TruthValue::I) all_inadmissible = false;
    if (v != TruthValue::T) return true;
    for (const auto& a : q.answers) {
      Substitution mm;
      if (match_ground(a, inst, mm)) return true;
    }
    missing = true;
    return false;
  });
  if (missing) return Verdict::Erroneous;
  if (any && all_inadmissible) return Verdict::Inadmissible;
  return Verdict::Correct;
}

Verdict TranscriptOracle::ask(const Question& q) {
  if (next_ >= records_.size()) throw TranscriptExhausted(q);
  const OracleAnswer& r = records_[next_];
  if (r.question != q.text)
    throw TranscriptError("transcript diverged at record " + std::to_string(next_ + 1) + ": expected '" + r.question +
                          "', asked '" + q.text + "'");
  ++next_;
  return r.verdict;
}

Verdict HumanOracle::ask(const Question& q) {
  for (;;) {
    out_ << q.text << " ? [c]orrect/[e]rroneous/[i]nadmissible: " << std::flush;
    std::string line;
    if (!std::getline(in_, line)) throw Error("oracle input ended");
    line.erase(0, line.find_first_not_of(" \t"));
    line.erase(line.find_last_not_of(" \t\r") + 1);
    if (auto v = verdict_from_string(line)) return *v;
    out_ << "please answer c, e or i\n";
  }
}

Verdict OracleSession::ask(const Question& q) {
  auto it = cache_.find(q.text);
  if (it != cache_.end()) {
    ++hits_;
    return it->second;
  }
  Verdict v = oracle_.ask(q);
  cache_.emplace(q.text, v);
  transcript_.push_back(OracleAnswer{q.text, v, oracle_.source()});
  return v;
}

std::vector<OracleAnswer> parse_transcript(const std::string& text) {
  std::vector<OracleAnswer> out;
  std::istringstream in(text);
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    auto cut = line.rfind("; ");
    if (cut == std::string::npos) throw TranscriptError("transcript line " + std::to_string(n) + ": missing '; '");
    auto v = verdict_from_string(line.substr(cut + 2));
    if (!v) throw TranscriptError("transcript line " + std::to_string(n) + ": unknown verdict '" + line.substr(cut + 2) + "'");
    out.push_back(OracleAnswer{line.substr(0, cut), *v, OracleSource::Transcript});
  }
  return out;
}

std::string format_transcript(const std::vector<OracleAnswer>& records) {
  std::string out;
  for (const auto& r : records) out += r.question + "; " + to_string(r.verdict) + "\n";
  return out;
}

// ---------------------------------------------------------------------------
// Proof trees

std::string ProofNode::label() const { return kind == Kind::Negation ? "not " + atom.to_string() : atom.to_string(); }

std::string ProofTree::to_text() const {
  std::string out;
  std::function<void(std::size_t, int)> walk = [&](std::size_t i, int indent) {
    const ProofNode& n = nodes[i];
    out += std::string(static_cast<std::size_t>(indent) * 2, ' ') + n.label();
    if (n.kind == ProofNode::Kind::Atom) out += "  [clause " + std::to_string(n.disjunct + 1) + "]";
    out += "\n";
    for (auto c : n.children) walk(c, indent + 1);
  };
  if (!nodes.empty()) walk(0, 0);
  return out;
}

ProofTree build_proof_tree(const DisjunctiveProgram& p, const Answer& answer) {
  const Derivation* d = answer.derivation.get();
  if (!d) throw Error("answer carries no derivation; solve with proofs enabled");
  if (d->root_slots.size() != 1) throw Error("proof trees need a goal with exactly one literal");
  if (d->program_hash != program_fingerprint(p)) throw StaleDerivation("program changed since the answer was computed");
  std::unordered_map<int, const ProofEvent*> by_slot;
  for (const ProofEvent* e = d->events.get(); e; e = e->prev.get()) by_slot[e->slot] = e;

  ProofTree t;
  std::function<std::size_t(int, LiteralKind, bool)> build = [&](int slot, LiteralKind kind, bool negated) {
    auto it = by_slot.find(slot);
    if (it == by_slot.end()) throw StaleDerivation("derivation has no step for a proved literal");
    const ProofEvent& e = *it->second;
    ProofNode n;
    n.atom = d->bindings.apply(e.atom);
    if (!n.atom.ground()) throw Error("proof tree node is not ground: " + n.atom.to_string());
    std::size_t id = t.nodes.size();
    if (kind == LiteralKind::Builtin) {
      n.kind = ProofNode::Kind::Builtin;
      t.nodes.push_back(std::move(n));
      return id;
    }
    n.predicate = Functor{n.atom.name(), n.atom.arity()};
    if (negated) {
      n.kind = ProofNode::Kind::Negation;
      t.nodes.push_back(std::move(n));
      return id;
    }
    const Definition* def = p.find(n.predicate);
    if (!def || e.disjunct >= def->disjuncts.size()) throw StaleDerivation("clause used at " + n.atom.to_string() + " is gone");
    std::size_t body = 0;
    for (const auto& l : def->disjuncts[e.disjunct].body) body += l.kind != LiteralKind::Equality;
    if (body != e.body_slots.size()) throw StaleDerivation("clause used at " + n.atom.to_string() + " has changed");
    n.disjunct = e.disjunct;
    t.nodes.push_back(std::move(n));
    for (std::size_t k = 0; k < e.body_slots.size(); ++k) {
      std::size_t c = build(e.body_slots[k], e.body[k].kind, e.body[k].negated);
      t.nodes[id].children.push_back(c);
    }
    return id;
  };
  build(d->root_slots.front(), LiteralKind::Atom, false);
  return t;
}

// ---------------------------------------------------------------------------
// Call-answer trees

std::string CallNode::label() const {
  if (negated) return "not " + call.to_string() + (answers.empty() ? " fails" : " holds");
  std::string out = call.to_string() + " -> {";
  for (std::size_t i = 0; i < answers.size(); ++i) out += (i ? ", " : "") + answers[i].to_string();
  return out + "}";
}

namespace {

constexpr std::size_t kMaxWalkSteps = 20000;

std::uint32_t max_var_id(const Term& t) {
  std::uint32_t m = 0;
  for (const auto& v : variables(t)) m = std::max(m, v.id);
  return m;
}

}  // namespace

CallAnswerTree::CallAnswerTree(const DisjunctiveProgram& p, const Term& goal, SelectionRule rule, std::size_t budget)
    : p_(p), rule_(rule), budget_(budget) {
  CallNode root;
  root.call = goal;
  root.answers = answers_of(goal, root.exhaustive);
  if (!root.exhaustive) throw Error("missing answers need an exhaustive search of " + goal.to_string());
  add(std::move(root));
}

std::size_t CallAnswerTree::add(CallNode n) {
  nodes_.push_back(std::move(n));
  children_.emplace_back();
  expanded_.push_back(false);
  return nodes_.size() - 1;
}

std::vector<Term> CallAnswerTree::answers_of(const Term& call, bool& exhaustive) const {
  SolveOptions so;
  so.rule = rule_;
  so.budget = budget_;
  Outcome o = solve(p_, std::vector<Literal>{Literal::positive(call)}, so);
  exhaustive = o.exhaustive;
  std::vector<Term> out;
  for (const auto& a : o.answers) out.push_back(a.instance.front().atom);
  return out;
}

const std::vector<std::size_t>& CallAnswerTree::children(std::size_t i) {
  if (!expanded_.at(i)) expand(i);
  return children_[i];
}

void CallAnswerTree::expand(std::size_t i) {
  expanded_[i] = true;
  if (nodes_[i].negated) return;
  const Term call = nodes_[i].call;
  const Definition* def = p_.find(Functor{call.name(), call.arity()});
  if (!def) return;
  VarGen gen;
  std::uint32_t floor = max_var_id(call);
  for (const auto& a : nodes_[i].answers) floor = std::max(floor, max_var_id(a));
  while (gen.last() < floor) gen.next();

  auto child_for = [&](const Term& c, bool negated, std::size_t disjunct) {
    for (auto k : children_[i]) {
      const CallNode& n = nodes_[k];
      if (n.negated == negated && n.call == c) return k;
    }
    CallNode n;
    n.call = c;
    n.negated = negated;
    n.disjunct = disjunct;
    n.parent = i;
    if (negated) {
      SolveOptions so;
      so.rule = rule_;
      so.budget = budget_;
      so.max_answers = 1;
      Outcome o = solve(p_, std::vector<Literal>{Literal::positive(c)}, so);
      if (o.finitely_failed) n.answers.push_back(c);
      n.exhaustive = o.succeeded() || o.finitely_failed;
    } else {
      n.answers = answers_of(c, n.exhaustive);
    }
    std::size_t id = add(std::move(n));
    children_[i].push_back(id);
    return id;
  };

  std::size_t steps = 0;
  HeadInstance hi = head_instance(*def, call.args(), gen);
  for (std::size_t d = 0; d < hi.disjuncts.size(); ++d) {
    const InstanceDisjunct& inst = hi.disjuncts[d];
    if (!inst.satisfiable) continue;
    // Left-to-right evaluation of the body over the children's answer sets.
    std::function<void(Substitution, std::vector<Literal>)> walk = [&](Substitution s, std::vector<Literal> rest) {
      if (++steps > kMaxWalkSteps) return;
      std::optional<std::size_t> pick;
      for (std::size_t k = 0; k < rest.size(); ++k) {
        Literal l = rest[k].substituted(s);
        if (l.kind == LiteralKind::Equality) {
          if (!unify_into(l.atom.arg(0), l.atom.arg(1), s)) return;
          rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(k));
          walk(std::move(s), std::move(rest));
          return;
        }
        if (!pick && ((l.kind == LiteralKind::Atom && !l.negated) || l.atom.ground())) pick = k;
      }
      if (!pick) return;  // done, or floundered
      Literal l = rest[*pick].substituted(s);
      rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(*pick));
      if (l.kind == LiteralKind::Builtin) {
        TruthValue v = builtin_truth(l.atom);
        if ((l.negated ? not3(v) : v) == TruthValue::T) walk(std::move(s), std::move(rest));
        return;
      }
      if (l.negated) {
        std::size_t c = child_for(l.atom, true, d);
        if (!nodes_[c].answers.empty()) walk(std::move(s), std::move(rest));
        return;
      }
      std::size_t c = child_for(l.atom, false, d);
      std::vector<Term> answers = nodes_[c].answers;
      for (const auto& a : answers) {
        std::map<VarKey, Term> renaming;
        Term fresh = rename_apart(a, renaming, gen);
        Substitution s2 = s;
        if (unify_into(l.atom, fresh, s2)) walk(std::move(s2), rest);
      }
    };
    walk(*inst.solution, inst.body);
  }
}

// ---------------------------------------------------------------------------
// Diagnosis

std::string to_string(DiagnosisKind k) {
  switch (k) {
    case DiagnosisKind::IncorrectClauseInstance:
      return "incorrect_clause_instance";
    case DiagnosisKind::InadmissibilityTransition:
      return "inadmissibility_transition";
    case DiagnosisKind::UncoveredAtom:
      return "uncovered_atom";
    case DiagnosisKind::GoalInadmissibleNoBug:
      return "goal_inadmissible_no_bug";
  }
  return "?";
}

std::string Diagnosis::to_string() const {
  std::ostringstream os;
  os << "diagnosis: " << lp3::to_string(kind) << "\n";
  if (predicate) {
    os << "predicate: " << predicate->to_string();
    if (clause_number) os << ", clause " << *clause_number;
    if (clause_pos) os << " (line " << clause_pos->line << ")";
    os << "\n";
  }
  if (!clause_text.empty()) os << "clause: " << clause_text << "\n";
  if (!instance.empty()) os << "instance: " << instance << "\n";
  os << "node: " << node << "\n";
  os << "questions: " << transcript.size() << "\n";
  return os.str();
}

bool operator==(const Diagnosis& a, const Diagnosis& b) {
  if (a.transcript.size() != b.transcript.size()) return false;
  for (std::size_t i = 0; i < a.transcript.size(); ++i)
    if (a.transcript[i].question != b.transcript[i].question || a.transcript[i].verdict != b.transcript[i].verdict)
      return false;
  auto pos = [](const std::optional<SourcePos>& p) { return p ? std::make_pair(p->line, p->column) : std::make_pair(-1, -1); };
  return a.kind == b.kind && a.predicate == b.predicate && a.clause_number == b.clause_number &&
         pos(a.clause_pos) == pos(b.clause_pos) && a.clause_text == b.clause_text && a.instance == b.instance &&
         a.node == b.node;
}

namespace {

std::string disjunct_text(const Definition& def, std::size_t i) {
  const Disjunct& d = def.disjuncts[i];
  Term head = d.head_patterns.empty() ? Term::constant(def.predicate.name)
                                      : Term::compound(def.predicate.name, d.head_patterns);
  std::string out = head.to_string();
  for (std::size_t k = 0; k < d.body.size(); ++k) out += (k ? ", " : " :- ") + d.body[k].to_string();
  return out + ".";
}

void locate(const DisjunctiveProgram& p, const Functor& f, std::size_t disjunct, Diagnosis& out) {
  out.predicate = f;
  const Definition* def = p.find(f);
  if (!def || disjunct >= def->disjuncts.size()) return;
  out.clause_number = disjunct + 1;
  out.clause_pos = def->disjuncts[disjunct].pos;
  out.clause_text = disjunct_text(*def, disjunct);
}

Verdict flip(Verdict v) {
  if (v == Verdict::Correct) return Verdict::Erroneous;
  if (v == Verdict::Erroneous) return Verdict::Correct;
  return v;
}

struct Search {
  const DisjunctiveProgram& p;
  OracleSession& oracle;
  SelectionRule rule;
  std::size_t budget;

  Verdict atom_verdict(const Term& atom) { return oracle.ask(Question::about_atom(atom)); }

  Verdict proof_verdict(const ProofNode& n) {
    switch (n.kind) {
      case ProofNode::Kind::Builtin:
        return Verdict::Correct;
      case ProofNode::Kind::Negation:
        return flip(atom_verdict(n.atom));
      case ProofNode::Kind::Atom:
        break;
    }
    return atom_verdict(n.atom);
  }

  Verdict call_verdict(const CallNode& n) {
    if (n.negated) {
      // A negation that holds returned its only answer.
      if (!n.answers.empty()) return Verdict::Correct;
      // `not A` failed, which is right exactly when A is true.
      return atom_verdict(n.call);
    }
    return oracle.ask(Question::about_call(n.call, n.answers));
  }

  // The node is known to be erroneous.
  Diagnosis wrong(const ProofTree& t, std::size_t i) {
    const ProofNode& n = t.nodes[i];
    bool inadmissible_child = false;
    for (auto c : n.children) {
      const ProofNode& child = t.nodes[c];
      Verdict v = proof_verdict(child);
      if (v == Verdict::Erroneous) {
        if (child.kind == ProofNode::Kind::Atom) return wrong(t, c);
        // `not A` wrongly succeeded: A is true but finitely failed.
        CallAnswerTree sub(p, child.atom, rule, budget);
        return missing(sub, 0);
      }
      if (v == Verdict::Inadmissible) inadmissible_child = true;
    }
    Diagnosis d;
    d.kind = inadmissible_child ? DiagnosisKind::InadmissibilityTransition : DiagnosisKind::IncorrectClauseInstance;
    locate(p, n.predicate, n.disjunct, d);
    d.node = n.label();
    d.instance = n.atom.to_string();
    for (std::size_t k = 0; k < n.children.size(); ++k)
      d.instance += (k ? ", " : " :- ") + t.nodes[n.children[k]].label();
    return d;
  }

  // The call is known to miss an answer.
  Diagnosis missing(CallAnswerTree& t, std::size_t i) {
    std::optional<std::size_t> inadmissible_child;
    std::vector<std::size_t> kids = t.children(i);
    for (auto c : kids) {
      const CallNode& child = t.node(c);
      Verdict v = call_verdict(child);
      if (v == Verdict::Erroneous) {
        if (!child.negated) return missing(t, c);
        // `not A` wrongly failed: A has a wrong answer.
        SolveOptions so;
        so.rule = rule;
        so.budget = budget;
        so.max_answers = 1;
        so.proofs = true;
        Outcome o = solve(p, std::vector<Literal>{Literal::positive(child.call)}, so);
        ProofTree pt = build_proof_tree(p, o.answers.at(0));
        return wrong(pt, 0);
      }
      if (v == Verdict::Inadmissible && !inadmissible_child) inadmissible_child = c;
    }
    const CallNode& n = t.node(i);
    Diagnosis d;
    Functor f{n.call.name(), n.call.arity()};
    d.node = n.label();
    if (inadmissible_child) {
      d.kind = DiagnosisKind::InadmissibilityTransition;
      locate(p, f, *t.node(*inadmissible_child).disjunct, d);
      d.instance = n.call.to_string() + " calls " + t.node(*inadmissible_child).label();
      return d;
    }
    d.kind = DiagnosisKind::UncoveredAtom;
    d.instance = n.call.to_string();
    d.predicate = f;
    // The clause meant to cover the call: the only one whose head matches.
    if (const Definition* def = p.find(f)) {
      VarGen gen;
      std::uint32_t floor = max_var_id(n.call);
      while (gen.last() < floor) gen.next();
      HeadInstance hi = head_instance(*def, n.call.args(), gen);
      std::vector<std::size_t> matching;
      for (std::size_t k = 0; k < hi.disjuncts.size(); ++k)
        if (hi.disjuncts[k].satisfiable) matching.push_back(k);
      if (matching.size() == 1) locate(p, f, matching.front(), d);
    }
    return d;
  }
};

Diagnosis no_bug(const std::string& node) {
  Diagnosis d;
  d.kind = DiagnosisKind::GoalInadmissibleNoBug;
  d.node = node;
  return d;
}

}  // namespace

std::optional<Diagnosis> diagnose_wrong_answer(const DisjunctiveProgram& p, const ProofTree& tree,
                                               OracleSession& oracle, SelectionRule rule, std::size_t budget) {
  if (tree.nodes.empty()) throw Error("empty proof tree");
  Search s{p, oracle, rule, budget};
  Verdict v = s.proof_verdict(tree.nodes[0]);
  std::optional<Diagnosis> out;
  if (v == Verdict::Inadmissible)
    out = no_bug(tree.nodes[0].label());
  else if (v == Verdict::Erroneous)
    out = s.wrong(tree, 0);
  if (out) out->transcript = oracle.transcript();
  return out;
}

std::optional<Diagnosis> diagnose_missing_answer(CallAnswerTree& tree, OracleSession& oracle) {
  Search s{tree.program(), oracle, tree.rule(), tree.budget()};
  Verdict v = s.call_verdict(tree.node(0));
  std::optional<Diagnosis> out;
  if (v == Verdict::Inadmissible)
    out = no_bug(tree.node(0).label());
  else if (v == Verdict::Erroneous)
    out = s.missing(tree, 0);
  if (out) out->transcript = oracle.transcript();
  return out;
}

std::string to_string(DebugMode m) { return m == DebugMode::WrongAnswer ? "wrong" : "missing"; }

DebugMode parse_debug_mode(const std::string& s) {
  if (s == "wrong" || s == "wrong_answer") return DebugMode::WrongAnswer;
  if (s == "missing" || s == "missing_answer") return DebugMode::MissingAnswer;
  throw Error("unknown debug mode: " + s);
}

std::optional<Diagnosis> debug_goal(const DisjunctiveProgram& p, const Term& goal, OracleSession& oracle,
                                    const DebugOptions& opts) {
  if (goal.is_var() || goal.is_int()) throw Error("goal must be an atom: " + goal.to_string());
  if (opts.mode == DebugMode::WrongAnswer) {
    SolveOptions so;
    so.rule = opts.rule;
    so.budget = opts.budget;
    so.max_answers = opts.answer_index + 1;
    so.proofs = true;
    Outcome o = solve(p, std::vector<Literal>{Literal::positive(goal)}, so);
    if (o.answers.size() <= opts.answer_index)
      throw Error("goal " + goal.to_string() + " has no answer #" + std::to_string(opts.answer_index + 1) + " (" +
                  o.summary() + ")");
    ProofTree t = build_proof_tree(p, o.answers[opts.answer_index]);
    return diagnose_wrong_answer(p, t, oracle, opts.rule, opts.budget);
  }
  CallAnswerTree t(p, goal, opts.rule, opts.budget);
  return diagnose_missing_answer(t, oracle);
}

DebugSession::DebugSession(DisjunctiveProgram p, Term goal, DebugOptions opts)
    : p_(std::move(p)), goal_(std::move(goal)), opts_(opts) {
  advance();
}

void DebugSession::advance() {
  TranscriptOracle replay(answers_);
  OracleSession s(replay);
  try {
    diagnosis_ = debug_goal(p_, goal_, s, opts_);
    if (diagnosis_) diagnosis_->transcript = answers_;
    pending_.reset();
    finished_ = true;
  } catch (const TranscriptExhausted& e) {
    pending_ = e.question;
  }
}

void DebugSession::answer(Verdict v, OracleSource source) {
  if (!pending_) throw Error("no question is pending");
  answers_.push_back(OracleAnswer{pending_->text, v, source});
  advance();
}

}  // namespace lp3
