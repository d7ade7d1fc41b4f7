#include "lp3/slddnf.hpp"

#include <algorithm>
#include <sstream>

#include "lp3/modelcheck.hpp"

namespace lp3 {

std::string to_string(SelectionRule r) {
  switch (r) {
    case SelectionRule::LeftmostDelay:
      return "leftmost_delay";
    case SelectionRule::FairRoundRobin:
      return "fair";
    case SelectionRule::StrictLeftmost:
      return "strict_leftmost";
  }
  return "?";
}

SelectionRule parse_selection_rule(const std::string& name) {
  if (name == "leftmost_delay" || name == "leftmost_delay_nonground_negation" || name == "leftmost")
    return SelectionRule::LeftmostDelay;
  if (name == "fair" || name == "fair_round_robin") return SelectionRule::FairRoundRobin;
  if (name == "strict_leftmost" || name == "strict") return SelectionRule::StrictLeftmost;
  throw Error("unknown selection rule: " + name);
}

std::string to_string(NodeStatus s) {
  switch (s) {
    case NodeStatus::Open:
      return "open";
    case NodeStatus::Successful:
      return "successful";
    case NodeStatus::Failed:
      return "failed";
    case NodeStatus::Floundered:
      return "floundered";
    case NodeStatus::Unresolved:
      return "unresolved";
    case NodeStatus::Pending:
      return "pending";
  }
  return "?";
}

namespace {

std::string join_literals(const std::vector<Literal>& lits) {
  if (lits.empty()) return "true";
  std::string out;
  for (std::size_t i = 0; i < lits.size(); ++i) {
    if (i) out += ", ";
    out += lits[i].to_string();
  }
  return out;
}

bool selectable(const Literal& l) {
  if (l.kind == LiteralKind::Atom && !l.negated) return true;
  return l.atom.ground();
}

std::vector<VarKey> goal_variables(const std::vector<Literal>& goal) {
  std::vector<VarKey> vars;
  for (const auto& l : goal) collect_variables(l.atom, vars);
  return vars;
}

// One renamed disjunct of the called definition, resolved against the call.
struct Resolvent {
  bool ok = false;
  std::size_t disjunct = 0;
  std::vector<std::pair<Term, Term>> equations;
  Substitution mgu;
  std::vector<Literal> body;  // non-equality literals
};

std::vector<Resolvent> resolvents(const Definition& def, const Term& call, VarGen& gen) {
  std::vector<Resolvent> out;
  out.reserve(def.disjuncts.size());
  for (std::size_t i = 0; i < def.disjuncts.size(); ++i) {
    const Disjunct& d = def.disjuncts[i];
    Resolvent r;
    r.disjunct = i;
    std::map<VarKey, Term> renaming;
    for (std::size_t k = 0; k < d.head_patterns.size(); ++k)
      r.equations.emplace_back(call.arg(k), rename_apart(d.head_patterns[k], renaming, gen));
    for (const auto& l : d.body) {
      Literal b = l;
      b.atom = rename_apart(l.atom, renaming, gen);
      if (b.kind == LiteralKind::Equality)
        r.equations.emplace_back(b.atom.arg(0), b.atom.arg(1));
      else
        r.body.push_back(std::move(b));
    }
    r.ok = true;
    for (const auto& [a, b] : r.equations) {
      if (!unify_into(a, b, r.mgu)) {
        r.ok = false;
        break;
      }
    }
    out.push_back(std::move(r));
  }
  return out;
}

Literal apply_literal(const Literal& l, const Substitution& s) { return s.empty() ? l : l.substituted(s); }

struct GLit {
  Literal lit;
  int slot = 0;
};

struct Goal {
  std::vector<GLit> lits;
  Substitution bindings;
  std::size_t depth = 0;
  std::vector<int> skip;  // slots of negations that just floundered on this goal
  std::shared_ptr<const ProofEvent> events;
  std::int64_t record = -1;
};

std::vector<Literal> plain(const std::vector<GLit>& lits) {
  std::vector<Literal> out;
  out.reserve(lits.size());
  for (const auto& g : lits) out.push_back(g.lit);
  return out;
}

constexpr std::size_t kMaxRecorded = 200000;

class Engine {
 public:
  Engine(const DisjunctiveProgram& p, const SolveOptions& o) : p_(p), o_(o) {}

  void reserve(std::uint32_t id) {
    while (gen_.last() < id) gen_.next();
  }

  struct Run {
    std::vector<Goal> successes;
    bool budget_hit = false;
    bool unresolved = false;
    bool floundered = false;
    bool complete = false;
  };

  // Searches the tree rooted at `root` depth first. Success leaves are
  // collected; `top` keeps goal-variable bindings (and derivations when
  // proofs are on) while negative subtrees only need to know about success.
  Run run(Goal root, std::size_t cap, std::size_t max_answers, int parity, bool top) {
    Run out;
    std::vector<Goal> stack;
    stack.push_back(std::move(root));
    const std::size_t start = used;
    while (!stack.empty()) {
      Goal g = std::move(stack.back());
      stack.pop_back();
      if (g.lits.empty()) {
        set_status(g.record, NodeStatus::Successful);
        emit(g.depth, parity, "", "success");
        out.successes.push_back(std::move(g));
        if (max_answers && out.successes.size() >= max_answers) break;
        continue;
      }
      std::optional<std::size_t> pick = select(g);
      if (!pick) {
        set_status(g.record, NodeStatus::Floundered);
        emit(g.depth, parity, join_literals(plain(g.lits)), "floundered");
        out.floundered = true;
        continue;
      }
      if (used - start >= cap) {
        out.budget_hit = true;
        stack.push_back(std::move(g));
        break;
      }
      ++used;
      const std::size_t remaining = cap - (used - start);
      const GLit sel = g.lits[*pick];
      set_selected(g.record, sel.lit.to_string());
      std::vector<Goal> children;
      std::string action;

      if (sel.lit.kind == LiteralKind::Atom && !sel.lit.negated) {
        action = resolve(g, *pick, top, children);
      } else if (sel.lit.kind == LiteralKind::Builtin) {
        TruthValue v = builtin_truth(sel.lit.atom);
        if (sel.lit.negated) v = not3(v);
        if (v == TruthValue::T) {
          Goal c = child_of(g);
          c.lits.erase(c.lits.begin() + static_cast<std::ptrdiff_t>(*pick));
          if (top && o_.proofs) c.events = event(g, sel, ProofEvent::Kind::BuiltinHolds);
          children.push_back(std::move(c));
          action = "builtin true";
        } else {
          add_record(g.record, Polarity::Positive, g.depth + 1, join_literals(plain(g.lits)), NodeStatus::Failed);
          action = "builtin false";
        }
      } else {
        // Grounded negation: the positive child waits on the negative subtree.
        Goal sub;
        sub.depth = g.depth + 1;
        sub.lits.push_back(GLit{Literal::positive(sel.lit.atom, sel.lit.pos), next_slot_++});
        sub.record = add_record(g.record, Polarity::Negative, sub.depth, sel.lit.atom.to_string(), NodeStatus::Pending);
        std::size_t share = remaining / 2;
        if (share == 0) share = remaining;
        Run r = run(std::move(sub), share, 1, parity ^ 1, false);
        if (!r.successes.empty()) {
          add_record(g.record, Polarity::Positive, g.depth + 1, join_literals(plain(g.lits)), NodeStatus::Failed);
          action = "negation fails";
        } else if (r.budget_hit || r.unresolved) {
          set_status(g.record, NodeStatus::Unresolved);
          out.unresolved = true;
          action = "negation unresolved";
        } else if (r.floundered) {
          Goal c = child_of(g);
          c.skip = g.skip;
          c.skip.push_back(sel.slot);
          children.push_back(std::move(c));
          action = "negation flounders";
        } else {
          Goal c = child_of(g);
          c.lits.erase(c.lits.begin() + static_cast<std::ptrdiff_t>(*pick));
          if (top && o_.proofs) c.events = event(g, sel, ProofEvent::Kind::NegationHolds);
          children.push_back(std::move(c));
          action = "negation holds";
        }
      }
      emit(g.depth, parity, sel.lit.to_string(), action);
      if (action == "no clauses")
        set_status(g.record, NodeStatus::Failed);
      else if (action != "negation unresolved")
        set_status(g.record, NodeStatus::Open);
      for (auto& c : children)
        c.record = add_record(g.record, Polarity::Positive, c.depth, join_literals(plain(c.lits)), NodeStatus::Pending);
      for (auto it = children.rbegin(); it != children.rend(); ++it) stack.push_back(std::move(*it));
    }
    out.complete = stack.empty() && !out.budget_hit;
    return out;
  }

  Goal root(const std::vector<Literal>& goal, std::vector<std::pair<Term, Term>>* failed_eqs = nullptr) {
    Goal g;
    bool ok = true;
    for (const auto& l : goal) {
      if (l.kind == LiteralKind::Equality) {
        if (ok) ok = unify_into(l.atom.arg(0), l.atom.arg(1), g.bindings);
        continue;
      }
      g.lits.push_back(GLit{l, next_slot_++});
    }
    if (!ok) {
      g.lits.clear();
      if (failed_eqs) failed_eqs->emplace_back(Term::nil(), Term::nil());
      root_failed = true;
      return g;
    }
    for (auto& gl : g.lits) {
      gl.lit = apply_literal(gl.lit, g.bindings);
      root_slots.push_back(gl.slot);
    }
    return g;
  }

  std::int64_t add_record(std::int64_t parent, Polarity edge, std::size_t depth, std::string goal, NodeStatus status) {
    if (!o_.record_tree) return -1;
    if (tree_.nodes.size() >= kMaxRecorded) {
      tree_.truncated = true;
      return -1;
    }
    ObservedNode n;
    n.parent = parent;
    n.edge = edge;
    n.depth = depth;
    n.goal = std::move(goal);
    n.status = status;
    std::size_t id = tree_.nodes.size();
    tree_.nodes.push_back(std::move(n));
    if (parent >= 0) tree_.nodes[static_cast<std::size_t>(parent)].children.push_back(id);
    return static_cast<std::int64_t>(id);
  }

  std::size_t used = 0;
  bool root_failed = false;
  std::vector<VarKey> goal_vars;
  std::vector<int> root_slots;
  std::vector<std::string> trace;
  ObservationTree tree_;

 private:
  std::optional<std::size_t> select(const Goal& g) const {
    std::vector<std::size_t> cands;
    for (std::size_t i = 0; i < g.lits.size(); ++i)
      if (selectable(g.lits[i].lit)) cands.push_back(i);
    if (cands.empty()) return std::nullopt;
    switch (o_.rule) {
      case SelectionRule::StrictLeftmost:
        return cands.front();
      case SelectionRule::FairRoundRobin:
        return cands[g.depth % cands.size()];
      case SelectionRule::LeftmostDelay:
        for (auto i : cands)
          if (std::find(g.skip.begin(), g.skip.end(), g.lits[i].slot) == g.skip.end()) return i;
        // Every selectable literal is a negation that floundered on this very goal.
        return std::nullopt;
    }
    return std::nullopt;
  }

  Goal child_of(const Goal& g) const {
    Goal c;
    c.lits = g.lits;
    c.bindings = g.bindings;
    c.depth = g.depth + 1;
    c.events = g.events;
    return c;
  }

  std::shared_ptr<const ProofEvent> event(const Goal& g, const GLit& sel, ProofEvent::Kind kind) const {
    auto e = std::make_shared<ProofEvent>();
    e->prev = g.events;
    e->kind = kind;
    e->slot = sel.slot;
    e->atom = sel.lit.atom;
    return e;
  }

  std::string resolve(const Goal& g, std::size_t pick, bool top, std::vector<Goal>& children) {
    const GLit& sel = g.lits[pick];
    const Term& call = sel.lit.atom;
    const Definition* def = p_.find(Functor{call.name(), call.arity()});
    if (!def || def->disjuncts.empty()) return "no clauses";
    std::size_t failed = 0;
    for (auto& r : resolvents(*def, call, gen_)) {
      if (!r.ok) {
        ++failed;
        add_record(g.record, Polarity::Positive, g.depth + 1, "fail", NodeStatus::Failed);
        continue;
      }
      Goal c;
      c.depth = g.depth + 1;
      std::vector<int> body_slots;
      c.lits.reserve(g.lits.size() + r.body.size());
      for (std::size_t i = 0; i < g.lits.size(); ++i) {
        if (i != pick) {
          c.lits.push_back(GLit{apply_literal(g.lits[i].lit, r.mgu), g.lits[i].slot});
          continue;
        }
        for (const auto& b : r.body) {
          body_slots.push_back(next_slot_);
          c.lits.push_back(GLit{apply_literal(b, r.mgu), next_slot_++});
        }
      }
      if (top && o_.proofs) {
        c.bindings = g.bindings.then(r.mgu);
        auto e = std::make_shared<ProofEvent>();
        e->prev = g.events;
        e->kind = ProofEvent::Kind::Resolved;
        e->slot = sel.slot;
        e->atom = call;
        e->disjunct = r.disjunct;
        e->body_slots = std::move(body_slots);
        e->body = r.body;
        c.events = std::move(e);
      } else if (top) {
        c.bindings = g.bindings.then(r.mgu).restrict_to(goal_vars);
      }
      children.push_back(std::move(c));
    }
    return "resolve " + std::to_string(def->disjuncts.size() - failed) + "/" + std::to_string(def->disjuncts.size());
  }

  void emit(std::size_t depth, int parity, const std::string& lit, const std::string& action) {
    if (!o_.trace) return;
    trace.push_back(std::to_string(depth) + ", " + (parity ? "-" : "+") + ", " + (lit.empty() ? "-" : lit) + ", " +
                    action);
  }

  void set_status(std::int64_t id, NodeStatus s) {
    if (id >= 0) tree_.nodes[static_cast<std::size_t>(id)].status = s;
  }
  void set_selected(std::int64_t id, std::string lit) {
    if (id >= 0) tree_.nodes[static_cast<std::size_t>(id)].selected = std::move(lit);
  }

  const DisjunctiveProgram& p_;
  const SolveOptions& o_;
  VarGen gen_;
  int next_slot_ = 0;
};

}  // namespace

SlddnfNode SlddnfNode::from_goal(const std::vector<Literal>& goal) {
  SlddnfNode n;
  for (const auto& l : goal) {
    if (l.kind == LiteralKind::Equality)
      n.constraints.add(l.atom.arg(0), l.atom.arg(1));
    else
      n.literals.push_back(l);
  }
  return n;
}

std::vector<Literal> SlddnfNode::resolved_literals() const {
  const Substitution& s = constraints.solution();
  std::vector<Literal> out;
  out.reserve(literals.size());
  for (const auto& l : literals) out.push_back(apply_literal(l, s));
  return out;
}

std::string SlddnfNode::to_string() const {
  std::string out = join_literals(literals);
  if (!constraints.equations().empty()) out += " | " + constraints.to_string();
  return out;
}

ConstraintSet Answer::constraints() const {
  ConstraintSet c;
  for (const auto& [v, t] : bindings.bindings()) c.add(var_term(v), t);
  return c;
}

std::string Answer::to_string() const {
  if (bindings.empty()) return "yes";
  std::string out;
  for (const auto& [v, t] : bindings.bindings()) {
    if (!out.empty()) out += ", ";
    out += v.to_string() + " = " + t.to_string();
  }
  return out;
}

std::string Outcome::summary() const {
  std::ostringstream os;
  os << answers.size() << (answers.size() == 1 ? " answer" : " answers");
  if (finitely_failed) os << ", finitely failed";
  if (exhaustive) os << ", exhaustive";
  if (floundered) os << ", floundered";
  if (budget_exhausted) os << ", budget exhausted";
  os << ", " << nodes << " nodes";
  return os.str();
}

std::size_t program_fingerprint(const DisjunctiveProgram& p) { return std::hash<std::string>{}(p.to_string()); }

Outcome solve(const DisjunctiveProgram& p, const std::vector<Literal>& goal, const SolveOptions& opts) {
  if (opts.budget == 0) throw Error("budget must be at least 1");
  Engine e(p, opts);
  e.goal_vars = goal_variables(goal);
  // Goals may already hold renamed variables; start renaming past them.
  {
    std::vector<VarKey> seen;
    for (const auto& l : goal) collect_variables(l.atom, seen);
    for (const auto& v : seen) e.reserve(v.id);
  }
  Goal root = e.root(goal);
  Outcome out;
  if (opts.record_tree) root.record = e.add_record(-1, Polarity::Positive, 0, join_literals(plain(root.lits)), NodeStatus::Pending);
  if (e.root_failed) {
    if (opts.record_tree) e.tree_.nodes[0].status = NodeStatus::Failed;
    out.exhaustive = true;
    out.finitely_failed = true;
  } else {
    if (!opts.proofs) root.bindings = root.bindings.restrict_to(e.goal_vars);
    Engine::Run r = e.run(std::move(root), opts.budget, opts.max_answers, 0, true);
    const std::size_t fingerprint = opts.proofs ? program_fingerprint(p) : 0;
    for (auto& s : r.successes) {
      Answer a;
      a.bindings = s.bindings.restrict_to(e.goal_vars);
      for (const auto& l : goal)
        if (l.kind != LiteralKind::Equality) a.instance.push_back(apply_literal(l, a.bindings));
      if (opts.proofs) {
        auto d = std::make_shared<Derivation>();
        d->events = s.events;
        d->bindings = s.bindings;
        d->root_slots = e.root_slots;
        d->program_hash = fingerprint;
        a.derivation = std::move(d);
      }
      out.answers.push_back(std::move(a));
    }
    out.floundered = r.floundered;
    out.budget_exhausted = r.budget_hit || r.unresolved;
    out.exhaustive = r.complete && !r.unresolved && !r.floundered;
    out.finitely_failed = out.exhaustive && out.answers.empty();
  }
  out.nodes = e.used;
  out.trace = std::move(e.trace);
  if (opts.record_tree) {
    e.tree_.all_observations = out.exhaustive;
    out.tree = std::move(e.tree_);
  }
  return out;
}

Outcome solve(const DisjunctiveProgram& p, const std::string& goal, const SolveOptions& opts) {
  return solve(p, parse_goal(goal), opts);
}

Expansion expand(const SlddnfNode& node, SelectionRule rule, const DisjunctiveProgram& p, std::size_t budget) {
  Expansion out;
  if (!node.satisfiable()) {
    out.status = NodeStatus::Failed;
    out.action = "unsatisfiable constraints";
    return out;
  }
  std::vector<Literal> lits = node.resolved_literals();
  std::vector<std::size_t> cands;
  for (std::size_t i = 0; i < lits.size(); ++i)
    if (selectable(lits[i])) cands.push_back(i);
  if (lits.empty()) {
    out.status = NodeStatus::Successful;
    out.action = "success";
    return out;
  }
  if (cands.empty()) {
    out.status = NodeStatus::Floundered;
    out.action = "floundered";
    return out;
  }
  std::size_t pick = rule == SelectionRule::FairRoundRobin ? cands[node.depth % cands.size()] : cands.front();
  out.selected = pick;
  const Literal& sel = lits[pick];
  auto child = [&](bool drop) {
    SlddnfNode c;
    c.constraints = node.constraints;
    c.depth = node.depth + 1;
    for (std::size_t i = 0; i < node.literals.size(); ++i)
      if (!drop || i != pick) c.literals.push_back(node.literals[i]);
    return c;
  };

  if (sel.kind == LiteralKind::Atom && !sel.negated) {
    const Definition* def = p.find(Functor{sel.atom.name(), sel.atom.arity()});
    if (!def || def->disjuncts.empty()) {
      out.status = NodeStatus::Failed;
      out.action = "no clauses";
      return out;
    }
    VarGen gen;
    // Rename clause variables past every variable id already in the node.
    std::vector<VarKey> seen;
    for (const auto& l : node.literals) collect_variables(l.atom, seen);
    for (const auto& [a, b] : node.constraints.equations()) {
      collect_variables(a, seen);
      collect_variables(b, seen);
    }
    std::uint32_t max_id = 0;
    for (const auto& v : seen) max_id = std::max(max_id, v.id);
    while (gen.last() < max_id) gen.next();
    std::size_t failed = 0;
    for (auto& r : resolvents(*def, sel.atom, gen)) {
      SlddnfNode c;
      c.depth = node.depth + 1;
      c.constraints = node.constraints;
      for (const auto& [a, b] : r.equations) c.constraints.add(a, b);
      for (std::size_t i = 0; i < node.literals.size(); ++i) {
        if (i != pick) {
          c.literals.push_back(node.literals[i]);
          continue;
        }
        for (const auto& b : r.body) c.literals.push_back(b);
      }
      out.child_failed.push_back(!c.satisfiable());
      if (!r.ok) ++failed;
      out.children.push_back(std::move(c));
    }
    out.action = "resolve " + std::to_string(def->disjuncts.size() - failed) + "/" + std::to_string(def->disjuncts.size());
    return out;
  }

  if (sel.kind == LiteralKind::Builtin) {
    TruthValue v = builtin_truth(sel.atom);
    if (sel.negated) v = not3(v);
    SlddnfNode c = child(v == TruthValue::T);
    if (v != TruthValue::T) c.constraints.add(Term::constant("true"), Term::constant("false"));
    out.child_failed.push_back(v != TruthValue::T);
    out.children.push_back(std::move(c));
    out.action = v == TruthValue::T ? "builtin true" : "builtin false";
    return out;
  }

  SlddnfNode neg;
  neg.depth = node.depth + 1;
  neg.constraints = node.constraints;
  neg.literals.push_back(Literal::positive(sel.atom, sel.pos));
  out.negative_child = neg;
  SolveOptions so;
  so.rule = rule;
  so.budget = budget;
  so.max_answers = 1;
  Outcome sub = solve(p, std::vector<Literal>{Literal::positive(sel.atom, sel.pos)}, so);
  if (sub.succeeded()) {
    SlddnfNode c = child(false);
    c.constraints.add(Term::constant("true"), Term::constant("false"));
    out.children.push_back(std::move(c));
    out.child_failed.push_back(true);
    out.action = "negation fails";
  } else if (sub.finitely_failed) {
    out.children.push_back(child(true));
    out.child_failed.push_back(false);
    out.action = "negation holds";
  } else if (sub.budget_exhausted) {
    out.status = NodeStatus::Unresolved;
    out.action = "negation unresolved";
  } else {
    out.children.push_back(child(false));
    out.child_failed.push_back(false);
    out.action = "negation flounders";
  }
  out.negative_outcome = std::move(sub);
  return out;
}

SuccessSetReport success_set(const DisjunctiveProgram& p, const BoundedUniverse& u, SelectionRule rule,
                             std::size_t budget, std::vector<Functor> predicates) {
  if (predicates.empty()) predicates = p.predicates();
  SuccessSetReport out;
  SolveOptions so;
  so.rule = rule;
  so.budget = budget;
  so.max_answers = 1;
  for (const auto& f : predicates) {
    for (const auto& atom : enumerate_atoms(u, f)) {
      Outcome o = solve(p, std::vector<Literal>{Literal::positive(atom)}, so);
      AtomOutcome a;
      a.atom = atom;
      a.nodes = o.nodes;
      a.floundered = o.floundered;
      if (o.succeeded()) {
        a.status = AtomStatus::Success;
        out.success.push_back(atom);
      } else if (o.finitely_failed) {
        a.status = AtomStatus::FiniteFailure;
        out.finite_failure.push_back(atom);
      } else {
        out.unresolved.push_back(atom);
      }
      out.atoms.push_back(std::move(a));
    }
  }
  return out;
}

std::vector<Term> finite_failure_set(const DisjunctiveProgram& p, const BoundedUniverse& u, SelectionRule rule,
                                     std::size_t budget, std::vector<Functor> predicates) {
  return success_set(p, u, rule, budget, std::move(predicates)).finite_failure;
}

namespace {

Term tuple_of(const std::vector<VarKey>& vars, const Substitution& s) {
  std::vector<Term> args;
  args.reserve(vars.size());
  for (const auto& v : vars) args.push_back(s.apply(var_term(v)));
  return Term::compound("goal", std::move(args));
}

TruthValue conjunction_value(const Interpretation3& m, const std::vector<Literal>& goal, const Substitution& s) {
  TruthValue acc = TruthValue::T;
  for (const auto& l : goal) {
    Term a = s.apply(l.atom);
    TruthValue v = m.truth_of(a);
    if (l.negated) v = not3(v);
    acc = and3(acc, v);
    if (acc == TruthValue::F) break;
  }
  return acc;
}

}  // namespace

TheoremReport check_operational_theorems(const DisjunctiveProgram& p, const Interpretation3& m,
                                         const std::vector<std::vector<Literal>>& goals, const TheoremOptions& opts) {
  if (opts.check_model) {
    CheckReport r = check_model_completion(p, m);
    if (!r.holds) {
      std::string msg = "interpretation is not a model of the completion (" + std::to_string(r.violation_count) +
                        " violations)";
      if (!r.violations.empty()) msg += "; first: " + r.violations.front().to_string();
      throw NotAModel(msg);
    }
  }
  TheoremReport out;
  const BoundedUniverse& u = *m.universe();
  SolveOptions so;
  so.rule = opts.rule;
  so.budget = opts.budget;
  auto note = [&](const std::string& s) {
    if (out.counterexamples.size() < opts.max_counterexamples) out.counterexamples.push_back(s);
  };
  for (const auto& goal : goals) {
    GoalCheck gc;
    gc.goal = join_literals(goal);
    Outcome o = solve(p, goal, so);
    gc.answers = o.answers.size();
    gc.exhaustive = o.exhaustive;
    gc.finitely_failed = o.finitely_failed;
    gc.budget_exhausted = o.budget_exhausted;
    if (!o.exhaustive && !o.succeeded()) ++out.unresolved_goals;
    std::vector<VarKey> vars = goal_variables(goal);
    std::vector<Term> patterns;
    for (const auto& a : o.answers) patterns.push_back(tuple_of(vars, a.bindings));
    for_each_tuple(u, vars.size(), [&](const std::vector<Term>& vals) {
      Substitution s;
      for (std::size_t i = 0; i < vars.size(); ++i) s.bind(vars[i], vals[i]);
      TruthValue v;
      try {
        v = conjunction_value(m, goal, s);
      } catch (const OutsideUniverse&) {
        ++gc.skipped;
        return true;
      }
      ++gc.instances;
      Term inst = tuple_of(vars, s);
      bool covered = false;
      for (const auto& pat : patterns) {
        Substitution mm;
        if (match_ground(pat, inst, mm)) {
          covered = true;
          break;
        }
      }
      std::string where = gc.goal + " at " + s.to_string();
      if (covered && v == TruthValue::F) {
        ++gc.unsound;
        note("answer instance is false: " + where);
      }
      if (o.finitely_failed && v == TruthValue::T) {
        ++gc.failure_unsound;
        note("finitely failed goal has a true instance: " + where);
      }
      if (o.exhaustive && v == TruthValue::T && !covered) {
        ++gc.incomplete;
        note("true instance not covered by any answer: " + where);
      }
      return true;
    });
    out.instances += gc.instances;
    out.unsound += gc.unsound;
    out.failure_unsound += gc.failure_unsound;
    out.incomplete += gc.incomplete;
    out.goals.push_back(std::move(gc));
  }
  return out;
}

std::string TheoremReport::to_string() const {
  std::ostringstream os;
  os << "goals: " << goals.size() << ", ground instances: " << instances << ", unresolved goals: " << unresolved_goals
     << "\n";
  os << "soundness (answers true or inadmissible): " << (unsound ? "FAILS" : "holds") << " (" << unsound << ")\n";
  os << "soundness of finite failure: " << (failure_unsound ? "FAILS" : "holds") << " (" << failure_unsound << ")\n";
  os << "completeness (true instances covered): " << (incomplete ? "FAILS" : "holds") << " (" << incomplete << ")\n";
  for (const auto& c : counterexamples) os << "  " << c << "\n";
  return os.str();
}

}  // namespace lp3
