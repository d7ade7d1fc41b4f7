#include <algorithm>
#include <set>
#include <sstream>

#include "lp3/program.hpp"

namespace lp3 {

namespace {

void collect_literal_vars(const std::vector<Literal>& lits, std::vector<VarKey>& out) {
  for (const auto& l : lits) collect_variables(l.atom, out);
}

std::string join_literals(const std::vector<Literal>& lits) {
  std::string s;
  for (std::size_t i = 0; i < lits.size(); ++i) {
    if (i) s += ", ";
    s += lits[i].to_string();
  }
  return s;
}

// Picks a prefix P such that none of P0..P(n-1) is a variable of the clauses.
std::string head_var_prefix(const std::set<std::string>& used, std::size_t arity) {
  for (std::string prefix : {"A", "H", "V", "Arg"}) {
    bool clash = false;
    for (std::size_t i = 0; i < arity && !clash; ++i) clash = used.count(prefix + std::to_string(i)) > 0;
    if (!clash) return prefix;
  }
  std::string prefix = "A_";
  while (true) {
    bool clash = false;
    for (std::size_t i = 0; i < arity && !clash; ++i) clash = used.count(prefix + std::to_string(i)) > 0;
    if (!clash) return prefix;
    prefix += "_";
  }
}

}  // namespace

std::string Clause::to_string() const {
  std::string s = head.to_string();
  if (!body.empty()) s += " :- " + join_literals(body);
  return s + ".";
}

std::vector<Functor> ClausalProgram::defined_predicates() const {
  std::vector<Functor> out;
  std::set<Functor> seen;
  for (const auto& c : clauses)
    if (seen.insert(c.predicate()).second) out.push_back(c.predicate());
  return out;
}

ClausalProgram ClausalProgram::restrict_to(const std::vector<Functor>& predicates) const {
  std::set<Functor> keep(predicates.begin(), predicates.end());
  ClausalProgram out;
  for (const auto& c : clauses)
    if (keep.count(c.predicate())) out.clauses.push_back(c);
  return out;
}

std::string ClausalProgram::to_string() const {
  std::string s;
  for (const auto& c : clauses) s += c.to_string() + "\n";
  return s;
}

Term Definition::head() const { return head_vars.empty() ? Term::constant(predicate.name) : Term::compound(predicate.name, head_vars); }

std::vector<Literal> Definition::conjunction(std::size_t i) const {
  const Disjunct& d = disjuncts.at(i);
  std::vector<Literal> out;
  for (std::size_t k = 0; k < head_vars.size(); ++k) out.push_back(Literal::equality(head_vars[k], d.head_patterns[k]));
  out.insert(out.end(), d.body.begin(), d.body.end());
  return out;
}

bool Definition::definite() const {
  for (const auto& d : disjuncts)
    for (const auto& l : d.body)
      if (l.negated) return false;
  return true;
}

DisjunctiveProgram::DisjunctiveProgram(std::vector<Definition> definitions, std::vector<std::string> warnings)
    : definitions_(std::move(definitions)), warnings_(std::move(warnings)) {
  for (std::size_t i = 0; i < definitions_.size(); ++i) {
    if (!index_.emplace(definitions_[i].predicate, i).second)
      throw Error("duplicate definition of " + definitions_[i].predicate.to_string());
  }
}

const Definition* DisjunctiveProgram::find(const Functor& predicate) const {
  auto it = index_.find(predicate);
  return it == index_.end() ? nullptr : &definitions_[it->second];
}

const Definition& DisjunctiveProgram::at(const Functor& predicate) const {
  const Definition* d = find(predicate);
  if (!d) throw Error("unknown predicate " + predicate.to_string());
  return *d;
}

bool DisjunctiveProgram::definite() const {
  return std::all_of(definitions_.begin(), definitions_.end(), [](const Definition& d) { return d.definite(); });
}

std::vector<Functor> DisjunctiveProgram::predicates() const {
  std::vector<Functor> out;
  for (const auto& d : definitions_) out.push_back(d.predicate);
  return out;
}

std::string DisjunctiveProgram::to_string() const {
  std::ostringstream os;
  for (const auto& def : definitions_) {
    os << def.head().to_string() << " :-";
    if (def.disjuncts.empty()) {
      os << " false.\n";
      continue;
    }
    for (std::size_t i = 0; i < def.disjuncts.size(); ++i) {
      os << (i ? "\n    ; " : "\n      ");
      auto conj = def.conjunction(i);
      os << (conj.empty() ? std::string("true") : join_literals(conj));
    }
    os << ".\n";
  }
  return os.str();
}

DisjunctiveProgram to_disjunctive(const ClausalProgram& p) {
  std::vector<Functor> order = p.defined_predicates();
  std::set<Functor> defined(order.begin(), order.end());
  std::vector<std::string> warnings = p.warnings;

  // Called but undefined predicates become empty definitions.
  for (const auto& c : p.clauses) {
    for (const auto& l : c.body) {
      if (l.kind != LiteralKind::Atom) continue;
      Functor f{l.atom.name(), l.atom.arity()};
      if (defined.insert(f).second) {
        order.push_back(f);
        warnings.push_back("predicate " + f.to_string() + " is called but has no clauses; it is false everywhere");
      }
    }
  }

  std::vector<Definition> defs;
  for (const auto& f : order) {
    std::set<std::string> used;
    for (const auto& c : p.clauses) {
      if (c.predicate() != f) continue;
      std::vector<VarKey> vs = variables(c.head);
      collect_literal_vars(c.body, vs);
      for (const auto& v : vs) used.insert(v.name);
    }
    Definition def;
    def.predicate = f;
    std::string prefix = head_var_prefix(used, f.arity);
    for (std::size_t i = 0; i < f.arity; ++i) def.head_vars.push_back(Term::var(prefix + std::to_string(i)));
    for (std::size_t ci = 0; ci < p.clauses.size(); ++ci) {
      const Clause& c = p.clauses[ci];
      if (c.predicate() != f) continue;
      Disjunct d;
      d.head_patterns.assign(c.head.args().begin(), c.head.args().end());
      d.body = c.body;
      d.locals = variables(c.head);
      collect_literal_vars(c.body, d.locals);
      d.source_clause = ci;
      d.pos = c.pos;
      def.disjuncts.push_back(std::move(d));
    }
    defs.push_back(std::move(def));
  }
  return DisjunctiveProgram(std::move(defs), std::move(warnings));
}

std::string CompletedClause::to_string() const {
  std::string s = head.to_string() + " <-> ";
  if (disjuncts.empty()) return s + "false.";
  for (std::size_t i = 0; i < disjuncts.size(); ++i) {
    if (i) s += "\n    ; ";
    const auto& d = disjuncts[i];
    std::string body = d.conjunction.empty() ? std::string("true") : join_literals(d.conjunction);
    if (d.locals.empty()) {
      s += "(" + body + ")";
    } else {
      s += "exists [";
      for (std::size_t k = 0; k < d.locals.size(); ++k) {
        if (k) s += ",";
        s += d.locals[k].to_string();
      }
      s += "] (" + body + ")";
    }
  }
  return s + ".";
}

std::string CompletedProgram::to_string() const {
  std::string s;
  for (const auto& c : clauses) s += c.to_string() + "\n";
  return s;
}

CompletedProgram completion(const DisjunctiveProgram& p) {
  CompletedProgram out;
  for (const auto& def : p.definitions()) {
    CompletedClause c;
    c.head = def.head();
    for (std::size_t i = 0; i < def.disjuncts.size(); ++i) {
      CompletedDisjunct d;
      d.locals = def.disjuncts[i].locals;
      d.conjunction = def.conjunction(i);
      c.disjuncts.push_back(std::move(d));
    }
    out.clauses.push_back(std::move(c));
    out.signature.push_back(def.predicate);
  }
  return out;
}

HeadInstance head_instance(const Definition& def, std::span<const Term> args, VarGen& gen) {
  if (args.size() != def.predicate.arity)
    throw Error("arity mismatch calling " + def.predicate.to_string() + " with " + std::to_string(args.size()) + " arguments");
  HeadInstance out;
  out.head = def.predicate.arity == 0 ? Term::constant(def.predicate.name)
                                      : Term::compound(def.predicate.name, std::vector<Term>(args.begin(), args.end()));
  for (const auto& d : def.disjuncts) {
    InstanceDisjunct inst;
    std::map<VarKey, Term> renaming;
    Substitution s;
    bool ok = true;
    for (std::size_t k = 0; k < args.size(); ++k) {
      Term pat = rename_apart(d.head_patterns[k], renaming, gen);
      inst.equalities.emplace_back(args[k], pat);
      if (ok) ok = unify_into(s.apply(args[k]), s.apply(pat), s);
    }
    for (const auto& l : d.body) {
      Literal r = l;
      r.atom = rename_apart(l.atom, renaming, gen);
      inst.body.push_back(std::move(r));
    }
    inst.satisfiable = ok;
    if (ok) inst.solution = std::move(s);
    out.disjuncts.push_back(std::move(inst));
  }
  return out;
}

}  // namespace lp3
