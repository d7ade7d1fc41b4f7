#include "lp3/term.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace lp3 {

struct TermNode {
  TermKind kind;
  std::string name;
  std::int64_t value = 0;  // integer value or variable id
  std::vector<Term> args;
  std::size_t hash = 0;
  std::uint32_t depth = 0;
  bool ground = true;
};

namespace {

std::size_t mix(std::size_t h, std::size_t v) {
  return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

bool plain_atom_name(const std::string& s) {
  if (s.empty()) return false;
  if (s == "[]") return true;
  if (!std::islower(static_cast<unsigned char>(s[0]))) return false;
  return std::all_of(s.begin(), s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  });
}

bool infix_operator(const std::string& name) {
  return name == "=" || name == "=<" || name == ">";
}

void print(const Term& t, std::ostream& os);

void print_list(const Term& t, std::ostream& os) {
  os << '[';
  const Term* cur = &t;
  bool first = true;
  while (cur->is_cons()) {
    if (!first) os << ',';
    first = false;
    print(cur->arg(0), os);
    cur = &cur->arg(1);
  }
  if (!cur->is_nil()) {
    os << '|';
    print(*cur, os);
  }
  os << ']';
}

void print(const Term& t, std::ostream& os) {
  switch (t.kind()) {
    case TermKind::Variable:
      os << t.name();
      if (t.var_id() != 0) os << '_' << t.var_id();
      return;
    case TermKind::Integer:
      os << t.int_value();
      return;
    case TermKind::Compound:
      break;
  }
  if (t.is_cons()) {
    print_list(t, os);
    return;
  }
  if (t.arity() == 2 && infix_operator(t.name())) {
    print(t.arg(0), os);
    os << ' ' << t.name() << ' ';
    print(t.arg(1), os);
    return;
  }
  if (plain_atom_name(t.name())) {
    os << t.name();
  } else {
    os << '\'' << t.name() << '\'';
  }
  if (t.arity() == 0) return;
  os << '(';
  for (std::size_t i = 0; i < t.arity(); ++i) {
    if (i) os << ',';
    print(t.arg(i), os);
  }
  os << ')';
}

}  // namespace

Term Term::var(std::string name, std::uint32_t id) {
  auto n = std::make_shared<TermNode>();
  n->kind = TermKind::Variable;
  n->hash = mix(std::hash<std::string>{}(name), id + 1);
  n->name = std::move(name);
  n->value = id;
  n->ground = false;
  return Term(std::move(n));
}

Term Term::integer(std::int64_t value) {
  auto n = std::make_shared<TermNode>();
  n->kind = TermKind::Integer;
  n->value = value;
  n->hash = mix(0x51ed27, static_cast<std::size_t>(value));
  return Term(std::move(n));
}

Term Term::constant(std::string name) { return compound(std::move(name), {}); }

Term Term::compound(std::string functor, std::vector<Term> args) {
  auto n = std::make_shared<TermNode>();
  n->kind = TermKind::Compound;
  std::size_t h = mix(std::hash<std::string>{}(functor), args.size());
  std::uint32_t depth = 0;
  bool ground = true;
  for (const auto& a : args) {
    h = mix(h, a.hash());
    depth = std::max(depth, a.depth() + 1);
    ground = ground && a.ground();
  }
  n->name = std::move(functor);
  n->args = std::move(args);
  n->hash = h;
  n->depth = depth;
  n->ground = ground;
  return Term(std::move(n));
}

Term Term::nil() {
  static const Term kNil = constant("[]");
  return kNil;
}

Term Term::cons(Term head, Term tail) { return compound(".", {std::move(head), std::move(tail)}); }

Term Term::list(const std::vector<Term>& items, Term tail) {
  Term result = std::move(tail);
  for (auto it = items.rbegin(); it != items.rend(); ++it) result = cons(*it, result);
  return result;
}

TermKind Term::kind() const { return node_->kind; }
bool Term::is_nil() const {
  return node_->kind == TermKind::Compound && node_->args.empty() && node_->name.size() == 2 && node_->name[0] == '[' &&
         node_->name[1] == ']';
}
bool Term::is_cons() const {
  return node_->kind == TermKind::Compound && node_->args.size() == 2 && node_->name.size() == 1 && node_->name[0] == '.';
}
const std::string& Term::name() const { return node_->name; }
std::uint32_t Term::var_id() const { return static_cast<std::uint32_t>(node_->value); }
std::int64_t Term::int_value() const { return node_->value; }
std::size_t Term::arity() const { return node_->args.size(); }
std::span<const Term> Term::args() const { return node_->args; }
bool Term::ground() const { return node_->ground; }
std::uint32_t Term::depth() const { return node_->depth; }
std::size_t Term::hash() const { return node_->hash; }

std::string Term::to_string() const {
  std::ostringstream os;
  print(*this, os);
  return os.str();
}

bool operator==(const Term& a, const Term& b) {
  if (a.node_ == b.node_) return true;
  const TermNode& x = *a.node_;
  const TermNode& y = *b.node_;
  if (x.hash != y.hash || x.kind != y.kind || x.value != y.value || x.depth != y.depth) return false;
  if (x.name != y.name || x.args.size() != y.args.size()) return false;
  for (std::size_t i = 0; i < x.args.size(); ++i)
    if (!(x.args[i] == y.args[i])) return false;
  return true;
}

int compare(const Term& a, const Term& b) {
  if (a.same_node(b)) return 0;
  if (a.depth() != b.depth()) return a.depth() < b.depth() ? -1 : 1;
  if (a.kind() != b.kind()) return static_cast<int>(a.kind()) < static_cast<int>(b.kind()) ? -1 : 1;
  switch (a.kind()) {
    case TermKind::Integer:
      if (a.int_value() == b.int_value()) return 0;
      return a.int_value() < b.int_value() ? -1 : 1;
    case TermKind::Variable:
      if (a.name() != b.name()) return a.name() < b.name() ? -1 : 1;
      if (a.var_id() == b.var_id()) return 0;
      return a.var_id() < b.var_id() ? -1 : 1;
    case TermKind::Compound:
      break;
  }
  if (a.name() != b.name()) return a.name() < b.name() ? -1 : 1;
  if (a.arity() != b.arity()) return a.arity() < b.arity() ? -1 : 1;
  for (std::size_t i = 0; i < a.arity(); ++i) {
    int c = compare(a.arg(i), b.arg(i));
    if (c != 0) return c;
  }
  return 0;
}

std::string VarKey::to_string() const { return var_term(*this).to_string(); }

VarKey var_key(const Term& var) { return VarKey{var.name(), var.var_id()}; }
Term var_term(const VarKey& key) { return Term::var(key.name, key.id); }

void collect_variables(const Term& t, std::vector<VarKey>& out) {
  if (t.ground()) return;
  if (t.is_var()) {
    VarKey k = var_key(t);
    if (std::find(out.begin(), out.end(), k) == out.end()) out.push_back(std::move(k));
    return;
  }
  for (const auto& a : t.args()) collect_variables(a, out);
}

std::vector<VarKey> variables(const Term& t) {
  std::vector<VarKey> out;
  collect_variables(t, out);
  return out;
}

bool occurs(const VarKey& v, const Term& t) {
  if (t.ground()) return false;
  if (t.is_var()) return t.var_id() == v.id && t.name() == v.name;
  for (const auto& a : t.args())
    if (occurs(v, a)) return true;
  return false;
}

// ---------------------------------------------------------------------------
// Substitution

const Term* Substitution::lookup(const VarKey& v) const {
  auto it = bindings_.find(v);
  return it == bindings_.end() ? nullptr : &it->second;
}

Term Substitution::apply(const Term& t) const {
  if (t.ground() || bindings_.empty()) return t;
  if (t.is_var()) {
    const Term* b = lookup(var_key(t));
    return b ? *b : t;
  }
  std::vector<Term> args;
  args.reserve(t.arity());
  bool changed = false;
  for (const auto& a : t.args()) {
    args.push_back(apply(a));
    changed = changed || !args.back().same_node(a);
  }
  if (!changed) return t;
  return Term::compound(t.name(), std::move(args));
}

void Substitution::bind(const VarKey& v, const Term& t) {
  Substitution single;
  single.bindings_.emplace(v, t);
  for (auto& [key, value] : bindings_) {
    if (occurs(v, value)) value = single.apply(value);
  }
  bindings_.insert_or_assign(v, t);
}

Substitution Substitution::restrict_to(std::span<const VarKey> vars) const {
  Substitution out;
  for (const auto& v : vars) {
    if (const Term* b = lookup(v)) out.bindings_.emplace(v, *b);
  }
  return out;
}

Substitution Substitution::then(const Substitution& other) const {
  Substitution out;
  for (const auto& [k, v] : bindings_) out.bindings_.emplace(k, other.apply(v));
  for (const auto& [k, v] : other.bindings_) out.bindings_.emplace(k, v);
  // Drop identity bindings X -> X that composition may produce.
  for (auto it = out.bindings_.begin(); it != out.bindings_.end();) {
    if (it->second.is_var() && var_key(it->second) == it->first)
      it = out.bindings_.erase(it);
    else
      ++it;
  }
  return out;
}

std::string Substitution::to_string() const {
  std::ostringstream os;
  os << '{';
  bool first = true;
  for (const auto& [k, v] : bindings_) {
    if (!first) os << ", ";
    first = false;
    os << k.to_string() << " -> " << v.to_string();
  }
  os << '}';
  return os.str();
}

bool operator==(const Substitution& a, const Substitution& b) { return a.bindings_ == b.bindings_; }

bool unify_into(const Term& a, const Term& b, Substitution& s) {
  std::vector<std::pair<Term, Term>> work;
  work.emplace_back(a, b);
  while (!work.empty()) {
    auto [x0, y0] = std::move(work.back());
    work.pop_back();
    Term x = s.apply(x0);
    Term y = s.apply(y0);
    if (x == y) continue;
    if (!x.is_var() && y.is_var()) std::swap(x, y);
    if (x.is_var()) {
      VarKey v = var_key(x);
      if (occurs(v, y)) return false;
      s.bind(v, y);
      continue;
    }
    if (x.kind() != y.kind()) return false;
    if (x.is_int()) return false;  // distinct integers
    if (x.name() != y.name() || x.arity() != y.arity()) return false;
    for (std::size_t i = x.arity(); i-- > 0;) work.emplace_back(x.arg(i), y.arg(i));
  }
  return true;
}

std::optional<Substitution> unify(const Term& a, const Term& b) {
  Substitution s;
  if (!unify_into(a, b, s)) return std::nullopt;
  return s;
}

bool match_ground(const Term& pattern, const Term& ground, Substitution& s) {
  if (pattern.ground()) return pattern == ground;
  if (pattern.is_var()) {
    VarKey v = var_key(pattern);
    if (const Term* b = s.lookup(v)) return *b == ground;
    s.bind(v, ground);
    return true;
  }
  if (!ground.is_compound() || pattern.name() != ground.name() || pattern.arity() != ground.arity())
    return false;
  for (std::size_t i = 0; i < pattern.arity(); ++i)
    if (!match_ground(pattern.arg(i), ground.arg(i), s)) return false;
  return true;
}

// ---------------------------------------------------------------------------
// ConstraintSet

ConstraintSet::ConstraintSet(std::vector<std::pair<Term, Term>> equations)
    : equations_(std::move(equations)) {}

void ConstraintSet::add(Term lhs, Term rhs) {
  equations_.emplace_back(std::move(lhs), std::move(rhs));
  solved_ = false;
}

void ConstraintSet::solve() const {
  if (solved_) return;
  Substitution s;
  bool ok = true;
  for (const auto& [l, r] : equations_) {
    if (!unify_into(l, r, s)) {
      ok = false;
      break;
    }
  }
  solution_ = ok ? std::optional<Substitution>(std::move(s)) : std::nullopt;
  solved_ = true;
}

bool ConstraintSet::satisfiable() const {
  solve();
  return solution_.has_value();
}

const Substitution& ConstraintSet::solution() const {
  solve();
  if (!solution_) throw Error("constraint set is unsatisfiable: " + to_string());
  return *solution_;
}

std::string ConstraintSet::to_string() const {
  std::ostringstream os;
  os << '{';
  for (std::size_t i = 0; i < equations_.size(); ++i) {
    if (i) os << ", ";
    os << equations_[i].first.to_string() << " = " << equations_[i].second.to_string();
  }
  os << '}';
  return os.str();
}

ConstraintStatus solve_constraints(const ConstraintSet& c) {
  if (!c.satisfiable()) return {false, std::nullopt};
  return {true, c.solution()};
}

std::string SourcePos::to_string() const {
  return std::to_string(line) + ":" + std::to_string(column);
}

// ---------------------------------------------------------------------------
// Literal

Literal Literal::positive(Term atom, SourcePos pos) {
  return Literal{LiteralKind::Atom, false, std::move(atom), pos};
}

Literal Literal::negative(Term atom, SourcePos pos) {
  return Literal{LiteralKind::Atom, true, std::move(atom), pos};
}

Literal Literal::equality(Term lhs, Term rhs, SourcePos pos) {
  return Literal{LiteralKind::Equality, false, Term::compound("=", {std::move(lhs), std::move(rhs)}), pos};
}

Literal Literal::builtin(std::string op, Term lhs, Term rhs, bool negated, SourcePos pos) {
  return Literal{LiteralKind::Builtin, negated, Term::compound(std::move(op), {std::move(lhs), std::move(rhs)}),
                 pos};
}

Literal Literal::substituted(const Substitution& s) const {
  Literal l = *this;
  l.atom = s.apply(atom);
  return l;
}

std::string Literal::to_string() const {
  std::string body = atom.to_string();
  if (!negated) return body;
  if (kind == LiteralKind::Builtin) return "not (" + body + ")";
  return "not " + body;
}

bool is_builtin_name(const std::string& name, std::size_t arity) {
  return arity == 2 && (name == "=" || name == "=<" || name == ">");
}

bool literal_grounded(const Literal& l, const ConstraintSet& c) {
  return c.solution().apply(l.atom).ground();
}

Term rename_apart(const Term& t, std::map<VarKey, Term>& map, VarGen& gen) {
  if (t.ground()) return t;
  if (t.is_var()) {
    VarKey k = var_key(t);
    auto it = map.find(k);
    if (it != map.end()) return it->second;
    Term fresh = Term::var(t.name(), gen.next());
    map.emplace(std::move(k), fresh);
    return fresh;
  }
  std::vector<Term> args;
  args.reserve(t.arity());
  for (const auto& a : t.args()) args.push_back(rename_apart(a, map, gen));
  return Term::compound(t.name(), std::move(args));
}

}  // namespace lp3
