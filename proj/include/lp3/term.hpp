// Herbrand terms, substitutions, unification with occurs check and
// equality-constraint sets.
#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace lp3 {

/// Base class of every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class TermKind : std::uint8_t { Variable, Integer, Compound };

struct TermNode;

/// Immutable Herbrand term with value semantics. Constants are 0-ary
/// compounds; integers are a distinguished kind of constant. Variables are
/// identified by (name, id); id 0 is a source variable, ids > 0 come from
/// renaming apart.
class Term {
 public:
  static Term var(std::string name, std::uint32_t id = 0);
  static Term integer(std::int64_t value);
  static Term constant(std::string name);
  static Term compound(std::string functor, std::vector<Term> args);
  static Term nil();
  static Term cons(Term head, Term tail);
  static Term list(const std::vector<Term>& items, Term tail = nil());

  TermKind kind() const;
  bool is_var() const { return kind() == TermKind::Variable; }
  bool is_int() const { return kind() == TermKind::Integer; }
  bool is_compound() const { return kind() == TermKind::Compound; }
  bool is_constant() const { return is_compound() && arity() == 0; }
  bool is_nil() const;
  bool is_cons() const;

  /// Functor name for compounds, variable name for variables.
  const std::string& name() const;
  std::uint32_t var_id() const;
  std::int64_t int_value() const;
  std::size_t arity() const;
  std::span<const Term> args() const;
  const Term& arg(std::size_t i) const { return args()[i]; }

  bool ground() const;
  /// Constants, integers and variables have depth 0.
  std::uint32_t depth() const;
  std::size_t hash() const;

  bool same_node(const Term& other) const { return node_ == other.node_; }

  std::string to_string() const;

  friend bool operator==(const Term& a, const Term& b);
  friend bool operator!=(const Term& a, const Term& b) { return !(a == b); }

 private:
  explicit Term(std::shared_ptr<const TermNode> node) : node_(std::move(node)) {}
  std::shared_ptr<const TermNode> node_;
};

/// Total order: depth, then kind (variables, integers, compounds), then
/// value / name / arity, then arguments left to right.
int compare(const Term& a, const Term& b);

struct TermLess {
  bool operator()(const Term& a, const Term& b) const { return compare(a, b) < 0; }
};

struct TermHash {
  std::size_t operator()(const Term& t) const { return t.hash(); }
};

struct VarKey {
  std::string name;
  std::uint32_t id = 0;

  friend bool operator==(const VarKey&, const VarKey&) = default;
  friend auto operator<=>(const VarKey&, const VarKey&) = default;
  std::string to_string() const;
};

VarKey var_key(const Term& var);
Term var_term(const VarKey& key);

/// Variables of t in order of first occurrence, without duplicates.
std::vector<VarKey> variables(const Term& t);
void collect_variables(const Term& t, std::vector<VarKey>& out);
bool occurs(const VarKey& v, const Term& t);

/// Finite map from variables to terms. Kept idempotent by every public
/// mutator: no bound variable occurs in any binding.
class Substitution {
 public:
  Substitution() = default;

  bool empty() const { return bindings_.empty(); }
  std::size_t size() const { return bindings_.size(); }
  const Term* lookup(const VarKey& v) const;
  Term apply(const Term& t) const;

  /// Binds v to t (t already normalized w.r.t. this substitution). Applies
  /// the new binding to existing ranges so the result stays idempotent.
  void bind(const VarKey& v, const Term& t);

  /// Keeps only the given variables.
  Substitution restrict_to(std::span<const VarKey> vars) const;

  /// Returns this followed by other: apply(x) = other.apply(this.apply(x)).
  Substitution then(const Substitution& other) const;

  const std::map<VarKey, Term>& bindings() const { return bindings_; }
  std::string to_string() const;

  friend bool operator==(const Substitution& a, const Substitution& b);

 private:
  std::map<VarKey, Term> bindings_;
};

/// Most general unifier under occurs-check semantics, absent on failure.
std::optional<Substitution> unify(const Term& a, const Term& b);

/// Extends s (idempotent) with the mgu of a and b; leaves s unspecified and
/// returns false on failure.
bool unify_into(const Term& a, const Term& b, Substitution& s);

/// One-way matching: binds variables of pattern so that it equals the
/// ground term. Repeated pattern variables must match identical subterms.
bool match_ground(const Term& pattern, const Term& ground, Substitution& s);

/// A set of equality atoms standing in for a substitution.
class ConstraintSet {
 public:
  ConstraintSet() = default;
  explicit ConstraintSet(std::vector<std::pair<Term, Term>> equations);

  void add(Term lhs, Term rhs);
  const std::vector<std::pair<Term, Term>>& equations() const { return equations_; }

  bool satisfiable() const;
  /// Solving substitution; throws Error when unsatisfiable.
  const Substitution& solution() const;
  std::string to_string() const;

 private:
  void solve() const;

  std::vector<std::pair<Term, Term>> equations_;
  mutable bool solved_ = false;
  mutable std::optional<Substitution> solution_;
};

struct ConstraintStatus {
  bool satisfiable = false;
  std::optional<Substitution> solution;
};

ConstraintStatus solve_constraints(const ConstraintSet& c);

struct SourcePos {
  int line = 0;
  int column = 0;
  std::string to_string() const;
};

enum class LiteralKind : std::uint8_t {
  Atom,      // user-defined atom
  Equality,  // '='(L, R)
  Builtin,   // '=<'(A, B) or '>'(A, B) on integers
};

/// A body literal. For equalities and builtins the atom is the compound
/// '='(L,R), '=<'(A,B) or '>'(A,B).
struct Literal {
  LiteralKind kind = LiteralKind::Atom;
  bool negated = false;
  Term atom = Term::nil();
  SourcePos pos;

  static Literal positive(Term atom, SourcePos pos = {});
  static Literal negative(Term atom, SourcePos pos = {});
  static Literal equality(Term lhs, Term rhs, SourcePos pos = {});
  static Literal builtin(std::string op, Term lhs, Term rhs, bool negated = false,
                         SourcePos pos = {});

  Literal substituted(const Substitution& s) const;
  std::string to_string() const;
  friend bool operator==(const Literal& a, const Literal& b) {
    return a.kind == b.kind && a.negated == b.negated && a.atom == b.atom;
  }
};

bool is_builtin_name(const std::string& name, std::size_t arity);

/// True iff applying c's solving substitution makes l ground. Throws Error if
/// c is unsatisfiable.
bool literal_grounded(const Literal& l, const ConstraintSet& c);

/// Monotone counter used to rename variables apart.
class VarGen {
 public:
  std::uint32_t next() { return ++last_; }
  std::uint32_t last() const { return last_; }

 private:
  std::uint32_t last_ = 0;
};

/// Renames every variable of t to a fresh id, recording the mapping in map.
Term rename_apart(const Term& t, std::map<VarKey, Term>& map, VarGen& gen);

}  // namespace lp3

template <>
struct std::hash<lp3::Term> {
  std::size_t operator()(const lp3::Term& t) const { return t.hash(); }
};

template <>
struct std::hash<lp3::VarKey> {
  std::size_t operator()(const lp3::VarKey& v) const {
    return std::hash<std::string>{}(v.name) * 31 + v.id;
  }
};
