// Pure-Prolog programs: clausal form, disjunctive normal form and Clark
// completion.
#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lp3/term.hpp"
#include "lp3/universe.hpp"

namespace lp3 {

class ParseError : public Error {
 public:
  ParseError(SourcePos pos, const std::string& message)
      : Error(pos.to_string() + ": " + message), pos_(pos), message_(message) {}
  SourcePos pos() const { return pos_; }
  const std::string& message() const { return message_; }

 private:
  SourcePos pos_;
  std::string message_;
};

struct Clause {
  Term head = Term::nil();
  std::vector<Literal> body;
  SourcePos pos;

  Functor predicate() const { return Functor{head.name(), head.arity()}; }
  std::string to_string() const;
};

struct ClausalProgram {
  std::vector<Clause> clauses;
  std::vector<std::string> warnings;

  /// Predicates with at least one clause, in order of first definition.
  std::vector<Functor> defined_predicates() const;
  /// Clauses of the given predicates only.
  ClausalProgram restrict_to(const std::vector<Functor>& predicates) const;
  /// One clause per line, lists printed as [H|T].
  std::string to_string() const;
};

/// Parses program text: '%' line comments, clauses terminated by '.', both
/// `A.As` and `[A|As]` list syntax, `not`/`\+` negation. Rejects impure
/// builtins (cut, var/1, assert, ...).
ClausalProgram parse_program(std::string_view text);

/// Parses a goal `L1, ..., Ln` with an optional trailing '.'.
std::vector<Literal> parse_goal(std::string_view text);

/// Parses a single term (variables allowed).
Term parse_term(std::string_view text);

/// One disjunct of a predicate definition: the equalities Vi = Ti (stored as
/// the patterns Ti) followed by the remaining body literals.
struct Disjunct {
  std::vector<Term> head_patterns;
  std::vector<Literal> body;
  std::vector<VarKey> locals;  // every variable of the disjunct
  std::size_t source_clause = 0;
  SourcePos pos;
};

struct Definition {
  Functor predicate;
  std::vector<Term> head_vars;
  std::vector<Disjunct> disjuncts;  // empty: body is false

  Term head() const;
  /// Full conjunction of disjunct i: head equalities first.
  std::vector<Literal> conjunction(std::size_t i) const;
  bool definite() const;
};

class DisjunctiveProgram {
 public:
  DisjunctiveProgram() = default;
  DisjunctiveProgram(std::vector<Definition> definitions, std::vector<std::string> warnings);

  const std::vector<Definition>& definitions() const { return definitions_; }
  const Definition* find(const Functor& predicate) const;
  const Definition& at(const Functor& predicate) const;
  const std::vector<std::string>& warnings() const { return warnings_; }
  bool definite() const;
  std::vector<Functor> predicates() const;
  std::string to_string() const;

 private:
  std::vector<Definition> definitions_;
  std::map<Functor, std::size_t> index_;
  std::vector<std::string> warnings_;
};

/// One clause per predicate; each original clause becomes one disjunct.
/// Called predicates without clauses get an empty disjunction.
DisjunctiveProgram to_disjunctive(const ClausalProgram& p);

struct CompletedDisjunct {
  std::vector<VarKey> locals;          // existentially quantified
  std::vector<Literal> conjunction;    // head equalities first
};

struct CompletedClause {
  Term head = Term::nil();
  std::vector<CompletedDisjunct> disjuncts;
  std::string to_string() const;
};

struct CompletedProgram {
  std::vector<CompletedClause> clauses;
  std::vector<Functor> signature;
  std::string to_string() const;
};

CompletedProgram completion(const DisjunctiveProgram& p);

struct InstanceDisjunct {
  std::vector<std::pair<Term, Term>> equalities;  // ti = Ti' per head argument
  std::vector<Literal> body;                      // locals renamed apart
  bool satisfiable = false;
  std::optional<Substitution> solution;
};

struct HeadInstance {
  Term head = Term::nil();
  std::vector<InstanceDisjunct> disjuncts;
};

/// Head variables replaced by args, locals by fresh variables from gen.
HeadInstance head_instance(const Definition& def, std::span<const Term> args, VarGen& gen);

}  // namespace lp3
