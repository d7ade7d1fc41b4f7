// Model conditions of a program and of its completion over a bounded
// universe, the synopsis verification method, and operator cross-checks.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lp3/interpretation.hpp"
#include "lp3/program.hpp"

namespace lp3 {

enum class ViolationKind { FalseFromTrue, FalseFromInadmissible, TrueFromFalse, TrueFromInadmissible, StrongMismatch };

/// "F<-T", "F<-I", "T<-F", "T<-I", "strong-mismatch".
const char* to_string(ViolationKind k);

struct Violation {
  Functor predicate;
  Term head = Term::nil();
  TruthValue head_value = TruthValue::I;
  TruthValue body_value = TruthValue::I;
  ViolationKind kind = ViolationKind::FalseFromTrue;
  /// Disjunct and local bindings realising a T or I body.
  std::optional<std::size_t> disjunct;
  Substitution witness;
  /// "all disjuncts" when the body is F.
  std::string note;
  bool bounded = false;

  std::string to_string() const;
};

enum class ModelCondition { Program, StrongProgram, Completion, StrongCompletion };
const char* to_string(ModelCondition c);

struct CheckOptions {
  std::size_t max_witnesses = 5;
};

struct CheckReport {
  ModelCondition condition = ModelCondition::Program;
  bool holds = true;
  std::size_t violation_count = 0;
  /// The first max_witnesses violations in (predicate, atom) order.
  std::vector<Violation> violations;
  std::size_t atoms_checked = 0;
  /// Some body value is F or I only within the bounded universe.
  bool bounded = false;
};

/// Model of P: no clause instance F<-T or F<-I. Throws Error if the program
/// has negation.
CheckReport check_model_definite(const DisjunctiveProgram& p, const Interpretation3& m, CheckOptions opts = {});
/// Same condition without the definite-program precondition.
CheckReport check_model_program(const DisjunctiveProgram& p, const Interpretation3& m, CheckOptions opts = {});

enum class StrongMode { Program, Completion };
/// Program: model of P with no I<-T instance. Completion: every head has the
/// value of its completed body.
CheckReport check_strong_model(const DisjunctiveProgram& p, const Interpretation3& m,
                               StrongMode mode = StrongMode::Completion, CheckOptions opts = {});

/// Model of comp(P): no F<-T, F<-I, T<-F or T<-I with bodies quantified by exists3.
CheckReport check_model_completion(const CompletedProgram& p, const Interpretation3& m, CheckOptions opts = {});
CheckReport check_model_completion(const DisjunctiveProgram& p, const Interpretation3& m, CheckOptions opts = {});

/// Rebuilds the disjunctive program underlying a completion.
DisjunctiveProgram from_completion(const CompletedProgram& c);

struct SynopsisEvidence {
  Term atom = Term::nil();
  TruthValue value = TruthValue::I;
  bool ok = true;
  /// For T atoms: the clause (0-based, in program order) of a true
  /// instance. For failing F atoms: the clause of a non-false instance.
  std::optional<std::size_t> clause;
  Substitution instance;
  TruthValue instance_body = TruthValue::F;
  std::size_t instances_checked = 0;

  std::string to_string() const;
};

struct SynopsisReport {
  bool holds = true;
  std::size_t true_atoms = 0;
  std::size_t false_atoms = 0;
  std::size_t failures = 0;
  bool bounded = false;
  /// Every failure (up to the cap) followed by passing evidence (up to the cap).
  std::vector<SynopsisEvidence> evidence;

  std::string to_text() const;
};

/// For every T atom there must be a ground matching clause instance with a
/// true body; for every F atom all ground matching instances must have false
/// bodies. Works on the clausal program directly, enumerating clause
/// variables over the universe.
SynopsisReport verify_synopsis(const ClausalProgram& p, const Interpretation3& m, std::size_t max_evidence = 20);

/// Synopsis evidence for one ground atom (ok is vacuously true for I atoms).
/// bounded is set when clause variables were enumerated over the universe.
SynopsisEvidence synopsis_evidence(const ClausalProgram& p, const Interpretation3& m, const Term& atom,
                                   bool* bounded = nullptr);

class InternalInconsistency : public Error {
 public:
  using Error::Error;
};

struct CrosscheckReport {
  bool model_direct = false;
  bool model_via_tplus = false;     // T-set of T3+(M) within the T-set of M
  bool model_via_t3_false = false;  // F-set of M within the F-set of T3(M)
  bool comp_direct = false;
  bool comp_via_fixpoints = false;  // T3+(M) = M and T3-(M) = M
  bool comp_via_leq = false;        // M below T3(M) in the information order
  bool strong_direct = false;
  bool strong_via_t3 = false;       // T3(M) = M

  bool consistent() const;
  std::string to_string() const;
};

/// Computes each verdict by the direct check and by the operators. Throws
/// InternalInconsistency on disagreement unless throw_on_mismatch is false.
CrosscheckReport crosscheck_fixpoint_props(const DisjunctiveProgram& p, const Interpretation3& m,
                                           bool throw_on_mismatch = true);

}  // namespace lp3
