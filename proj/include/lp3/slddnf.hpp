// SLDDNF resolution: depth-first search of SLDNF trees whose nodes carry
// equality constraints, with an explicit node budget.
#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "lp3/interpretation.hpp"
#include "lp3/program.hpp"

namespace lp3 {

enum class SelectionRule : std::uint8_t {
  LeftmostDelay,   // leftmost selectable literal, skipping negations that just floundered
  FairRoundRobin,  // selectable literals in turn, keyed by node depth
  StrictLeftmost,  // leftmost selectable literal, always
};

std::string to_string(SelectionRule r);
/// Accepts leftmost_delay, fair, strict_leftmost and the long names
/// leftmost_delay_nonground_negation and fair_round_robin.
SelectionRule parse_selection_rule(const std::string& name);

enum class NodeStatus : std::uint8_t {
  Open,        // expanded, has children
  Successful,  // no literals left
  Failed,      // unsatisfiable constraints, or a call with no clauses
  Floundered,  // only non-grounded negations and builtins left
  Unresolved,  // a negation whose subtree ran out of budget
  Pending,     // never reached before the search stopped
};

std::string to_string(NodeStatus s);

enum class Polarity : std::uint8_t { Positive, Negative };

/// A goal: non-equality literals plus the equality atoms collected so far.
struct SlddnfNode {
  std::vector<Literal> literals;
  ConstraintSet constraints;
  std::size_t depth = 0;

  /// Equalities in the goal become constraints.
  static SlddnfNode from_goal(const std::vector<Literal>& goal);
  bool satisfiable() const { return constraints.satisfiable(); }
  /// Literals with the solving substitution applied.
  std::vector<Literal> resolved_literals() const;
  std::string to_string() const;
};

struct SolveOptions {
  SelectionRule rule = SelectionRule::LeftmostDelay;
  std::size_t budget = 10000;  // node expansions, negative subtrees included
  std::size_t max_answers = 0;  // 0: all answers
  bool trace = false;
  bool record_tree = false;
  bool proofs = false;  // keep derivations for proof trees
};

/// One resolution, negation or builtin step of a successful derivation.
struct ProofEvent {
  enum class Kind : std::uint8_t { Resolved, NegationHolds, BuiltinHolds };
  std::shared_ptr<const ProofEvent> prev;
  Kind kind = Kind::Resolved;
  int slot = 0;
  Term atom = Term::nil();  // as selected; instantiate with the final bindings
  std::size_t disjunct = 0;
  std::vector<int> body_slots;
  std::vector<Literal> body;  // non-equality body literals, one per slot
};

struct Derivation {
  std::shared_ptr<const ProofEvent> events;
  Substitution bindings;  // every variable of the derivation
  std::vector<int> root_slots;
  std::size_t program_hash = 0;
};

/// Hash of the printed program, used to detect stale derivations.
std::size_t program_fingerprint(const DisjunctiveProgram& p);

struct Answer {
  Substitution bindings;  // over the goal variables
  std::vector<Literal> instance;  // the goal with the answer applied
  std::shared_ptr<const Derivation> derivation;

  /// Equalities X = t for each bound goal variable.
  ConstraintSet constraints() const;
  std::string to_string() const;
};

struct ObservedNode {
  std::int64_t parent = -1;
  Polarity edge = Polarity::Positive;
  std::size_t depth = 0;
  NodeStatus status = NodeStatus::Pending;
  std::string goal;
  std::string selected;
  std::string action;
  std::vector<std::size_t> children;
};

struct ObservationTree {
  std::vector<ObservedNode> nodes;  // node 0 is the root
  bool all_observations = false;
  bool truncated = false;  // recording cap reached
};

struct Outcome {
  std::vector<Answer> answers;
  bool exhaustive = false;
  bool floundered = false;
  bool finitely_failed = false;
  bool budget_exhausted = false;
  std::size_t nodes = 0;
  std::vector<std::string> trace;
  std::optional<ObservationTree> tree;

  bool succeeded() const { return !answers.empty(); }
  std::string summary() const;
};

Outcome solve(const DisjunctiveProgram& p, const std::vector<Literal>& goal, const SolveOptions& opts = {});
Outcome solve(const DisjunctiveProgram& p, const std::string& goal, const SolveOptions& opts = {});

struct Expansion {
  std::optional<std::size_t> selected;  // index into node.literals
  NodeStatus status = NodeStatus::Open;  // status of the expanded node
  std::string action;
  std::vector<SlddnfNode> children;  // positive children, failed ones included
  std::vector<bool> child_failed;
  std::optional<SlddnfNode> negative_child;
  std::optional<Outcome> negative_outcome;
};

/// One expansion step. A selected grounded negation runs its negative
/// subtree with the given budget before the positive child is decided.
Expansion expand(const SlddnfNode& node, SelectionRule rule, const DisjunctiveProgram& p, std::size_t budget = 10000);

enum class AtomStatus : std::uint8_t { Success, FiniteFailure, Unresolved };

struct AtomOutcome {
  Term atom = Term::nil();
  AtomStatus status = AtomStatus::Unresolved;
  std::size_t nodes = 0;
  bool floundered = false;
};

struct SuccessSetReport {
  std::vector<AtomOutcome> atoms;
  std::vector<Term> success;
  std::vector<Term> finite_failure;
  std::vector<Term> unresolved;
};

/// Solves every ground atom of the given predicates (all program predicates
/// when empty) over the universe.
SuccessSetReport success_set(const DisjunctiveProgram& p, const BoundedUniverse& u, SelectionRule rule,
                             std::size_t budget, std::vector<Functor> predicates = {});
std::vector<Term> finite_failure_set(const DisjunctiveProgram& p, const BoundedUniverse& u, SelectionRule rule,
                                     std::size_t budget, std::vector<Functor> predicates = {});

/// Raised when operational checks are asked of an interpretation that is
/// not a model of the completion.
class NotAModel : public Error {
 public:
  using Error::Error;
};

struct GoalCheck {
  std::string goal;
  std::size_t answers = 0;
  bool exhaustive = false;
  bool finitely_failed = false;
  bool budget_exhausted = false;
  std::size_t instances = 0;  // ground instances over the universe
  std::size_t skipped = 0;    // instances with atoms outside the universe
  std::size_t unsound = 0;         // answer instance that is F
  std::size_t failure_unsound = 0; // finitely failed, yet some instance is T
  std::size_t incomplete = 0;      // exhaustive, yet a T instance is not covered
};

struct TheoremReport {
  std::vector<GoalCheck> goals;
  std::size_t instances = 0;
  std::size_t unsound = 0;
  std::size_t failure_unsound = 0;
  std::size_t incomplete = 0;
  std::size_t unresolved_goals = 0;
  std::vector<std::string> counterexamples;  // first few, in goal order

  bool holds() const { return unsound == 0 && failure_unsound == 0 && incomplete == 0; }
  std::string to_string() const;
};

struct TheoremOptions {
  SelectionRule rule = SelectionRule::LeftmostDelay;
  std::size_t budget = 10000;
  std::size_t max_counterexamples = 10;
  bool check_model = true;  // refuse unless m is a model of the completion
};

/// Runs each goal and checks the three operational theorems against m over
/// the ground instances of the goal in m's universe.
TheoremReport check_operational_theorems(const DisjunctiveProgram& p, const Interpretation3& m,
                                         const std::vector<std::vector<Literal>>& goals,
                                         const TheoremOptions& opts = {});

}  // namespace lp3
