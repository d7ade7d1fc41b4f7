// Declarative debugging with a three-valued oracle: wrong answers on proof
// trees, missing answers on call-answer trees.
#pragma once

#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "lp3/interpretation.hpp"
#include "lp3/program.hpp"
#include "lp3/slddnf.hpp"

namespace lp3 {

enum class Verdict : std::uint8_t { Correct, Erroneous, Inadmissible };

std::string to_string(Verdict v);
std::optional<Verdict> verdict_from_string(const std::string& s);

enum class OracleSource : std::uint8_t { Human, Interpretation, Transcript, Cached };

std::string to_string(OracleSource s);

/// Either "is this ground atom true?" or "does this call return every
/// correct answer?".
struct Question {
  enum class Kind : std::uint8_t { Atom, Completeness };
  Kind kind = Kind::Atom;
  Term atom = Term::nil();     // the atom, or the call
  std::vector<Term> answers;   // completeness: instances returned for the call
  std::string text;

  static Question about_atom(const Term& atom);
  static Question about_call(const Term& call, const std::vector<Term>& answers);
};

struct OracleAnswer {
  std::string question;
  Verdict verdict = Verdict::Correct;
  OracleSource source = OracleSource::Human;
};

class Oracle {
 public:
  virtual ~Oracle() = default;
  virtual Verdict ask(const Question& q) = 0;
  virtual OracleSource source() const = 0;
};

/// Answers from an intended interpretation: T is correct, F erroneous, I
/// inadmissible. A call is erroneous when a true instance in the universe
/// is not covered by its answers, inadmissible when all its instances are.
class InterpretationOracle : public Oracle {
 public:
  explicit InterpretationOracle(const Interpretation3& m) : m_(m) {}
  Verdict ask(const Question& q) override;
  OracleSource source() const override { return OracleSource::Interpretation; }

 private:
  const Interpretation3& m_;
};

class TranscriptError : public Error {
 public:
  using Error::Error;
};

/// Raised by a transcript oracle asked past its last record.
class TranscriptExhausted : public TranscriptError {
 public:
  explicit TranscriptExhausted(Question q)
      : TranscriptError("transcript exhausted at: " + q.text), question(std::move(q)) {}
  Question question;
};

/// Replays recorded answers in order; a record whose question differs from
/// the one asked is an error.
class TranscriptOracle : public Oracle {
 public:
  explicit TranscriptOracle(std::vector<OracleAnswer> records) : records_(std::move(records)) {}
  Verdict ask(const Question& q) override;
  OracleSource source() const override { return OracleSource::Transcript; }
  std::size_t consumed() const { return next_; }

 private:
  std::vector<OracleAnswer> records_;
  std::size_t next_ = 0;
};

/// Prompts on out and reads c/e/i (or the full verdict names) from in.
class HumanOracle : public Oracle {
 public:
  HumanOracle(std::istream& in, std::ostream& out) : in_(in), out_(out) {}
  Verdict ask(const Question& q) override;
  OracleSource source() const override { return OracleSource::Human; }

 private:
  std::istream& in_;
  std::ostream& out_;
};

/// Per-session cache in front of an oracle: each question reaches the
/// oracle at most once, and the transcript records first answers in order.
class OracleSession {
 public:
  explicit OracleSession(Oracle& oracle) : oracle_(oracle) {}
  Verdict ask(const Question& q);
  const std::vector<OracleAnswer>& transcript() const { return transcript_; }
  std::size_t cache_hits() const { return hits_; }

 private:
  Oracle& oracle_;
  std::map<std::string, Verdict> cache_;
  std::vector<OracleAnswer> transcript_;
  std::size_t hits_ = 0;
};

/// Transcript lines `question; verdict`, split on the last "; ".
std::vector<OracleAnswer> parse_transcript(const std::string& text);
std::string format_transcript(const std::vector<OracleAnswer>& records);

/// Raised when a recorded derivation no longer matches the program.
class StaleDerivation : public Error {
 public:
  using Error::Error;
};

struct ProofNode {
  enum class Kind : std::uint8_t { Atom, Negation, Builtin };
  Kind kind = Kind::Atom;
  Term atom = Term::nil();  // for negations, the atom under `not`
  Functor predicate;
  std::size_t disjunct = 0;  // clause used, for atoms
  std::vector<std::size_t> children;

  std::string label() const;
};

struct ProofTree {
  std::vector<ProofNode> nodes;  // node 0 is the root

  /// Indented, one node per line, with the clause number used.
  std::string to_text() const;
};

/// Proof tree of a recorded answer to a single-atom goal. Throws
/// StaleDerivation when the program no longer matches, and Error when the
/// answer has no derivation or a node is not ground.
ProofTree build_proof_tree(const DisjunctiveProgram& p, const Answer& answer);

struct CallNode {
  Term call = Term::nil();   // for negated calls, the atom under `not`
  bool negated = false;
  std::vector<Term> answers;  // instances of the call; a negation that holds has {call}
  bool exhaustive = true;
  std::optional<std::size_t> disjunct;  // clause of the parent this call comes from
  std::optional<std::size_t> parent;

  std::string label() const;
};

/// Calls with their answer sets; children are built on first access from
/// the calls made by the bodies of matching clauses, evaluated left to
/// right with non-grounded negations and builtins delayed.
class CallAnswerTree {
 public:
  CallAnswerTree(const DisjunctiveProgram& p, const Term& goal, SelectionRule rule, std::size_t budget);

  const CallNode& node(std::size_t i) const { return nodes_.at(i); }
  std::size_t size() const { return nodes_.size(); }
  const std::vector<std::size_t>& children(std::size_t i);
  bool expanded(std::size_t i) const { return expanded_.at(i); }
  const DisjunctiveProgram& program() const { return p_; }
  SelectionRule rule() const { return rule_; }
  std::size_t budget() const { return budget_; }

 private:
  std::size_t add(CallNode n);
  void expand(std::size_t i);
  std::vector<Term> answers_of(const Term& call, bool& exhaustive) const;

  const DisjunctiveProgram& p_;
  SelectionRule rule_;
  std::size_t budget_;
  std::vector<CallNode> nodes_;
  std::vector<std::vector<std::size_t>> children_;
  std::vector<bool> expanded_;
};

enum class DiagnosisKind : std::uint8_t {
  IncorrectClauseInstance,
  InadmissibilityTransition,
  UncoveredAtom,
  GoalInadmissibleNoBug,
};

std::string to_string(DiagnosisKind k);

struct Diagnosis {
  DiagnosisKind kind = DiagnosisKind::IncorrectClauseInstance;
  std::optional<Functor> predicate;
  std::optional<std::size_t> clause_number;  // 1-based, among the predicate's clauses
  std::optional<SourcePos> clause_pos;
  std::string clause_text;
  std::string instance;  // clause instance, or the uncovered call
  std::string node;      // the buggy node
  std::vector<OracleAnswer> transcript;

  std::string to_string() const;
  friend bool operator==(const Diagnosis& a, const Diagnosis& b);
};

/// Top-down search for a buggy node, entering the leftmost erroneous child.
/// nullopt when the root is correct.
std::optional<Diagnosis> diagnose_wrong_answer(const DisjunctiveProgram& p, const ProofTree& tree,
                                               OracleSession& oracle, SelectionRule rule = SelectionRule::LeftmostDelay,
                                               std::size_t budget = 10000);
std::optional<Diagnosis> diagnose_missing_answer(CallAnswerTree& tree, OracleSession& oracle);

enum class DebugMode : std::uint8_t { WrongAnswer, MissingAnswer };

std::string to_string(DebugMode m);
DebugMode parse_debug_mode(const std::string& s);

struct DebugOptions {
  DebugMode mode = DebugMode::WrongAnswer;
  SelectionRule rule = SelectionRule::LeftmostDelay;
  std::size_t budget = 10000;
  std::size_t answer_index = 0;  // which answer is wrong
};

/// Solves the single-atom goal and diagnoses the chosen wrong answer, or the
/// missing answers of the exhaustive outcome. Throws Error when there is no
/// such answer or the outcome is not exhaustive.
std::optional<Diagnosis> debug_goal(const DisjunctiveProgram& p, const Term& goal, OracleSession& oracle,
                                    const DebugOptions& opts = {});

/// Resumable session over a human oracle: the search is replayed from the
/// start over the answers given so far until it needs a new one.
class DebugSession {
 public:
  DebugSession(DisjunctiveProgram p, Term goal, DebugOptions opts);

  const std::optional<Question>& pending() const { return pending_; }
  const std::optional<Diagnosis>& diagnosis() const { return diagnosis_; }
  bool finished() const { return finished_; }
  const std::vector<OracleAnswer>& transcript() const { return answers_; }
  /// Answers the pending question; throws Error when nothing is pending.
  void answer(Verdict v, OracleSource source = OracleSource::Human);
  const DebugOptions& options() const { return opts_; }
  const Term& goal() const { return goal_; }

 private:
  void advance();

  DisjunctiveProgram p_;
  Term goal_;
  DebugOptions opts_;
  std::vector<OracleAnswer> answers_;
  std::optional<Question> pending_;
  std::optional<Diagnosis> diagnosis_;
  bool finished_ = false;
};

}  // namespace lp3
