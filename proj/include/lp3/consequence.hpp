// Immediate-consequence operators and the Fitting fixpoint.
#pragma once

#include <optional>
#include <vector>

#include "lp3/interpretation.hpp"
#include "lp3/program.hpp"

namespace lp3 {

enum class OperatorKind { T3, T3Plus, T3Minus, ClassicalTP };

const char* to_string(OperatorKind k);
std::optional<OperatorKind> operator_from_string(const std::string& s);

/// One application of the operator. The result declares every predicate of
/// the program (atoms over the universe of m); predicates of m that the
/// program does not define are copied unchanged.
///   T3:          head gets the value of its completed body.
///   T3Plus:      I atoms stay I; otherwise T iff the body is T or I.
///   T3Minus:     I atoms stay I; otherwise T iff the body is T.
///   ClassicalTP: two-valued; needs a definite program and no I atom in m.
Interpretation3 apply_operator(OperatorKind k, const DisjunctiveProgram& p, const Interpretation3& m);

Interpretation3 t3(const DisjunctiveProgram& p, const Interpretation3& m);
Interpretation3 t3_plus(const DisjunctiveProgram& p, const Interpretation3& m);
Interpretation3 t3_minus(const DisjunctiveProgram& p, const Interpretation3& m);
Interpretation3 classical_tp(const DisjunctiveProgram& p, const Interpretation3& m);

enum class IterationMode { Naive, SemiNaive };

struct FixpointResult {
  Interpretation3 model;
  /// Operator applications performed; the last one reproduced its input
  /// when converged.
  std::size_t iterations = 0;
  bool converged = false;
  /// Some body value relied on a quantifier truncated to the universe.
  bool bounded = false;
  /// Iterates starting with the all-I interpretation (only when requested).
  std::vector<Interpretation3> trace;
};

/// Iterates T3 from the all-I interpretation. max_iters defaults to the
/// number of ground atoms plus one.
FixpointResult fitting_lfp(const DisjunctiveProgram& p, UniversePtr universe,
                           std::optional<std::size_t> max_iters = std::nullopt,
                           IterationMode mode = IterationMode::Naive, bool keep_trace = false);

}  // namespace lp3
