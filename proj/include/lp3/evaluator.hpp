// Kleene evaluation of clause bodies over a bounded universe.
#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "lp3/interpretation.hpp"
#include "lp3/program.hpp"

namespace lp3 {

/// Called with every user-defined ground atom looked up during evaluation.
using LookupObserver = std::function<void(const Term& atom)>;

/// Value of a ground literal (negation, equality and builtins included).
TruthValue eval_ground_literal(const Interpretation3& m, const Literal& l, const LookupObserver* observer = nullptr);

struct ExistsValue {
  TruthValue value = TruthValue::F;
  /// Some quantified variable ranged over the finite universe (or an
  /// instance was dropped because a local fell outside it) and the value is
  /// not T, so the value holds within the bound only.
  bool bounded = false;
  /// Bindings of a T instance, or of the first I instance when the value is I.
  std::optional<Substitution> witness;
};

/// Value of ∃(conj s) where every variable not bound by s ranges over the
/// universe. Conjunction is Kleene ∧, the quantifier is exists3.
ExistsValue eval_exists(const Interpretation3& m, const std::vector<Literal>& conj, const Substitution& s,
                        const LookupObserver* observer = nullptr);

struct BodyValue {
  TruthValue value = TruthValue::F;
  bool bounded = false;
  std::vector<TruthValue> disjunct_values;
  /// Disjunct and local bindings realising a T (or I) body value.
  std::optional<std::size_t> witness_disjunct;
  Substitution witness;
};

/// Value of disjunct i of def at the ground head arguments.
ExistsValue eval_disjunct(const Interpretation3& m, const Definition& def, std::size_t i, std::span<const Term> args,
                          const LookupObserver* observer = nullptr);

/// Value of the completed body ∃locals (D1 ∨ ... ∨ Dk) at the head arguments.
BodyValue eval_body(const Interpretation3& m, const Definition& def, std::span<const Term> args,
                    const LookupObserver* observer = nullptr);

}  // namespace lp3
