// Total three-valued interpretations over a bounded universe.
#pragma once

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "lp3/program.hpp"
#include "lp3/truth.hpp"
#include "lp3/universe.hpp"

namespace lp3 {

/// Total decision procedure for one predicate; receives a ground atom whose
/// arguments are in the universe.
using SpecFn = std::function<TruthValue(const Term& atom)>;

class SpecRegistry {
 public:
  /// The builtin entries: merge_sorted_numbers, merge_sorted_output,
  /// even_odd_numerals, member_listsecond, subset_lists, subs_dupfree,
  /// select_listsecond.
  static const SpecRegistry& builtin();

  void add(const std::string& name, SpecFn fn);
  const SpecFn* find(const std::string& name) const;
  std::vector<std::string> names() const;

 private:
  std::map<std::string, SpecFn> entries_;
};

/// Proper list of integers sorted in non-decreasing order.
bool is_sorted_int_list(const Term& t);
/// Items of a proper list, or nothing for anything else.
std::optional<std::vector<Term>> list_items(const Term& t);

/// Value of a builtin atom: '='/2 is syntactic identity, '=<'/2 and '>'/2
/// compare integers and are F on anything else.
TruthValue builtin_truth(const Term& atom);

class Interpretation3 {
 public:
  explicit Interpretation3(UniversePtr universe);

  /// Every predicate of the list mapped to value v (dense tables).
  static Interpretation3 uniform(UniversePtr universe, const std::vector<Functor>& predicates, TruthValue v);

  const UniversePtr& universe() const { return universe_; }

  /// Sparse table: explicit atoms over a default.
  void declare_table(const Functor& predicate, TruthValue default_value);
  /// Registry-backed predicate; the spec is evaluated on demand.
  void declare_spec(const Functor& predicate, const std::string& spec_name,
                    const SpecRegistry& registry = SpecRegistry::builtin());
  void declare_spec(const Functor& predicate, const std::string& spec_name, SpecFn fn);
  /// Dense table indexed by atom_index order.
  void declare_dense(const Functor& predicate, std::vector<TruthValue> values);

  /// Sets one atom (converting specs to a table first). Throws on
  /// undeclared predicates and atoms outside the universe.
  void set(const Term& atom, TruthValue v);

  bool declared(const Functor& predicate) const { return tables_.count(predicate) > 0; }
  std::vector<Functor> predicates() const;

  /// Value of a ground atom. Builtins are fixed; user atoms must lie in the
  /// universe (OutsideUniverse otherwise) and belong to a declared predicate.
  TruthValue truth_of(const Term& atom) const;

  /// Number of ground atoms of the predicate over the universe.
  std::size_t atom_count(const Functor& predicate) const;
  /// Mixed-radix index of the atom's arguments (first argument most
  /// significant). Throws OutsideUniverse.
  std::size_t atom_index(const Term& atom) const;
  Term atom_at(const Functor& predicate, std::size_t index) const;

  /// All values of the predicate in atom_index order.
  std::vector<TruthValue> values(const Functor& predicate) const;
  /// Same interpretation with every predicate stored densely.
  Interpretation3 materialized() const;
  /// Only the given predicates are kept.
  Interpretation3 restricted_to(const std::vector<Functor>& predicates) const;

  /// Ground atoms with value v, over all predicates in declaration order.
  std::vector<Term> atoms_with(TruthValue v) const;
  std::size_t count(TruthValue v) const;

  /// Table description of a predicate: "spec:<name>", "table" or "dense".
  std::string storage(const Functor& predicate) const;
  const std::string* spec_name(const Functor& predicate) const;

  /// Same universe (by configuration), same predicates, same values.
  friend bool operator==(const Interpretation3& a, const Interpretation3& b);
  friend bool operator!=(const Interpretation3& a, const Interpretation3& b) { return !(a == b); }

 private:
  struct Table {
    enum class Kind { Sparse, Dense, Spec } kind = Kind::Sparse;
    TruthValue default_value = TruthValue::I;
    std::unordered_map<Term, TruthValue> explicit_values;
    std::vector<TruthValue> dense;
    std::string spec_name;
    SpecFn spec;
  };

  const Table& table(const Functor& predicate) const;
  Table& mutable_table(const Functor& predicate);
  TruthValue lookup(const Table& t, const Term& atom, std::size_t index) const;

  UniversePtr universe_;
  std::vector<Functor> order_;
  std::map<Functor, std::shared_ptr<Table>> tables_;
};

/// Information ordering: T and F sets of a grow into b. Throws Error when the
/// predicate sets or universes differ.
bool leq_info(const Interpretation3& a, const Interpretation3& b);

/// <I, T1 ∩ T2> for two interpretations sharing their I-set.
Interpretation3 intersect_true(const Interpretation3& a, const Interpretation3& b);
/// <I1 ∩ I2, T> for two interpretations sharing their T-set.
Interpretation3 intersect_inadmissible(const Interpretation3& a, const Interpretation3& b);
/// New split of I ∪ T: exactly the listed atoms become I, the rest of I ∪ T
/// becomes T; F is unchanged. Listed atoms must not be F.
Interpretation3 repartition(const Interpretation3& m, const std::vector<Term>& inadmissible);

/// Thrown when a set-operation precondition fails; names the first offending atom.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

Interpretation3 load_interpretation(const std::string& text, const SpecRegistry& registry = SpecRegistry::builtin());
Interpretation3 load_interpretation_file(const std::string& path, const SpecRegistry& registry = SpecRegistry::builtin());
std::string save_interpretation(const Interpretation3& m);

}  // namespace lp3
