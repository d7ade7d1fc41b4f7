// Finite approximation of the Herbrand universe.
#pragma once

#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "lp3/term.hpp"

namespace lp3 {

struct Functor {
  std::string name;
  std::size_t arity = 0;

  friend bool operator==(const Functor&, const Functor&) = default;
  friend auto operator<=>(const Functor&, const Functor&) = default;
  std::string to_string() const { return name + "/" + std::to_string(arity); }
};

struct UniverseConfig {
  std::vector<Functor> functors;
  std::optional<std::pair<std::int64_t, std::int64_t>> ints;
  std::uint32_t max_depth = 0;
  /// Truncates the sorted enumeration to its first N terms. Any prefix of
  /// the depth-ordered enumeration is closed under subterms.
  std::optional<std::size_t> max_terms;
  /// List mode: './2' only builds proper lists of length <= max_list_length
  /// whose elements are the non-list terms of the universe; max_depth then
  /// bounds the non-list terms only.
  std::optional<std::size_t> max_list_length;
};

class OutsideUniverse : public Error {
 public:
  explicit OutsideUniverse(const std::string& what)
      : Error("outside bounded universe: " + what) {}
};

/// Bounded set of ground terms. Enumeration is deterministic (ordered by
/// depth, then functor, then arguments), duplicate free and closed under
/// subterms. Immutable after construction; the enumeration is built lazily
/// and thread-safely.
class BoundedUniverse {
 public:
  explicit BoundedUniverse(UniverseConfig config);

  const UniverseConfig& config() const { return config_; }

  /// Membership test; structural unless max_terms truncates.
  bool contains(const Term& t) const;
  void require(const Term& t) const;

  const std::vector<Term>& terms() const;
  std::size_t size() const { return terms().size(); }
  /// Position of t in terms(), or -1.
  std::int64_t index_of(const Term& t) const;

  /// Parses `universe depth=<d> ints=<lo>..<hi> functors=<f/n,...> [lists=<n>] [max=<n>]`.
  static BoundedUniverse parse(const std::string& line);
  std::string to_string() const;

 private:
  struct Index {
    std::vector<Term> terms;
    std::unordered_map<Term, std::uint32_t> position;
  };
  const Index& index() const;
  bool structurally_contains(const Term& t, bool allow_lists) const;
  bool has_functor(const std::string& name, std::size_t arity) const;

  UniverseConfig config_;
  mutable std::once_flag once_;
  mutable std::unique_ptr<Index> index_;
};

using UniversePtr = std::shared_ptr<const BoundedUniverse>;

/// Ground terms of the universe in enumeration order. Throws Error when the
/// signature has no constants.
std::vector<Term> enumerate_ground(const BoundedUniverse& u);

/// All ground atoms p(t1..tn) with ti from the universe, ordered by the
/// mixed-radix index of their arguments (first argument most significant).
std::vector<Term> enumerate_atoms(const BoundedUniverse& u, const Functor& predicate);

/// Calls fn(args) for every tuple in universe^arity, in enumerate_atoms
/// order. Stops early when fn returns false.
template <typename Fn>
void for_each_tuple(const BoundedUniverse& u, std::size_t arity, Fn&& fn) {
  const auto& terms = u.terms();
  const std::size_t n = terms.size();
  std::vector<std::size_t> idx(arity, 0);
  std::vector<Term> args;
  args.reserve(arity);
  for (std::size_t i = 0; i < arity; ++i) {
    if (n == 0) return;
    args.push_back(terms[0]);
  }
  while (true) {
    if (!fn(static_cast<const std::vector<Term>&>(args))) return;
    std::size_t pos = arity;
    while (pos > 0) {
      --pos;
      if (++idx[pos] < n) {
        args[pos] = terms[idx[pos]];
        break;
      }
      idx[pos] = 0;
      args[pos] = terms[0];
      if (pos == 0) return;
    }
    if (arity == 0) return;
  }
}

}  // namespace lp3
