// Three truth values: true, false, inadmissible.
#pragma once

#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>

namespace lp3 {

enum class TruthValue : std::uint8_t { T, F, I };

inline constexpr TruthValue kAllTruthValues[] = {TruthValue::T, TruthValue::F, TruthValue::I};

// Kleene's strong three-valued conjunction and disjunction.
constexpr TruthValue and3(TruthValue a, TruthValue b) {
  if (a == TruthValue::F || b == TruthValue::F) return TruthValue::F;
  if (a == TruthValue::I || b == TruthValue::I) return TruthValue::I;
  return TruthValue::T;
}

constexpr TruthValue or3(TruthValue a, TruthValue b) {
  if (a == TruthValue::T || b == TruthValue::T) return TruthValue::T;
  if (a == TruthValue::I || b == TruthValue::I) return TruthValue::I;
  return TruthValue::F;
}

constexpr TruthValue not3(TruthValue a) {
  switch (a) {
    case TruthValue::T:
      return TruthValue::F;
    case TruthValue::F:
      return TruthValue::T;
    case TruthValue::I:
      break;
  }
  return TruthValue::I;
}

/// Two-valued arrow head <- body: F exactly for T<-F, T<-I, F<-T, F<-I.
constexpr TruthValue arrow3(TruthValue head, TruthValue body) {
  switch (head) {
    case TruthValue::T:
      return body == TruthValue::T ? TruthValue::T : TruthValue::F;
    case TruthValue::F:
      return body == TruthValue::F ? TruthValue::T : TruthValue::F;
    case TruthValue::I:
      break;
  }
  return TruthValue::T;
}

/// T if any value is T, F if all are F (including none), I otherwise.
TruthValue exists3(std::span<const TruthValue> values);
TruthValue exists3(std::initializer_list<TruthValue> values);

char to_char(TruthValue v);
std::string to_string(TruthValue v);
std::optional<TruthValue> truth_from_char(char c);
std::optional<TruthValue> truth_from_string(const std::string& s);

/// Information ordering on a single atom: a's T and F commitments are kept
/// by b (I is below both).
constexpr bool leq_info(TruthValue a, TruthValue b) { return a == TruthValue::I || a == b; }

}  // namespace lp3
