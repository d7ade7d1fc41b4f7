#include "lp3/truth.hpp"

namespace lp3 {

TruthValue exists3(std::span<const TruthValue> values) {
  TruthValue acc = TruthValue::F;
  for (TruthValue v : values) {
    if (v == TruthValue::T) return TruthValue::T;
    acc = or3(acc, v);
  }
  return acc;
}

TruthValue exists3(std::initializer_list<TruthValue> values) {
  return exists3(std::span<const TruthValue>(values.begin(), values.size()));
}

char to_char(TruthValue v) {
  switch (v) {
    case TruthValue::T:
      return 'T';
    case TruthValue::F:
      return 'F';
    case TruthValue::I:
      break;
  }
  return 'I';
}

std::string to_string(TruthValue v) { return std::string(1, to_char(v)); }

std::optional<TruthValue> truth_from_char(char c) {
  switch (c) {
    case 'T':
      return TruthValue::T;
    case 'F':
      return TruthValue::F;
    case 'I':
      return TruthValue::I;
    default:
      return std::nullopt;
  }
}

std::optional<TruthValue> truth_from_string(const std::string& s) {
  if (s.size() != 1) return std::nullopt;
  return truth_from_char(s[0]);
}

}  // namespace lp3
