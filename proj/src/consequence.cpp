#include "lp3/consequence.hpp"

#include <algorithm>
#include <map>

#include "lp3/evaluator.hpp"

namespace lp3 {

namespace {

TruthValue next_value(OperatorKind k, TruthValue old, TruthValue body) {
  switch (k) {
    case OperatorKind::T3:
      return body;
    case OperatorKind::T3Plus:
      if (old == TruthValue::I) return TruthValue::I;
      return body == TruthValue::F ? TruthValue::F : TruthValue::T;
    case OperatorKind::T3Minus:
      if (old == TruthValue::I) return TruthValue::I;
      return body == TruthValue::T ? TruthValue::T : TruthValue::F;
    case OperatorKind::ClassicalTP:
      break;
  }
  return body == TruthValue::T ? TruthValue::T : TruthValue::F;
}

// Numbering of all ground atoms of the program's predicates.
struct AtomSpace {
  std::vector<Functor> preds;
  std::vector<std::size_t> offset;
  std::map<Functor, std::size_t> pred_index;
  std::size_t total = 0;

  AtomSpace(const DisjunctiveProgram& p, const Interpretation3& shape) {
    for (const auto& def : p.definitions()) {
      pred_index[def.predicate] = preds.size();
      preds.push_back(def.predicate);
      offset.push_back(total);
      total += shape.atom_count(def.predicate);
    }
  }

  std::optional<std::size_t> id(const Interpretation3& m, const Term& atom) const {
    auto it = pred_index.find(Functor{atom.name(), atom.arity()});
    if (it == pred_index.end()) return std::nullopt;
    return offset[it->second] + m.atom_index(atom);
  }
};

Interpretation3 build(const AtomSpace& space, const UniversePtr& u, const std::vector<TruthValue>& values) {
  Interpretation3 m(u);
  for (std::size_t k = 0; k < space.preds.size(); ++k) {
    std::size_t begin = space.offset[k];
    std::size_t end = k + 1 < space.preds.size() ? space.offset[k + 1] : space.total;
    m.declare_dense(space.preds[k], std::vector<TruthValue>(values.begin() + static_cast<std::ptrdiff_t>(begin),
                                                            values.begin() + static_cast<std::ptrdiff_t>(end)));
  }
  return m;
}

}  // namespace

const char* to_string(OperatorKind k) {
  switch (k) {
    case OperatorKind::T3:
      return "t3";
    case OperatorKind::T3Plus:
      return "t3plus";
    case OperatorKind::T3Minus:
      return "t3minus";
    case OperatorKind::ClassicalTP:
      break;
  }
  return "tp";
}

std::optional<OperatorKind> operator_from_string(const std::string& s) {
  if (s == "t3") return OperatorKind::T3;
  if (s == "t3plus") return OperatorKind::T3Plus;
  if (s == "t3minus") return OperatorKind::T3Minus;
  if (s == "tp") return OperatorKind::ClassicalTP;
  return std::nullopt;
}

Interpretation3 apply_operator(OperatorKind k, const DisjunctiveProgram& p, const Interpretation3& m) {
  if (k == OperatorKind::ClassicalTP) {
    if (!p.definite()) throw Error("classical TP needs a definite program");
    for (const auto& def : p.definitions()) {
      auto vals = m.values(def.predicate);
      for (std::size_t i = 0; i < vals.size(); ++i)
        if (vals[i] == TruthValue::I)
          throw Error("classical TP needs a two-valued interpretation; " + m.atom_at(def.predicate, i).to_string() +
                      " is I");
    }
  }
  // Redeclaring keeps the declaration order of m.
  Interpretation3 out = m;
  for (const auto& def : p.definitions()) {
    std::vector<TruthValue> old = m.values(def.predicate);
    std::vector<TruthValue> vals(old.size());
    std::size_t i = 0;
    for_each_tuple(*m.universe(), def.predicate.arity, [&](const std::vector<Term>& args) {
      TruthValue body = eval_body(m, def, args).value;
      vals[i] = next_value(k, old[i], body);
      ++i;
      return true;
    });
    out.declare_dense(def.predicate, std::move(vals));
  }
  return out;
}

Interpretation3 t3(const DisjunctiveProgram& p, const Interpretation3& m) { return apply_operator(OperatorKind::T3, p, m); }
Interpretation3 t3_plus(const DisjunctiveProgram& p, const Interpretation3& m) {
  return apply_operator(OperatorKind::T3Plus, p, m);
}
Interpretation3 t3_minus(const DisjunctiveProgram& p, const Interpretation3& m) {
  return apply_operator(OperatorKind::T3Minus, p, m);
}
Interpretation3 classical_tp(const DisjunctiveProgram& p, const Interpretation3& m) {
  return apply_operator(OperatorKind::ClassicalTP, p, m);
}

FixpointResult fitting_lfp(const DisjunctiveProgram& p, UniversePtr universe, std::optional<std::size_t> max_iters,
                           IterationMode mode, bool keep_trace) {
  Interpretation3 shape(universe);
  AtomSpace space(p, shape);
  const std::size_t limit = max_iters.value_or(space.total + 1);

  std::vector<TruthValue> cur(space.total, TruthValue::I);
  std::vector<bool> bounded(space.total, false);
  std::vector<std::vector<std::uint32_t>> dependents(space.total);
  std::vector<std::size_t> dirty(space.total);
  for (std::size_t i = 0; i < space.total; ++i) dirty[i] = i;

  FixpointResult result{build(space, universe, cur), 0, false, false, {}};
  if (keep_trace) result.trace.push_back(result.model);

  while (result.iterations < limit) {
    const Interpretation3& m = result.model;
    std::vector<TruthValue> next = cur;
    std::vector<std::size_t> changed;
    for (std::size_t id : dirty) {
      std::size_t k = static_cast<std::size_t>(
          std::upper_bound(space.offset.begin(), space.offset.end(), id) - space.offset.begin() - 1);
      const Definition& def = p.at(space.preds[k]);
      Term atom = m.atom_at(def.predicate, id - space.offset[k]);
      std::vector<std::uint32_t> deps;
      LookupObserver record = [&](const Term& a) {
        if (auto dep = space.id(m, a)) deps.push_back(static_cast<std::uint32_t>(*dep));
      };
      std::vector<Term> args(atom.args().begin(), atom.args().end());
      BodyValue body = eval_body(m, def, args, mode == IterationMode::SemiNaive ? &record : nullptr);
      next[id] = body.value;
      bounded[id] = body.bounded;
      if (next[id] != cur[id]) changed.push_back(id);
      for (auto d : deps)
        if (dependents[d].empty() || dependents[d].back() != id) dependents[d].push_back(static_cast<std::uint32_t>(id));
    }
    ++result.iterations;
    if (changed.empty()) {
      result.converged = true;
      break;
    }
    cur = std::move(next);
    result.model = build(space, universe, cur);
    if (keep_trace) result.trace.push_back(result.model);
    if (mode == IterationMode::SemiNaive) {
      std::vector<bool> mark(space.total, false);
      dirty.clear();
      for (std::size_t c : changed)
        for (auto d : dependents[c])
          if (!mark[d]) {
            mark[d] = true;
            dirty.push_back(d);
          }
      std::sort(dirty.begin(), dirty.end());
    }
  }
  for (bool b : bounded) result.bounded = result.bounded || b;
  return result;
}

}  // namespace lp3
