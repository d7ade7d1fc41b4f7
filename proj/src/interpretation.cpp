#include "lp3/interpretation.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <sstream>

namespace lp3 {

namespace {

std::optional<std::int64_t> numeral_value(const Term& t) {
  std::int64_t n = 0;
  const Term* cur = &t;
  while (cur->is_compound() && cur->arity() == 1 && cur->name() == "s") {
    ++n;
    cur = &cur->arg(0);
  }
  if ((cur->is_int() && cur->int_value() == 0) || (cur->is_constant() && cur->name() == "0")) return n;
  return std::nullopt;
}

bool contains_item(const std::vector<Term>& items, const Term& x) {
  return std::find(items.begin(), items.end(), x) != items.end();
}

std::vector<std::int64_t> ints_of(const Term& list) {
  std::vector<std::int64_t> out;
  auto items = list_items(list);
  for (const auto& t : *items) out.push_back(t.int_value());
  return out;
}

TruthValue merge_sorted_numbers(const Term& atom) {
  const Term& as = atom.arg(0);
  const Term& bs = atom.arg(1);
  if (!is_sorted_int_list(as) || !is_sorted_int_list(bs)) return TruthValue::I;
  auto merged = ints_of(as);
  auto b = ints_of(bs);
  merged.insert(merged.end(), b.begin(), b.end());
  std::sort(merged.begin(), merged.end());
  auto cs = list_items(atom.arg(2));
  if (!cs || cs->size() != merged.size()) return TruthValue::F;
  for (std::size_t i = 0; i < merged.size(); ++i)
    if (!(*cs)[i].is_int() || (*cs)[i].int_value() != merged[i]) return TruthValue::F;
  return TruthValue::T;
}

// Also admissible when the output is a sorted list: such atoms with unsorted
// inputs are false.
TruthValue merge_sorted_output(const Term& atom) {
  TruthValue v = merge_sorted_numbers(atom);
  if (v != TruthValue::I) return v;
  return is_sorted_int_list(atom.arg(2)) ? TruthValue::F : TruthValue::I;
}

TruthValue even_odd_numerals(const Term& atom) {
  bool even;
  if (!atom.name().empty() && atom.name()[0] == 'e')
    even = true;
  else if (!atom.name().empty() && atom.name()[0] == 'o')
    even = false;
  else
    throw Error("even_odd_numerals: predicate name must start with 'e' or 'o': " + atom.name());
  auto n = numeral_value(atom.arg(0));
  if (!n) return TruthValue::I;
  return ((*n % 2 == 0) == even) ? TruthValue::T : TruthValue::F;
}

TruthValue member_listsecond(const Term& atom) {
  auto items = list_items(atom.arg(1));
  if (!items) return TruthValue::I;
  return contains_item(*items, atom.arg(0)) ? TruthValue::T : TruthValue::F;
}

// subset/2, and its complement for predicate names starting with "not".
TruthValue subset_lists(const Term& atom) {
  auto l = list_items(atom.arg(0));
  auto m = list_items(atom.arg(1));
  if (!l || !m) return TruthValue::I;
  bool subset = std::all_of(l->begin(), l->end(), [&](const Term& x) { return contains_item(*m, x); });
  bool negated = atom.name().rfind("not", 0) == 0;
  return (subset != negated) ? TruthValue::T : TruthValue::F;
}

TruthValue subs_dupfree(const Term& atom) {
  auto m = list_items(atom.arg(1));
  if (!m) return TruthValue::I;
  auto l = list_items(atom.arg(0));
  if (!l) return TruthValue::F;
  for (std::size_t i = 0; i < l->size(); ++i) {
    if (!contains_item(*m, (*l)[i])) return TruthValue::F;
    for (std::size_t j = i + 1; j < l->size(); ++j)
      if ((*l)[i] == (*l)[j]) return TruthValue::F;
  }
  return TruthValue::T;
}

// select(E, L, M): L is M with one extra E somewhere.
TruthValue select_listsecond(const Term& atom) {
  auto l = list_items(atom.arg(1));
  if (!l) return TruthValue::I;
  auto m = list_items(atom.arg(2));
  if (!m || m->size() + 1 != l->size()) return TruthValue::F;
  for (std::size_t i = 0; i < l->size(); ++i) {
    if ((*l)[i] != atom.arg(0)) continue;
    bool same = true;
    for (std::size_t k = 0, j = 0; k < l->size() && same; ++k) {
      if (k == i) continue;
      same = (*l)[k] == (*m)[j++];
    }
    if (same) return TruthValue::T;
  }
  return TruthValue::F;
}

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// Drops a '%' comment unless it sits inside a quoted atom.
std::string strip_comment(const std::string& line) {
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '\'') quoted = !quoted;
    if (line[i] == '%' && !quoted) return line.substr(0, i);
  }
  return line;
}

Functor parse_functor(const std::string& s, int line) {
  auto slash = s.rfind('/');
  if (slash == std::string::npos || slash == 0) throw Error("line " + std::to_string(line) + ": expected name/arity, got '" + s + "'");
  try {
    std::size_t used = 0;
    long arity = std::stol(s.substr(slash + 1), &used);
    if (used != s.size() - slash - 1 || arity < 0) throw Error("");
    return Functor{s.substr(0, slash), static_cast<std::size_t>(arity)};
  } catch (...) {
    throw Error("line " + std::to_string(line) + ": bad arity in '" + s + "'");
  }
}

Functor functor_of(const Term& atom) { return Functor{atom.name(), atom.arity()}; }

}  // namespace

std::optional<std::vector<Term>> list_items(const Term& t) {
  std::vector<Term> items;
  items.reserve(4);
  const Term* cur = &t;
  while (cur->is_cons()) {
    items.push_back(cur->arg(0));
    cur = &cur->arg(1);
  }
  if (!cur->is_nil()) return std::nullopt;
  return items;
}

bool is_sorted_int_list(const Term& t) {
  const Term* cur = &t;
  const Term* prev = nullptr;
  while (cur->is_cons()) {
    const Term& x = cur->arg(0);
    if (!x.is_int() || (prev && prev->int_value() > x.int_value())) return false;
    prev = &x;
    cur = &cur->arg(1);
  }
  return cur->is_nil();
}

TruthValue builtin_truth(const Term& atom) {
  if (!atom.ground()) throw Error("builtin atom is not ground: " + atom.to_string());
  const Term& a = atom.arg(0);
  const Term& b = atom.arg(1);
  if (atom.name() == "=") return a == b ? TruthValue::T : TruthValue::F;
  if (!a.is_int() || !b.is_int()) return TruthValue::F;
  if (atom.name() == "=<") return a.int_value() <= b.int_value() ? TruthValue::T : TruthValue::F;
  if (atom.name() == ">") return a.int_value() > b.int_value() ? TruthValue::T : TruthValue::F;
  throw Error("unknown builtin " + atom.name());
}

const SpecRegistry& SpecRegistry::builtin() {
  static const SpecRegistry registry = [] {
    SpecRegistry r;
    r.add("merge_sorted_numbers", merge_sorted_numbers);
    r.add("merge_sorted_output", merge_sorted_output);
    r.add("even_odd_numerals", even_odd_numerals);
    r.add("member_listsecond", member_listsecond);
    r.add("subset_lists", subset_lists);
    r.add("subs_dupfree", subs_dupfree);
    r.add("select_listsecond", select_listsecond);
    return r;
  }();
  return registry;
}

void SpecRegistry::add(const std::string& name, SpecFn fn) { entries_[name] = std::move(fn); }

const SpecFn* SpecRegistry::find(const std::string& name) const {
  auto it = entries_.find(name);
  return it == entries_.end() ? nullptr : &it->second;
}

std::vector<std::string> SpecRegistry::names() const {
  std::vector<std::string> out;
  for (const auto& [k, v] : entries_) out.push_back(k);
  return out;
}

Interpretation3::Interpretation3(UniversePtr universe) : universe_(std::move(universe)) {
  if (!universe_) throw Error("interpretation needs a universe");
}

Interpretation3 Interpretation3::uniform(UniversePtr universe, const std::vector<Functor>& predicates, TruthValue v) {
  Interpretation3 m(std::move(universe));
  for (const auto& f : predicates) m.declare_dense(f, std::vector<TruthValue>(m.atom_count(f), v));
  return m;
}

void Interpretation3::declare_table(const Functor& predicate, TruthValue default_value) {
  if (is_builtin_name(predicate.name, predicate.arity)) throw Error("cannot declare builtin " + predicate.to_string());
  auto t = std::make_shared<Table>();
  t->kind = Table::Kind::Sparse;
  t->default_value = default_value;
  if (!tables_.count(predicate)) order_.push_back(predicate);
  tables_[predicate] = std::move(t);
}

void Interpretation3::declare_spec(const Functor& predicate, const std::string& spec_name, const SpecRegistry& registry) {
  const SpecFn* fn = registry.find(spec_name);
  if (!fn) throw Error("unknown spec 'builtin:" + spec_name + "'");
  declare_spec(predicate, spec_name, *fn);
}

void Interpretation3::declare_spec(const Functor& predicate, const std::string& spec_name, SpecFn fn) {
  if (is_builtin_name(predicate.name, predicate.arity)) throw Error("cannot declare builtin " + predicate.to_string());
  auto t = std::make_shared<Table>();
  t->kind = Table::Kind::Spec;
  t->spec_name = spec_name;
  t->spec = std::move(fn);
  if (!tables_.count(predicate)) order_.push_back(predicate);
  tables_[predicate] = std::move(t);
}

void Interpretation3::declare_dense(const Functor& predicate, std::vector<TruthValue> values) {
  if (is_builtin_name(predicate.name, predicate.arity)) throw Error("cannot declare builtin " + predicate.to_string());
  if (values.size() != atom_count(predicate))
    throw Error("dense table for " + predicate.to_string() + " has " + std::to_string(values.size()) + " values, expected " +
                std::to_string(atom_count(predicate)));
  auto t = std::make_shared<Table>();
  t->kind = Table::Kind::Dense;
  t->dense = std::move(values);
  if (!tables_.count(predicate)) order_.push_back(predicate);
  tables_[predicate] = std::move(t);
}

const Interpretation3::Table& Interpretation3::table(const Functor& predicate) const {
  auto it = tables_.find(predicate);
  if (it == tables_.end()) throw Error("predicate " + predicate.to_string() + " is not declared in the interpretation");
  return *it->second;
}

Interpretation3::Table& Interpretation3::mutable_table(const Functor& predicate) {
  auto it = tables_.find(predicate);
  if (it == tables_.end()) throw Error("predicate " + predicate.to_string() + " is not declared in the interpretation");
  if (it->second.use_count() > 1) it->second = std::make_shared<Table>(*it->second);
  return *it->second;
}

void Interpretation3::set(const Term& atom, TruthValue v) {
  if (!atom.ground()) throw Error("atom is not ground: " + atom.to_string());
  Functor f = functor_of(atom);
  std::size_t index = atom_index(atom);
  Table& t = mutable_table(f);
  if (t.kind == Table::Kind::Spec) {
    t.dense = values(f);
    t.kind = Table::Kind::Dense;
    t.spec = nullptr;
    t.spec_name.clear();
  }
  if (t.kind == Table::Kind::Dense)
    t.dense[index] = v;
  else
    t.explicit_values[atom] = v;
}

std::vector<Functor> Interpretation3::predicates() const { return order_; }

std::size_t Interpretation3::atom_count(const Functor& predicate) const {
  std::size_t n = universe_->size();
  std::size_t c = 1;
  for (std::size_t i = 0; i < predicate.arity; ++i) {
    if (n && c > static_cast<std::size_t>(-1) / n) throw Error("too many atoms for " + predicate.to_string());
    c *= n;
  }
  return c;
}

std::size_t Interpretation3::atom_index(const Term& atom) const {
  const std::size_t n = universe_->size();
  std::size_t index = 0;
  for (const auto& a : atom.args()) {
    std::int64_t k = universe_->index_of(a);
    if (k < 0) throw OutsideUniverse(atom.to_string());
    index = index * n + static_cast<std::size_t>(k);
  }
  return index;
}

Term Interpretation3::atom_at(const Functor& predicate, std::size_t index) const {
  if (predicate.arity == 0) return Term::constant(predicate.name);
  const auto& terms = universe_->terms();
  const std::size_t n = terms.size();
  std::vector<Term> args(predicate.arity, terms.at(0));
  for (std::size_t i = predicate.arity; i > 0; --i) {
    args[i - 1] = terms[index % n];
    index /= n;
  }
  return Term::compound(predicate.name, std::move(args));
}

TruthValue Interpretation3::lookup(const Table& t, const Term& atom, std::size_t index) const {
  switch (t.kind) {
    case Table::Kind::Dense:
      return t.dense[index];
    case Table::Kind::Spec:
      return t.spec(atom);
    case Table::Kind::Sparse:
      break;
  }
  auto it = t.explicit_values.find(atom);
  return it == t.explicit_values.end() ? t.default_value : it->second;
}

TruthValue Interpretation3::truth_of(const Term& atom) const {
  if (atom.is_var() || atom.is_int()) throw Error("not an atom: " + atom.to_string());
  if (is_builtin_name(atom.name(), atom.arity())) return builtin_truth(atom);
  if (!atom.ground()) throw Error("atom is not ground: " + atom.to_string());
  const Table& t = table(functor_of(atom));
  std::size_t index = atom_index(atom);
  return lookup(t, atom, index);
}

std::vector<TruthValue> Interpretation3::values(const Functor& predicate) const {
  const Table& t = table(predicate);
  if (t.kind == Table::Kind::Dense) return t.dense;
  std::size_t n = atom_count(predicate);
  std::vector<TruthValue> out(n, t.default_value);
  if (t.kind == Table::Kind::Sparse) {
    for (const auto& [atom, v] : t.explicit_values) out[atom_index(atom)] = v;
    return out;
  }
  std::size_t i = 0;
  for_each_tuple(*universe_, predicate.arity, [&](const std::vector<Term>& args) {
    Term atom = predicate.arity ? Term::compound(predicate.name, args) : Term::constant(predicate.name);
    out[i++] = t.spec(atom);
    return true;
  });
  return out;
}

Interpretation3 Interpretation3::materialized() const {
  Interpretation3 m(universe_);
  for (const auto& f : order_) m.declare_dense(f, values(f));
  return m;
}

Interpretation3 Interpretation3::restricted_to(const std::vector<Functor>& predicates) const {
  Interpretation3 m(universe_);
  for (const auto& f : predicates) {
    m.order_.push_back(f);
    m.tables_[f] = tables_.at(f);
  }
  return m;
}

std::vector<Term> Interpretation3::atoms_with(TruthValue v) const {
  std::vector<Term> out;
  for (const auto& f : order_) {
    auto vals = values(f);
    for (std::size_t i = 0; i < vals.size(); ++i)
      if (vals[i] == v) out.push_back(atom_at(f, i));
  }
  return out;
}

std::size_t Interpretation3::count(TruthValue v) const {
  std::size_t c = 0;
  for (const auto& f : order_) {
    auto vals = values(f);
    c += static_cast<std::size_t>(std::count(vals.begin(), vals.end(), v));
  }
  return c;
}

std::string Interpretation3::storage(const Functor& predicate) const {
  const Table& t = table(predicate);
  switch (t.kind) {
    case Table::Kind::Spec:
      return "spec:" + t.spec_name;
    case Table::Kind::Dense:
      return "dense";
    case Table::Kind::Sparse:
      break;
  }
  return "table";
}

const std::string* Interpretation3::spec_name(const Functor& predicate) const {
  const Table& t = table(predicate);
  return t.kind == Table::Kind::Spec ? &t.spec_name : nullptr;
}

bool operator==(const Interpretation3& a, const Interpretation3& b) {
  if (a.universe_->to_string() != b.universe_->to_string()) return false;
  std::vector<Functor> pa = a.order_, pb = b.order_;
  std::sort(pa.begin(), pa.end());
  std::sort(pb.begin(), pb.end());
  if (pa != pb) return false;
  for (const auto& f : pa)
    if (a.values(f) != b.values(f)) return false;
  return true;
}

namespace {

void require_same_domain(const Interpretation3& a, const Interpretation3& b) {
  if (a.universe()->to_string() != b.universe()->to_string()) throw Error("interpretations have different universes");
  auto pa = a.predicates(), pb = b.predicates();
  std::sort(pa.begin(), pa.end());
  std::sort(pb.begin(), pb.end());
  if (pa != pb) throw Error("interpretations declare different predicates");
}

}  // namespace

bool leq_info(const Interpretation3& a, const Interpretation3& b) {
  require_same_domain(a, b);
  for (const auto& f : a.predicates()) {
    auto va = a.values(f), vb = b.values(f);
    for (std::size_t i = 0; i < va.size(); ++i)
      if (!leq_info(va[i], vb[i])) return false;
  }
  return true;
}

Interpretation3 intersect_true(const Interpretation3& a, const Interpretation3& b) {
  require_same_domain(a, b);
  Interpretation3 out(a.universe());
  for (const auto& f : a.predicates()) {
    auto va = a.values(f), vb = b.values(f);
    std::vector<TruthValue> r(va.size());
    for (std::size_t i = 0; i < va.size(); ++i) {
      if ((va[i] == TruthValue::I) != (vb[i] == TruthValue::I))
        throw PreconditionError("intersect_true: I-sets differ at " + a.atom_at(f, i).to_string());
      if (va[i] == TruthValue::I)
        r[i] = TruthValue::I;
      else
        r[i] = (va[i] == TruthValue::T && vb[i] == TruthValue::T) ? TruthValue::T : TruthValue::F;
    }
    out.declare_dense(f, std::move(r));
  }
  return out;
}

Interpretation3 intersect_inadmissible(const Interpretation3& a, const Interpretation3& b) {
  require_same_domain(a, b);
  Interpretation3 out(a.universe());
  for (const auto& f : a.predicates()) {
    auto va = a.values(f), vb = b.values(f);
    std::vector<TruthValue> r(va.size());
    for (std::size_t i = 0; i < va.size(); ++i) {
      if ((va[i] == TruthValue::T) != (vb[i] == TruthValue::T))
        throw PreconditionError("intersect_inadmissible: T-sets differ at " + a.atom_at(f, i).to_string());
      if (va[i] == TruthValue::T)
        r[i] = TruthValue::T;
      else
        r[i] = (va[i] == TruthValue::I && vb[i] == TruthValue::I) ? TruthValue::I : TruthValue::F;
    }
    out.declare_dense(f, std::move(r));
  }
  return out;
}

Interpretation3 repartition(const Interpretation3& m, const std::vector<Term>& inadmissible) {
  std::map<Functor, std::vector<TruthValue>> vals;
  for (const auto& f : m.predicates()) {
    auto v = m.values(f);
    for (auto& x : v)
      if (x == TruthValue::I) x = TruthValue::T;
    vals.emplace(f, std::move(v));
  }
  for (const auto& atom : inadmissible) {
    auto it = vals.find(functor_of(atom));
    if (it == vals.end()) throw PreconditionError("repartition: undeclared predicate in " + atom.to_string());
    std::size_t i = m.atom_index(atom);
    if (it->second[i] == TruthValue::F) throw PreconditionError("repartition: atom is false: " + atom.to_string());
    it->second[i] = TruthValue::I;
  }
  Interpretation3 out(m.universe());
  for (const auto& f : m.predicates()) out.declare_dense(f, std::move(vals.at(f)));
  return out;
}

Interpretation3 load_interpretation(const std::string& text, const SpecRegistry& registry) {
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  std::optional<Interpretation3> m;
  std::optional<Functor> section;
  std::map<Functor, bool> has_default;
  std::map<Functor, std::map<std::size_t, TruthValue>> seen;
  auto fail = [&](const std::string& msg) { throw Error("line " + std::to_string(line_no) + ": " + msg); };

  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = trim(strip_comment(raw));
    if (line.empty()) continue;
    std::string word = line.substr(0, line.find_first_of(" \t"));
    std::string rest = trim(line.substr(word.size()));
    if (word == "universe") {
      if (m) fail("duplicate universe line");
      try {
        m.emplace(std::make_shared<const BoundedUniverse>(BoundedUniverse::parse(line).config()));
      } catch (const Error& e) {
        fail(e.what());
      }
      continue;
    }
    if (!m) fail("the universe line must come first");
    if (word == "pred") {
      Functor f = parse_functor(rest, line_no);
      if (m->declared(f)) fail("predicate " + f.to_string() + " declared twice");
      m->declare_table(f, TruthValue::I);
      has_default[f] = false;
      section = f;
    } else if (word == "default") {
      if (!section) fail("default outside a pred section");
      auto v = truth_from_string(rest);
      if (!v) fail("default must be T, F or I");
      if (has_default[*section]) fail("duplicate default for " + section->to_string());
      m->declare_table(*section, *v);
      for (const auto& [idx, val] : seen[*section]) m->set(m->atom_at(*section, idx), val);
      has_default[*section] = true;
    } else if (word == "spec") {
      auto sp = rest.find_first_of(" \t");
      if (sp == std::string::npos) fail("expected spec <name>/<arity> builtin:<specname>");
      Functor f = parse_functor(rest.substr(0, sp), line_no);
      std::string src = trim(rest.substr(sp));
      if (src.rfind("builtin:", 0) != 0) fail("spec source must be builtin:<specname>");
      if (m->declared(f)) fail("predicate " + f.to_string() + " declared twice");
      try {
        m->declare_spec(f, src.substr(8), registry);
      } catch (const Error& e) {
        fail(e.what());
      }
      section.reset();
    } else if (word.size() == 1 && truth_from_char(word[0])) {
      TruthValue v = *truth_from_char(word[0]);
      Term atom = Term::nil();
      try {
        atom = parse_term(rest);
      } catch (const Error& e) {
        fail(std::string("bad atom: ") + e.what());
      }
      if (atom.is_var() || atom.is_int() || !atom.ground()) fail("atom must be ground: " + rest);
      Functor f = functor_of(atom);
      if (!m->declared(f)) fail("predicate " + f.to_string() + " is not declared with pred");
      if (m->spec_name(f)) fail("predicate " + f.to_string() + " is given by a spec");
      std::size_t idx = 0;
      try {
        idx = m->atom_index(atom);
      } catch (const OutsideUniverse& e) {
        fail(e.what());
      }
      auto [it, inserted] = seen[f].emplace(idx, v);
      if (!inserted && it->second != v) fail("conflicting values for " + atom.to_string());
      m->set(atom, v);
    } else {
      fail("unrecognized line '" + line + "'");
    }
  }
  if (!m) throw Error("interpretation has no universe line");
  for (const auto& [f, d] : has_default)
    if (!d && seen[f].size() != m->atom_count(f))
      throw Error("predicate " + f.to_string() + " has no default and does not list every atom");
  return std::move(*m);
}

Interpretation3 load_interpretation_file(const std::string& path, const SpecRegistry& registry) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return load_interpretation(ss.str(), registry);
}

std::string save_interpretation(const Interpretation3& m) {
  std::ostringstream os;
  os << m.universe()->to_string() << "\n";
  for (const auto& f : m.predicates()) {
    if (const std::string* spec = m.spec_name(f)) {
      os << "spec " << f.to_string() << " builtin:" << *spec << "\n";
      continue;
    }
    auto vals = m.values(f);
    std::array<std::size_t, 3> counts{};
    for (auto v : vals) ++counts[static_cast<std::size_t>(v)];
    TruthValue def = TruthValue::I;
    for (TruthValue v : {TruthValue::F, TruthValue::T})
      if (counts[static_cast<std::size_t>(v)] > counts[static_cast<std::size_t>(def)]) def = v;
    os << "pred " << f.to_string() << "\n";
    os << "default " << to_char(def) << "\n";
    for (std::size_t i = 0; i < vals.size(); ++i)
      if (vals[i] != def) os << to_char(vals[i]) << " " << m.atom_at(f, i).to_string() << ".\n";
  }
  return os.str();
}

}  // namespace lp3
