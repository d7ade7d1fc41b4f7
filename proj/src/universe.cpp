#include "lp3/universe.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace lp3 {

namespace {

bool is_list_functor(const std::string& name, std::size_t arity) {
  return (name == "." && arity == 2) || (name == "[]" && arity == 0);
}

// A 0-ary functor written as a numeral ("0/0") stands for that integer.
std::optional<std::int64_t> numeral_name(const std::string& name) {
  if (name.empty()) return std::nullopt;
  std::size_t start = name[0] == '-' ? 1 : 0;
  if (start == name.size()) return std::nullopt;
  for (std::size_t i = start; i < name.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(name[i]))) return std::nullopt;
  try {
    return std::stoll(name);
  } catch (...) {
    return std::nullopt;
  }
}

std::int64_t parse_int(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    std::int64_t v = std::stoll(s, &used);
    if (used != s.size()) throw Error("");
    return v;
  } catch (...) {
    throw Error("universe: bad " + what + " '" + s + "'");
  }
}

}  // namespace

BoundedUniverse::BoundedUniverse(UniverseConfig config) : config_(std::move(config)) {
  std::sort(config_.functors.begin(), config_.functors.end());
  config_.functors.erase(std::unique(config_.functors.begin(), config_.functors.end()), config_.functors.end());
  if (config_.ints && config_.ints->first > config_.ints->second)
    throw Error("universe: empty integer range");
  if (config_.max_list_length && !has_functor(".", 2))
    throw Error("universe: lists= requires the ./2 functor");
}

bool BoundedUniverse::has_functor(const std::string& name, std::size_t arity) const {
  return std::binary_search(config_.functors.begin(), config_.functors.end(), Functor{name, arity});
}

bool BoundedUniverse::structurally_contains(const Term& t, bool allow_lists) const {
  if (!t.ground()) return false;
  const bool list_mode = config_.max_list_length.has_value();
  if (list_mode && (t.is_nil() || t.is_cons())) {
    if (!allow_lists) return false;
    std::size_t len = 0;
    const Term* cur = &t;
    while (cur->is_cons()) {
      if (++len > *config_.max_list_length) return false;
      if (!structurally_contains(cur->arg(0), false)) return false;
      cur = &cur->arg(1);
    }
    return cur->is_nil();
  }
  if (t.depth() > config_.max_depth) return false;
  if (t.is_int())
    return (config_.ints && t.int_value() >= config_.ints->first && t.int_value() <= config_.ints->second) ||
           has_functor(std::to_string(t.int_value()), 0);
  if (!has_functor(t.name(), t.arity())) return false;
  for (const auto& a : t.args())
    if (!structurally_contains(a, !list_mode)) return false;
  return true;
}

bool BoundedUniverse::contains(const Term& t) const {
  if (config_.max_terms) return index_of(t) >= 0;
  return structurally_contains(t, true);
}

void BoundedUniverse::require(const Term& t) const {
  if (!contains(t)) throw OutsideUniverse(t.to_string());
}

const BoundedUniverse::Index& BoundedUniverse::index() const {
  std::call_once(once_, [this] {
    auto idx = std::make_unique<Index>();
    const bool list_mode = config_.max_list_length.has_value();
    const std::size_t cap = config_.max_terms.value_or(static_cast<std::size_t>(-1));

    // Non-list terms level by level.
    std::vector<Term> all;
    std::vector<Term> level;
    if (config_.ints)
      for (std::int64_t v = config_.ints->first; v <= config_.ints->second; ++v) level.push_back(Term::integer(v));
    for (const auto& f : config_.functors) {
      if (f.arity != 0) continue;
      if (list_mode && is_list_functor(f.name, f.arity)) continue;
      if (auto v = numeral_name(f.name)) {
        if (!(config_.ints && *v >= config_.ints->first && *v <= config_.ints->second)) level.push_back(Term::integer(*v));
        continue;
      }
      level.push_back(Term::constant(f.name));
    }
    std::sort(level.begin(), level.end(), TermLess{});
    all = level;
    for (std::uint32_t d = 1; d <= config_.max_depth && all.size() < cap; ++d) {
      std::vector<Term> next;
      const std::vector<Term> prior = all;
      for (const auto& f : config_.functors) {
        if (f.arity == 0) continue;
        if (list_mode && is_list_functor(f.name, f.arity)) continue;
        std::vector<std::size_t> pos(f.arity, 0);
        if (prior.empty()) break;
        while (true) {
          std::vector<Term> args;
          args.reserve(f.arity);
          std::uint32_t md = 0;
          for (auto p : pos) {
            args.push_back(prior[p]);
            md = std::max(md, prior[p].depth());
          }
          if (md + 1 == d) next.push_back(Term::compound(f.name, std::move(args)));
          std::size_t k = f.arity;
          bool done = true;
          while (k > 0) {
            --k;
            if (++pos[k] < prior.size()) {
              done = false;
              break;
            }
            pos[k] = 0;
          }
          if (done) break;
        }
      }
      std::sort(next.begin(), next.end(), TermLess{});
      all.insert(all.end(), next.begin(), next.end());
    }

    if (list_mode) {
      const std::vector<Term> elements = all;
      std::vector<Term> lists{Term::nil()};
      std::vector<Term> frontier{Term::nil()};
      for (std::size_t len = 1; len <= *config_.max_list_length; ++len) {
        std::vector<Term> grown;
        for (const auto& e : elements)
          for (const auto& tail : frontier) grown.push_back(Term::cons(e, tail));
        lists.insert(lists.end(), grown.begin(), grown.end());
        frontier = std::move(grown);
      }
      all.insert(all.end(), lists.begin(), lists.end());
    }

    std::sort(all.begin(), all.end(), TermLess{});
    if (all.size() > cap) all.erase(all.begin() + static_cast<std::ptrdiff_t>(cap), all.end());
    idx->terms = std::move(all);
    idx->position.reserve(idx->terms.size());
    for (std::uint32_t i = 0; i < idx->terms.size(); ++i) idx->position.emplace(idx->terms[i], i);
    index_ = std::move(idx);
  });
  return *index_;
}

const std::vector<Term>& BoundedUniverse::terms() const { return index().terms; }

std::int64_t BoundedUniverse::index_of(const Term& t) const {
  const auto& pos = index().position;
  auto it = pos.find(t);
  return it == pos.end() ? -1 : static_cast<std::int64_t>(it->second);
}

BoundedUniverse BoundedUniverse::parse(const std::string& line) {
  std::istringstream in(line);
  std::string word;
  if (!(in >> word) || word != "universe") throw Error("universe line must start with 'universe'");
  UniverseConfig cfg;
  bool have_depth = false;
  while (in >> word) {
    auto eq = word.find('=');
    if (eq == std::string::npos) throw Error("universe: expected key=value, got '" + word + "'");
    std::string key = word.substr(0, eq);
    std::string value = word.substr(eq + 1);
    if (key == "depth") {
      cfg.max_depth = static_cast<std::uint32_t>(parse_int(value, "depth"));
      have_depth = true;
    } else if (key == "ints") {
      auto dots = value.find("..");
      if (dots == std::string::npos) throw Error("universe: ints must be <lo>..<hi>");
      cfg.ints = std::make_pair(parse_int(value.substr(0, dots), "ints"), parse_int(value.substr(dots + 2), "ints"));
    } else if (key == "functors") {
      std::size_t start = 0;
      while (start <= value.size()) {
        std::size_t comma = value.find(',', start);
        // './2' contains no comma, but the list functor name itself may be '.'.
        std::string item = value.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
        if (!item.empty()) {
          auto slash = item.rfind('/');
          if (slash == std::string::npos || slash == 0) throw Error("universe: bad functor '" + item + "'");
          cfg.functors.push_back(
              Functor{item.substr(0, slash), static_cast<std::size_t>(parse_int(item.substr(slash + 1), "arity"))});
        }
        if (comma == std::string::npos) break;
        start = comma + 1;
      }
    } else if (key == "lists") {
      cfg.max_list_length = static_cast<std::size_t>(parse_int(value, "lists"));
    } else if (key == "max") {
      cfg.max_terms = static_cast<std::size_t>(parse_int(value, "max"));
    } else {
      throw Error("universe: unknown key '" + key + "'");
    }
  }
  if (!have_depth) throw Error("universe: depth= is required");
  return BoundedUniverse(std::move(cfg));
}

std::string BoundedUniverse::to_string() const {
  std::ostringstream os;
  os << "universe depth=" << config_.max_depth;
  if (config_.ints) os << " ints=" << config_.ints->first << ".." << config_.ints->second;
  os << " functors=";
  for (std::size_t i = 0; i < config_.functors.size(); ++i) {
    if (i) os << ',';
    os << config_.functors[i].to_string();
  }
  if (config_.max_list_length) os << " lists=" << *config_.max_list_length;
  if (config_.max_terms) os << " max=" << *config_.max_terms;
  return os.str();
}

std::vector<Term> enumerate_ground(const BoundedUniverse& u) {
  bool has_constant = u.config().ints.has_value() || u.config().max_list_length.has_value();
  for (const auto& f : u.config().functors) has_constant = has_constant || f.arity == 0;
  if (!has_constant) throw Error("universe has no constants: no ground terms exist");
  return u.terms();
}

std::vector<Term> enumerate_atoms(const BoundedUniverse& u, const Functor& predicate) {
  std::vector<Term> out;
  for_each_tuple(u, predicate.arity, [&](const std::vector<Term>& args) {
    out.push_back(Term::compound(predicate.name, args));
    return true;
  });
  return out;
}

}  // namespace lp3
