#include "lp3/json_io.hpp"

#include <regex>

namespace lp3 {

namespace {

Json strings(const std::vector<Term>& ts) {
  Json out = Json::array();
  for (const auto& t : ts) out.push_back(t.to_string());
  return out;
}

Json pos_json(const std::optional<SourcePos>& p) {
  if (!p) return nullptr;
  return Json{{"line", p->line}, {"column", p->column}};
}

}  // namespace

Json to_json(const Substitution& s) {
  Json out = Json::object();
  for (const auto& [k, v] : s.bindings()) out[k.to_string()] = v.to_string();
  return out;
}

Json to_json(const Answer& a) {
  Json inst = Json::array();
  for (const auto& l : a.instance) inst.push_back(l.to_string());
  return {{"bindings", to_json(a.bindings)}, {"instance", inst}, {"text", a.to_string()}};
}

Json to_json(const Outcome& o) {
  Json answers = Json::array();
  for (const auto& a : o.answers) answers.push_back(to_json(a));
  Json out{{"answers", answers},
           {"exhaustive", o.exhaustive},
           {"floundered", o.floundered},
           {"finitely_failed", o.finitely_failed},
           {"budget_exhausted", o.budget_exhausted},
           {"nodes", o.nodes},
           {"summary", o.summary()}};
  if (!o.trace.empty()) out["trace"] = o.trace;
  return out;
}

Json to_json(const Question& q) {
  return {{"kind", q.kind == Question::Kind::Atom ? "atom" : "completeness"},
          {"atom", q.atom.to_string()},
          {"answers", strings(q.answers)},
          {"text", q.text}};
}

Json to_json(const OracleAnswer& r) {
  return {{"question", r.question}, {"verdict", to_string(r.verdict)}, {"source", to_string(r.source)}};
}

Json to_json(const Diagnosis& d) {
  Json transcript = Json::array();
  for (const auto& r : d.transcript) transcript.push_back(to_json(r));
  return {{"kind", to_string(d.kind)},
          {"predicate", d.predicate ? Json(d.predicate->to_string()) : Json(nullptr)},
          {"clause_number", d.clause_number ? Json(*d.clause_number) : Json(nullptr)},
          {"clause_pos", pos_json(d.clause_pos)},
          {"clause_text", d.clause_text},
          {"instance", d.instance},
          {"node", d.node},
          {"transcript", transcript}};
}

Json diagnosis_json(const std::optional<Diagnosis>& d) { return d ? to_json(*d) : Json(nullptr); }

Json to_json(const Violation& v) {
  return {{"predicate", v.predicate.to_string()},
          {"head", v.head.to_string()},
          {"head_value", std::string(1, to_char(v.head_value))},
          {"body_value", std::string(1, to_char(v.body_value))},
          {"kind", to_string(v.kind)},
          {"disjunct", v.disjunct ? Json(*v.disjunct) : Json(nullptr)},
          {"witness", to_json(v.witness)},
          {"note", v.note},
          {"bounded", v.bounded}};
}

Json to_json(const CheckReport& r) {
  Json vs = Json::array();
  for (const auto& v : r.violations) vs.push_back(to_json(v));
  return {{"condition", to_string(r.condition)},
          {"holds", r.holds},
          {"violation_count", r.violation_count},
          {"violations", vs},
          {"atoms_checked", r.atoms_checked},
          {"bounded", r.bounded}};
}

Json to_json(const SynopsisReport& r) {
  Json ev = Json::array();
  for (const auto& e : r.evidence)
    ev.push_back({{"atom", e.atom.to_string()},
                  {"value", std::string(1, to_char(e.value))},
                  {"ok", e.ok},
                  {"clause", e.clause ? Json(*e.clause + 1) : Json(nullptr)},
                  {"instance", to_json(e.instance)},
                  {"text", e.to_string()}});
  return {{"holds", r.holds},         {"true_atoms", r.true_atoms}, {"false_atoms", r.false_atoms},
          {"failures", r.failures},   {"bounded", r.bounded},       {"evidence", ev}};
}

Json to_json(const SuccessSetReport& r) {
  return {{"success", strings(r.success)},
          {"finite_failure", strings(r.finite_failure)},
          {"unresolved", strings(r.unresolved)}};
}

Json to_json(const FixpointResult& r) {
  return {{"iterations", r.iterations},
          {"converged", r.converged},
          {"bounded", r.bounded},
          {"model", save_interpretation(r.model)}};
}

Json to_json(const ObservedNode& n) {
  return {{"parent", n.parent},
          {"edge", n.edge == Polarity::Positive ? "positive" : "negative"},
          {"depth", n.depth},
          {"status", to_string(n.status)},
          {"goal", n.goal},
          {"selected", n.selected},
          {"action", n.action},
          {"child_count", n.children.size()}};
}

Json error_json(const std::exception& e) {
  Json err{{"kind", "error"}, {"message", e.what()}};
  if (auto* pe = dynamic_cast<const ParseError*>(&e)) {
    err["kind"] = "parse";
    err["message"] = pe->message();
    err["line"] = pe->pos().line;
    err["column"] = pe->pos().column;
  } else if (dynamic_cast<const OutsideUniverse*>(&e)) {
    err["kind"] = "outside_universe";
  } else if (dynamic_cast<const TranscriptError*>(&e)) {
    err["kind"] = "transcript";
  } else if (dynamic_cast<const StaleDerivation*>(&e)) {
    err["kind"] = "stale_derivation";
  } else {
    // Interpretation files report "line N: ...".
    static const std::regex line_re(R"(^line (\d+): (.*)$)");
    std::smatch m;
    std::string what = e.what();
    if (std::regex_match(what, m, line_re)) {
      err["kind"] = "parse";
      err["message"] = m[2].str();
      err["line"] = std::stoi(m[1].str());
    }
  }
  return {{"error", err}};
}

}  // namespace lp3
