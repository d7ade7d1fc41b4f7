#include "lp3/service.hpp"

#include <httplib.h>

#include <ostream>

namespace lp3 {

void drive_debug(DebugSession& s, const std::vector<OracleAnswer>& transcript, const Interpretation3* interp) {
  for (const auto& r : transcript) {
    if (!s.pending()) break;
    if (s.pending()->text != r.question)
      throw TranscriptError("transcript diverges: expected '" + s.pending()->text + "', recorded '" + r.question + "'");
    s.answer(r.verdict, OracleSource::Transcript);
  }
  if (!interp) return;
  InterpretationOracle o(*interp);
  while (s.pending()) s.answer(o.ask(*s.pending()), OracleSource::Interpretation);
}

Json debug_state_json(const DebugSession& s) {
  Json transcript = Json::array();
  for (const auto& r : s.transcript()) transcript.push_back(to_json(r));
  return {{"status", s.finished() ? "finished" : "pending"},
          {"goal", s.goal().to_string()},
          {"mode", to_string(s.options().mode)},
          {"question", s.pending() ? to_json(*s.pending()) : Json(nullptr)},
          {"diagnosis", diagnosis_json(s.diagnosis())},
          {"transcript", transcript}};
}

SolveOptions make_solve_options(SelectionRule rule, std::size_t budget, bool all, bool trace) {
  SolveOptions o;
  o.rule = rule;
  o.budget = budget;
  o.max_answers = all ? 0 : 1;
  o.trace = trace;
  return o;
}

std::shared_ptr<Session> SessionStore::create(const std::string& program, const std::string& interpretation,
                                              SelectionRule rule, std::size_t budget) {
  auto s = std::make_shared<Session>();
  s->program_text = program;
  s->clausal = parse_program(program);
  s->program = to_disjunctive(s->clausal);
  if (!interpretation.empty()) s->interp = load_interpretation(interpretation);
  s->rule = rule;
  s->budget = budget;
  std::lock_guard lock(mu_);
  auto now = std::chrono::steady_clock::now();
  purge(now);
  s->id = "s" + std::to_string(++next_);
  s->expires = now + ttl_;
  sessions_[s->id] = s;
  return s;
}

std::shared_ptr<Session> SessionStore::find(const std::string& id) {
  std::lock_guard lock(mu_);
  auto now = std::chrono::steady_clock::now();
  purge(now);
  auto it = sessions_.find(id);
  if (it == sessions_.end()) return nullptr;
  it->second->expires = now + ttl_;
  return it->second;
}

bool SessionStore::erase(const std::string& id) {
  std::lock_guard lock(mu_);
  return sessions_.erase(id) > 0;
}

std::size_t SessionStore::size() {
  std::lock_guard lock(mu_);
  return sessions_.size();
}

void SessionStore::purge(std::chrono::steady_clock::time_point now) {
  for (auto it = sessions_.begin(); it != sessions_.end();)
    it = it->second->expires < now ? sessions_.erase(it) : std::next(it);
}

namespace {

// Malformed request bodies.
struct BadRequest : Error {
  using Error::Error;
};

// Requests that do not fit the session's state.
struct Conflict : Error {
  using Error::Error;
};

void reply(httplib::Response& res, int status, const Json& body) {
  res.status = status;
  res.set_content(body.dump(2), "application/json");
}

Json error_body(const std::string& kind, const std::string& message) {
  return {{"error", {{"kind", kind}, {"message", message}}}};
}

Json parse_body(const httplib::Request& req) {
  if (req.body.empty()) return Json::object();
  try {
    Json j = Json::parse(req.body);
    if (!j.is_object()) throw BadRequest("request body must be a JSON object");
    return j;
  } catch (const Json::parse_error& e) {
    throw BadRequest(std::string("invalid JSON: ") + e.what());
  }
}

template <class T>
T field(const Json& body, const char* name, T fallback) {
  auto it = body.find(name);
  if (it == body.end() || it->is_null()) return fallback;
  try {
    return it->get<T>();
  } catch (const Json::exception&) {
    throw BadRequest(std::string("field '") + name + "' has the wrong type");
  }
}

std::string required(const Json& body, const char* name) {
  std::string v = field<std::string>(body, name, "");
  if (v.empty()) throw BadRequest(std::string("missing field '") + name + "'");
  return v;
}

std::size_t query_size(const httplib::Request& req, const char* name, std::size_t fallback) {
  if (!req.has_param(name)) return fallback;
  try {
    return std::stoul(req.get_param_value(name));
  } catch (const std::exception&) {
    throw BadRequest(std::string("query parameter '") + name + "' must be a number");
  }
}

using Handler = std::function<Json(Session&, const httplib::Request&, httplib::Response&)>;

httplib::Server::Handler with_session(SessionStore& store, Handler h) {
  return [&store, h](const httplib::Request& req, httplib::Response& res) {
    const std::string id = req.matches[1];
    auto s = store.find(id);
    if (!s) {
      Json body = error_body("unknown_session", "no session " + id);
      body["version"] = nullptr;
      return reply(res, 404, body);
    }
    std::lock_guard lock(s->mu);
    Json body;
    int status = 200;
    try {
      body = h(*s, req, res);
    } catch (const BadRequest& e) {
      status = 400;
      body = error_body("bad_request", e.what());
    } catch (const Conflict& e) {
      status = 409;
      body = error_body("conflict", e.what());
    } catch (const std::exception& e) {
      status = 422;
      body = error_json(e);
    }
    if (res.status == 200 || res.status == -1) res.status = status;
    if (!body.is_null()) {
      body["version"] = s->version;
      res.set_content(body.dump(2), "application/json");
    }
    res.set_header("X-Session-Version", std::to_string(s->version));
  };
}

DebugSession& live_debug(Session& s) {
  if (!s.debug) throw Conflict("no debug session started");
  return *s.debug;
}

std::map<std::string, Verdict> verdicts(const Session& s) {
  std::map<std::string, Verdict> out;
  if (s.debug)
    for (const auto& r : s.debug->transcript()) out.emplace(r.question, r.verdict);
  return out;
}

Json verdict_of(const std::map<std::string, Verdict>& known, const std::string& question) {
  auto it = known.find(question);
  return it == known.end() ? "unknown" : to_string(it->second);
}

Json proof_node_json(const ProofTree& t, std::size_t i, const std::map<std::string, Verdict>& known) {
  const ProofNode& n = t.nodes[i];
  static const char* kinds[] = {"atom", "negation", "builtin"};
  Json j{{"id", i},
         {"kind", kinds[static_cast<int>(n.kind)]},
         {"label", n.label()},
         {"clause", n.kind == ProofNode::Kind::Atom ? Json(n.disjunct + 1) : Json(nullptr)},
         {"child_count", n.children.size()}};
  j["verdict"] = n.kind == ProofNode::Kind::Builtin ? Json("correct")
                                                    : verdict_of(known, Question::about_atom(n.atom).text);
  return j;
}

Json call_node_json(const CallAnswerTree& t, std::size_t i, const std::map<std::string, Verdict>& known) {
  const CallNode& n = t.node(i);
  Json answers = Json::array();
  for (const auto& a : n.answers) answers.push_back(a.to_string());
  std::string q = n.negated ? Question::about_atom(n.call).text : Question::about_call(n.call, n.answers).text;
  return {{"id", i},
          {"kind", n.negated ? "negation" : "call"},
          {"label", n.label()},
          {"call", n.call.to_string()},
          {"answers", answers},
          {"exhaustive", n.exhaustive},
          {"clause", n.disjunct ? Json(*n.disjunct + 1) : Json(nullptr)},
          {"child_count", t.expanded(i) ? Json(const_cast<CallAnswerTree&>(t).children(i).size()) : Json(nullptr)},
          {"verdict", verdict_of(known, q)}};
}

// One node and a page of its children.
Json tree_slice(Session& s, const httplib::Request& req) {
  std::string source = req.has_param("source") ? req.get_param_value("source") : (s.debug ? "debug" : "search");
  std::size_t node = query_size(req, "node", 0);
  std::size_t offset = query_size(req, "offset", 0);
  std::size_t limit = query_size(req, "limit", 50);
  Json out{{"source", source}, {"offset", offset}, {"limit", limit}};
  auto page = [&](const std::vector<std::size_t>& kids, auto&& render) {
    Json children = Json::array();
    for (std::size_t k = offset; k < kids.size() && k < offset + limit; ++k) children.push_back(render(kids[k]));
    out["children"] = children;
    out["total_children"] = kids.size();
  };
  if (source == "search") {
    if (!s.last_solve || !s.last_solve->tree) throw Conflict("no search tree recorded; run solve first");
    const auto& nodes = s.last_solve->tree->nodes;
    if (node >= nodes.size()) throw BadRequest("node out of range");
    auto render = [&](std::size_t k) {
      Json j = to_json(nodes[k]);
      j["id"] = k;
      return j;
    };
    out["node"] = render(node);
    out["truncated"] = s.last_solve->tree->truncated;
    page(nodes[node].children, render);
    return out;
  }
  if (source != "debug") throw BadRequest("source must be 'debug' or 'search'");
  DebugSession& d = live_debug(s);
  auto known = verdicts(s);
  if (d.options().mode == DebugMode::WrongAnswer) {
    if (!s.proof_tree) {
      SolveOptions so;
      so.rule = d.options().rule;
      so.budget = d.options().budget;
      so.max_answers = d.options().answer_index + 1;
      so.proofs = true;
      Outcome o = solve(s.program, std::vector<Literal>{Literal::positive(d.goal())}, so);
      if (o.answers.size() <= d.options().answer_index) throw Conflict("the debugged answer no longer exists");
      s.proof_tree = build_proof_tree(s.program, o.answers[d.options().answer_index]);
    }
    const ProofTree& t = *s.proof_tree;
    if (node >= t.nodes.size()) throw BadRequest("node out of range");
    out["node"] = proof_node_json(t, node, known);
    page(t.nodes[node].children, [&](std::size_t k) { return proof_node_json(t, k, known); });
    return out;
  }
  if (!s.call_tree)
    s.call_tree = std::make_unique<CallAnswerTree>(s.program, d.goal(), d.options().rule, d.options().budget);
  CallAnswerTree& t = *s.call_tree;
  if (node >= t.size()) throw BadRequest("node out of range");
  std::vector<std::size_t> kids = t.children(node);
  out["node"] = call_node_json(t, node, known);
  page(kids, [&](std::size_t k) { return call_node_json(t, k, known); });
  return out;
}

}  // namespace

void install_routes(httplib::Server& server, SessionStore& store) {
  server.Post("/sessions", [&store](const httplib::Request& req, httplib::Response& res) {
    try {
      Json body = parse_body(req);
      auto s = store.create(required(body, "program"), field<std::string>(body, "interpretation", ""),
                            parse_selection_rule(field<std::string>(body, "rule", "leftmost_delay")),
                            field<std::size_t>(body, "budget", 10000));
      Json preds = Json::array();
      for (const auto& f : s->program.predicates()) preds.push_back(f.to_string());
      reply(res, 201,
            {{"session", s->id},
             {"version", s->version},
             {"predicates", preds},
             {"warnings", s->program.warnings()},
             {"has_interpretation", s->interp.has_value()}});
    } catch (const BadRequest& e) {
      reply(res, 400, error_body("bad_request", e.what()));
    } catch (const std::exception& e) {
      reply(res, 422, error_json(e));
    }
  });

  server.Get(R"(/sessions/([A-Za-z0-9]+))", with_session(store, [](Session& s, const httplib::Request&, httplib::Response&) {
    return Json{{"session", s.id},
                {"rule", to_string(s.rule)},
                {"budget", s.budget},
                {"has_interpretation", s.interp.has_value()},
                {"last_solve", s.last_solve ? to_json(*s.last_solve) : Json(nullptr)},
                {"debug", s.debug ? debug_state_json(*s.debug) : Json(nullptr)}};
  }));

  server.Delete(R"(/sessions/([A-Za-z0-9]+))", [&store](const httplib::Request& req, httplib::Response& res) {
    if (!store.erase(req.matches[1])) {
      Json body = error_body("unknown_session", "no session " + std::string(req.matches[1]));
      body["version"] = nullptr;
      return reply(res, 404, body);
    }
    reply(res, 200, {{"deleted", std::string(req.matches[1])}, {"version", nullptr}});
  });

  server.Post(R"(/sessions/([A-Za-z0-9]+)/solve)",
              with_session(store, [](Session& s, const httplib::Request& req, httplib::Response&) {
                Json body = parse_body(req);
                SelectionRule rule = s.rule;
                if (body.contains("rule")) rule = parse_selection_rule(field<std::string>(body, "rule", ""));
                SolveOptions so = make_solve_options(rule, field<std::size_t>(body, "budget", s.budget),
                                                     field<bool>(body, "all", false), field<bool>(body, "trace", false));
                so.record_tree = true;
                s.last_solve = solve(s.program, required(body, "goal"), so);
                ++s.version;
                return Json{{"outcome", to_json(*s.last_solve)}};
              }));

  server.Post(R"(/sessions/([A-Za-z0-9]+)/debug)",
              with_session(store, [](Session& s, const httplib::Request& req, httplib::Response&) {
                Json body = parse_body(req);
                DebugOptions opts;
                opts.mode = parse_debug_mode(field<std::string>(body, "mode", "wrong"));
                opts.rule = body.contains("rule") ? parse_selection_rule(field<std::string>(body, "rule", "")) : s.rule;
                opts.budget = field<std::size_t>(body, "budget", s.budget);
                opts.answer_index = field<std::size_t>(body, "answer_index", 0);
                std::string oracle = field<std::string>(body, "oracle", "human");
                if (oracle != "human" && oracle != "interp" && oracle != "transcript")
                  throw BadRequest("oracle must be human, interp or transcript");
                if (oracle == "interp" && !s.interp) throw Conflict("session has no interpretation");
                auto records = parse_transcript(field<std::string>(body, "transcript", ""));
                auto d = std::make_unique<DebugSession>(s.program, parse_term(required(body, "goal")), opts);
                drive_debug(*d, records, oracle == "interp" ? &*s.interp : nullptr);
                s.debug = std::move(d);
                s.proof_tree.reset();
                s.call_tree.reset();
                ++s.version;
                return Json{{"debug", debug_state_json(*s.debug)}};
              }));

  server.Get(R"(/sessions/([A-Za-z0-9]+)/question)",
             with_session(store, [](Session& s, const httplib::Request&, httplib::Response&) {
               DebugSession& d = live_debug(s);
               return Json{{"pending", d.pending().has_value()},
                           {"question", d.pending() ? to_json(*d.pending()) : Json(nullptr)}};
             }));

  server.Post(R"(/sessions/([A-Za-z0-9]+)/answer)",
              with_session(store, [](Session& s, const httplib::Request& req, httplib::Response& res) {
                DebugSession& d = live_debug(s);
                if (!d.pending()) throw Conflict("no question is pending");
                Json body = parse_body(req);
                std::string text = field<std::string>(body, "verdict", "");
                auto v = verdict_from_string(text);
                if (!v || to_string(*v) != text) {
                  res.status = 422;
                  return error_body("invalid_verdict", "verdict must be correct, erroneous or inadmissible, got '" +
                                                           text + "'");
                }
                d.answer(*v);
                ++s.version;
                return Json{{"debug", debug_state_json(d)}};
              }));

  server.Get(R"(/sessions/([A-Za-z0-9]+)/diagnosis)",
             with_session(store, [](Session& s, const httplib::Request&, httplib::Response&) {
               DebugSession& d = live_debug(s);
               return Json{{"finished", d.finished()}, {"diagnosis", diagnosis_json(d.diagnosis())}};
             }));

  server.Get(R"(/sessions/([A-Za-z0-9]+)/tree)",
             with_session(store, [](Session& s, const httplib::Request& req, httplib::Response&) {
               return tree_slice(s, req);
             }));

  server.Get(R"(/sessions/([A-Za-z0-9]+)/transcript)",
             with_session(store, [](Session& s, const httplib::Request& req, httplib::Response& res) {
               DebugSession& d = live_debug(s);
               std::string text = format_transcript(d.transcript());
               if (req.has_param("format") && req.get_param_value("format") == "text") {
                 res.set_content(text, "text/plain");
                 return Json(nullptr);
               }
               Json records = Json::array();
               for (const auto& r : d.transcript()) records.push_back(to_json(r));
               return Json{{"records", records}, {"text", text}};
             }));

  server.set_error_handler([](const httplib::Request&, httplib::Response& res) {
    if (res.body.empty()) res.set_content(error_body("not_found", "no such route").dump(2), "application/json");
  });
}

int serve(const std::string& host, int port, std::ostream& log) {
  httplib::Server server;
  SessionStore store;
  install_routes(server, store);
  log << "listening on " << host << ":" << port << std::endl;
  return server.listen(host, port) ? 0 : 2;
}

}  // namespace lp3
