#include "lp3/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include "lp3/service.hpp"

namespace lp3 {

namespace {

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error("cannot read " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot write " + path);
  f << text;
}

// Error raised with an exit code other than the usage default.
struct ExitError : Error {
  ExitError(int code, const std::string& what) : Error(what), code(code) {}
  int code;
};

// Options shared across subcommands; each subcommand reads the ones it registered.
struct Options {
  std::string program;
  std::string interp;
  std::string universe;
  std::uint32_t depth = 2;
  std::string rule = "leftmost_delay";
  std::size_t budget = 10000;
  bool json = false;

  std::string goal;
  bool all = false;
  bool trace = false;

  std::string condition = "model";
  bool synopsis = false;
  std::string report;
  std::size_t max_witnesses = 5;

  std::string op = "fitting";
  std::string out_file;
  std::size_t max_iters = 0;
  bool semi_naive = false;

  std::string set = "both";
  std::vector<std::string> preds;

  std::string mode = "wrong";
  std::string oracle = "human";
  std::string transcript;
  std::string save_transcript;
  std::size_t answer = 1;

  std::string host = "127.0.0.1";
  int port = 8080;
};

struct Loaded {
  ClausalProgram clausal;
  DisjunctiveProgram program;
};

// Parse errors name the file they came from.
Loaded load_program(const std::string& path) {
  std::string text = read_file(path);
  try {
    Loaded l;
    l.clausal = parse_program(text);
    l.program = to_disjunctive(l.clausal);
    return l;
  } catch (const ParseError& e) {
    throw ParseError(e.pos(), path + ": " + e.message());
  }
}

Interpretation3 load_interp(const std::string& path) {
  std::string text = read_file(path);
  try {
    return load_interpretation(text);
  } catch (const std::exception& e) {
    throw Error(std::string(e.what()).rfind("line ", 0) == 0 ? std::string(e.what()) : path + ": " + e.what());
  }
}

void collect_functors(const Term& t, std::set<Functor>& out, std::optional<std::pair<std::int64_t, std::int64_t>>& ints) {
  if (t.is_var()) return;
  if (t.is_int()) {
    auto v = t.int_value();
    ints = ints ? std::make_pair(std::min(ints->first, v), std::max(ints->second, v)) : std::make_pair(v, v);
    return;
  }
  out.insert(Functor{t.name(), t.arity()});
  for (const auto& a : t.args()) collect_functors(a, out, ints);
}

// The universe named on the command line, the interpretation's, or the
// terms built from the program's own function symbols up to --depth.
UniversePtr universe_for(const Options& o, const Loaded& l, const std::optional<Interpretation3>& m) {
  if (!o.universe.empty()) return std::make_shared<const BoundedUniverse>(BoundedUniverse::parse(o.universe).config());
  if (m) return m->universe();
  UniverseConfig c;
  std::set<Functor> fs;
  for (const auto& cl : l.clausal.clauses) {
    for (const auto& a : cl.head.args()) collect_functors(a, fs, c.ints);
    for (const auto& b : cl.body)
      for (const auto& a : b.atom.args()) collect_functors(a, fs, c.ints);
  }
  c.functors.assign(fs.begin(), fs.end());
  bool constant = c.ints.has_value();
  for (const auto& f : c.functors) constant = constant || f.arity == 0;
  if (!constant) c.functors.push_back(Functor{"a", 0});
  c.max_depth = o.depth;
  return std::make_shared<const BoundedUniverse>(c);
}

std::vector<Functor> parse_preds(const std::vector<std::string>& specs) {
  std::vector<Functor> out;
  for (const auto& s : specs) {
    auto slash = s.rfind('/');
    if (slash == std::string::npos) throw Error("expected name/arity, got '" + s + "'");
    out.push_back(Functor{s.substr(0, slash), static_cast<std::size_t>(std::stoul(s.substr(slash + 1)))});
  }
  return out;
}

std::string yes_no(bool b) { return b ? "yes" : "no"; }

int cmd_normalize(const Options& o, std::ostream& out) {
  Loaded l = load_program(o.program);
  if (o.json) {
    Json preds = Json::array();
    for (const auto& f : l.program.predicates()) preds.push_back(f.to_string());
    out << Json{{"program", l.program.to_string()}, {"predicates", preds}, {"warnings", l.program.warnings()}}.dump(2)
        << "\n";
  } else {
    for (const auto& w : l.program.warnings()) out << "% warning: " << w << "\n";
    out << l.program.to_string();
  }
  return kExitOk;
}

int cmd_complete(const Options& o, std::ostream& out) {
  Loaded l = load_program(o.program);
  CompletedProgram c = completion(l.program);
  if (o.json)
    out << Json{{"completion", c.to_string()}}.dump(2) << "\n";
  else
    out << c.to_string();
  return kExitOk;
}

int cmd_check(const Options& o, std::ostream& out) {
  Loaded l = load_program(o.program);
  Interpretation3 m = load_interp(o.interp);
  CheckOptions co;
  co.max_witnesses = o.max_witnesses;
  std::vector<std::pair<std::string, CheckReport>> reports = {
      {"model", check_model_program(l.program, m, co)},
      {"strong", check_strong_model(l.program, m, StrongMode::Program, co)},
      {"completion", check_model_completion(l.program, m, co)},
      {"strong_completion", check_strong_model(l.program, m, StrongMode::Completion, co)},
  };
  const CheckReport* chosen = nullptr;
  for (const auto& [name, r] : reports)
    if (name == o.condition) chosen = &r;
  if (!chosen) throw Error("unknown condition '" + o.condition + "'");
  std::optional<SynopsisReport> syn;
  if (o.synopsis) syn = verify_synopsis(l.clausal, m);

  if (!o.report.empty()) {
    std::string lines;
    for (const auto& [name, r] : reports)
      for (const auto& v : r.violations) {
        Json j = to_json(v);
        j["condition"] = name;
        lines += j.dump() + "\n";
      }
    write_file(o.report, lines);
  }
  if (o.json) {
    Json j = Json::object();
    for (const auto& [name, r] : reports) j[name] = to_json(r);
    if (syn) j["synopsis"] = to_json(*syn);
    out << j.dump(2) << "\n";
  } else {
    out << "model: " << yes_no(reports[0].second.holds) << ", strong: " << yes_no(reports[1].second.holds)
        << ", completion: " << yes_no(reports[2].second.holds)
        << ", strong completion: " << yes_no(reports[3].second.holds) << "\n";
    for (const auto& [name, r] : reports) {
      if (r.holds) continue;
      out << name << ": " << r.violation_count << " violation(s)" << (r.bounded ? " (bounded)" : "") << "\n";
      for (const auto& v : r.violations) out << "  " << v.to_string() << "\n";
    }
    if (syn) out << syn->to_text();
  }
  return chosen->holds ? kExitOk : kExitFound;
}

int cmd_fixpoint(const Options& o, std::ostream& out, std::ostream& err) {
  Loaded l = load_program(o.program);
  std::optional<Interpretation3> m;
  if (!o.interp.empty()) m = load_interp(o.interp);
  Json j;
  std::string text;
  if (o.op == "fitting") {
    std::optional<std::size_t> iters;
    if (o.max_iters) iters = o.max_iters;
    FixpointResult r = fitting_lfp(l.program, universe_for(o, l, m), iters,
                                   o.semi_naive ? IterationMode::SemiNaive : IterationMode::Naive);
    j = to_json(r);
    text = save_interpretation(r.model);
    err << "fitting: " << r.iterations << " iteration(s), " << (r.converged ? "converged" : "not converged")
        << (r.bounded ? ", bounded" : "") << "\n";
    if (!r.converged) {
      if (!o.out_file.empty()) write_file(o.out_file, text);
      out << (o.json ? j.dump(2) + "\n" : text);
      return kExitBudget;
    }
  } else {
    auto k = operator_from_string(o.op);
    if (!k) throw Error("unknown operator '" + o.op + "'");
    if (!m) throw Error("--op " + o.op + " needs --interp");
    Interpretation3 r = apply_operator(*k, l.program, *m);
    text = save_interpretation(r);
    j = {{"model", text}};
  }
  if (!o.out_file.empty()) write_file(o.out_file, text);
  out << (o.json ? j.dump(2) + "\n" : text);
  return kExitOk;
}

int solve_exit(const Outcome& r) {
  if (r.succeeded()) return kExitOk;
  if (r.finitely_failed) return kExitFound;
  return kExitBudget;
}

int cmd_solve(const Options& o, std::ostream& out) {
  Loaded l = load_program(o.program);
  Outcome r = solve(l.program, o.goal, make_solve_options(parse_selection_rule(o.rule), o.budget, o.all, o.trace));
  if (o.json) {
    out << to_json(r).dump(2) << "\n";
  } else {
    for (const auto& t : r.trace) out << t << "\n";
    for (const auto& a : r.answers) out << a.to_string() << "\n";
    if (!r.succeeded()) out << "no\n";
    out << "% " << r.summary() << "\n";
  }
  return solve_exit(r);
}

int cmd_enumerate(const Options& o, std::ostream& out) {
  Loaded l = load_program(o.program);
  std::optional<Interpretation3> m;
  if (!o.interp.empty()) m = load_interp(o.interp);
  if (o.set != "ss" && o.set != "ff" && o.set != "both") throw Error("--set must be ss, ff or both");
  SuccessSetReport r =
      success_set(l.program, *universe_for(o, l, m), parse_selection_rule(o.rule), o.budget, parse_preds(o.preds));
  if (o.json) {
    Json j = to_json(r);
    if (o.set == "ss") j.erase("finite_failure");
    if (o.set == "ff") j.erase("success");
    out << j.dump(2) << "\n";
  } else {
    auto list = [&](const char* name, const std::vector<Term>& ts) {
      out << name << " (" << ts.size() << "):";
      for (const auto& t : ts) out << " " << t.to_string();
      out << "\n";
    };
    if (o.set != "ff") list("success", r.success);
    if (o.set != "ss") list("finite failure", r.finite_failure);
    list("unresolved", r.unresolved);
  }
  return r.unresolved.empty() ? kExitOk : kExitBudget;
}

int cmd_debug(const Options& o, std::istream& in, std::ostream& out, std::ostream& err) {
  Loaded l = load_program(o.program);
  if (o.oracle != "human" && o.oracle != "interp" && o.oracle != "transcript")
    throw Error("--oracle must be human, interp or transcript");
  std::optional<Interpretation3> m;
  if (!o.interp.empty()) m = load_interp(o.interp);
  if (o.oracle == "interp" && !m) throw Error("--oracle interp needs --interp");
  if (o.oracle == "transcript" && o.transcript.empty()) throw Error("--oracle transcript needs --transcript");
  if (o.answer == 0) throw Error("--answer counts from 1");

  DebugOptions opts;
  opts.mode = parse_debug_mode(o.mode);
  opts.rule = parse_selection_rule(o.rule);
  opts.budget = o.budget;
  opts.answer_index = o.answer - 1;
  Term goal = parse_term(o.goal);

  // Out-of-budget searches are inconclusive rather than usage errors.
  SolveOptions so = make_solve_options(opts.rule, opts.budget, true);
  so.max_answers = opts.mode == DebugMode::WrongAnswer ? opts.answer_index + 1 : 0;
  Outcome pre = solve(l.program, std::vector<Literal>{Literal::positive(goal)}, so);
  if (opts.mode == DebugMode::WrongAnswer && pre.answers.size() <= opts.answer_index)
    throw ExitError(pre.budget_exhausted ? kExitBudget : kExitUsage,
                    "goal " + goal.to_string() + " has no answer #" + std::to_string(o.answer) + " (" + pre.summary() + ")");
  if (opts.mode == DebugMode::MissingAnswer && !pre.exhaustive)
    throw ExitError(pre.budget_exhausted ? kExitBudget : kExitUsage,
                    "missing-answer debugging needs a complete search (" + pre.summary() + ")");

  std::vector<OracleAnswer> records;
  if (!o.transcript.empty()) records = parse_transcript(read_file(o.transcript));
  DebugSession s(l.program, goal, opts);
  drive_debug(s, records, o.oracle == "interp" ? &*m : nullptr);
  if (s.pending()) {
    if (o.oracle == "transcript") throw TranscriptExhausted(*s.pending());
    HumanOracle h(in, o.json ? err : out);
    while (s.pending()) s.answer(h.ask(*s.pending()), OracleSource::Human);
  }
  if (!o.save_transcript.empty()) write_file(o.save_transcript, format_transcript(s.transcript()));

  const auto& d = s.diagnosis();
  if (o.json)
    out << debug_state_json(s).dump(2) << "\n";
  else if (d)
    out << d->to_string();
  else
    out << "no bug: the " << (opts.mode == DebugMode::WrongAnswer ? "answer" : "answer set") << " is correct\n";
  return d && d->kind != DiagnosisKind::GoalInadmissibleNoBug ? kExitFound : kExitOk;
}

void report_error(const std::exception& e, bool json, std::ostream& out, std::ostream& err) {
  Json j = error_json(e);
  const Json& body = j["error"];
  err << "error";
  if (body.contains("line")) {
    err << " at line " << body["line"].get<int>();
    if (body.contains("column")) err << ", column " << body["column"].get<int>();
  }
  err << ": " << body["message"].get<std::string>() << "\n";
  if (json) out << j.dump(2) << "\n";
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Three-valued semantics toolkit for pure Prolog programs", "lp3"};
  app.require_subcommand(1);
  Options o;

  auto program_opt = [&](CLI::App* c) { c->add_option("--program", o.program, "program file")->required(); };
  auto json_opt = [&](CLI::App* c) { c->add_flag("--json", o.json, "structured output"); };
  auto engine_opts = [&](CLI::App* c) {
    c->add_option("--rule", o.rule, "leftmost_delay, fair or strict_leftmost");
    c->add_option("--budget", o.budget, "node budget");
  };
  auto universe_opts = [&](CLI::App* c) {
    c->add_option("--interp", o.interp, "interpretation file (its universe is used)");
    c->add_option("--universe", o.universe, "universe line, e.g. \"universe depth=2 functors=0/0,s/1\"");
    c->add_option("--depth", o.depth, "term depth of the universe built from the program");
  };

  auto* normalize = app.add_subcommand("normalize", "print the disjunctive form");
  program_opt(normalize);
  json_opt(normalize);

  auto* complete = app.add_subcommand("complete", "print the completion");
  program_opt(complete);
  json_opt(complete);

  auto* check = app.add_subcommand("check", "check model conditions against an interpretation");
  program_opt(check);
  json_opt(check);
  check->add_option("--interp", o.interp, "interpretation file")->required();
  check->add_option("--condition", o.condition, "condition deciding the exit code")
      ->check(CLI::IsMember({"model", "strong", "completion", "strong_completion"}));
  check->add_flag("--synopsis", o.synopsis, "add the per-atom synopsis report");
  check->add_option("--report", o.report, "write violations as JSON lines");
  check->add_option("--max-witnesses", o.max_witnesses, "violations listed per condition");

  auto* fixpoint = app.add_subcommand("fixpoint", "apply an operator or compute the Fitting fixpoint");
  program_opt(fixpoint);
  json_opt(fixpoint);
  universe_opts(fixpoint);
  fixpoint->add_option("--op", o.op, "t3, t3plus, t3minus or fitting")
      ->check(CLI::IsMember({"t3", "t3plus", "t3minus", "fitting", "tp"}));
  fixpoint->add_option("--out", o.out_file, "write the interpretation file");
  fixpoint->add_option("--max-iters", o.max_iters, "iteration cap for fitting");
  fixpoint->add_flag("--semi-naive", o.semi_naive, "semi-naive iteration");

  auto* solve_cmd = app.add_subcommand("solve", "run a goal");
  program_opt(solve_cmd);
  json_opt(solve_cmd);
  engine_opts(solve_cmd);
  solve_cmd->add_option("--goal", o.goal, "goal")->required();
  solve_cmd->add_flag("--all", o.all, "all answers");
  solve_cmd->add_flag("--trace", o.trace, "print the search trace");

  auto* enumerate = app.add_subcommand("enumerate", "success and finite-failure sets over a universe");
  program_opt(enumerate);
  json_opt(enumerate);
  engine_opts(enumerate);
  universe_opts(enumerate);
  enumerate->add_option("--set", o.set, "ss, ff or both");
  enumerate->add_option("--pred", o.preds, "predicate name/arity (repeatable)");

  auto* debug = app.add_subcommand("debug", "diagnose a wrong or missing answer");
  program_opt(debug);
  json_opt(debug);
  engine_opts(debug);
  debug->add_option("--goal", o.goal, "single-atom goal")->required();
  debug->add_option("--mode", o.mode, "wrong or missing");
  debug->add_option("--oracle", o.oracle, "human, interp or transcript");
  debug->add_option("--interp", o.interp, "intended interpretation");
  debug->add_option("--transcript", o.transcript, "recorded answers to replay first");
  debug->add_option("--save-transcript", o.save_transcript, "write the answers given");
  debug->add_option("--answer", o.answer, "which answer is wrong, from 1");

  auto* serve_cmd = app.add_subcommand("serve", "run the HTTP service");
  serve_cmd->add_option("--port", o.port, "port");
  serve_cmd->add_option("--host", o.host, "address to bind");

  std::vector<const char*> argv{"lp3"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (normalize->parsed()) return cmd_normalize(o, out);
    if (complete->parsed()) return cmd_complete(o, out);
    if (check->parsed()) return cmd_check(o, out);
    if (fixpoint->parsed()) return cmd_fixpoint(o, out, err);
    if (solve_cmd->parsed()) return cmd_solve(o, out);
    if (enumerate->parsed()) return cmd_enumerate(o, out);
    if (debug->parsed()) return cmd_debug(o, in, out, err);
    if (serve_cmd->parsed()) return serve(o.host, o.port, err);
  } catch (const ExitError& e) {
    report_error(e, o.json, out, err);
    return e.code;
  } catch (const std::exception& e) {
    report_error(e, o.json, out, err);
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace lp3
