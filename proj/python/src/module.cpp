#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "lp3/cli.hpp"
#include "lp3/consequence.hpp"
#include "lp3/debugger.hpp"
#include "lp3/json_io.hpp"
#include "lp3/modelcheck.hpp"
#include "lp3/service.hpp"
#include "lp3/slddnf.hpp"

namespace py = pybind11;
using namespace lp3;

namespace {

// Results cross the boundary as JSON text; the Python side decodes them.
std::string solve_json(const std::string& program, const std::string& goal, const std::string& rule,
                       std::size_t budget, bool all) {
  auto p = to_disjunctive(parse_program(program));
  return to_json(solve(p, goal, make_solve_options(parse_selection_rule(rule), budget, all))).dump();
}

std::string check_json(const std::string& program, const std::string& interpretation, std::size_t max_witnesses) {
  auto p = to_disjunctive(parse_program(program));
  auto m = load_interpretation(interpretation);
  CheckOptions co;
  co.max_witnesses = max_witnesses;
  Json j = Json::object();
  j["model"] = to_json(check_model_program(p, m, co));
  j["strong"] = to_json(check_strong_model(p, m, StrongMode::Program, co));
  j["completion"] = to_json(check_model_completion(p, m, co));
  j["strong_completion"] = to_json(check_strong_model(p, m, StrongMode::Completion, co));
  return j.dump();
}

std::string fitting_json(const std::string& program, const std::string& interpretation) {
  auto p = to_disjunctive(parse_program(program));
  return to_json(fitting_lfp(p, load_interpretation(interpretation).universe())).dump();
}

std::string debug_json(const std::string& program, const std::string& goal, const std::string& interpretation,
                       const std::string& mode, const std::string& rule, std::size_t budget) {
  auto p = to_disjunctive(parse_program(program));
  auto m = load_interpretation(interpretation);
  DebugOptions opts;
  opts.mode = parse_debug_mode(mode);
  opts.rule = parse_selection_rule(rule);
  opts.budget = budget;
  InterpretationOracle o(m);
  OracleSession s(o);
  auto d = debug_goal(p, parse_term(goal), s, opts);
  Json j = Json::object();
  j["diagnosis"] = diagnosis_json(d);
  j["transcript"] = format_transcript(s.transcript());
  return j.dump();
}

py::tuple run_cli(const std::vector<std::string>& args, const std::string& input) {
  std::istringstream in(input);
  std::ostringstream out, err;
  int code;
  {
    py::gil_scoped_release release;
    code = cli_main(args, in, out, err);
  }
  return py::make_tuple(code, out.str(), err.str());
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  py::register_exception<Error>(m, "Lp3Error", PyExc_ValueError);
  m.def("solve_json", &solve_json, py::arg("program"), py::arg("goal"), py::arg("rule") = "leftmost_delay",
        py::arg("budget") = 10000, py::arg("all") = false);
  m.def("check_json", &check_json, py::arg("program"), py::arg("interpretation"), py::arg("max_witnesses") = 5);
  m.def("fitting_json", &fitting_json, py::arg("program"), py::arg("interpretation"));
  m.def("debug_json", &debug_json, py::arg("program"), py::arg("goal"), py::arg("interpretation"),
        py::arg("mode") = "wrong", py::arg("rule") = "leftmost_delay", py::arg("budget") = 10000);
  m.def("run_cli", &run_cli, py::arg("args"), py::arg("input") = "");
}
