// Session store and HTTP/JSON routes over the solver and the debugger.
#pragma once

#include <chrono>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>

#include "lp3/json_io.hpp"

namespace httplib {
class Server;
}

namespace lp3 {

/// Feeds recorded answers to a session in order, then answers whatever is
/// still pending from the interpretation when one is given. Throws
/// TranscriptError when a record does not match the pending question.
void drive_debug(DebugSession& s, const std::vector<OracleAnswer>& transcript, const Interpretation3* interp);

/// {status: "pending"|"finished", question, diagnosis, transcript}.
Json debug_state_json(const DebugSession& s);

/// Solve options shared by the command line and the service: without `all`
/// the search stops at the first answer.
SolveOptions make_solve_options(SelectionRule rule, std::size_t budget, bool all, bool trace = false);

struct Session {
  std::string id;
  std::string program_text;
  ClausalProgram clausal;
  DisjunctiveProgram program;
  std::optional<Interpretation3> interp;
  SelectionRule rule = SelectionRule::LeftmostDelay;
  std::size_t budget = 10000;
  std::uint64_t version = 0;  // bumped on every change
  std::chrono::steady_clock::time_point expires;

  std::optional<Outcome> last_solve;  // with its recorded search tree
  std::unique_ptr<DebugSession> debug;
  // Views of the debug tree, built on first request.
  std::optional<ProofTree> proof_tree;
  std::unique_ptr<CallAnswerTree> call_tree;

  std::mutex mu;
};

class SessionStore {
 public:
  explicit SessionStore(std::chrono::seconds ttl = std::chrono::hours(1)) : ttl_(ttl) {}

  /// Parses the program and interpretation; throws ParseError or Error.
  std::shared_ptr<Session> create(const std::string& program, const std::string& interpretation,
                                  SelectionRule rule, std::size_t budget);
  /// nullptr for unknown or expired sessions; a hit extends the expiry.
  std::shared_ptr<Session> find(const std::string& id);
  bool erase(const std::string& id);
  std::size_t size();

 private:
  void purge(std::chrono::steady_clock::time_point now);

  std::chrono::seconds ttl_;
  std::mutex mu_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
  std::uint64_t next_ = 0;
};

void install_routes(httplib::Server& server, SessionStore& store);

/// Blocks serving on host:port until the process is stopped.
int serve(const std::string& host, int port, std::ostream& log);

}  // namespace lp3
