#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "lp3/cli.hpp"
#include "lp3/json_io.hpp"
#include "test_support.hpp"

using namespace lp3;
using lp3::testing::corpus_path;

namespace {

struct CliRun {
  int code = -1;
  std::string out;
  std::string err;
};

CliRun cli(std::vector<std::string> args, const std::string& input = "") {
  std::istringstream in(input);
  std::ostringstream out, err;
  CliRun r;
  r.code = cli_main(args, in, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

class TempDir {
 public:
  TempDir() {
    path_ = std::filesystem::temp_directory_path() /
            ("lp3_cli_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) + "_" +
             ::testing::UnitTest::GetInstance()->current_test_info()->name());
    std::filesystem::create_directories(path_);
  }
  ~TempDir() { std::filesystem::remove_all(path_); }
  std::string write(const std::string& name, const std::string& text) const {
    auto p = path_ / name;
    std::ofstream(p) << text;
    return p.string();
  }
  std::string file(const std::string& name) const { return (path_ / name).string(); }

 private:
  std::filesystem::path path_;
};

std::string read(const std::string& path) {
  std::ifstream f(path);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

const char* kMergeInterp4 =
    "universe depth=0 ints=0..3 functors=[]/0,./2 lists=4\n"
    "spec merge/3 builtin:merge_sorted_numbers\n";

std::string merge_head_mutant() {
  std::string text = lp3::testing::read_corpus("fig1_merge.pl");
  std::string from = "merge(A.As, B.Bs, B.Cs) :- A > B";
  return text.replace(text.find(from), from.size(), "merge(A.As, B.Bs, A.Cs) :- A > B");
}

}  // namespace

TEST(Cli, CheckMergeIsModelNotStrong) {
  CliRun r = cli({"check", "--program", corpus_path("fig1_merge.pl"), "--interp", corpus_path("merge.interp")});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_EQ(r.out.substr(0, r.out.find('\n')), "model: yes, strong: no, completion: yes, strong completion: no");
  EXPECT_NE(r.out.find("merge([],0,0) is I, body is T"), std::string::npos);
  CliRun strict = cli({"check", "--program", corpus_path("fig1_merge.pl"), "--interp", corpus_path("merge.interp"),
                    "--condition", "strong"});
  EXPECT_EQ(strict.code, kExitFound);
}

TEST(Cli, CheckReportFileHasOneRecordPerViolation) {
  TempDir d;
  std::string prog = lp3::testing::read_corpus("fig1_merge.pl");
  prog.replace(prog.find("A =< B, "), 8, "");
  std::string pfile = d.write("m.pl", prog);
  std::string report = d.file("report.jsonl");
  CliRun r = cli({"check", "--program", pfile, "--interp", corpus_path("merge.interp"), "--report", report,
               "--max-witnesses", "3"});
  EXPECT_EQ(r.code, kExitFound);
  std::istringstream lines(read(report));
  std::string line;
  std::size_t model_records = 0;
  while (std::getline(lines, line)) {
    Json j = Json::parse(line);
    for (const char* k : {"predicate", "head", "head_value", "body_value", "kind", "disjunct", "witness", "note"})
      EXPECT_TRUE(j.contains(k)) << k;
    if (j["condition"] == "model") {
      ++model_records;
      EXPECT_EQ(j["kind"], "F<-T");
    }
  }
  EXPECT_EQ(model_records, 3u);
}

TEST(Cli, CheckJsonAndSynopsis) {
  CliRun r = cli({"check", "--program", corpus_path("fig5_subs.pl"), "--interp", corpus_path("subs.interp"),
               "--condition", "completion", "--synopsis", "--json"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  Json j = Json::parse(r.out);
  EXPECT_TRUE(j["completion"]["holds"].get<bool>());
  EXPECT_TRUE(j["synopsis"]["holds"].get<bool>());
}

TEST(Cli, SolveFig3) {
  CliRun fair = cli({"solve", "--program", corpus_path("fig3_floundering.pl"), "--goal", "p", "--rule", "fair", "--budget",
                  "10000"});
  EXPECT_EQ(fair.code, kExitOk);
  EXPECT_EQ(fair.out, "yes\n% 1 answer, exhaustive, 5 nodes\n");
  CliRun strict = cli({"solve", "--program", corpus_path("fig3_floundering.pl"), "--goal", "p", "--rule",
                    "strict_leftmost"});
  EXPECT_EQ(strict.code, kExitBudget);
}

TEST(Cli, SolveFailureAndTrace) {
  TempDir d;
  std::string p = d.write("p.pl", "p :- q.\nq :- fail_here.\n");
  CliRun r = cli({"solve", "--program", p, "--goal", "p", "--trace"});
  EXPECT_EQ(r.code, kExitFound);
  EXPECT_NE(r.out.find("0, +, p, resolve 1/1"), std::string::npos);
  EXPECT_NE(r.out.find("no\n"), std::string::npos);
}

TEST(Cli, SolveAllJson) {
  CliRun r = cli({"solve", "--program", corpus_path("fig5_subs.pl"), "--goal", "subs(X,[1,2])", "--all", "--json"});
  ASSERT_EQ(r.code, kExitOk);
  Json j = Json::parse(r.out);
  EXPECT_EQ(j["answers"].size(), 5u);
  EXPECT_TRUE(j["exhaustive"].get<bool>());
  CliRun first = cli({"solve", "--program", corpus_path("fig5_subs.pl"), "--goal", "subs(X,[1,2])", "--json"});
  EXPECT_EQ(Json::parse(first.out)["answers"].size(), 1u);
}

TEST(Cli, FixpointFittingOnPNotP) {
  CliRun r = cli({"fixpoint", "--op", "fitting", "--program", corpus_path("pnotp.pl")});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  Interpretation3 m = load_interpretation(r.out);
  EXPECT_EQ(m.truth_of(parse_term("p")), TruthValue::I);
  EXPECT_NE(r.err.find("converged"), std::string::npos);
}

TEST(Cli, FixpointOperatorNeedsInterpretation) {
  CliRun r = cli({"fixpoint", "--op", "t3plus", "--program", corpus_path("pnotp.pl")});
  EXPECT_EQ(r.code, kExitUsage);
  TempDir d;
  std::string out = d.file("out.interp");
  CliRun ok = cli({"fixpoint", "--op", "t3", "--program", corpus_path("pnotp.pl"), "--interp", corpus_path("pnotp.interp"),
                "--out", out});
  ASSERT_EQ(ok.code, kExitOk) << ok.err;
  EXPECT_EQ(read(out), ok.out);
}

TEST(Cli, EnumerateSets) {
  TempDir d;
  std::string p = d.write("e.pl", "even(0).\neven(s(s(N))) :- even(N).\n");
  CliRun r = cli({"enumerate", "--program", p, "--universe", "universe depth=3 functors=0/0,s/1", "--json"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  Json j = Json::parse(r.out);
  EXPECT_EQ(j["success"], Json::array({"even(0)", "even(s(s(0)))"}));
  EXPECT_EQ(j["finite_failure"].size(), 2u);
  CliRun loops = cli({"enumerate", "--program", corpus_path("fig2_e4_o2.pl"), "--interp", corpus_path("evenodd.interp"),
                   "--pred", "even/1"});
  EXPECT_EQ(loops.code, kExitOk) << loops.out;
}

TEST(Cli, NormalizeAndComplete) {
  CliRun n = cli({"normalize", "--program", corpus_path("fig1_merge.pl")});
  EXPECT_EQ(n.code, kExitOk);
  EXPECT_NE(n.out.find("merge("), std::string::npos);
  CliRun c = cli({"complete", "--program", corpus_path("pnotp.pl")});
  EXPECT_EQ(c.code, kExitOk);
  EXPECT_NE(c.out.find("not p"), std::string::npos) << c.out;
}

TEST(Cli, ParseErrorsCarryPositions) {
  TempDir d;
  std::string p = d.write("bad.pl", "p(a).\nq(X :- p(X).\n");
  CliRun r = cli({"solve", "--program", p, "--goal", "p(X)", "--json"});
  EXPECT_EQ(r.code, kExitUsage);
  Json j = Json::parse(r.out);
  EXPECT_EQ(j["error"]["kind"], "parse");
  EXPECT_EQ(j["error"]["line"], 2);
  EXPECT_NE(r.err.find("line 2"), std::string::npos);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(cli({}).code, kExitUsage);
  EXPECT_EQ(cli({"solve", "--goal", "p"}).code, kExitUsage);
  EXPECT_EQ(cli({"solve", "--program", "/nonexistent.pl", "--goal", "p"}).code, kExitUsage);
  EXPECT_EQ(cli({"solve", "--program", corpus_path("pnotp.pl"), "--goal", "p", "--rule", "sideways"}).code, kExitUsage);
  EXPECT_EQ(cli({"--help"}).code, kExitOk);
}

TEST(Cli, DebugWithInterpretationOracle) {
  TempDir d;
  std::string p = d.write("m.pl", merge_head_mutant());
  std::string i = d.write("m.interp", kMergeInterp4);
  CliRun r = cli({"debug", "--program", p, "--interp", i, "--oracle", "interp", "--goal", "merge([2,3],[1,2],X)"});
  EXPECT_EQ(r.code, kExitFound) << r.err;
  EXPECT_NE(r.out.find("diagnosis: incorrect_clause_instance"), std::string::npos);
  EXPECT_NE(r.out.find("predicate: merge/3, clause 4"), std::string::npos) << r.out;
}

TEST(Cli, DebugTranscriptRoundTrip) {
  TempDir d;
  std::string p = d.write("m.pl", merge_head_mutant());
  std::string i = d.write("m.interp", kMergeInterp4);
  std::string t = d.file("t.txt");
  CliRun first = cli({"debug", "--program", p, "--interp", i, "--oracle", "interp", "--goal", "merge([2,3],[1,2],X)",
                   "--save-transcript", t, "--json"});
  ASSERT_EQ(first.code, kExitFound);
  CliRun again = cli({"debug", "--program", p, "--oracle", "transcript", "--transcript", t, "--goal",
                   "merge([2,3],[1,2],X)", "--json"});
  ASSERT_EQ(again.code, kExitFound) << again.err;
  Json a = Json::parse(first.out), b = Json::parse(again.out);
  EXPECT_EQ(a["diagnosis"]["clause_number"], b["diagnosis"]["clause_number"]);
  EXPECT_EQ(a["diagnosis"]["instance"], b["diagnosis"]["instance"]);
  EXPECT_EQ(read(t), format_transcript(parse_transcript(read(t))));
  // Replays are byte-identical.
  CliRun third = cli({"debug", "--program", p, "--oracle", "transcript", "--transcript", t, "--goal",
                   "merge([2,3],[1,2],X)", "--json"});
  EXPECT_EQ(third.out, again.out);
}

TEST(Cli, DebugHumanPrompts) {
  TempDir d;
  std::string p = d.write("m.pl", merge_head_mutant());
  std::string t = d.file("t.txt");
  CliRun auto_run = cli({"debug", "--program", p, "--interp", d.write("m.interp", kMergeInterp4), "--oracle", "interp",
                      "--goal", "merge([2,3],[1,2],X)", "--save-transcript", t});
  std::string answers;
  auto records = parse_transcript(read(t));
  ASSERT_FALSE(records.empty());
  for (const auto& r : records) answers += to_string(r.verdict).substr(0, 1) + "\n";
  CliRun human = cli({"debug", "--program", p, "--goal", "merge([2,3],[1,2],X)"}, answers);
  EXPECT_EQ(human.code, kExitFound);
  EXPECT_EQ(human.out.rfind(records[0].question + " ? [c]orrect/[e]rroneous/[i]nadmissible: ", 0), 0u) << human.out;
  EXPECT_NE(human.out.find(auto_run.out), std::string::npos);
}

TEST(Cli, DebugExhaustedTranscriptIsAnError) {
  TempDir d;
  std::string p = d.write("m.pl", merge_head_mutant());
  std::string t = d.write("t.txt", "");
  CliRun r = cli({"debug", "--program", p, "--oracle", "transcript", "--transcript", t, "--goal", "merge([2,3],[1,2],X)"});
  EXPECT_EQ(r.code, kExitUsage);
  EXPECT_NE(r.err.find("transcript exhausted"), std::string::npos);
}

TEST(Cli, DebugNoBugAndBudget) {
  TempDir d;
  std::string i = d.write("m.interp", kMergeInterp4);
  CliRun correct = cli({"debug", "--program", corpus_path("fig1_merge.pl"), "--interp", i, "--oracle", "interp", "--goal",
                     "merge([1],[2],X)"});
  EXPECT_EQ(correct.code, kExitOk);
  EXPECT_NE(correct.out.find("no bug"), std::string::npos);
  CliRun inadmissible = cli({"debug", "--program", corpus_path("fig1_merge.pl"), "--interp", i, "--oracle", "interp",
                          "--goal", "merge([2,3],[2,1],X)"});
  EXPECT_EQ(inadmissible.code, kExitOk);
  EXPECT_NE(inadmissible.out.find("goal_inadmissible_no_bug"), std::string::npos);
  std::string e4o4 = d.write("e4o4.pl",
                            "even(N) :- e4(N).\nodd(N) :- o4(N).\ne4(N) :- not odd(N).\no4(N) :- not even(N).\n");
  CliRun loops = cli({"debug", "--program", e4o4, "--interp", corpus_path("evenodd.interp"),
                   "--oracle", "interp", "--mode", "missing", "--goal", "even(0)", "--budget", "100"});
  EXPECT_EQ(loops.code, kExitBudget) << loops.err;
}
