// End-to-end checks of the command line tool: exit code contract, report
// envelope shape, and byte-identical bodies across repeated runs.
#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include <json.hpp>

using Json = nlohmann::ordered_json;

namespace {

struct CliRun {
  int exit_code = -1;
  std::string out;  // captured stdout
  Json report;      // parsed --out file, null when absent
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

CliRun run_cli(const std::string& args, const std::string& tag,
               const std::string& seed = "1729") {
  std::string base = "/tmp/chainforge_cli_" + tag;
  std::string report_path = base + ".json";
  std::string cmd = "CHAINFORGE_SEED=" + seed + " " + CHAINFORGE_CLI_PATH + " " + args +
                    " --out " + report_path + " > " + base + ".out 2> " + base + ".err";
  int rc = std::system(cmd.c_str());
  CliRun r;
  r.exit_code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  r.out = slurp(base + ".out");
  std::string body = slurp(report_path);
  r.report = body.empty() ? Json() : Json::parse(body, nullptr, false);
  std::remove(report_path.c_str());
  return r;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream(path, std::ios::binary) << text;
}

}  // namespace

TEST_CASE("example subcommand reports verdicts and exits zero") {
  CliRun r = run_cli("example ex2.1 --horizon 6", "ex21");
  REQUIRE(r.exit_code == 0);
  REQUIRE(r.report.is_object());
  CHECK(r.report["schema_version"] == 1);
  CHECK(r.report["tool"] == "chainforge");
  CHECK(r.report["ok"] == true);
  CHECK(r.report.contains("timing_ms"));
  CHECK_FALSE(r.report["body"].contains("timing_ms"));

  const Json& body = r.report["body"];
  CHECK(body["family"] == "ex2.1");
  CHECK(body["report"]["index_lower_bound"] == 1);
  CHECK(body["validation"]["ok"] == true);
  for (const Json& s : body["report"]["stages"]) CHECK(s["prime"] == true);
  const Json& lim = body["report"]["limits"][0];
  CHECK(lim["semiprime"] == false);
  CHECK(lim["semiprime_witness"] == "x");
  CHECK(r.out.find("index lower bound 1") != std::string::npos);

  CliRun r63 = run_cli("example ex6.3 --n 3", "ex63");
  REQUIRE(r63.exit_code == 0);
  CHECK(r63.report["body"]["report"]["index_lower_bound"] == 2);
  CHECK(r63.report["body"]["report"]["index_below_matrix_size"] == true);
}

TEST_CASE("repeated runs emit byte-identical bodies") {
  CliRun a = run_cli("example ex3.4 --n 12", "det_a", "907");
  CliRun b = run_cli("example ex3.4 --n 12", "det_b", "907");
  REQUIRE(a.exit_code == 0);
  REQUIRE(b.exit_code == 0);
  CHECK(a.report["body"].dump() == b.report["body"].dump());
  CHECK(a.report["seed"] == b.report["seed"]);
  CHECK(a.report["input_digest"] == b.report["input_digest"]);

  CliRun c = run_cli("freeproduct union --max-m 5 --samples 9", "det_c", "55");
  CliRun d = run_cli("freeproduct union --max-m 5 --samples 9", "det_d", "55");
  REQUIRE(c.exit_code == 0);
  CHECK(c.report["body"].dump() == d.report["body"].dump());
}

TEST_CASE("exit codes follow the contract") {
  CHECK(run_cli("example ex2.1 --horizon 13", "cap").exit_code == 2);
  CHECK(run_cli("example ex9.9", "unknown").exit_code == 2);
  CHECK(run_cli("bogus", "nosub").exit_code == 2);

  write_file("/tmp/chainforge_cli_prime_spec.json",
             R"({"alphabet": "xy", "generators": ["x"], "expect": "not_prime"})");
  CHECK(run_cli("ideal check /tmp/chainforge_cli_prime_spec.json --prime", "mismatch")
            .exit_code == 1);

  write_file("/tmp/chainforge_cli_prime_ok.json",
             R"({"alphabet": "xy", "generators": ["x"], "expect": ["prime", "semiprime"]})");
  CHECK(run_cli("ideal check /tmp/chainforge_cli_prime_ok.json", "match").exit_code == 0);

  write_file("/tmp/chainforge_cli_broken.json", R"({"alphabet": "xy", "generators": 7})");
  CHECK(run_cli("ideal check /tmp/chainforge_cli_broken.json", "badfield").exit_code == 2);

  write_file("/tmp/chainforge_cli_syntax.json", R"({"alphabet: )");
  CHECK(run_cli("ideal check /tmp/chainforge_cli_syntax.json", "badsyntax").exit_code == 2);

  CHECK(run_cli("ideal check /tmp/chainforge_cli_nonexistent.json", "missing").exit_code == 2);
}

TEST_CASE("chain specs route to builders") {
  write_file("/tmp/chainforge_cli_chain_builtin.json",
             R"({"builtin": "ex2_2", "params": {"n": 2, "horizon": 2}})");
  CliRun r = run_cli("chain report /tmp/chainforge_cli_chain_builtin.json", "cbuiltin");
  REQUIRE(r.exit_code == 0);
  CHECK(r.report["body"]["report"]["index_lower_bound"] == 2);

  write_file("/tmp/chainforge_cli_chain_explicit.json", R"({"explicit": [
    {"alphabet": "xy", "generators": ["xx"]},
    {"alphabet": "xy", "generators": ["x"]}
  ]})");
  CliRun e = run_cli("chain report /tmp/chainforge_cli_chain_explicit.json", "cexplicit");
  REQUIRE(e.exit_code == 0);
  CHECK(e.report["body"]["report"]["index_lower_bound"] == 0);

  // A declared limit the stages cannot reach fails validation, not parsing.
  write_file("/tmp/chainforge_cli_chain_over.json", R"({"explicit": [
    {"alphabet": "xy", "generators": ["xx"]}
  ], "limit": {"alphabet": "xy", "generators": ["x"]}})");
  CHECK(run_cli("chain report /tmp/chainforge_cli_chain_over.json", "cover").exit_code == 1);

  write_file("/tmp/chainforge_cli_chain_desc.json", R"({"explicit": [
    {"alphabet": "xy", "generators": ["x"]},
    {"alphabet": "xy", "generators": ["xx"]}
  ]})");
  CHECK(run_cli("chain report /tmp/chainforge_cli_chain_desc.json", "cdesc").exit_code == 2);
}

TEST_CASE("freeproduct subcommands certify their outputs") {
  CliRun w = run_cli("freeproduct witness --v 1,y --m 2", "fw");
  REQUIRE(w.exit_code == 0);
  CHECK(w.report["body"]["witness"] == "(1)/(y^3)");
  CHECK(w.report["body"]["found"] == true);

  CliRun p = run_cli("freeproduct probe --f 'x*(1/y^2)*x' --fprime 'x*(1/y^2)*x' --m 1", "fp");
  REQUIRE(p.exit_code == 0);
  CHECK(p.report["body"]["certificate"]["verified"] == true);

  CHECK(run_cli("freeproduct witness --v 0 --m 1", "fzero").exit_code == 2);
  CHECK(run_cli("freeproduct witness --v 1,x --m 1", "fx").exit_code == 2);
}

TEST_CASE("grid check compares decisions against the oracle") {
  write_file("/tmp/chainforge_cli_grid.json", R"({
    "module": {"families": [1]},
    "entries": [[{"families": [1]}, {"families": [1]}],
                [{"families": [1]}, {"families": [1]}]],
    "expect": ["not_prime", "semiprime"]})");
  CliRun g = run_cli("grid check /tmp/chainforge_cli_grid.json", "grid");
  REQUIRE(g.exit_code == 0);
  CHECK(g.report["body"]["semiprime"] == true);
  CHECK(g.report["body"]["prime"] == false);
  CHECK(g.report["body"]["oracle_counterexample"].is_null());

  write_file("/tmp/chainforge_cli_grid_bad.json", R"({
    "module": {"families": [1]},
    "entries": [[{"families": [1]}, {"families": [1]}],
                [{"families": [1]}, {"families": [1]}]],
    "expect": "prime"})");
  CHECK(run_cli("grid check /tmp/chainforge_cli_grid_bad.json", "gridbad").exit_code == 1);

  // A non-semiprime grid: the square of a variable in every slot. The module
  // carries every matrix unit, so all four entries must agree.
  write_file("/tmp/chainforge_cli_grid_sq.json", R"({
    "module": {"families": [1]},
    "entries": [
      [{"monomials": [[{"family": 1, "index": 1, "exp": 2}]]},
       {"monomials": [[{"family": 1, "index": 1, "exp": 2}]]}],
      [{"monomials": [[{"family": 1, "index": 1, "exp": 2}]]},
       {"monomials": [[{"family": 1, "index": 1, "exp": 2}]]}]],
    "expect": "not_semiprime"})");
  CliRun sq = run_cli("grid check /tmp/chainforge_cli_grid_sq.json", "gridsq");
  REQUIRE(sq.exit_code == 0);
  CHECK(sq.report["body"]["semiprime"] == false);
  CHECK_FALSE(sq.report["body"]["oracle_counterexample"].is_null());
}

TEST_CASE("oracle compare cross checks the decisions") {
  write_file("/tmp/chainforge_cli_oracle.json",
             R"({"alphabet": "xy", "generators": ["xyx", "yy"]})");
  CliRun r = run_cli("oracle compare /tmp/chainforge_cli_oracle.json --max-u 4 --max-w 4",
                     "oracle");
  REQUIRE(r.exit_code == 0);
  CHECK(r.report["body"]["prime"]["decision"] == false);
  CHECK(r.report["body"]["prime"]["scan_violation"] == true);

  CHECK(run_cli("oracle compare /tmp/chainforge_cli_oracle.json --max-u 4", "oraclemiss")
            .exit_code == 2);
}
