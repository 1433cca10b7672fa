// Command line front end: runs the built-in example families and the
// spec-driven checks, printing a short summary and writing a JSON report.
// Exit codes: 0 all verdicts match expectations, 1 a verdict mismatched or
// a search came back empty, 2 usage or malformed input.
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <chainforge/report.hpp>

namespace {

using chainforge::ConfigError;
using chainforge::Json;
using chainforge::RunOutcome;

std::uint64_t seed_from_env() {
  const char* s = std::getenv("CHAINFORGE_SEED");
  if (!s || !*s) return chainforge::kDefaultSeed;
  try {
    std::size_t used = 0;
    std::uint64_t v = std::stoull(s, &used);
    if (used != std::string(s).size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("CHAINFORGE_SEED must be an unsigned integer");
  }
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open spec file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Parse errors out of the JSON layer already carry line/column positions.
Json load_spec(const std::string& path, std::string* digest) {
  std::string text = slurp(path);
  *digest = chainforge::fnv1a_hex(text);
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

std::string join_args(int argc, char** argv) {
  std::string out;
  for (int i = 1; i < argc; ++i) {
    if (i > 1) out += ' ';
    out += argv[i];
  }
  return out;
}

// The fallback digest covers the semantic arguments only: where the report
// lands must not change its identity.
std::string digest_args(int argc, char** argv) {
  std::string out;
  for (int i = 1; i < argc; ++i) {
    std::string_view a = argv[i];
    if (a == "--out") {
      ++i;
      continue;
    }
    if (a.rfind("--out=", 0) == 0) continue;
    if (!out.empty()) out += ' ';
    out += a;
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ascending chain laboratory for monomial and matrix ideals"};
  app.require_subcommand(1);
  std::string out_path = "./report.json";
  app.add_option("--out", out_path, "report file path")->capture_default_str();

  // example <family> [--horizon H] [--n N]
  auto* ex = app.add_subcommand("example", "run a built-in example family");
  ex->fallthrough();
  std::string family;
  std::optional<int> horizon, nval;
  ex->add_option("family", family,
                 "one of ex2.1, ex2.2, ex2.4, ex3.4, ex4.5, exKL, ex6.3")
      ->required();
  ex->add_option("--horizon", horizon, "stages to materialize")->check(CLI::Range(1, 12));
  ex->add_option("--n", nval, "family size parameter or sample count")
      ->check(CLI::Range(1, 1000));

  // ideal check <spec.json> [--prime] [--semiprime] [--closure]
  auto* ideal = app.add_subcommand("ideal", "monomial ideal checks");
  ideal->fallthrough();
  ideal->require_subcommand(1);
  auto* icheck = ideal->add_subcommand("check", "decide properties of one ideal spec");
  icheck->fallthrough();
  std::string ideal_spec_path;
  bool want_prime = false, want_semiprime = false, want_closure = false;
  icheck->add_option("spec", ideal_spec_path, "ideal spec file")
      ->required()
      ->check(CLI::ExistingFile);
  icheck->add_flag("--prime", want_prime, "decide primality");
  icheck->add_flag("--semiprime", want_semiprime, "decide semiprimality");
  icheck->add_flag("--closure", want_closure, "compute the semiprime closure");

  // chain report <spec.json>
  auto* chain = app.add_subcommand("chain", "ascending chain reports");
  chain->fallthrough();
  chain->require_subcommand(1);
  auto* creport = chain->add_subcommand("report", "validate a chain spec and report verdicts");
  creport->fallthrough();
  std::string chain_spec_path;
  creport->add_option("spec", chain_spec_path, "chain spec file")
      ->required()
      ->check(CLI::ExistingFile);

  // grid check <spec.json> [--oracle-degree D]
  auto* grid = app.add_subcommand("grid", "2x2 matrix grid checks");
  grid->fallthrough();
  grid->require_subcommand(1);
  auto* gcheck = grid->add_subcommand("check", "decide grid properties against the oracle");
  gcheck->fallthrough();
  std::string grid_spec_path;
  int oracle_degree = 2;
  gcheck->add_option("spec", grid_spec_path, "grid spec file")
      ->required()
      ->check(CLI::ExistingFile);
  gcheck->add_option("--oracle-degree", oracle_degree, "degree bound for the squeezing oracle")
      ->check(CLI::Range(1, 4))
      ->capture_default_str();

  // freeproduct probe|witness|union
  auto* fp = app.add_subcommand("freeproduct", "graded free product checks");
  fp->fallthrough();
  fp->require_subcommand(1);
  auto* probe = fp->add_subcommand("probe", "two-sided stage outsider certificate");
  probe->fallthrough();
  std::string f_expr, fprime_expr;
  int probe_m = 0;
  probe->add_option("--f", f_expr, "left element")->required();
  probe->add_option("--fprime", fprime_expr, "right element")->required();
  probe->add_option("--m", probe_m, "stage index")->required()->check(CLI::Range(0, 24));
  auto* witness = fp->add_subcommand("witness", "constant-killing witness for a span");
  witness->fallthrough();
  std::vector<std::string> v_exprs;
  int witness_m = 0;
  std::string side = "right";
  witness->add_option("--v", v_exprs, "comma separated span of coefficients")
      ->required()
      ->delimiter(',');
  witness->add_option("--m", witness_m, "stage index")->required()->check(CLI::Range(0, 24));
  witness->add_option("--side", side, "which side the witness multiplies on")
      ->check(CLI::IsMember({"left", "right"}))
      ->capture_default_str();
  auto* funion = fp->add_subcommand("union", "stage chain absorption report");
  funion->fallthrough();
  int max_m = 6, samples = 25;
  funion->add_option("--max-m", max_m, "deepest stage to sample")
      ->check(CLI::Range(1, 24))
      ->capture_default_str();
  funion->add_option("--samples", samples, "sampled coefficients")
      ->check(CLI::Range(1, 1000))
      ->capture_default_str();

  // oracle compare <spec.json> --max-u U --max-w W
  auto* oracle = app.add_subcommand("oracle", "decision procedure cross checks");
  oracle->fallthrough();
  oracle->require_subcommand(1);
  auto* ocompare = oracle->add_subcommand("compare", "bounded scan against the decisions");
  ocompare->fallthrough();
  std::string oracle_spec_path;
  int max_u = 0, max_w = 0;
  ocompare->add_option("spec", oracle_spec_path, "ideal spec file")
      ->required()
      ->check(CLI::ExistingFile);
  ocompare->add_option("--max-u", max_u, "length bound for the outer pair")
      ->required()
      ->check(CLI::Range(1, 8));
  ocompare->add_option("--max-w", max_w, "length bound for the middle words")
      ->required()
      ->check(CLI::Range(1, 8));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  const std::string command = join_args(argc, argv);
  std::string digest = chainforge::fnv1a_hex(digest_args(argc, argv));
  try {
    std::uint64_t seed = seed_from_env();
    auto t0 = std::chrono::steady_clock::now();
    RunOutcome out;

    if (ex->parsed()) {
      chainforge::FamilyOptions opt{horizon, nval, seed};
      out = chainforge::run_family(family, opt);
    } else if (icheck->parsed()) {
      Json j = load_spec(ideal_spec_path, &digest);
      chainforge::spec::IdealSpec s = chainforge::spec::ideal_from_json(j, ideal_spec_path);
      out = chainforge::run_ideal_check(s, want_prime, want_semiprime, want_closure);
    } else if (creport->parsed()) {
      Json j = load_spec(chain_spec_path, &digest);
      if (j.is_object() && j.contains("builtin")) {
        std::string token = chainforge::spec::need_string(j, "builtin", chain_spec_path);
        Json params = j.value("params", Json::object());
        chainforge::FamilyOptions opt;
        opt.seed = seed;
        if (params.contains("horizon"))
          opt.horizon = chainforge::spec::need_int(params, "horizon", chain_spec_path);
        if (params.contains("n"))
          opt.n = chainforge::spec::need_int(params, "n", chain_spec_path);
        if (opt.horizon && (*opt.horizon < 1 || *opt.horizon > 12))
          throw ConfigError(chain_spec_path + ": params.horizon must be in 1..12");
        out = chainforge::run_family(token, opt);
      } else {
        chainforge::MonomialChain c =
            chainforge::spec::explicit_chain_from_json(j, chain_spec_path);
        out = chainforge::run_explicit_chain_report(c);
      }
    } else if (gcheck->parsed()) {
      Json j = load_spec(grid_spec_path, &digest);
      chainforge::spec::GridSpec g = chainforge::spec::grid_from_json(j, grid_spec_path);
      out = chainforge::run_grid_check(g, oracle_degree);
    } else if (probe->parsed()) {
      out = chainforge::run_free_probe(f_expr, fprime_expr, probe_m);
    } else if (witness->parsed()) {
      out = chainforge::run_free_witness(
          v_exprs, witness_m,
          side == "left" ? chainforge::WitnessSide::left : chainforge::WitnessSide::right);
    } else if (funion->parsed()) {
      out = chainforge::run_free_union_family(max_m, samples, seed);
    } else if (ocompare->parsed()) {
      Json j = load_spec(oracle_spec_path, &digest);
      chainforge::spec::IdealSpec s = chainforge::spec::ideal_from_json(j, oracle_spec_path);
      out = chainforge::run_oracle_compare(s, max_u, max_w);
    } else {
      std::cerr << "error: no subcommand selected\n";
      return 2;
    }

    auto t1 = std::chrono::steady_clock::now();
    long long ms = std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count();
    Json env = chainforge::envelope(command, digest, seed, out, ms);
    std::ofstream file(out_path, std::ios::binary);
    if (!file) {
      std::cerr << "error: cannot write report to " << out_path << "\n";
      return 2;
    }
    file << env.dump(2) << '\n';
    std::cout << out.summary << "\nreport: " << out_path << "\n";
    return out.ok ? 0 : 1;
  } catch (const chainforge::SearchBudgetError& e) {
    std::cerr << "search failed: " << e.what() << " (budget " << e.budget << ")\n";
    return 1;
  } catch (const chainforge::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 2;
  }
}
