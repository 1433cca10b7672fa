#pragma once

// Runners behind the command line. Each one materializes a family or loads
// a spec, computes its verdicts, checks them against the facts the input is
// known to exhibit, and returns a JSON body plus a short human summary.
// Bodies are deterministic for a fixed command and seed; anything that can
// vary between runs (timings) stays out of them.

#include <algorithm>
#include <array>
#include <cstdint>
#include <cstdio>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <chainforge/chains.hpp>
#include <chainforge/free_product.hpp>
#include <chainforge/json_io.hpp>
#include <chainforge/kl_ring.hpp>
#include <chainforge/random.hpp>
#include <chainforge/rn_ring.hpp>
#include <chainforge/version.hpp>

namespace chainforge {

inline constexpr std::uint64_t kDefaultSeed = 1729;

struct RunOutcome {
  Json body;
  std::string summary;
  bool ok = true;
};

namespace detail {

// Named facts a family is expected to exhibit; a run is ok only when every
// fact held. The list goes into the report body so mismatches are visible.
class FactSheet {
 public:
  void check(const std::string& fact, bool held) {
    facts_.emplace_back(fact, held);
    if (!held) ok_ = false;
  }

  bool ok() const { return ok_; }

  Json json() const {
    Json out = Json::array();
    for (const auto& [fact, held] : facts_)
      out.push_back(Json{{"fact", fact}, {"held", held}});
    return out;
  }

  std::string failed() const {
    std::string out;
    for (const auto& [fact, held] : facts_)
      if (!held) out += (out.empty() ? "" : "; ") + fact;
    return out;
  }

 private:
  std::vector<std::pair<std::string, bool>> facts_;
  bool ok_ = true;
};

inline std::string fact_line(const FactSheet& facts) {
  return facts.ok() ? "facts: all held" : "facts failed: " + facts.failed();
}

inline bool all_stages_prime(const MonomialChainReport& rep) {
  return std::all_of(rep.stages.begin(), rep.stages.end(),
                     [](const StageVerdict& s) { return s.prime; });
}

}  // namespace detail

// Minimal generating words of an ideal, recovered from the language when no
// explicit generators are attached: a word generates iff it lies in the
// ideal and no proper factor does. The scan stops at the length cap, and
// 'complete' records whether the found words regenerate the whole language.
inline Json describe_ideal(const MonomialIdeal& i, int length_cap = 8) {
  std::vector<Word> gens = i.generators();
  bool complete = true;
  if (gens.empty() && !i.is_zero()) {
    const Ambient& amb = i.ambient();
    for (const Word& w : enumerate_words(amb.alphabet(), static_cast<std::size_t>(length_cap),
                                         [&](const Word& u) { return amb.lang.accepts(u); })) {
      if (!i.contains(w)) continue;
      bool minimal = true;
      for (std::size_t len = 0; len < w.size() && minimal; ++len)
        for (std::size_t at = 0; at + len <= w.size() && minimal; ++at)
          if (i.contains(w.substr(at, len))) minimal = false;
      if (minimal) gens.push_back(w);
    }
    complete = !gens.empty() &&
               compare(MonomialIdeal::from_generators(i.ambient(), gens), i) == LangOrder::equal;
  }
  Json out{{"generators", gens}, {"complete", complete}};
  if (!complete) out["note"] = "generator list truncated at the length cap";
  return out;
}

// --- builtin families -------------------------------------------------------

inline RunOutcome run_two_letter_family(int horizon) {
  MonomialChain c = builtin_chains::two_letter_markers(horizon);
  // Words of length L with two markers sit in stage L-1 at the latest, so
  // the finite union check is sound only up to horizon+1 letters.
  ChainValidation val = validate_chain(c, std::max(horizon, 2), std::min(6, horizon + 1));
  MonomialChainReport rep = index_report(c, horizon);
  std::vector<AlmostPrimeFlag> flags = almost_prime_flags(c, horizon);
  const LimitVerdict& lv = rep.limits.front();

  detail::FactSheet facts;
  facts.check("chain validation passes", val.ok);
  facts.check("every stage is prime", detail::all_stages_prime(rep));
  facts.check("the union is not prime", !lv.prime);
  facts.check("the union is not semiprime", !lv.semiprime);
  facts.check("the semiprime witness is x", lv.semiprime_witness == Word("x"));
  facts.check("the union is almost prime", flags.front().almost_prime);
  facts.check("index lower bound is 1", rep.index_lower_bound == 1);

  Json body{{"family", "ex2.1"},
            {"ring", "free algebra on x, y"},
            {"horizon", horizon},
            {"validation", report::to_json(val)},
            {"report", report::to_json(rep)},
            {"almost_prime_flags", report::to_json(flags)},
            {"facts", facts.json()}};
  std::ostringstream s;
  s << "ex2.1: " << rep.stages.size() << " marker stages prime, union (RxR)^2 not semiprime"
    << " (witness x), index lower bound " << rep.index_lower_bound << "\n"
    << detail::fact_line(facts);
  return {std::move(body), s.str(), facts.ok()};
}

inline RunOutcome run_lex_grid_family(int levels, int per_level) {
  MonomialChain c = builtin_chains::lex_marker_grid(levels, per_level);
  ChainValidation val = validate_chain(c, static_cast<int>(c.stages.size()), 6);
  MonomialChainReport rep = index_report(c, static_cast<int>(c.stages.size()));
  std::vector<AlmostPrimeFlag> flags = almost_prime_flags(c, static_cast<int>(c.stages.size()));

  detail::FactSheet facts;
  facts.check("chain validation passes", val.ok);
  facts.check("every stage is prime", detail::all_stages_prime(rep));
  bool unions_bad = true, witnesses_match = true, flagged = true;
  for (int i = 1; i <= levels; ++i) {
    const LimitVerdict& lv = rep.limits[static_cast<std::size_t>(i - 1)];
    if (lv.prime || lv.semiprime) unions_bad = false;
    Word expected = "x" + Word(static_cast<std::size_t>(i), 'z') + "x";
    if (lv.semiprime_witness != expected) witnesses_match = false;
    if (!flags[static_cast<std::size_t>(i - 1)].almost_prime) flagged = false;
  }
  facts.check("every level union is neither prime nor semiprime", unions_bad);
  facts.check("each level witness is its own marker", witnesses_match);
  facts.check("every level union is almost prime", flagged);
  facts.check("index lower bound equals the level count", rep.index_lower_bound == levels);

  Json body{{"family", "ex2.2"},
            {"ring", "free algebra on x, y, z"},
            {"levels", levels},
            {"stages_per_level", per_level},
            {"validation", report::to_json(val)},
            {"report", report::to_json(rep)},
            {"almost_prime_flags", report::to_json(flags)},
            {"facts", facts.json()}};
  std::ostringstream s;
  s << "ex2.2: " << rep.stages.size() << " lex-ordered stages prime, " << levels
    << " level unions each not semiprime, index lower bound " << rep.index_lower_bound << "\n"
    << detail::fact_line(facts);
  return {std::move(body), s.str(), facts.ok()};
}

inline RunOutcome run_idempotent_family(int horizon) {
  MonomialChain c = builtin_chains::idempotent_markers(horizon);
  // Same length budget as the two letter family: stage n covers marker
  // words up to n+1 letters.
  ChainValidation val = validate_chain(c, std::max(horizon, 2), std::min(6, horizon + 1));
  MonomialChainReport rep = index_report(c, horizon);
  std::vector<AlmostPrimeFlag> flags = almost_prime_flags(c, horizon);
  const LimitVerdict& lv = rep.limits.front();

  detail::FactSheet facts;
  facts.check("chain validation passes", val.ok);
  facts.check("every stage is prime", detail::all_stages_prime(rep));
  facts.check("all union descriptions agree", lv.descriptions_agree);
  facts.check("the union is not prime", !lv.prime);
  facts.check("the union is not semiprime", !lv.semiprime);
  facts.check("the semiprime witness is ey", lv.semiprime_witness == Word("ey"));
  facts.check("the union is almost prime", flags.front().almost_prime);
  facts.check("index lower bound is 1", rep.index_lower_bound == 1);

  Json body{{"family", "ex2.4"},
            {"ring", "free algebra on e, y with e idempotent"},
            {"horizon", horizon},
            {"validation", report::to_json(val)},
            {"report", report::to_json(rep)},
            {"almost_prime_flags", report::to_json(flags)},
            {"facts", facts.json()}};
  std::ostringstream s;
  s << "ex2.4: " << rep.stages.size() << " stages prime, union matches both product"
    << " descriptions, not semiprime (witness ey), index lower bound "
    << rep.index_lower_bound << "\n"
    << detail::fact_line(facts);
  return {std::move(body), s.str(), facts.ok()};
}

inline RunOutcome run_free_union_family(int max_m, int samples, std::uint64_t seed) {
  Rng rng(seed);
  FreeUnionReport rep = union_report(max_m, samples, rng);

  detail::FactSheet facts;
  facts.check("the stage chain is monotone on samples", rep.chain_monotone);
  facts.check("x stays outside every stage", rep.x_outside_all);
  facts.check("every sampled coefficient is absorbed", rep.all_absorbed);
  facts.check("every absorption stage is minimal",
              std::all_of(rep.absorptions.begin(), rep.absorptions.end(),
                          [](const Absorption& a) { return a.minimal; }));
  facts.check("the union is almost prime", rep.almost_prime);

  Json body{{"family", "ex3.4"},
            {"ring", "free product of rational functions over the degree grading"},
            {"report", report::to_json(rep)},
            {"facts", facts.json()}};
  std::ostringstream s;
  s << "ex3.4: " << rep.samples << " sampled coefficients absorbed at their pole order, x"
    << " outside all " << rep.max_m + 1 << " stages, union almost prime\n"
    << detail::fact_line(facts);
  return {std::move(body), s.str(), facts.ok()};
}

inline RunOutcome run_corner_chain_family(int stage_count) {
  if (stage_count < 2 || stage_count > 12)
    throw ConfigError("stage count must be in 2..12");
  CommVarIdeal m = CommVarIdeal::family_all({1});
  std::vector<IdealGrid> stages;
  bool stages_prime = true;
  for (int k = 1; k <= stage_count; ++k) {
    std::vector<CommMonomial> gens;
    for (int i = 1; i <= k; ++i) gens.push_back(mono_var(1, i));
    CommVarIdeal tk = CommVarIdeal::from_monomials(gens);
    stages.push_back(make_grid(m, tk, tk, tk, tk));
    if (!grid_is_prime(stages.back())) stages_prime = false;
  }
  GridUnionReport rep = grid_union_report(stages, make_grid(m, m, m, m, m));

  bool corner_witness = false;
  if (rep.not_prime_witness) {
    const auto& [a, b] = *rep.not_prime_witness;
    corner_witness = a.m.empty() && b.m.empty() && a.row == 0 && a.col == 0 &&
                     b.row == 1 && b.col == 1;
  }
  bool minimal_primes_good = rep.minimal_primes_known && rep.minimal_primes.size() == 2;
  for (const IdealGrid& p : rep.minimal_primes)
    if (!grid_is_prime(p) || !rep.union_grid.subset_of(p)) minimal_primes_good = false;

  detail::FactSheet facts;
  facts.check("every stage is prime", stages_prime);
  facts.check("the union is semiprime", rep.semiprime);
  facts.check("the union is not prime", !rep.prime);
  facts.check("the diagonal matrix units witness non-primality", corner_witness);
  facts.check("the union has exactly two minimal primes over it", minimal_primes_good);

  Json body{{"family", "ex4.5"},
            {"ring", "2x2 matrix grid over a pattern polynomial ring"},
            {"stages_checked", stage_count},
            {"stages_prime", stages_prime},
            {"report", report::to_json(rep)},
            {"facts", facts.json()}};
  std::ostringstream s;
  s << "ex4.5: " << stage_count << " matrix unit stages prime, union semiprime but not"
    << " prime (witness e11, e22), two minimal primes\n"
    << detail::fact_line(facts);
  return {std::move(body), s.str(), facts.ok()};
}

namespace detail {

inline Rational small_rational(Rng& rng) { return Rational(rng.uniform_int(-2, 2)); }

inline KLElement random_kl_element(Rng& rng) {
  std::vector<Mat2> prefix;
  int p = rng.uniform_int(0, 3);
  for (int i = 0; i < p; ++i)
    prefix.push_back(Mat2{small_rational(rng), small_rational(rng), small_rational(rng),
                          small_rational(rng)});
  KLTail tail{small_rational(rng), small_rational(rng), {}};
  int devs = rng.uniform_int(0, 2);
  for (int i = 0; i < devs; ++i)
    tail.dev[rng.uniform_int(p, p + 4)] = Rational(rng.uniform_int(1, 3));
  return KLElement(std::move(prefix), std::move(tail));
}

// Scalar for the symbolic tail identity: polynomials over the three
// unknowns standing for a generic tail (alpha, beta, one deviation value).
struct SymPoly {
  std::map<std::array<int, 3>, Rational> terms;

  static SymPoly var(int which) {
    std::array<int, 3> e{};
    e[static_cast<std::size_t>(which)] = 1;
    return SymPoly{{{e, Rational(1)}}};
  }

  void prune() {
    for (auto it = terms.begin(); it != terms.end();)
      it = it->second == 0 ? terms.erase(it) : std::next(it);
  }

  friend SymPoly operator+(const SymPoly& x, const SymPoly& y) {
    SymPoly out = x;
    for (const auto& [e, c] : y.terms) out.terms[e] += c;
    out.prune();
    return out;
  }

  friend SymPoly operator*(const SymPoly& x, const SymPoly& y) {
    SymPoly out;
    for (const auto& [e1, c1] : x.terms)
      for (const auto& [e2, c2] : y.terms) {
        std::array<int, 3> e{e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2]};
        out.terms[e] += c1 * c2;
      }
    out.prune();
    return out;
  }

  friend bool operator==(const SymPoly& x, const SymPoly& y) {
    return x.terms == y.terms;
  }
};

// tail(a) * generic tail * tail(a) for the constant upper corner sequence a:
// zero whatever the middle factor is.
inline bool symbolic_sandwich_tail_zero() {
  BasicKLTail<SymPoly> a{SymPoly{}, SymPoly{{{{0, 0, 0}, Rational(1)}}}, {}};
  BasicKLTail<SymPoly> r{SymPoly::var(0), SymPoly::var(1), {{7, SymPoly::var(2)}}};
  BasicKLTail<SymPoly> out = a * r * a;
  return out.alpha == SymPoly{} && out.beta == SymPoly{} && out.dev.empty();
}

}  // namespace detail

inline RunOutcome run_sequence_ring_family(int horizon, int samples, std::uint64_t seed) {
  if (horizon < 1 || horizon > 12) throw ConfigError("horizon must be in 1..12");
  if (samples < 1) throw ConfigError("need at least one sample");
  Rng rng(seed);
  KLElement a = KLElement::from_tail(0, 1);

  // Stage-by-stage: the witness stays outside, and sampled outsiders are
  // revived by the constructive probe. Stage semiprimality is only probed,
  // never claimed outright, so each row carries the probed-only status.
  Json stage_rows = Json::array();
  bool a_outside_stages = true;
  int probe_failures = 0;
  const int probes_per_stage = 20;
  for (long n = 1; n <= horizon; ++n) {
    if (kl_in_In(a, n)) a_outside_stages = false;
    int failures = 0;
    for (int t = 0; t < probes_per_stage; ++t) {
      KLElement e = detail::random_kl_element(rng);
      if (kl_in_In(e, n)) continue;
      KLElement r = kl_semiprime_probe(e, n);
      if (kl_in_In(e * r * e, n)) ++failures;
    }
    probe_failures += failures;
    stage_rows.push_back(Json{{"stage", n},
                              {"contains_witness", kl_in_In(a, n)},
                              {"status", "semiprime (probed only)"},
                              {"probes", probes_per_stage},
                              {"probe_failures", failures}});
  }

  int ara_escapes = 0;
  for (int t = 0; t < samples; ++t) {
    KLElement r = detail::random_kl_element(rng);
    if (!kl_in_union(a * r * a)) ++ara_escapes;
  }
  bool symbolic_zero = detail::symbolic_sandwich_tail_zero();
  bool a_in_union = kl_in_union(a);

  detail::FactSheet facts;
  facts.check("the witness sequence lies outside every stage", a_outside_stages);
  facts.check("every stage probe revived its sample", probe_failures == 0);
  facts.check("sandwiched witness products are eventually zero", ara_escapes == 0);
  facts.check("the symbolic sandwich tail vanishes", symbolic_zero);
  facts.check("the witness lies outside the union", !a_in_union);

  Json body{{"family", "exKL"},
            {"ring", "eventually upper triangular 2x2 matrix sequences"},
            {"horizon", horizon},
            {"stages", stage_rows},
            {"union",
             Json{{"description", "eventually zero sequences"},
                  {"contains_witness", a_in_union},
                  {"sandwich_samples", samples},
                  {"sandwich_escapes", ara_escapes},
                  {"symbolic_sandwich_zero", symbolic_zero},
                  {"not_semiprime_witness", "constant upper corner sequence"}}},
            {"facts", facts.json()}};
  std::ostringstream s;
  s << "exKL: witness outside all " << horizon << " stages, " << samples
    << " sandwich products eventually zero (symbolic identity too), union not semiprime\n"
    << detail::fact_line(facts);
  return {std::move(body), s.str(), facts.ok()};
}

inline RunOutcome run_matrix_tower_family(int n, int stages_checked) {
  RnChainReport rep = rn_chain_report(n, stages_checked);

  detail::FactSheet facts;
  bool levels_good = true;
  for (const RnLevelReport& l : rep.levels)
    if (!l.stages_prime || l.union_prime) levels_good = false;
  facts.check("every level has prime stages and a non-prime union", levels_good);
  facts.check("index lower bound is one below the matrix size",
              rep.index_lower_bound == n - 1);
  facts.check("index stays below the matrix size", rep.index_below_matrix_size);

  Json body{{"family", "ex6.3"},
            {"ring", "generic matrix tower"},
            {"n", n},
            {"report", report::to_json(rep)},
            {"facts", facts.json()}};
  std::ostringstream s;
  s << "ex6.3: " << rep.levels.size() << " levels walked, index lower bound "
    << rep.index_lower_bound << " < " << n << "\n"
    << detail::fact_line(facts);
  return {std::move(body), s.str(), facts.ok()};
}

struct FamilyOptions {
  std::optional<int> horizon;
  std::optional<int> n;
  std::uint64_t seed = kDefaultSeed;
};

inline RunOutcome run_family(const std::string& token, const FamilyOptions& opt) {
  auto is = [&](const char* dot, const char* underscore) {
    return token == dot || token == underscore;
  };
  if (is("ex2.1", "ex2_1")) return run_two_letter_family(opt.horizon.value_or(6));
  if (is("ex2.2", "ex2_2"))
    return run_lex_grid_family(opt.n.value_or(3), opt.horizon.value_or(3));
  if (is("ex2.4", "ex2_4")) return run_idempotent_family(opt.horizon.value_or(6));
  if (is("ex3.4", "ex3_4"))
    return run_free_union_family(opt.horizon.value_or(6), opt.n.value_or(25), opt.seed);
  if (is("ex4.5", "ex4_5")) return run_corner_chain_family(opt.horizon.value_or(5));
  if (is("exKL", "exkl"))
    return run_sequence_ring_family(opt.horizon.value_or(6), opt.n.value_or(100), opt.seed);
  if (is("ex6.3", "ex6_3"))
    return run_matrix_tower_family(opt.n.value_or(3), opt.horizon.value_or(3));
  throw ConfigError("unknown example family '" + token + "'");
}

// --- spec-driven commands ---------------------------------------------------

inline RunOutcome run_ideal_check(const spec::IdealSpec& s, bool want_prime,
                                  bool want_semiprime, bool want_closure) {
  if (!want_prime && !want_semiprime && !want_closure) {
    want_prime = true;
    want_semiprime = true;
  }
  const MonomialIdeal& i = s.ideal;
  detail::FactSheet facts;
  Json body{{"command", "ideal check"}, {"ideal", describe_ideal(i)}};

  if (want_prime) {
    PrimalityVerdict p = is_prime(i);
    body["prime"] = Json{{"prime", p.prime}, {"witness", report::witness_json(p.witness)}};
    if (s.expect.prime)
      facts.check("declared primality expectation holds", p.prime == *s.expect.prime);
  }
  if (want_semiprime) {
    SemiprimalityVerdict sp = is_semiprime(i);
    body["semiprime"] =
        Json{{"semiprime", sp.semiprime}, {"witness", report::witness_json(sp.witness)}};
    if (s.expect.semiprime)
      facts.check("declared semiprimality expectation holds",
                  sp.semiprime == *s.expect.semiprime);
  }
  bool converged = true;
  if (want_closure) {
    try {
      MonomialIdeal cl = semiprime_closure(i);
      body["semiprime_closure"] = Json{{"converged", true},
                                       {"equal_to_input", compare(cl, i) == LangOrder::equal},
                                       {"ideal", describe_ideal(cl)}};
    } catch (const ClosureNonConvergence& e) {
      converged = false;
      body["semiprime_closure"] =
          Json{{"converged", false}, {"rounds", e.rounds}, {"ideal", describe_ideal(e.last)}};
    }
    facts.check("semiprime closure converged", converged);
  }
  body["facts"] = facts.json();

  std::vector<std::string> parts;
  if (body.contains("prime"))
    parts.push_back(body["prime"]["prime"].get<bool>() ? "prime" : "not prime");
  if (body.contains("semiprime"))
    parts.push_back(body["semiprime"]["semiprime"].get<bool>() ? "semiprime" : "not semiprime");
  if (want_closure)
    parts.push_back(converged ? "closure computed" : "closure did not converge");
  std::string verdicts;
  for (const std::string& p : parts) verdicts += (verdicts.empty() ? "" : ", ") + p;
  return {std::move(body), "ideal check: " + verdicts + "\n" + detail::fact_line(facts),
          facts.ok()};
}

inline RunOutcome run_explicit_chain_report(const MonomialChain& c) {
  int horizon = static_cast<int>(c.stages.size());
  ChainValidation val = validate_chain(c, std::max(horizon, 2), 6);
  MonomialChainReport rep = index_report(c, horizon);

  detail::FactSheet facts;
  facts.check("chain validation passes", val.ok);

  Json body{{"command", "chain report"},
            {"validation", report::to_json(val)},
            {"report", report::to_json(rep)},
            {"facts", facts.json()}};
  std::ostringstream s;
  s << "chain report: " << rep.stages.size() << " stages, index lower bound "
    << rep.index_lower_bound << "\n"
    << detail::fact_line(facts);
  return {std::move(body), s.str(), facts.ok()};
}

inline RunOutcome run_grid_check(const spec::GridSpec& g, int oracle_degree) {
  if (oracle_degree < 1 || oracle_degree > 4)
    throw ConfigError("oracle degree must be in 1..4");
  bool semiprime = grid_is_semiprime(g.grid);
  bool prime = grid_is_prime(g.grid);
  std::optional<StarCounterexample> star =
      grid_condition_star_oracle(g.grid, oracle_degree, 4);

  detail::FactSheet facts;
  facts.check("squeezing oracle agrees with the semiprimality decision",
              semiprime == !star.has_value());
  if (g.expect.prime) facts.check("declared primality expectation holds", prime == *g.expect.prime);
  if (g.expect.semiprime)
    facts.check("declared semiprimality expectation holds", semiprime == *g.expect.semiprime);

  Json counter = nullptr;
  if (star)
    counter = Json{{"row", star->row}, {"col", star->col}, {"monomial", display(star->a)}};
  Json body{{"command", "grid check"},
            {"grid", report::to_json(g.grid)},
            {"semiprime", semiprime},
            {"prime", prime},
            {"oracle_degree", oracle_degree},
            {"oracle_counterexample", counter},
            {"facts", facts.json()}};
  std::ostringstream s;
  s << "grid check: " << (semiprime ? "semiprime" : "not semiprime") << ", "
    << (prime ? "prime" : "not prime") << ", oracle "
    << (star ? "found a counterexample" : "agrees") << "\n"
    << detail::fact_line(facts);
  return {std::move(body), s.str(), facts.ok()};
}

inline RunOutcome run_oracle_compare(const spec::IdealSpec& s, int max_u, int max_w) {
  const MonomialIdeal& i = s.ideal;
  PrimalityVerdict p = is_prime(i);
  SemiprimalityVerdict sp = is_semiprime(i);
  BruteForceResult bp = brute_force_check(i, IdealProperty::prime, max_u, max_w);
  BruteForceResult bs = brute_force_check(i, IdealProperty::semiprime, max_u, max_w);

  detail::FactSheet facts;
  facts.check("bounded scan agrees on primality", p.prime == !bp.violation_found);
  facts.check("bounded scan agrees on semiprimality", sp.semiprime == !bs.violation_found);

  Json body{{"command", "oracle compare"},
            {"ideal", describe_ideal(i)},
            {"max_u", max_u},
            {"max_w", max_w},
            {"prime",
             Json{{"decision", p.prime},
                  {"decision_witness", report::witness_json(p.witness)},
                  {"scan_violation", bp.violation_found},
                  {"scan_witness",
                   bp.violation_found ? Json::array({bp.u, bp.v}) : Json(nullptr)}}},
            {"semiprime",
             Json{{"decision", sp.semiprime},
                  {"decision_witness", report::witness_json(sp.witness)},
                  {"scan_violation", bs.violation_found},
                  {"scan_witness",
                   bs.violation_found ? Json::array({bs.u, bs.v}) : Json(nullptr)}}},
            {"facts", facts.json()}};
  std::ostringstream out;
  out << "oracle compare: decisions " << (p.prime ? "prime" : "not prime") << "/"
      << (sp.semiprime ? "semiprime" : "not semiprime") << ", bounded scan "
      << (facts.ok() ? "agrees" : "DISAGREES") << "\n"
      << detail::fact_line(facts);
  return {std::move(body), out.str(), facts.ok()};
}

// --- free product subcommands ------------------------------------------------

inline RunOutcome run_free_probe(const std::string& f_expr, const std::string& fp_expr, int m) {
  TensorElement f = parse_tensor(f_expr);
  TensorElement fp = parse_tensor(fp_expr);
  ProbeCertificate cert = prime_probe(f, fp, m);

  detail::FactSheet facts;
  facts.check("the certificate verified", cert.verified);

  Json body{{"command", "freeproduct probe"},
            {"f", f_expr},
            {"f_prime", fp_expr},
            {"m", m},
            {"certificate", report::to_json(cert)},
            {"facts", facts.json()}};
  std::ostringstream s;
  s << "probe: b = " << cert.b.str() << ", b' = " << cert.b_prime.str() << ", "
    << (cert.verified ? "verified" : "NOT verified") << " in " << cert.attempts
    << (cert.attempts == 1 ? " attempt" : " attempts") << "\n"
    << detail::fact_line(facts);
  return {std::move(body), s.str(), facts.ok()};
}

inline RunOutcome run_free_witness(const std::vector<std::string>& v_exprs, int m,
                                   WitnessSide side) {
  std::vector<RatFunc> v;
  for (const std::string& e : v_exprs) v.push_back(parse_ratfunc(e));
  Json body{{"command", "freeproduct witness"},
            {"v", v_exprs},
            {"m", m},
            {"side", side == WitnessSide::left ? "left" : "right"}};
  try {
    RatFunc b = restricted_witness(v, m, side);
    bool constants_killed = true;
    for (const RatFunc& f : v)
      if (laurent_coeff(f * b, 0) != 0) constants_killed = false;
    bool deep = std::any_of(v.begin(), v.end(), [&](const RatFunc& f) {
      return !(f * b).is_zero() && valuation(f * b) < -m;
    });
    detail::FactSheet facts;
    facts.check("the witness kills every spanned constant term", constants_killed);
    facts.check("some product escapes the pole bound", deep);
    body["witness"] = b.str();
    body["found"] = true;
    body["facts"] = facts.json();
    std::ostringstream s;
    s << "witness: b = " << b.str() << "\n" << detail::fact_line(facts);
    return {std::move(body), s.str(), facts.ok()};
  } catch (const SearchBudgetError& e) {
    body["witness"] = nullptr;
    body["found"] = false;
    body["budget"] = e.budget;
    body["facts"] = Json::array({Json{{"fact", "a witness was found"}, {"held", false}}});
    return {std::move(body), std::string("witness: search exhausted its window\n") +
                                 "facts failed: a witness was found",
            false};
  }
}

// --- envelope -----------------------------------------------------------------

inline std::string fnv1a_hex(std::string_view bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char b : bytes) {
    h ^= b;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

// Timing sits outside the body on purpose: bodies must be byte-identical
// across repeated runs of the same command.
inline Json envelope(const std::string& command, const std::string& input_digest,
                     std::uint64_t seed, const RunOutcome& out, long long timing_ms) {
  return Json{{"schema_version", 1},
              {"tool", "chainforge"},
              {"tool_version", kVersion},
              {"command", command},
              {"seed", seed},
              {"input_digest", input_digest},
              {"ok", out.ok},
              {"body", out.body},
              {"timing_ms", timing_ms}};
}

}  // namespace chainforge
