#pragma once

#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <chainforge/monomial_ideal.hpp>

namespace chainforge {

// How the materialized stages were indexed before truncation.
enum class IndexScheme { finite, omega, omega_times, recursive_levels };

inline const char* to_string(IndexScheme s) {
  switch (s) {
    case IndexScheme::finite: return "finite";
    case IndexScheme::omega: return "omega";
    case IndexScheme::omega_times: return "omega_times";
    default: return "recursive_levels";
  }
}

// A subchain union declared alongside the stages. after_stage says how many
// leading stages the union covers; in an omega chain that is all of them.
struct ChainLimit {
  std::string name;
  std::size_t after_stage;
  MonomialIdeal ideal;
  // Other closed forms claimed for the same ideal, checked in reports.
  std::vector<std::pair<std::string, MonomialIdeal>> alternates;
};

// Finite materialization of an ascending chain of monomial ideals.
struct MonomialChain {
  IndexScheme scheme = IndexScheme::omega;
  int scheme_param = 0;  // levels for omega_times, length for finite
  std::vector<std::string> stage_names;
  std::vector<MonomialIdeal> stages;
  std::vector<ChainLimit> limits;
};

namespace builtin_chains {

// Stages <xx, xyx, ..., xy^(n-1)x> over the free two-letter ambient; the
// union is the product of the principal ideal <x> with itself.
inline MonomialChain two_letter_markers(int horizon) {
  if (horizon < 1 || horizon > 12) throw ConfigError("horizon must be in 1..12");
  Alphabet xy("xy");
  Ambient amb = Ambient::free_words(xy);
  MonomialChain c;
  c.scheme = IndexScheme::omega;
  for (int n = 1; n <= horizon; ++n) {
    std::vector<Word> gens;
    for (int k = 0; k < n; ++k) gens.push_back("x" + Word(static_cast<std::size_t>(k), 'y') + "x");
    c.stage_names.push_back("P" + std::to_string(n));
    c.stages.push_back(MonomialIdeal::from_generators(amb, gens));
  }
  MonomialIdeal rxr = MonomialIdeal::from_generators(amb, {"x"});
  c.limits.push_back({"(RxR)^2", c.stages.size(), product(rxr, rxr), {}});
  return c;
}

// Doubly indexed stages over three letters, ascending in the lexicographic
// order on (level, n). Stage (i, n) is generated by the markers xz^jx for
// j < i together with every x z^i x w x z^i x whose filler w has fewer than
// n occurrences of y. Each level has its own union.
inline MonomialChain lex_marker_grid(int levels, int per_level) {
  if (levels < 1 || per_level < 1 || levels > 6 || per_level > 6)
    throw ConfigError("level bounds must be in 1..6");
  Alphabet xyz("xyz");
  Ambient amb = Ambient::free_words(xyz);
  auto marker = [](int i) { return "x" + Word(static_cast<std::size_t>(i), 'z') + "x"; };

  MonomialChain c;
  c.scheme = IndexScheme::omega_times;
  c.scheme_param = levels;
  for (int i = 1; i <= levels; ++i) {
    std::vector<Word> lower;
    for (int j = 0; j < i; ++j) lower.push_back(marker(j));
    Automaton lower_lang = Automaton::factor_language(xyz, lower, amb.lang);
    Automaton mk = Automaton::single_word(xyz, marker(i));
    Automaton sigma = Automaton::sigma_star(xyz);
    for (int n = 1; n <= per_level; ++n) {
      Automaton filler = Automaton::letter_count_below(xyz, 'y', n);
      Automaton core = concatenate(
          concatenate(concatenate(concatenate(sigma, mk), filler), mk), sigma);
      c.stage_names.push_back("I(" + std::to_string(i) + "," + std::to_string(n) + ")");
      c.stages.push_back(MonomialIdeal::from_language(amb, unite(lower_lang, core)));
    }
    MonomialIdeal squared =
        product(MonomialIdeal::from_generators(amb, {marker(i)}),
                MonomialIdeal::from_generators(amb, {marker(i)}));
    MonomialIdeal level_union = sum(MonomialIdeal::from_generators(amb, lower), squared);
    c.limits.push_back({"U(" + std::to_string(i) + ")",
                        static_cast<std::size_t>(i * per_level), level_union, {}});
  }
  return c;
}

// Stages <eye, ..., ey^(n-1)e> in the idempotent quotient; stage 1 is the
// zero ideal. The union has two product descriptions that must agree.
inline MonomialChain idempotent_markers(int horizon) {
  if (horizon < 1 || horizon > 12) throw ConfigError("horizon must be in 1..12");
  Alphabet ey("ey", "e");
  Ambient amb = Ambient::normal_words(ey);
  MonomialChain c;
  c.scheme = IndexScheme::omega;
  for (int n = 1; n <= horizon; ++n) {
    c.stage_names.push_back("P" + std::to_string(n));
    if (n == 1) {
      c.stages.push_back(MonomialIdeal::zero(amb));
      continue;
    }
    std::vector<Word> gens;
    for (int k = 1; k < n; ++k) gens.push_back("e" + Word(static_cast<std::size_t>(k), 'y') + "e");
    c.stages.push_back(MonomialIdeal::from_generators(amb, gens));
  }
  Automaton y_plus = concatenate(Automaton::single_word(ey, "y"), Automaton::letters_star(ey, "y"));
  Automaton pattern = concatenate(concatenate(Automaton::single_word(ey, "e"), y_plus),
                                  Automaton::single_word(ey, "e"));
  MonomialIdeal the_union = MonomialIdeal::from_language(amb, pattern);
  MonomialIdeal rer = MonomialIdeal::from_generators(amb, {"e"});
  ChainLimit lim{"union of the stages", c.stages.size(), the_union, {}};
  lim.alternates.emplace_back("R ey R e R",
                              product(MonomialIdeal::from_generators(amb, {"ey"}), rer));
  lim.alternates.emplace_back("R e R ye R",
                              product(rer, MonomialIdeal::from_generators(amb, {"ye"})));
  c.limits.push_back(std::move(lim));
  return c;
}

}  // namespace builtin_chains

// Explicit finite chain; the union of finitely many ascending ideals is the
// last one, so that is the default limit.
inline MonomialChain explicit_chain(std::vector<MonomialIdeal> stages,
                                    std::optional<MonomialIdeal> limit = std::nullopt) {
  if (stages.empty()) throw ConfigError("an explicit chain needs at least one stage");
  for (std::size_t i = 0; i + 1 < stages.size(); ++i)
    if (compare(stages[i], stages[i + 1]) != LangOrder::proper_subset)
      throw ConfigError("explicit chain is not strictly ascending at stage " +
                        std::to_string(i + 1));
  MonomialChain c;
  c.scheme = IndexScheme::finite;
  c.scheme_param = static_cast<int>(stages.size());
  for (std::size_t i = 0; i < stages.size(); ++i)
    c.stage_names.push_back("S" + std::to_string(i + 1));
  MonomialIdeal lim = limit.value_or(stages.back());
  c.stages = std::move(stages);
  c.limits.push_back({"declared limit", c.stages.size(), std::move(lim), {}});
  return c;
}

struct ChainValidation {
  bool ok = true;
  std::vector<std::string> failures;
  int stages_checked = 0;
};

// Finite soundness checks: strict ascent, limits sandwiched correctly, and
// no short limit word outside every covered stage.
inline ChainValidation validate_chain(const MonomialChain& c, int horizon, int word_len) {
  if (horizon < 2) throw ConfigError("validation horizon must be at least 2");
  if (c.stages.empty()) throw ConfigError("empty chain");
  const Ambient& amb = c.stages.front().ambient();
  ChainValidation out;
  std::size_t checked = std::min<std::size_t>(c.stages.size(), static_cast<std::size_t>(horizon));
  out.stages_checked = static_cast<int>(checked);

  auto complain = [&](std::string msg) {
    out.ok = false;
    out.failures.push_back(std::move(msg));
  };

  for (std::size_t i = 0; i + 1 < checked; ++i) {
    LangOrder ord = compare(c.stages[i], c.stages[i + 1]);
    if (ord != LangOrder::proper_subset)
      complain("ascent fails between " + c.stage_names[i] + " and " + c.stage_names[i + 1] +
               " (" + to_string(ord) + ")");
  }

  for (const ChainLimit& lim : c.limits) {
    std::size_t covered = std::min(checked, lim.after_stage);
    for (std::size_t i = 0; i < covered; ++i)
      if (!c.stages[i].subset_of(lim.ideal)) {
        Automaton gap = intersect(c.stages[i].language(),
                                  complement_within(lim.ideal.language(), amb.lang));
        Word w = gap.shortest_word().value_or("?");
        complain("stage " + c.stage_names[i] + " is not inside " + lim.name +
                 " (witness " + w + ")");
      }
    for (std::size_t i = lim.after_stage; i < checked; ++i)
      if (!lim.ideal.subset_of(c.stages[i]))
        complain(lim.name + " is not inside the later stage " + c.stage_names[i]);
    if (covered == 0) continue;
    Automaton stage_union = c.stages[0].language();
    for (std::size_t i = 1; i < covered; ++i) stage_union = unite(stage_union, c.stages[i].language());
    Automaton bad = intersect(
        intersect(lim.ideal.language(), Automaton::length_at_most(amb.alphabet(), word_len)),
        complement_within(stage_union, amb.lang));
    if (std::optional<Word> w = bad.shortest_word())
      complain("word \"" + *w + "\" of " + lim.name + " lies in no checked stage");
  }
  return out;
}

struct StageVerdict {
  std::string name;
  bool prime = false;
  std::optional<std::pair<Word, Word>> witness;
};

struct LimitVerdict {
  std::string name;
  bool prime = false;
  std::optional<std::pair<Word, Word>> prime_witness;
  bool semiprime = false;
  std::optional<Word> semiprime_witness;
  bool descriptions_agree = true;
};

struct MonomialChainReport {
  std::vector<StageVerdict> stages;
  std::vector<LimitVerdict> limits;
  int horizon = 0;
  int index_lower_bound = 0;  // number of non-prime subchain unions
};

inline MonomialChainReport index_report(const MonomialChain& c, int horizon) {
  if (horizon < 1) throw ConfigError("report horizon must be at least 1");
  MonomialChainReport rep;
  std::size_t checked = std::min<std::size_t>(c.stages.size(), static_cast<std::size_t>(horizon));
  rep.horizon = static_cast<int>(checked);
  for (std::size_t i = 0; i < checked; ++i) {
    PrimalityVerdict v = is_prime(c.stages[i]);
    rep.stages.push_back({c.stage_names[i], v.prime, v.witness});
  }
  for (const ChainLimit& lim : c.limits) {
    LimitVerdict lv;
    lv.name = lim.name;
    PrimalityVerdict p = is_prime(lim.ideal);
    lv.prime = p.prime;
    lv.prime_witness = p.witness;
    SemiprimalityVerdict s = is_semiprime(lim.ideal);
    lv.semiprime = s.semiprime;
    lv.semiprime_witness = s.witness;
    for (const auto& [name, alt] : lim.alternates)
      if (compare(lim.ideal, alt) != LangOrder::equal) lv.descriptions_agree = false;
    if (!lv.prime) ++rep.index_lower_bound;
    rep.limits.push_back(std::move(lv));
  }
  return rep;
}

struct AlmostPrimeFlag {
  std::string name;
  bool union_of_primes = false;
  bool prime = false;
  bool almost_prime = false;
};

// Flags each limit as almost prime: a union of prime stages that is not
// itself prime. All covered stages must verify as prime first.
inline std::vector<AlmostPrimeFlag> almost_prime_flags(const MonomialChain& c, int horizon) {
  std::size_t checked = std::min<std::size_t>(c.stages.size(), static_cast<std::size_t>(horizon));
  for (std::size_t i = 0; i < checked; ++i)
    if (!is_prime(c.stages[i]).prime)
      throw ConfigError("stage " + c.stage_names[i] +
                        " is not prime; the limits are not unions of primes");
  std::vector<AlmostPrimeFlag> out;
  for (const ChainLimit& lim : c.limits) {
    AlmostPrimeFlag f;
    f.name = lim.name;
    f.union_of_primes = true;
    f.prime = is_prime(lim.ideal).prime;
    f.almost_prime = f.union_of_primes && !f.prime;
    out.push_back(f);
  }
  return out;
}

}  // namespace chainforge
