#pragma once

// JSON spec files and report serialization. Spec files are small and hand
// written, so every parse failure names the offending field. Serializers
// use ordered_json and emit fields in a fixed order: repeated runs of the
// same command must produce byte-identical report bodies.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include <chainforge/chains.hpp>
#include <chainforge/free_product.hpp>
#include <chainforge/ideal_grid.hpp>
#include <chainforge/monomial_ideal.hpp>
#include <chainforge/rn_ring.hpp>

namespace chainforge {

using Json = nlohmann::ordered_json;

namespace spec {

inline const Json& need(const Json& j, const char* field, const std::string& ctx) {
  if (!j.is_object()) throw ConfigError(ctx + ": expected an object");
  auto it = j.find(field);
  if (it == j.end()) throw ConfigError(ctx + ": missing field '" + field + "'");
  return *it;
}

inline std::string need_string(const Json& j, const char* field, const std::string& ctx) {
  const Json& v = need(j, field, ctx);
  if (!v.is_string()) throw ConfigError(ctx + ": field '" + field + "' must be a string");
  return v.get<std::string>();
}

inline int need_int(const Json& j, const char* field, const std::string& ctx) {
  const Json& v = need(j, field, ctx);
  if (!v.is_number_integer()) throw ConfigError(ctx + ": field '" + field + "' must be an integer");
  return v.get<int>();
}

inline int int_or(const Json& j, const char* field, int fallback, const std::string& ctx) {
  if (!j.is_object() || !j.contains(field)) return fallback;
  const Json& v = j.at(field);
  if (!v.is_number_integer()) throw ConfigError(ctx + ": field '" + field + "' must be an integer");
  return v.get<int>();
}

// Declared outcomes a spec may carry; the run exits nonzero when a computed
// verdict contradicts one.
struct Expectations {
  std::optional<bool> prime;
  std::optional<bool> semiprime;
};

inline void apply_expect_token(Expectations& e, const std::string& token, const std::string& ctx) {
  if (token == "prime") e.prime = true;
  else if (token == "not_prime") e.prime = false;
  else if (token == "semiprime") e.semiprime = true;
  else if (token == "not_semiprime") e.semiprime = false;
  else throw ConfigError(ctx + ": unknown expectation '" + token + "'");
}

inline Expectations expectations_of(const Json& j, const std::string& ctx) {
  Expectations e;
  if (!j.is_object() || !j.contains("expect")) return e;
  const Json& v = j.at("expect");
  if (v.is_string()) {
    apply_expect_token(e, v.get<std::string>(), ctx);
  } else if (v.is_array()) {
    for (const Json& t : v) {
      if (!t.is_string()) throw ConfigError(ctx + ": 'expect' entries must be strings");
      apply_expect_token(e, t.get<std::string>(), ctx);
    }
  } else {
    throw ConfigError(ctx + ": 'expect' must be a string or an array of strings");
  }
  return e;
}

struct IdealSpec {
  MonomialIdeal ideal;
  Expectations expect;
};

// { alphabet, idempotents?, generators[], ambient?: "free" | "normal_words" }
inline IdealSpec ideal_from_json(const Json& j, const std::string& ctx) {
  std::string letters = need_string(j, "alphabet", ctx);
  std::string idem;
  if (j.contains("idempotents")) {
    if (!j.at("idempotents").is_string())
      throw ConfigError(ctx + ": field 'idempotents' must be a string");
    idem = j.at("idempotents").get<std::string>();
  }
  std::string kind = idem.empty() ? "free" : "normal_words";
  if (j.contains("ambient")) {
    if (!j.at("ambient").is_string())
      throw ConfigError(ctx + ": field 'ambient' must be a string");
    kind = j.at("ambient").get<std::string>();
  }
  if (kind != "free" && kind != "normal_words")
    throw ConfigError(ctx + ": field 'ambient' must be \"free\" or \"normal_words\"");
  if (kind == "free" && !idem.empty())
    throw ConfigError(ctx + ": a free ambient cannot carry idempotents");

  Alphabet a(letters, idem);
  Ambient amb = kind == "free" ? Ambient::free_words(a) : Ambient::normal_words(a);

  const Json& gens = need(j, "generators", ctx);
  if (!gens.is_array()) throw ConfigError(ctx + ": field 'generators' must be an array");
  std::vector<Word> words;
  for (const Json& g : gens) {
    if (!g.is_string()) throw ConfigError(ctx + ": generators must be strings");
    words.push_back(g.get<Word>());
  }

  IdealSpec out{words.empty() ? MonomialIdeal::zero(amb)
                              : MonomialIdeal::from_generators(amb, words),
                expectations_of(j, ctx)};
  return out;
}

// { explicit: [ideal specs], limit?: ideal spec } for hand-written chains;
// builtin chain specs are routed by name at the command layer.
inline MonomialChain explicit_chain_from_json(const Json& j, const std::string& ctx) {
  const Json& list = need(j, "explicit", ctx);
  if (!list.is_array() || list.empty())
    throw ConfigError(ctx + ": field 'explicit' must be a nonempty array of ideal specs");
  std::vector<MonomialIdeal> stages;
  for (std::size_t i = 0; i < list.size(); ++i)
    stages.push_back(
        ideal_from_json(list[i], ctx + ".explicit[" + std::to_string(i) + "]").ideal);
  std::optional<MonomialIdeal> limit;
  if (j.contains("limit"))
    limit = ideal_from_json(j.at("limit"), ctx + ".limit").ideal;
  return explicit_chain(std::move(stages), std::move(limit));
}

// Monomial: array of {family, index, exp?}; the empty array is 1.
inline CommMonomial monomial_from_json(const Json& j, const std::string& ctx) {
  if (!j.is_array()) throw ConfigError(ctx + ": a monomial must be an array of variables");
  CommMonomial m;
  for (std::size_t i = 0; i < j.size(); ++i) {
    std::string vctx = ctx + "[" + std::to_string(i) + "]";
    int fam = need_int(j[i], "family", vctx);
    int idx = need_int(j[i], "index", vctx);
    int exp = int_or(j[i], "exp", 1, vctx);
    if (exp < 1) throw ConfigError(vctx + ": field 'exp' must be positive");
    m[CommVar{fam, idx}] += exp;
  }
  return m;
}

// { unit: true } | { zero: true } | { monomials?: [...], families?: [...] }
inline CommVarIdeal cvi_from_json(const Json& j, const std::string& ctx) {
  if (!j.is_object()) throw ConfigError(ctx + ": expected an ideal object");
  if (j.value("unit", false)) return CommVarIdeal::unit();
  if (j.value("zero", false)) return CommVarIdeal::zero();
  std::vector<CommMonomial> gens;
  if (j.contains("monomials")) {
    const Json& ms = j.at("monomials");
    if (!ms.is_array()) throw ConfigError(ctx + ": field 'monomials' must be an array");
    for (std::size_t i = 0; i < ms.size(); ++i)
      gens.push_back(monomial_from_json(ms[i], ctx + ".monomials[" + std::to_string(i) + "]"));
  }
  std::vector<int> fams;
  if (j.contains("families")) {
    const Json& fs = j.at("families");
    if (!fs.is_array()) throw ConfigError(ctx + ": field 'families' must be an array");
    for (const Json& f : fs) {
      if (!f.is_number_integer()) throw ConfigError(ctx + ": families must be integers");
      fams.push_back(f.get<int>());
    }
  }
  return CommVarIdeal::make(gens, fams);
}

struct GridSpec {
  IdealGrid grid;
  Expectations expect;
};

// { module: ideal, entries: [[ideal, ideal], [ideal, ideal]], expect? }
inline GridSpec grid_from_json(const Json& j, const std::string& ctx) {
  CommVarIdeal m = cvi_from_json(need(j, "module", ctx), ctx + ".module");
  const Json& rows = need(j, "entries", ctx);
  if (!rows.is_array() || rows.size() != 2 || !rows[0].is_array() || !rows[1].is_array() ||
      rows[0].size() != 2 || rows[1].size() != 2)
    throw ConfigError(ctx + ": field 'entries' must be a 2x2 array of ideals");
  CommVarIdeal e[2][2];
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c)
      e[r][c] = cvi_from_json(rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)],
                              ctx + ".entries[" + std::to_string(r) + "][" + std::to_string(c) + "]");
  return GridSpec{make_grid(std::move(m), e[0][0], e[0][1], e[1][0], e[1][1]),
                  expectations_of(j, ctx)};
}

}  // namespace spec

namespace report {

inline Json word_json(const Word& w) { return Json(w); }

inline Json witness_json(const std::optional<std::pair<Word, Word>>& w) {
  if (!w) return nullptr;
  return Json::array({w->first, w->second});
}

inline Json witness_json(const std::optional<Word>& w) {
  if (!w) return nullptr;
  return Json(*w);
}

inline Json to_json(const ChainValidation& v) {
  return Json{{"ok", v.ok}, {"stages_checked", v.stages_checked}, {"failures", v.failures}};
}

inline Json to_json(const StageVerdict& s) {
  return Json{{"name", s.name}, {"prime", s.prime}, {"witness", witness_json(s.witness)}};
}

inline Json to_json(const LimitVerdict& l) {
  return Json{{"name", l.name},
              {"prime", l.prime},
              {"prime_witness", witness_json(l.prime_witness)},
              {"semiprime", l.semiprime},
              {"semiprime_witness", witness_json(l.semiprime_witness)},
              {"descriptions_agree", l.descriptions_agree}};
}

inline Json to_json(const MonomialChainReport& r) {
  Json stages = Json::array();
  for (const StageVerdict& s : r.stages) stages.push_back(to_json(s));
  Json limits = Json::array();
  for (const LimitVerdict& l : r.limits) limits.push_back(to_json(l));
  return Json{{"horizon", r.horizon},
              {"stages", stages},
              {"limits", limits},
              {"index_lower_bound", r.index_lower_bound}};
}

inline Json to_json(const std::vector<AlmostPrimeFlag>& flags) {
  Json out = Json::array();
  for (const AlmostPrimeFlag& f : flags)
    out.push_back(Json{{"name", f.name},
                       {"union_of_primes", f.union_of_primes},
                       {"prime", f.prime},
                       {"almost_prime", f.almost_prime}});
  return out;
}

inline Json to_json(const CommVarIdeal& i) {
  if (i.is_unit()) return Json{{"unit", true}};
  if (i.is_zero()) return Json{{"zero", true}};
  Json mons = Json::array();
  for (const CommMonomial& m : i.explicit_gens()) {
    Json vars = Json::array();
    for (const auto& [v, e] : m)
      vars.push_back(Json{{"family", v.family}, {"index", v.index}, {"exp", e}});
    mons.push_back(vars);
  }
  Json fams = Json::array();
  for (int f : i.family_gens()) fams.push_back(f);
  return Json{{"monomials", mons}, {"families", fams}};
}

inline Json to_json(const IdealGrid& g) {
  Json rows = Json::array();
  for (int r = 0; r < 2; ++r) {
    Json row = Json::array();
    for (int c = 0; c < 2; ++c) row.push_back(to_json(g.at(r, c)));
    rows.push_back(row);
  }
  return Json{{"module", to_json(g.corner_module())}, {"entries", rows}};
}

inline Json to_json(const MatrixMonomial& m) {
  return Json{{"monomial", display(m.m)}, {"row", m.row}, {"col", m.col}};
}

inline Json to_json(const GridUnionReport& r) {
  Json witness = nullptr;
  if (r.not_prime_witness)
    witness = Json::array({to_json(r.not_prime_witness->first),
                           to_json(r.not_prime_witness->second)});
  Json primes = Json::array();
  for (const IdealGrid& p : r.minimal_primes) primes.push_back(to_json(p));
  return Json{{"union", to_json(r.union_grid)},
              {"semiprime", r.semiprime},
              {"prime", r.prime},
              {"not_prime_witness", witness},
              {"minimal_primes_known", r.minimal_primes_known},
              {"minimal_primes", primes}};
}

inline Json to_json(const RnLevelReport& l) {
  return Json{{"level", l.level},
              {"stage_family", l.stage_family},
              {"stages_checked", l.stages_checked},
              {"stages_prime", l.stages_prime},
              {"probe_pairs_checked", l.probe_pairs_checked},
              {"union_prime", l.union_prime},
              {"union_semiprime", l.union_semiprime},
              {"union_witness",
               Json::array({to_json(l.union_witness.first), to_json(l.union_witness.second)})},
              {"minimal_prime_count",
               l.minimal_prime_count ? Json(*l.minimal_prime_count) : Json(nullptr)},
              {"note", l.note}};
}

inline Json to_json(const RnChainReport& r) {
  Json levels = Json::array();
  for (const RnLevelReport& l : r.levels) levels.push_back(to_json(l));
  return Json{{"n", r.n},
              {"levels", levels},
              {"index_lower_bound", r.index_lower_bound},
              {"index_below_matrix_size", r.index_below_matrix_size}};
}

inline Json to_json(const ProbeCertificate& c) {
  return Json{{"b", c.b.str()},
              {"b_prime", c.b_prime.str()},
              {"verified", c.verified},
              {"attempts", c.attempts}};
}

inline Json to_json(const FreeUnionReport& r) {
  Json abs = Json::array();
  for (const Absorption& a : r.absorptions)
    abs.push_back(Json{{"element", a.element}, {"stage", a.stage}, {"minimal", a.minimal}});
  return Json{{"max_m", r.max_m},
              {"samples", r.samples},
              {"chain_monotone", r.chain_monotone},
              {"x_outside_all", r.x_outside_all},
              {"absorptions", abs},
              {"all_absorbed", r.all_absorbed},
              {"almost_prime", r.almost_prime},
              {"note", r.note}};
}

}  // namespace report

}  // namespace chainforge
