#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <queue>
#include <set>
#include <tuple>
#include <utility>
#include <vector>

#include <chainforge/automaton.hpp>
#include <chainforge/word.hpp>

namespace chainforge {

// The monoid a monomial ideal lives in: its rewriting system (possibly
// trivial) together with the regular language of normal words. The language
// is factor-closed, which the decision procedures rely on.
struct Ambient {
  RewriteSystem rewrite;
  Automaton lang;

  const Alphabet& alphabet() const { return rewrite.alphabet(); }

  static Ambient free_words(const Alphabet& a) {
    RewriteSystem rs = RewriteSystem::none(a);
    Automaton all = Automaton::sigma_star(rs.alphabet());
    return Ambient{std::move(rs), std::move(all)};
  }

  static Ambient normal_words(const Alphabet& a) {
    RewriteSystem rs = RewriteSystem::idempotent_merges(a);
    Automaton nw = Automaton::normal_words(rs.alphabet());
    return Ambient{std::move(rs), std::move(nw)};
  }

  friend bool operator==(const Ambient& x, const Ambient& y) {
    return x.rewrite.alphabet() == y.rewrite.alphabet() &&
           x.rewrite.rules() == y.rewrite.rules() && x.lang == y.lang;
  }
};

// A two-sided monomial ideal, represented by the regular language of all
// monomials it contains (not by a generator antichain: chain limits are
// infinitely generated but still regular). The language is upward closed:
// w in I and nf(awb) normal imply nf(awb) in I.
class MonomialIdeal {
 public:
  static MonomialIdeal zero(const Ambient& amb) {
    return MonomialIdeal(amb, Automaton::empty_language(amb.alphabet()), {});
  }

  static MonomialIdeal from_generators(const Ambient& amb, std::vector<Word> gens) {
    if (gens.empty()) throw ConfigError("ideal_from_generators: no generators");
    for (const Word& g : gens) {
      if (g.empty()) throw ConfigError("ideal_from_generators: empty generator gives the unit ideal");
      if (!amb.rewrite.is_normal(g))
        throw ConfigError("ideal_from_generators: generator not in normal form: " + display_word(g));
    }
    std::sort(gens.begin(), gens.end(), [&](const Word& a, const Word& b) {
      return amb.alphabet().shortlex_less(a, b);
    });
    gens.erase(std::unique(gens.begin(), gens.end()), gens.end());
    Automaton lang = Automaton::factor_language(amb.alphabet(), gens, amb.lang);
    return MonomialIdeal(amb, std::move(lang), std::move(gens));
  }

  // Smallest ideal whose monomial set contains L: the upward closure of
  // L inside the ambient. Used for chain limits given as plain languages.
  static MonomialIdeal from_language(const Ambient& amb, const Automaton& l) {
    return MonomialIdeal(amb, upward_close(amb, l), {});
  }

  // Trusts the caller that l is already upward closed (internal fast path;
  // validate() checks the claim).
  static MonomialIdeal from_closed_language(const Ambient& amb, Automaton l,
                                            std::vector<Word> gens = {}) {
    return MonomialIdeal(amb, std::move(l), std::move(gens));
  }

  const Ambient& ambient() const { return amb_; }
  const Automaton& language() const { return lang_; }
  const std::vector<Word>& generators() const { return gens_; }

  bool contains(const Word& w) const {
    return lang_.accepts(amb_.rewrite.normal_form(w));
  }

  bool is_zero() const { return lang_.is_empty(); }
  bool is_unit() const { return lang_.accepts(Word()); }
  bool is_proper() const { return !is_unit(); }

  friend MonomialIdeal sum(const MonomialIdeal& i, const MonomialIdeal& j) {
    require_same_ambient(i, j);
    std::vector<Word> gens;
    if (!i.gens_.empty() && !j.gens_.empty()) {
      gens = i.gens_;
      gens.insert(gens.end(), j.gens_.begin(), j.gens_.end());
      std::sort(gens.begin(), gens.end(), [&](const Word& a, const Word& b) {
        return i.amb_.alphabet().shortlex_less(a, b);
      });
      gens.erase(std::unique(gens.begin(), gens.end()), gens.end());
    }
    return MonomialIdeal(i.amb_, unite(i.lang_, j.lang_), std::move(gens));
  }

  // Monomial set { nf(uv) : u in i, v in j }. Language concatenation plus
  // the boundary-merged splits, restricted to normal words; the result is
  // already upward closed (a prefix extension absorbs into u, a suffix
  // extension into v).
  friend MonomialIdeal product(const MonomialIdeal& i, const MonomialIdeal& j) {
    require_same_ambient(i, j);
    Automaton lang = intersect(concatenate_merged(i.lang_, j.lang_), i.amb_.lang);
    return MonomialIdeal(i.amb_, std::move(lang), {});
  }

  friend MonomialIdeal intersect(const MonomialIdeal& i, const MonomialIdeal& j) {
    require_same_ambient(i, j);
    return MonomialIdeal(i.amb_, intersect(i.lang_, j.lang_), {});
  }

  bool subset_of(const MonomialIdeal& o) const {
    require_same_ambient(*this, o);
    return lang_.subset_of(o.lang_);
  }

  friend LangOrder compare(const MonomialIdeal& i, const MonomialIdeal& j) {
    require_same_ambient(i, j);
    return compare(i.lang_, j.lang_);
  }

  friend bool operator==(const MonomialIdeal& i, const MonomialIdeal& j) {
    return i.amb_ == j.amb_ && i.lang_ == j.lang_;
  }

  static Automaton upward_close(const Ambient& amb, const Automaton& l) {
    Automaton inside = intersect(l, amb.lang);
    Automaton closed = concatenate_merged(concatenate_merged(amb.lang, inside), amb.lang);
    return intersect(closed, amb.lang);
  }

 private:
  MonomialIdeal(Ambient amb, Automaton lang, std::vector<Word> gens)
      : amb_(std::move(amb)), lang_(std::move(lang)), gens_(std::move(gens)) {}

  static void require_same_ambient(const MonomialIdeal& i, const MonomialIdeal& j) {
    if (!(i.amb_ == j.amb_)) throw ConfigError("ideal operation across different ambients");
  }

  Ambient amb_;
  Automaton lang_;
  std::vector<Word> gens_;  // empty when not generator-constructed
};

struct PrimalityVerdict {
  bool prime;
  std::optional<std::pair<Word, Word>> witness;  // u, u' with u R u' inside I
};

struct SemiprimalityVerdict {
  bool semiprime;
  std::optional<Word> witness;  // u with u R u inside I
};

struct ClosureNonConvergence : Error {
  MonomialIdeal last;
  int rounds;
  ClosureNonConvergence(MonomialIdeal l, int r)
      : Error("semiprime closure did not reach a fixpoint"), last(std::move(l)), rounds(r) {}
};

namespace detail {

// Decision machine for transitivity questions on the complement C =
// ambient \ I. C is factor-closed, so its trim automaton has every state
// accepting; states are refined by the last idempotent letter read, which
// is what boundary merges at the w|u' junction depend on.
//
// The key simulation: fix a state p (reached by some u not in I). As w
// ranges over all monomials, the state after reading nf(u w) ranges over
// exactly the plain reachability set S(p) (a leading merge in w only
// shortens w, and w = 1 keeps p itself). Reading a candidate u' then kills
// a survivor q in S(p) unless the walk stays inside C, where the first
// letter of u' may be absorbed in place when it equals the last idempotent
// letter at q. "u R u' inside I" holds iff every survivor dies.
class DecisionAutomaton {
 public:
  explicit DecisionAutomaton(const MonomialIdeal& ideal)
      : alph_(&ideal.ambient().alphabet()) {
    Automaton c = complement_within(ideal.language(), ideal.ambient().lang);
    if (c.is_empty())
      throw ConfigError("primality is undefined for the unit ideal");
    // Refine by last idempotent letter, breadth-first in alphabet order so
    // access words come out shortest and lexicographically least.
    std::map<std::pair<int, char>, int> id;
    std::queue<std::pair<int, char>> work;
    auto get = [&](int q, char tag) {
      auto it = id.find({q, tag});
      if (it != id.end()) return it->second;
      int s = static_cast<int>(delta_.size());
      id[{q, tag}] = s;
      delta_.emplace_back(alph_->size(), -1);
      last_idem_.push_back(tag);
      access_.emplace_back();
      work.push({q, tag});
      return s;
    };
    get(0, 0);
    while (!work.empty()) {
      auto [q, tag] = work.front();
      work.pop();
      int from = id[{q, tag}];
      for (std::size_t li = 0; li < alph_->size(); ++li) {
        int t = c.delta_by_index(q, static_cast<int>(li));
        if (t < 0) continue;
        char letter = alph_->letters()[li];
        char tag2 = alph_->is_idempotent(letter) ? letter : 0;
        bool fresh = id.find({t, tag2}) == id.end();
        int to = get(t, tag2);
        if (fresh) access_[static_cast<std::size_t>(to)] = access_[static_cast<std::size_t>(from)] + letter;
        delta_[static_cast<std::size_t>(from)][li] = to;
      }
    }
  }

  int states() const { return static_cast<int>(delta_.size()); }

  // Shortest (then lex-least) word reaching state p from the start.
  const Word& access(int p) const { return access_[static_cast<std::size_t>(p)]; }

  // State after reading a normal word, -1 if the word leaves C.
  int run(const Word& u) const {
    int s = 0;
    for (char ch : u) {
      int li = alph_->index_of(ch);
      if (li < 0) throw ConfigError("run: foreign letter");
      s = delta_[static_cast<std::size_t>(s)][static_cast<std::size_t>(li)];
      if (s < 0) return -1;
    }
    return s;
  }

  std::vector<int> reach(int p) const {
    std::vector<bool> seen(delta_.size(), false);
    std::queue<int> q;
    seen[static_cast<std::size_t>(p)] = true;
    q.push(p);
    while (!q.empty()) {
      int s = q.front();
      q.pop();
      for (std::size_t li = 0; li < alph_->size(); ++li) {
        int t = delta_[static_cast<std::size_t>(s)][li];
        if (t >= 0 && !seen[static_cast<std::size_t>(t)]) {
          seen[static_cast<std::size_t>(t)] = true;
          q.push(t);
        }
      }
    }
    std::vector<int> out;
    for (std::size_t s = 0; s < delta_.size(); ++s)
      if (seen[s]) out.push_back(static_cast<int>(s));
    return out;
  }

  // One survivor step. On the first letter of u' an idempotent may be
  // absorbed in place (the accumulated word already ends with it); note
  // that in that case the plain transition is necessarily undefined, since
  // C contains no word with a doubled idempotent.
  int survivor_step(int q, std::size_t li, bool fresh) const {
    char letter = alph_->letters()[li];
    if (fresh && alph_->is_idempotent(letter) && last_idem_[static_cast<std::size_t>(q)] == letter)
      return q;
    return delta_[static_cast<std::size_t>(q)][li];
  }

  // Does reading v (normal, inside C) kill every survivor started at S?
  bool survivors_die(const std::vector<int>& start, const Word& v) const {
    std::set<int> t(start.begin(), start.end());
    bool fresh = true;
    for (char ch : v) {
      int li = alph_->index_of(ch);
      std::set<int> next;
      for (int q : t) {
        int r = survivor_step(q, static_cast<std::size_t>(li), fresh);
        if (r >= 0) next.insert(r);
      }
      t = std::move(next);
      fresh = false;
      if (t.empty()) return true;
    }
    return t.empty();
  }

  // Breadth-first search over configurations (r, T): r tracks the word
  // being built (it must stay in C), T the survivors from S(p). Returns the
  // shortest word (lex-least among shortest) reaching T = {} — and, when
  // require_return is set, state r = p as well, which is the semiprime
  // variant where the same word plays both roles.
  std::optional<Word> config_search(int p, bool require_return) const {
    struct Node {
      int r;
      std::vector<int> t;
      bool fresh;
      int parent;
      char letter;
    };
    std::vector<Node> nodes;
    std::map<std::tuple<int, std::vector<int>, bool>, int> seen;
    std::queue<int> q;
    auto push = [&](int r, std::vector<int> t, bool fresh, int parent, char letter) -> int {
      auto key = std::make_tuple(r, t, fresh);
      if (seen.count(key)) return -1;
      int idx = static_cast<int>(nodes.size());
      seen[key] = idx;
      nodes.push_back({r, std::move(t), fresh, parent, letter});
      q.push(idx);
      return idx;
    };
    auto rebuild = [&](int idx) {
      Word w;
      for (int i = idx; nodes[static_cast<std::size_t>(i)].parent >= 0; i = nodes[static_cast<std::size_t>(i)].parent)
        w.push_back(nodes[static_cast<std::size_t>(i)].letter);
      std::reverse(w.begin(), w.end());
      return w;
    };
    auto accepting = [&](const Node& n) {
      return n.t.empty() && (!require_return || n.r == p);
    };
    push(0, reach(p), true, -1, 0);
    if (accepting(nodes[0])) return rebuild(0);  // cannot happen: p survives
    while (!q.empty()) {
      int idx = q.front();
      q.pop();
      Node cur = nodes[static_cast<std::size_t>(idx)];  // copy: nodes may reallocate
      for (std::size_t li = 0; li < alph_->size(); ++li) {
        int r2 = delta_[static_cast<std::size_t>(cur.r)][li];
        if (r2 < 0) continue;
        std::set<int> t2;
        for (int s : cur.t) {
          int r = survivor_step(s, li, cur.fresh);
          if (r >= 0) t2.insert(r);
        }
        int child = push(r2, std::vector<int>(t2.begin(), t2.end()), false, idx,
                         alph_->letters()[li]);
        if (child >= 0 && accepting(nodes[static_cast<std::size_t>(child)])) return rebuild(child);
        if (nodes.size() > 400000)
          throw Error("transitivity search exceeded its configuration budget");
      }
    }
    return std::nullopt;
  }

  // Regular language of all u outside I with u R u inside I, as one
  // automaton: for each p, the configuration graph started at (start,
  // S(p)) accepting exactly at (p, {}). Subgraphs are kept disjoint since
  // acceptance depends on the starting p.
  Automaton offenders(const Ambient& amb) const {
    Nfa nfa;
    int super = nfa.add_state(false);
    for (int p = 0; p < states(); ++p) {
      std::map<std::tuple<int, std::vector<int>, bool>, int> id;
      std::queue<std::tuple<int, std::vector<int>, bool>> work;
      auto get = [&](int r, std::vector<int> t, bool fresh) {
        auto key = std::make_tuple(r, t, fresh);
        auto it = id.find(key);
        if (it != id.end()) return it->second;
        bool acc = t.empty() && r == p;
        int s = nfa.add_state(acc);
        id[key] = s;
        work.push(std::make_tuple(r, std::move(t), fresh));
        return s;
      };
      int start = get(0, reach(p), true);
      nfa.add_eps(super, start);
      while (!work.empty()) {
        auto [r, t, fresh] = work.front();
        work.pop();
        int from = id[std::make_tuple(r, t, fresh)];
        for (std::size_t li = 0; li < alph_->size(); ++li) {
          int r2 = delta_[static_cast<std::size_t>(r)][li];
          if (r2 < 0) continue;
          std::set<int> t2;
          for (int s : t) {
            int nx = survivor_step(s, li, fresh);
            if (nx >= 0) t2.insert(nx);
          }
          nfa.add_edge(from, static_cast<int>(li),
                       get(r2, std::vector<int>(t2.begin(), t2.end()), false));
          if (nfa.num_states > 800000)
            throw Error("offender search exceeded its configuration budget");
        }
      }
    }
    return Automaton::canonicalize(amb.alphabet(), nfa);
  }

 private:
  const Alphabet* alph_;
  std::vector<std::vector<int>> delta_;
  std::vector<char> last_idem_;  // 0 = none
  std::vector<Word> access_;
};

inline void require_factor_closed(const Ambient& amb) {
  if (!(factor_closure(amb.lang) == amb.lang))
    throw ConfigError("ambient language is not factor-closed");
}

}  // namespace detail

// Exact test of u R v inside I for concrete monomials (u, v need not be
// normal). True when every nf(u w v) lies in I.
inline bool urv_contained(const MonomialIdeal& i, const Word& u, const Word& v) {
  Word un = i.ambient().rewrite.normal_form(u);
  Word vn = i.ambient().rewrite.normal_form(v);
  if (i.contains(un) || i.contains(vn)) return true;  // absorption
  detail::DecisionAutomaton d(i);
  int p = d.run(un);
  return d.survivors_die(d.reach(p), vn);
}

// Decides whether I is prime: for all u, u' outside I some u w u' stays
// outside. Witness pair extracted by breadth-first search, globally
// minimized by (|u| + |u'|, |u|, u, u') with words ordered by alphabet
// position; reports are therefore deterministic.
inline PrimalityVerdict is_prime(const MonomialIdeal& i) {
  detail::require_factor_closed(i.ambient());
  detail::DecisionAutomaton d(i);
  const Alphabet& a = i.ambient().alphabet();
  std::optional<std::pair<Word, Word>> best;
  auto rank_less = [&](const std::pair<Word, Word>& x, const std::pair<Word, Word>& y) {
    std::size_t tx = x.first.size() + x.second.size();
    std::size_t ty = y.first.size() + y.second.size();
    if (tx != ty) return tx < ty;
    if (x.first.size() != y.first.size()) return x.first.size() < y.first.size();
    if (x.first != y.first) return a.lex_less(x.first, y.first);
    return a.lex_less(x.second, y.second);
  };
  for (int p = 0; p < d.states(); ++p) {
    auto v = d.config_search(p, false);
    if (!v) continue;
    std::pair<Word, Word> cand{d.access(p), *v};
    if (!best || rank_less(cand, *best)) best = cand;
  }
  if (best) return {false, best};
  return {true, std::nullopt};
}

// Decides whether I is semiprime: for all u outside I some u w u stays
// outside. Witness is the shortest (then lex-least) offender.
inline SemiprimalityVerdict is_semiprime(const MonomialIdeal& i) {
  detail::require_factor_closed(i.ambient());
  detail::DecisionAutomaton d(i);
  const Alphabet& a = i.ambient().alphabet();
  std::optional<Word> best;
  for (int p = 0; p < d.states(); ++p) {
    auto v = d.config_search(p, true);
    if (!v) continue;
    if (!best || v->size() < best->size() ||
        (v->size() == best->size() && a.lex_less(*v, *best)))
      best = *v;
  }
  if (best) return {false, best};
  return {true, std::nullopt};
}

// Smallest semiprime monomial ideal containing i, by adjoining the full
// offender language and iterating. Throws ClosureNonConvergence with the
// last iterate if max_rounds passes do not reach the fixpoint.
inline MonomialIdeal semiprime_closure(const MonomialIdeal& i, int max_rounds = 12) {
  if (max_rounds < 1) throw ConfigError("semiprime_closure: max_rounds must be positive");
  detail::require_factor_closed(i.ambient());
  MonomialIdeal cur = i;
  for (int round = 0; round < max_rounds; ++round) {
    detail::DecisionAutomaton d(cur);
    Automaton off = d.offenders(cur.ambient());
    if (off.is_empty()) return cur;
    Automaton next = unite(cur.language(), off);
    // Adjoining offenders preserves upward closure (aub with u an offender
    // is an offender), but re-close defensively; it is a cheap no-op then.
    cur = MonomialIdeal::from_language(cur.ambient(), next);
  }
  throw ClosureNonConvergence(std::move(cur), max_rounds);
}

enum class IdealProperty { prime, semiprime };

struct BruteForceResult {
  bool violation_found;
  Word u, v;  // v = u in the semiprime case
};

// Exhaustive scan over u, v of length <= max_u: a pair is a candidate when
// u w v lands in I for every w of length <= max_w, and is then certified
// exactly by the complement automaton (the bound only filters candidates,
// the automaton decides the "for all w" part). No violation found is a
// consistency statement, not a proof.
inline BruteForceResult brute_force_check(const MonomialIdeal& i, IdealProperty kind,
                                          int max_u, int max_w) {
  if (max_u < 1 || max_w < 1) throw ConfigError("brute_force_check: bounds must be positive");
  detail::DecisionAutomaton d(i);
  std::vector<Word> us = i.ambient().lang.enumerate_language(static_cast<std::size_t>(max_u));
  std::vector<Word> ws = i.ambient().lang.enumerate_language(static_cast<std::size_t>(max_w));
  const RewriteSystem& rw = i.ambient().rewrite;
  auto candidate = [&](const Word& u, const Word& v) {
    for (const Word& w : ws)
      if (!i.contains(rw.normal_form(u + w + v))) return false;
    return true;
  };
  for (const Word& u : us) {
    if (i.contains(u)) continue;
    int p = d.run(u);
    if (kind == IdealProperty::semiprime) {
      if (candidate(u, u) && d.survivors_die(d.reach(p), u)) return {true, u, u};
      continue;
    }
    for (const Word& v : us) {
      if (i.contains(v)) continue;
      if (candidate(u, v) && d.survivors_die(d.reach(p), v)) return {true, u, v};
    }
  }
  return {false, {}, {}};
}

// Checks the representation invariants; throws ConfigError on violation.
inline void validate(const MonomialIdeal& i) {
  if (!i.language().subset_of(i.ambient().lang))
    throw ConfigError("ideal language leaves the ambient");
  detail::require_factor_closed(i.ambient());
  Automaton closed = MonomialIdeal::upward_close(i.ambient(), i.language());
  if (!(closed == i.language()))
    throw ConfigError("ideal language is not upward closed");
}

}  // namespace chainforge
