#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <queue>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <chainforge/aho_corasick.hpp>
#include <chainforge/word.hpp>

namespace chainforge {

enum class LangOrder { equal, proper_subset, proper_superset, incomparable };

inline const char* to_string(LangOrder o) {
  switch (o) {
    case LangOrder::equal: return "equal";
    case LangOrder::proper_subset: return "proper_subset";
    case LangOrder::proper_superset: return "proper_superset";
    default: return "incomparable";
  }
}

namespace detail {

// Scratch NFA used by every combinator; never exposed. Canonicalization
// turns it into the unique minimal trim partial DFA.
struct Nfa {
  int num_states = 0;
  int start = 0;
  std::vector<std::vector<std::pair<int, int>>> edges;  // (letter index, to)
  std::vector<std::vector<int>> eps;
  std::vector<bool> accepting;

  int add_state(bool acc = false) {
    edges.emplace_back();
    eps.emplace_back();
    accepting.push_back(acc);
    return num_states++;
  }
  void add_edge(int from, int letter, int to) { edges[static_cast<std::size_t>(from)].push_back({letter, to}); }
  void add_eps(int from, int to) { eps[static_cast<std::size_t>(from)].push_back(to); }
};

}  // namespace detail

// A finite automaton in canonical form: deterministic (partial: missing
// transitions are encoded as -1), trim (every state lies on some accepting
// path, except possibly the start of the empty-language automaton), minimal,
// and numbered by BFS from the start in alphabet letter order. Two automata
// over the same alphabet recognize the same language iff their tables are
// identical, which keeps comparisons honest and reports reproducible.
class Automaton {
 public:
  // --- basic constructors ---

  static Automaton empty_language(const Alphabet& a) {
    detail::Nfa n;
    n.add_state(false);
    return canonicalize(a, n);
  }

  static Automaton epsilon_only(const Alphabet& a) {
    detail::Nfa n;
    n.add_state(true);
    return canonicalize(a, n);
  }

  static Automaton sigma_star(const Alphabet& a) {
    detail::Nfa n;
    int s = n.add_state(true);
    for (std::size_t i = 0; i < a.size(); ++i) n.add_edge(s, static_cast<int>(i), s);
    return canonicalize(a, n);
  }

  static Automaton single_word(const Alphabet& a, const Word& w) {
    a.require_word(w);
    detail::Nfa n;
    int cur = n.add_state(w.empty());
    for (std::size_t i = 0; i < w.size(); ++i) {
      int nxt = n.add_state(i + 1 == w.size());
      n.add_edge(cur, a.index_of(w[i]), nxt);
      cur = nxt;
    }
    return canonicalize(a, n);
  }

  // All words over a subset of the letters (e.g. y*).
  static Automaton letters_star(const Alphabet& a, const std::string& subset) {
    detail::Nfa n;
    int s = n.add_state(true);
    for (char c : subset) {
      if (!a.has(c)) throw ConfigError("letters_star: foreign letter");
      n.add_edge(s, a.index_of(c), s);
    }
    return canonicalize(a, n);
  }

  // Normal words of the idempotent quotient: no factor ll for idempotent l.
  // This is the ambient language of the e^2 = e examples; factor-closed.
  static Automaton normal_words(const Alphabet& a) {
    detail::Nfa n;
    int plain = n.add_state(true);  // last letter not idempotent (or none)
    std::map<char, int> after;
    for (char e : a.idempotents()) after[e] = n.add_state(true);
    auto target = [&](char c) {
      return a.is_idempotent(c) ? after[c] : plain;
    };
    for (std::size_t i = 0; i < a.size(); ++i) {
      char c = a.letters()[i];
      n.add_edge(plain, static_cast<int>(i), target(c));
      for (auto& [e, st] : after)
        if (e != c) n.add_edge(st, static_cast<int>(i), target(c));
    }
    return canonicalize(a, n);
  }

  // Words with fewer than `bound` occurrences of `letter`.
  static Automaton letter_count_below(const Alphabet& a, char letter, int bound) {
    if (!a.has(letter)) throw ConfigError("letter_count_below: foreign letter");
    if (bound < 1) return empty_language(a);
    detail::Nfa n;
    std::vector<int> level(static_cast<std::size_t>(bound));
    for (int i = 0; i < bound; ++i) level[static_cast<std::size_t>(i)] = n.add_state(true);
    for (int i = 0; i < bound; ++i)
      for (std::size_t li = 0; li < a.size(); ++li) {
        char c = a.letters()[li];
        if (c == letter) {
          if (i + 1 < bound) n.add_edge(level[static_cast<std::size_t>(i)], static_cast<int>(li), level[static_cast<std::size_t>(i) + 1]);
        } else {
          n.add_edge(level[static_cast<std::size_t>(i)], static_cast<int>(li), level[static_cast<std::size_t>(i)]);
        }
      }
    return canonicalize(a, n);
  }

  static Automaton length_at_most(const Alphabet& a, int n) {
    detail::Nfa nfa;
    int prev = nfa.add_state(true);
    for (int i = 0; i < n; ++i) {
      int nxt = nfa.add_state(true);
      for (std::size_t li = 0; li < a.size(); ++li) nfa.add_edge(prev, static_cast<int>(li), nxt);
      prev = nxt;
    }
    return canonicalize(a, nfa);
  }

  // Words containing some pattern as a factor, inside the ambient language.
  static Automaton factor_language(const Alphabet& a,
                                   const std::vector<Word>& patterns,
                                   const Automaton& ambient) {
    FactorAutomaton fa(a, patterns);
    detail::Nfa n;
    // AC nodes, plus one absorbing accept state.
    int sink = -1;
    for (std::size_t i = 0; i < fa.node_count(); ++i) n.add_state(false);
    sink = n.add_state(true);
    for (std::size_t li = 0; li < a.size(); ++li) n.add_edge(sink, static_cast<int>(li), sink);
    for (std::size_t node = 0; node < fa.node_count(); ++node) {
      if (fa.matched(static_cast<int>(node))) continue;  // unreachable below
      for (std::size_t li = 0; li < a.size(); ++li) {
        int to = fa.step(static_cast<int>(node), a.letters()[li]);
        n.add_edge(static_cast<int>(node), static_cast<int>(li),
                   fa.matched(to) ? sink : to);
      }
    }
    Automaton raw = canonicalize(a, n);
    return intersect(raw, ambient);
  }

  // --- combinators (all results canonical) ---

  friend Automaton intersect(const Automaton& x, const Automaton& y) {
    require_same_alphabet(x, y);
    std::size_t k = x.alphabet_.size();
    detail::Nfa n;
    std::map<std::pair<int, int>, int> id;
    std::queue<std::pair<int, int>> q;
    auto get = [&](int sx, int sy) {
      auto it = id.find({sx, sy});
      if (it != id.end()) return it->second;
      int s = n.add_state(x.accepting_[static_cast<std::size_t>(sx)] && y.accepting_[static_cast<std::size_t>(sy)]);
      id[{sx, sy}] = s;
      q.push({sx, sy});
      return s;
    };
    get(0, 0);
    while (!q.empty()) {
      auto [sx, sy] = q.front();
      q.pop();
      int from = id[{sx, sy}];
      for (std::size_t li = 0; li < k; ++li) {
        int tx = x.delta_[static_cast<std::size_t>(sx)][li];
        int ty = y.delta_[static_cast<std::size_t>(sy)][li];
        if (tx < 0 || ty < 0) continue;
        n.add_edge(from, static_cast<int>(li), get(tx, ty));
      }
    }
    return canonicalize(x.alphabet_, n);
  }

  friend Automaton unite(const Automaton& x, const Automaton& y) {
    require_same_alphabet(x, y);
    detail::Nfa n;
    int start = n.add_state(false);
    int ox = embed(n, x), oy = embed(n, y);
    n.add_eps(start, ox);
    n.add_eps(start, oy);
    return canonicalize(x.alphabet_, n);
  }

  friend Automaton concatenate(const Automaton& x, const Automaton& y) {
    require_same_alphabet(x, y);
    detail::Nfa n;
    int ox = embed(n, x, /*keep_accepting=*/false);
    int oy = embed(n, y);
    n.start = ox;
    for (int s = 0; s < x.num_states_; ++s)
      if (x.accepting_[static_cast<std::size_t>(s)]) n.add_eps(ox + s, oy);
    return canonicalize(x.alphabet_, n);
  }

  // Concatenation that may also share one idempotent boundary letter:
  // recognizes { uv } together with { u'l v' : u'l in L(x), lv' in L(y),
  // l idempotent }. This is the monomial product in the e^2 = e quotient
  // (the merged word is nf(u'l . lv')).
  friend Automaton concatenate_merged(const Automaton& x, const Automaton& y) {
    require_same_alphabet(x, y);
    const Alphabet& a = x.alphabet_;
    detail::Nfa n;
    int ox = embed(n, x, /*keep_accepting=*/false);
    int oy = embed(n, y);
    n.start = ox;
    for (int s = 0; s < x.num_states_; ++s)
      if (x.accepting_[static_cast<std::size_t>(s)]) n.add_eps(ox + s, oy);
    for (char e : a.idempotents()) {
      int li = a.index_of(e);
      int after = y.delta(0, e);
      if (after < 0) continue;
      for (int s = 0; s < x.num_states_; ++s) {
        int t = x.delta(s, e);
        if (t >= 0 && x.accepting_[static_cast<std::size_t>(t)])
          n.add_edge(ox + s, li, oy + after);
      }
    }
    return canonicalize(a, n);
  }

  // L(ambient) minus L(x).
  friend Automaton complement_within(const Automaton& x, const Automaton& ambient) {
    require_same_alphabet(x, ambient);
    std::size_t k = x.alphabet_.size();
    // Complete x with a dead state (index num_states_), flip acceptance,
    // and intersect with the ambient on the fly.
    detail::Nfa n;
    std::map<std::pair<int, int>, int> id;
    std::queue<std::pair<int, int>> q;
    int dead = x.num_states_;
    auto acc = [&](int sx, int sm) {
      bool in_x = sx != dead && x.accepting_[static_cast<std::size_t>(sx)];
      return !in_x && ambient.accepting_[static_cast<std::size_t>(sm)];
    };
    auto get = [&](int sx, int sm) {
      auto it = id.find({sx, sm});
      if (it != id.end()) return it->second;
      int s = n.add_state(acc(sx, sm));
      id[{sx, sm}] = s;
      q.push({sx, sm});
      return s;
    };
    get(0, 0);
    while (!q.empty()) {
      auto [sx, sm] = q.front();
      q.pop();
      int from = id[{sx, sm}];
      for (std::size_t li = 0; li < k; ++li) {
        int tm = ambient.delta_[static_cast<std::size_t>(sm)][li];
        if (tm < 0) continue;  // outside the ambient: irrelevant
        int tx = sx == dead ? dead : x.delta_[static_cast<std::size_t>(sx)][li];
        if (tx < 0) tx = dead;
        n.add_edge(from, static_cast<int>(li), get(tx, tm));
      }
    }
    return canonicalize(x.alphabet_, n);
  }

  // All factors of accepted words. On a trim automaton every state is on an
  // accepting path, so the factor language is the set of all path labels.
  friend Automaton factor_closure(const Automaton& x) {
    detail::Nfa n;
    int start = n.add_state(true);
    int ox = embed(n, x);
    for (int s = 0; s < x.num_states_; ++s) {
      n.add_eps(start, ox + s);
      n.accepting[static_cast<std::size_t>(ox + s)] = true;
    }
    if (x.accepting_count() == 0) return empty_language(x.alphabet_);
    return canonicalize(x.alphabet_, n);
  }

  // --- queries ---

  const Alphabet& alphabet() const { return alphabet_; }
  int state_count() const { return num_states_; }
  bool accepting(int s) const { return accepting_[static_cast<std::size_t>(s)]; }
  int delta(int s, char c) const {
    int li = alphabet_.index_of(c);
    if (li < 0) throw ConfigError("delta: foreign letter");
    return delta_[static_cast<std::size_t>(s)][static_cast<std::size_t>(li)];
  }
  int delta_by_index(int s, int li) const { return delta_[static_cast<std::size_t>(s)][static_cast<std::size_t>(li)]; }

  bool accepts(const Word& w) const {
    int s = 0;
    for (char c : w) {
      s = delta(s, c);
      if (s < 0) return false;
    }
    return accepting_[static_cast<std::size_t>(s)];
  }

  int accepting_count() const {
    int n = 0;
    for (bool b : accepting_) n += b ? 1 : 0;
    return n;
  }

  bool is_empty() const { return accepting_count() == 0; }

  bool subset_of(const Automaton& other) const {
    return difference_empty(*this, other);
  }

  friend LangOrder compare(const Automaton& x, const Automaton& y) {
    require_same_alphabet(x, y);
    bool xy = difference_empty(x, y);  // x subset of y
    bool yx = difference_empty(y, x);
    if (xy && yx) return LangOrder::equal;
    if (xy) return LangOrder::proper_subset;
    if (yx) return LangOrder::proper_superset;
    return LangOrder::incomparable;
  }

  bool operator==(const Automaton& o) const {
    return alphabet_ == o.alphabet_ && num_states_ == o.num_states_ &&
           delta_ == o.delta_ && accepting_ == o.accepting_;
  }

  // Shortest accepted word, lexicographically least among shortest;
  // nullopt for the empty language.
  std::optional<Word> shortest_word() const {
    if (accepting_[0]) return Word();
    std::vector<int> par(static_cast<std::size_t>(num_states_), -1);
    std::vector<char> via(static_cast<std::size_t>(num_states_), 0);
    std::vector<bool> seen(static_cast<std::size_t>(num_states_), false);
    std::queue<int> q;
    seen[0] = true;
    q.push(0);
    while (!q.empty()) {
      int s = q.front();
      q.pop();
      for (std::size_t li = 0; li < alphabet_.size(); ++li) {
        int t = delta_[static_cast<std::size_t>(s)][li];
        if (t < 0 || seen[static_cast<std::size_t>(t)]) continue;
        seen[static_cast<std::size_t>(t)] = true;
        par[static_cast<std::size_t>(t)] = s;
        via[static_cast<std::size_t>(t)] = alphabet_.letters()[li];
        if (accepting_[static_cast<std::size_t>(t)]) {
          Word w;
          for (int u = t; u != 0; u = par[static_cast<std::size_t>(u)]) w.push_back(via[static_cast<std::size_t>(u)]);
          std::reverse(w.begin(), w.end());
          return w;
        }
        q.push(t);
      }
    }
    return std::nullopt;
  }

  // Accepted words of length <= max_len in length-then-lex order.
  std::vector<Word> enumerate_language(std::size_t max_len) const {
    std::vector<Word> out;
    std::vector<std::pair<Word, int>> level{{Word(), 0}};
    if (accepting_[0]) out.push_back(Word());
    for (std::size_t len = 1; len <= max_len; ++len) {
      std::vector<std::pair<Word, int>> next;
      for (auto& [w, s] : level)
        for (std::size_t li = 0; li < alphabet_.size(); ++li) {
          int t = delta_[static_cast<std::size_t>(s)][li];
          if (t < 0) continue;
          Word w2 = w + alphabet_.letters()[li];
          if (accepting_[static_cast<std::size_t>(t)]) out.push_back(w2);
          next.push_back({std::move(w2), t});
        }
      level = std::move(next);
      if (level.empty()) break;
    }
    return out;
  }

  // Debug export: one edge per line "src letter dst", then the accepting
  // states on a trailing line.
  std::string edge_list() const {
    std::ostringstream os;
    for (int s = 0; s < num_states_; ++s)
      for (std::size_t li = 0; li < alphabet_.size(); ++li) {
        int t = delta_[static_cast<std::size_t>(s)][li];
        if (t >= 0) os << s << ' ' << alphabet_.letters()[li] << ' ' << t << '\n';
      }
    os << "accepting:";
    for (int s = 0; s < num_states_; ++s)
      if (accepting_[static_cast<std::size_t>(s)]) os << ' ' << s;
    os << '\n';
    return os.str();
  }

  // Canonicalization entry point used by every construction above.
  static Automaton canonicalize(const Alphabet& a, const detail::Nfa& nfa);

 private:
  Automaton(Alphabet a, int n, std::vector<std::vector<int>> delta,
            std::vector<bool> acc)
      : alphabet_(std::move(a)), num_states_(n), delta_(std::move(delta)),
        accepting_(std::move(acc)) {}

  static void require_same_alphabet(const Automaton& x, const Automaton& y) {
    if (!(x.alphabet_ == y.alphabet_)) throw ConfigError("alphabet mismatch");
  }

  // Copy a canonical automaton into an NFA under construction; returns the
  // index offset of its states.
  static int embed(detail::Nfa& n, const Automaton& x, bool keep_accepting = true) {
    int off = n.num_states;
    for (int s = 0; s < x.num_states_; ++s)
      n.add_state(keep_accepting && x.accepting_[static_cast<std::size_t>(s)]);
    for (int s = 0; s < x.num_states_; ++s)
      for (std::size_t li = 0; li < x.alphabet_.size(); ++li) {
        int t = x.delta_[static_cast<std::size_t>(s)][li];
        if (t >= 0) n.add_edge(off + s, static_cast<int>(li), off + t);
      }
    return off;
  }

  // True iff L(x) is a subset of L(y): explore x while tracking y (with an
  // implicit dead state) and look for a word accepted by x only.
  static bool difference_empty(const Automaton& x, const Automaton& y) {
    const int dead = y.num_states_;
    std::set<std::pair<int, int>> seen;
    std::queue<std::pair<int, int>> q;
    auto visit = [&](int sx, int sy) -> bool {
      if (!seen.insert({sx, sy}).second) return false;
      bool in_x = x.accepting_[static_cast<std::size_t>(sx)];
      bool in_y = sy != dead && y.accepting_[static_cast<std::size_t>(sy)];
      if (in_x && !in_y) return true;
      q.push({sx, sy});
      return false;
    };
    if (visit(0, 0)) return false;
    while (!q.empty()) {
      auto [sx, sy] = q.front();
      q.pop();
      for (std::size_t li = 0; li < x.alphabet_.size(); ++li) {
        int tx = x.delta_[static_cast<std::size_t>(sx)][li];
        if (tx < 0) continue;
        int ty = sy == dead ? dead : y.delta_[static_cast<std::size_t>(sy)][li];
        if (ty < 0) ty = dead;
        if (visit(tx, ty)) return false;
      }
    }
    return true;
  }

  Alphabet alphabet_;
  int num_states_;
  std::vector<std::vector<int>> delta_;  // -1 = undefined
  std::vector<bool> accepting_;
};

inline Automaton Automaton::canonicalize(const Alphabet& a, const detail::Nfa& nfa) {
  std::size_t k = a.size();
  // Epsilon closures.
  auto closure = [&](std::vector<int> states) {
    std::vector<bool> in(static_cast<std::size_t>(nfa.num_states), false);
    std::queue<int> q;
    for (int s : states) {
      if (!in[static_cast<std::size_t>(s)]) {
        in[static_cast<std::size_t>(s)] = true;
        q.push(s);
      }
    }
    while (!q.empty()) {
      int s = q.front();
      q.pop();
      for (int t : nfa.eps[static_cast<std::size_t>(s)])
        if (!in[static_cast<std::size_t>(t)]) {
          in[static_cast<std::size_t>(t)] = true;
          q.push(t);
        }
    }
    std::vector<int> out;
    for (int s = 0; s < nfa.num_states; ++s)
      if (in[static_cast<std::size_t>(s)]) out.push_back(s);
    return out;
  };

  // Subset construction (partial: the empty subset is "undefined").
  std::map<std::vector<int>, int> id;
  std::vector<std::vector<int>> delta;
  std::vector<bool> acc;
  std::vector<std::vector<int>> subsets;
  std::queue<int> work;
  auto get = [&](std::vector<int> sub) {
    auto it = id.find(sub);
    if (it != id.end()) return it->second;
    int s = static_cast<int>(subsets.size());
    id[sub] = s;
    bool any = false;
    for (int q2 : sub) any = any || nfa.accepting[static_cast<std::size_t>(q2)];
    subsets.push_back(std::move(sub));
    delta.emplace_back(k, -1);
    acc.push_back(any);
    work.push(s);
    return s;
  };
  get(closure({nfa.start}));
  while (!work.empty()) {
    int s = work.front();
    work.pop();
    for (std::size_t li = 0; li < k; ++li) {
      std::set<int> moved;
      for (int q2 : subsets[static_cast<std::size_t>(s)])
        for (auto& [l, t] : nfa.edges[static_cast<std::size_t>(q2)])
          if (l == static_cast<int>(li)) moved.insert(t);
      if (moved.empty()) continue;
      std::vector<int> target = closure(std::vector<int>(moved.begin(), moved.end()));
      delta[static_cast<std::size_t>(s)][li] = get(std::move(target));
    }
  }

  int n = static_cast<int>(subsets.size());
  // Trim: keep states that reach an accepting state; the start survives
  // regardless so the empty language still has a carrier.
  std::vector<std::vector<int>> rev(static_cast<std::size_t>(n));
  for (int s = 0; s < n; ++s)
    for (std::size_t li = 0; li < k; ++li) {
      int t = delta[static_cast<std::size_t>(s)][li];
      if (t >= 0) rev[static_cast<std::size_t>(t)].push_back(s);
    }
  std::vector<bool> useful(static_cast<std::size_t>(n), false);
  std::queue<int> q;
  for (int s = 0; s < n; ++s)
    if (acc[static_cast<std::size_t>(s)]) {
      useful[static_cast<std::size_t>(s)] = true;
      q.push(s);
    }
  while (!q.empty()) {
    int s = q.front();
    q.pop();
    for (int p : rev[static_cast<std::size_t>(s)])
      if (!useful[static_cast<std::size_t>(p)]) {
        useful[static_cast<std::size_t>(p)] = true;
        q.push(p);
      }
  }
  if (!useful[0]) {
    // Empty language: single dead start state.
    return Automaton(a, 1, {std::vector<int>(k, -1)}, {false});
  }
  std::vector<int> remap(static_cast<std::size_t>(n), -1);
  int kept = 0;
  for (int s = 0; s < n; ++s)
    if (useful[static_cast<std::size_t>(s)]) remap[static_cast<std::size_t>(s)] = kept++;
  std::vector<std::vector<int>> d2(static_cast<std::size_t>(kept), std::vector<int>(k, -1));
  std::vector<bool> a2(static_cast<std::size_t>(kept), false);
  for (int s = 0; s < n; ++s) {
    if (remap[static_cast<std::size_t>(s)] < 0) continue;
    a2[static_cast<std::size_t>(remap[static_cast<std::size_t>(s)])] = acc[static_cast<std::size_t>(s)];
    for (std::size_t li = 0; li < k; ++li) {
      int t = delta[static_cast<std::size_t>(s)][li];
      d2[static_cast<std::size_t>(remap[static_cast<std::size_t>(s)])][li] = (t >= 0 && remap[static_cast<std::size_t>(t)] >= 0) ? remap[static_cast<std::size_t>(t)] : -1;
    }
  }

  // Moore partition refinement on the partial DFA; -1 acts as the class of
  // the implicit dead state.
  n = kept;
  std::vector<int> cls(static_cast<std::size_t>(n));
  for (int s = 0; s < n; ++s) cls[static_cast<std::size_t>(s)] = a2[static_cast<std::size_t>(s)] ? 1 : 0;
  for (;;) {
    std::map<std::vector<int>, int> sigs;
    std::vector<int> next(static_cast<std::size_t>(n));
    for (int s = 0; s < n; ++s) {
      std::vector<int> sig;
      sig.reserve(k + 1);
      sig.push_back(cls[static_cast<std::size_t>(s)]);
      for (std::size_t li = 0; li < k; ++li) {
        int t = d2[static_cast<std::size_t>(s)][li];
        sig.push_back(t < 0 ? -1 : cls[static_cast<std::size_t>(t)]);
      }
      auto it = sigs.find(sig);
      if (it == sigs.end()) it = sigs.insert({sig, static_cast<int>(sigs.size())}).first;
      next[static_cast<std::size_t>(s)] = it->second;
    }
    bool changed = false;
    for (int s = 0; s < n; ++s) changed = changed || next[static_cast<std::size_t>(s)] != cls[static_cast<std::size_t>(s)];
    cls = std::move(next);
    if (!changed) break;
  }

  // BFS renumbering of classes from the start, letters in alphabet order.
  int nclasses = 0;
  for (int s = 0; s < n; ++s) nclasses = std::max(nclasses, cls[static_cast<std::size_t>(s)] + 1);
  std::vector<int> rep(static_cast<std::size_t>(nclasses), -1);
  for (int s = 0; s < n; ++s)
    if (rep[static_cast<std::size_t>(cls[static_cast<std::size_t>(s)])] < 0) rep[static_cast<std::size_t>(cls[static_cast<std::size_t>(s)])] = s;
  std::vector<int> order(static_cast<std::size_t>(nclasses), -1);
  int count = 0;
  std::queue<int> bq;
  order[static_cast<std::size_t>(cls[0])] = count++;
  bq.push(cls[0]);
  while (!bq.empty()) {
    int c = bq.front();
    bq.pop();
    int s = rep[static_cast<std::size_t>(c)];
    for (std::size_t li = 0; li < k; ++li) {
      int t = d2[static_cast<std::size_t>(s)][li];
      if (t < 0) continue;
      int tc = cls[static_cast<std::size_t>(t)];
      if (order[static_cast<std::size_t>(tc)] < 0) {
        order[static_cast<std::size_t>(tc)] = count++;
        bq.push(tc);
      }
    }
  }
  std::vector<std::vector<int>> d3(static_cast<std::size_t>(count), std::vector<int>(k, -1));
  std::vector<bool> a3(static_cast<std::size_t>(count), false);
  for (int c = 0; c < nclasses; ++c) {
    if (order[static_cast<std::size_t>(c)] < 0) continue;  // class unreachable after merging
    int s = rep[static_cast<std::size_t>(c)];
    a3[static_cast<std::size_t>(order[static_cast<std::size_t>(c)])] = a2[static_cast<std::size_t>(s)];
    for (std::size_t li = 0; li < k; ++li) {
      int t = d2[static_cast<std::size_t>(s)][li];
      d3[static_cast<std::size_t>(order[static_cast<std::size_t>(c)])][li] = t < 0 ? -1 : order[static_cast<std::size_t>(cls[static_cast<std::size_t>(t)])];
    }
  }
  return Automaton(a, count, std::move(d3), std::move(a3));
}

}  // namespace chainforge
