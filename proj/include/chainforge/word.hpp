#pragma once

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include <chainforge/errors.hpp>

namespace chainforge {

// Words are plain strings; each char is one letter of the alphabet.
using Word = std::string;

// Finite ordered alphabet. Letter order matters: it fixes enumeration order
// and the lexicographic order used for witness tie-breaking, so two runs of
// the library produce identical reports.
class Alphabet {
 public:
  Alphabet(std::string letters, std::string idempotents = "")
      : letters_(std::move(letters)), idempotents_(std::move(idempotents)) {
    if (letters_.empty()) throw ConfigError("alphabet must be nonempty");
    for (std::size_t i = 0; i < letters_.size(); ++i)
      for (std::size_t j = i + 1; j < letters_.size(); ++j)
        if (letters_[i] == letters_[j])
          throw ConfigError(std::string("duplicate letter '") + letters_[i] +
                            "' in alphabet");
    for (char e : idempotents_)
      if (!has(e))
        throw ConfigError(std::string("idempotent '") + e +
                          "' is not an alphabet letter");
  }

  const std::string& letters() const { return letters_; }
  const std::string& idempotents() const { return idempotents_; }
  std::size_t size() const { return letters_.size(); }

  bool has(char c) const { return letters_.find(c) != std::string::npos; }
  bool is_idempotent(char c) const {
    return idempotents_.find(c) != std::string::npos;
  }
  int index_of(char c) const {
    auto pos = letters_.find(c);
    return pos == std::string::npos ? -1 : static_cast<int>(pos);
  }

  void require_word(const Word& w) const {
    for (char c : w)
      if (!has(c))
        throw ConfigError(std::string("letter '") + c +
                          "' not in alphabet \"" + letters_ + "\"");
  }

  // Lexicographic comparison in alphabet order (not char order).
  bool lex_less(const Word& a, const Word& b) const {
    std::size_t n = std::min(a.size(), b.size());
    for (std::size_t i = 0; i < n; ++i) {
      int ia = index_of(a[i]), ib = index_of(b[i]);
      if (ia != ib) return ia < ib;
    }
    return a.size() < b.size();
  }

  // Length-then-lex; the canonical enumeration/report order everywhere.
  bool shortlex_less(const Word& a, const Word& b) const {
    if (a.size() != b.size()) return a.size() < b.size();
    return lex_less(a, b);
  }

  bool operator==(const Alphabet& o) const {
    return letters_ == o.letters_ && idempotents_ == o.idempotents_;
  }

 private:
  std::string letters_;
  std::string idempotents_;
};

// Length-reducing rewriting. The only supported rule family is ll -> l for
// idempotent letters l; that family is confluent for free (rules touch only
// adjacent equal letters), so normal forms are unique.
class RewriteSystem {
 public:
  // No rules at all: the free algebra.
  static RewriteSystem none(const Alphabet& a) {
    return RewriteSystem(Alphabet(a.letters()));
  }

  // One ll -> l rule per idempotent letter of the alphabet.
  static RewriteSystem idempotent_merges(const Alphabet& a) {
    return RewriteSystem(a);
  }

  // Explicit rule list; every rule must be ll -> l over the alphabet.
  RewriteSystem(const Alphabet& a,
                const std::vector<std::pair<Word, Word>>& rules)
      : alphabet_(a.letters(), "") {
    std::string idem;
    for (const auto& [lhs, rhs] : rules) {
      a.require_word(lhs);
      a.require_word(rhs);
      if (lhs.size() != 2 || rhs.size() != 1 || lhs[0] != lhs[1] ||
          lhs[0] != rhs[0])
        throw ConfigError("only idempotent merge rules ll -> l are supported");
      if (idem.find(lhs[0]) == std::string::npos) idem.push_back(lhs[0]);
    }
    alphabet_ = Alphabet(a.letters(), idem);
  }

  const Alphabet& alphabet() const { return alphabet_; }
  bool has_rules() const { return !alphabet_.idempotents().empty(); }

  std::vector<std::pair<Word, Word>> rules() const {
    std::vector<std::pair<Word, Word>> out;
    for (char e : alphabet_.idempotents())
      out.push_back({Word(2, e), Word(1, e)});
    return out;
  }

  // Unique irreducible form: collapse each run of an idempotent letter to a
  // single copy. One left-to-right pass is exhaustive for this rule family.
  Word normal_form(const Word& w) const {
    alphabet_.require_word(w);
    if (!has_rules()) return w;
    Word out;
    out.reserve(w.size());
    for (char c : w) {
      if (!out.empty() && out.back() == c && alphabet_.is_idempotent(c))
        continue;
      out.push_back(c);
    }
    return out;
  }

  bool is_normal(const Word& w) const { return normal_form(w) == w; }

 private:
  explicit RewriteSystem(Alphabet a) : alphabet_(std::move(a)) {}
  Alphabet alphabet_;
};

// Parse a word from its display form. "1" is the empty word; "x^3" expands
// to "xxx". Whitespace is ignored.
inline Word parse_word(const Alphabet& a, const std::string& text) {
  Word out;
  std::size_t i = 0;
  while (i < text.size()) {
    char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c)) || c == '1') {
      ++i;
      continue;
    }
    if (c == '^') {
      if (out.empty())
        throw ConfigError("'^' with no preceding letter in \"" + text + "\"");
      ++i;
      if (i >= text.size() || !std::isdigit(static_cast<unsigned char>(text[i])))
        throw ConfigError("'^' must be followed by digits in \"" + text + "\"");
      std::size_t k = 0;
      while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
        k = k * 10 + static_cast<std::size_t>(text[i] - '0');
        if (k > 1000) throw ConfigError("exponent too large in \"" + text + "\"");
        ++i;
      }
      if (k == 0) {
        out.pop_back();
      } else {
        out.append(k - 1, out.back());
      }
      continue;
    }
    if (!a.has(c))
      throw ConfigError(std::string("letter '") + c + "' not in alphabet \"" +
                        a.letters() + "\"");
    out.push_back(c);
    ++i;
  }
  return out;
}

inline std::string display_word(const Word& w) { return w.empty() ? "1" : w; }

// All words of length <= max_len, in length-then-lex order (alphabet order).
inline std::vector<Word> enumerate_words(const Alphabet& a,
                                         std::size_t max_len) {
  std::vector<Word> out;
  std::vector<Word> level{Word()};
  out.push_back(Word());
  for (std::size_t len = 1; len <= max_len; ++len) {
    std::vector<Word> next;
    next.reserve(level.size() * a.size());
    for (const Word& w : level)
      for (char c : a.letters()) next.push_back(w + c);
    out.insert(out.end(), next.begin(), next.end());
    level = std::move(next);
  }
  return out;
}

// Same, filtered by a membership predicate (e.g. an ambient language).
template <class Pred>
std::vector<Word> enumerate_words(const Alphabet& a, std::size_t max_len,
                                  Pred keep) {
  std::vector<Word> out;
  for (Word& w : enumerate_words(a, max_len))
    if (keep(w)) out.push_back(std::move(w));
  return out;
}

}  // namespace chainforge
