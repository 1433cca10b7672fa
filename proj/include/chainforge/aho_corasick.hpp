#pragma once

#include <cstddef>
#include <optional>
#include <queue>
#include <vector>

#include <chainforge/word.hpp>

namespace chainforge {

struct FactorMatch {
  std::size_t position;  // start index of the occurrence in the text
  std::size_t pattern;   // index into the pattern list
};

// Multi-pattern factor matcher: trie + failure links, with the goto function
// flattened into a complete transition table over the alphabet. One pass per
// text, independent of the number of patterns.
class FactorAutomaton {
 public:
  FactorAutomaton(const Alphabet& a, std::vector<Word> patterns)
      : alphabet_(a), patterns_(std::move(patterns)) {
    if (patterns_.empty()) throw ConfigError("pattern set must be nonempty");
    for (const Word& p : patterns_) {
      if (p.empty()) throw ConfigError("empty pattern not allowed");
      alphabet_.require_word(p);
    }
    build();
  }

  const Alphabet& alphabet() const { return alphabet_; }
  const std::vector<Word>& patterns() const { return patterns_; }
  std::size_t node_count() const { return next_.size(); }

  int step(int node, char c) const {
    return next_[static_cast<std::size_t>(node)]
                [static_cast<std::size_t>(alphabet_.index_of(c))];
  }
  bool matched(int node) const {
    return !out_[static_cast<std::size_t>(node)].empty();
  }
  const std::vector<std::size_t>& outputs(int node) const {
    return out_[static_cast<std::size_t>(node)];
  }
  std::size_t depth(int node) const {
    return depth_[static_cast<std::size_t>(node)];
  }

  // True iff some pattern occurs in w as a contiguous factor.
  bool contains(const Word& w) const {
    int node = 0;
    if (matched(node)) return true;
    for (char c : w) {
      node = step(node, c);
      if (matched(node)) return true;
    }
    return false;
  }

  // Leftmost occurrence over all patterns; ties at the same start position
  // prefer the shorter pattern, then the smaller pattern index.
  std::optional<FactorMatch> first_match(const Word& w) const {
    std::optional<FactorMatch> best;
    int node = 0;
    for (std::size_t end = 0; end < w.size(); ++end) {
      node = step(node, w[end]);
      for (std::size_t pi : out_[static_cast<std::size_t>(node)]) {
        std::size_t start = end + 1 - patterns_[pi].size();
        if (!best || start < best->position ||
            (start == best->position &&
             (patterns_[pi].size() < patterns_[best->pattern].size() ||
              (patterns_[pi].size() == patterns_[best->pattern].size() &&
               pi < best->pattern))))
          best = FactorMatch{start, pi};
      }
    }
    return best;
  }

 private:
  void build() {
    std::size_t k = alphabet_.size();
    next_.assign(1, std::vector<int>(k, 0));
    out_.assign(1, {});
    fail_.assign(1, 0);
    depth_.assign(1, 0);
    // Trie.
    std::vector<std::vector<int>> child(1, std::vector<int>(k, -1));
    for (std::size_t pi = 0; pi < patterns_.size(); ++pi) {
      int node = 0;
      for (char c : patterns_[pi]) {
        int ci = alphabet_.index_of(c);
        if (child[static_cast<std::size_t>(node)][static_cast<std::size_t>(ci)] < 0) {
          child[static_cast<std::size_t>(node)][static_cast<std::size_t>(ci)] =
              static_cast<int>(child.size());
          child.emplace_back(k, -1);
          out_.emplace_back();
          fail_.push_back(0);
          depth_.push_back(depth_[static_cast<std::size_t>(node)] + 1);
        }
        node = child[static_cast<std::size_t>(node)][static_cast<std::size_t>(ci)];
      }
      out_[static_cast<std::size_t>(node)].push_back(pi);
    }
    // Failure links + flattened goto, BFS order.
    next_.assign(child.size(), std::vector<int>(k, 0));
    std::queue<int> q;
    for (std::size_t ci = 0; ci < k; ++ci) {
      int c0 = child[0][ci];
      if (c0 >= 0) {
        fail_[static_cast<std::size_t>(c0)] = 0;
        next_[0][ci] = c0;
        q.push(c0);
      } else {
        next_[0][ci] = 0;
      }
    }
    while (!q.empty()) {
      int u = q.front();
      q.pop();
      int f = fail_[static_cast<std::size_t>(u)];
      for (std::size_t pi : out_[static_cast<std::size_t>(f)])
        out_[static_cast<std::size_t>(u)].push_back(pi);
      for (std::size_t ci = 0; ci < k; ++ci) {
        int v = child[static_cast<std::size_t>(u)][ci];
        if (v >= 0) {
          fail_[static_cast<std::size_t>(v)] = next_[static_cast<std::size_t>(f)][ci];
          next_[static_cast<std::size_t>(u)][ci] = v;
          q.push(v);
        } else {
          next_[static_cast<std::size_t>(u)][ci] = next_[static_cast<std::size_t>(f)][ci];
        }
      }
    }
  }

  Alphabet alphabet_;
  std::vector<Word> patterns_;
  std::vector<std::vector<int>> next_;
  std::vector<std::vector<std::size_t>> out_;
  std::vector<int> fail_;
  std::vector<std::size_t> depth_;
};

// Leftmost factor occurrence via a single automaton pass.
inline std::optional<FactorMatch> contains_factor(
    const Alphabet& a, const Word& w, const std::vector<Word>& patterns) {
  FactorAutomaton fa(a, patterns);
  return fa.first_match(w);
}

}  // namespace chainforge
