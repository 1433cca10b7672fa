#pragma once

#include <array>
#include <optional>
#include <utility>
#include <vector>

#include <chainforge/comm_var_ideal.hpp>
#include <chainforge/errors.hpp>

namespace chainforge {

// Ideal of the 2x2 corner ring [[A, M], [M, A]], stored entrywise. The
// constructor enforces the module closure conditions that make the entry
// table an actual two-sided ideal: corners inside M, and M * I_ij landing
// in both neighbours of the entry.
class IdealGrid {
 public:
  IdealGrid(CommVarIdeal m, std::array<std::array<CommVarIdeal, 2>, 2> entries)
      : m_(std::move(m)), e_(std::move(entries)) {
    if (!is_valid(m_, e_)) throw ConfigError("entry table is not an ideal of the corner ring");
  }

  static bool is_valid(const CommVarIdeal& m,
                       const std::array<std::array<CommVarIdeal, 2>, 2>& e) {
    if (!e[0][1].subset_of(m) || !e[1][0].subset_of(m)) return false;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        if (!product_subset_of(m, e[i][j], e[1 - i][j])) return false;
        if (!product_subset_of(m, e[i][j], e[i][1 - j])) return false;
      }
    return true;
  }

  const CommVarIdeal& corner_module() const { return m_; }
  const CommVarIdeal& at(int i, int j) const { return e_[i][j]; }

  bool subset_of(const IdealGrid& o) const {
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        if (!e_[i][j].subset_of(o.e_[i][j])) return false;
    return true;
  }

  friend bool operator==(const IdealGrid& a, const IdealGrid& b) {
    return a.m_ == b.m_ && a.e_ == b.e_;
  }

 private:
  CommVarIdeal m_;
  std::array<std::array<CommVarIdeal, 2>, 2> e_;
};

inline IdealGrid make_grid(CommVarIdeal m, CommVarIdeal i00, CommVarIdeal i01,
                           CommVarIdeal i10, CommVarIdeal i11) {
  std::array<std::array<CommVarIdeal, 2>, 2> e;
  e[0][0] = std::move(i00);
  e[0][1] = std::move(i01);
  e[1][0] = std::move(i10);
  e[1][1] = std::move(i11);
  return IdealGrid(std::move(m), std::move(e));
}

// M meet I, using containment shortcuts before falling back to the
// restricted intersection.
inline CommVarIdeal grid_meet(const CommVarIdeal& m, const CommVarIdeal& i) {
  if (i.subset_of(m)) return i;
  if (m.subset_of(i)) return m;
  return intersect(m, i);
}

inline bool grid_is_semiprime(const IdealGrid& g) {
  if (!cvi_is_semiprime(g.at(0, 0)) || !cvi_is_semiprime(g.at(1, 1))) return false;
  const CommVarIdeal& m = g.corner_module();
  CommVarIdeal c0 = grid_meet(m, g.at(0, 0));
  CommVarIdeal c1 = grid_meet(m, g.at(1, 1));
  return g.at(0, 1) == g.at(1, 0) && g.at(0, 1) == c0 && g.at(0, 1) == c1;
}

// The prime entry tables: one diagonal corner full and the other a prime
// over M with M corners, or both diagonals a common prime not containing M
// with meet corners.
inline bool grid_is_prime(const IdealGrid& g) {
  const CommVarIdeal& m = g.corner_module();
  if (g.at(1, 1).is_unit() && g.at(0, 1) == m && g.at(1, 0) == m &&
      cvi_is_prime(g.at(0, 0)) && m.subset_of(g.at(0, 0)))
    return true;
  if (g.at(0, 0).is_unit() && g.at(0, 1) == m && g.at(1, 0) == m &&
      cvi_is_prime(g.at(1, 1)) && m.subset_of(g.at(1, 1)))
    return true;
  if (g.at(0, 0) == g.at(1, 1) && cvi_is_prime(g.at(0, 0)) &&
      !m.subset_of(g.at(0, 0))) {
    CommVarIdeal mi = grid_meet(m, g.at(0, 0));
    return g.at(0, 1) == mi && g.at(1, 0) == mi;
  }
  return false;
}

namespace detail {

inline std::vector<int> grid_families(const IdealGrid& g) {
  std::set<int> fams;
  auto absorb = [&](const CommVarIdeal& i) {
    fams.insert(i.family_gens().begin(), i.family_gens().end());
    for (const CommMonomial& mono : i.explicit_gens())
      for (auto& [v, e] : mono) fams.insert(v.family);
  };
  absorb(g.corner_module());
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) absorb(g.at(i, j));
  return {fams.begin(), fams.end()};
}

// All monomials of degree <= max_deg over the given variables, ascending by
// degree and then by exponent map order.
inline std::vector<CommMonomial> monomials_up_to(const std::vector<CommVar>& vars,
                                                 int max_deg) {
  std::vector<CommMonomial> all{CommMonomial()};
  std::size_t lo = 0;
  for (int d = 1; d <= max_deg; ++d) {
    std::set<CommMonomial> next;
    for (std::size_t k = lo; k < all.size(); ++k)
      for (const CommVar& v : vars) {
        CommMonomial m = all[k];
        ++m[v];
        next.insert(m);
      }
    lo = all.size();
    all.insert(all.end(), next.begin(), next.end());
  }
  return all;
}

}  // namespace detail

struct StarCounterexample {
  int row = 0, col = 0;
  CommMonomial a;
};

// Direct bounded test of the squeezing condition: for every monomial a in
// the (i,j) slot module, A_ji * a^2 inside I_ij must force a into I_ij.
// Membership goes through plain divisibility scans; family-quantified
// premises are tested at every bounded index and once more at a fresh one.
// Returns the first violation in slot-major, degree-major order.
inline std::optional<StarCounterexample> grid_condition_star_oracle(
    const IdealGrid& g, int degree_bound, int var_bound) {
  std::vector<int> fams = detail::grid_families(g);
  std::vector<CommVar> vars;
  for (int f : fams)
    for (int i = 1; i <= var_bound; ++i) vars.push_back(CommVar{f, i});
  std::vector<CommMonomial> cands = detail::monomials_up_to(vars, degree_bound);
  const CommVarIdeal& m = g.corner_module();

  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      const CommVarIdeal& target = g.at(i, j);
      for (const CommMonomial& a : cands) {
        if (i != j && !m.contains(a)) continue;  // slot module is M
        CommMonomial sq = mono_mul(a, a);
        bool premise;
        if (j == i) {
          premise = target.contains(sq);
        } else {
          // A_ji = M: multiply the square by every generator-shaped element.
          premise = true;
          for (const CommMonomial& gm : m.explicit_gens())
            if (!target.contains(mono_mul(sq, gm))) {
              premise = false;
              break;
            }
          for (int f : m.family_gens()) {
            if (!premise) break;
            int fresh = detail::fresh_index(f, target, sq, CommMonomial());
            for (int idx = 1; idx <= var_bound && premise; ++idx)
              premise = target.contains(mono_mul(sq, mono_var(f, idx)));
            if (premise) premise = target.contains(mono_mul(sq, mono_var(f, fresh)));
          }
        }
        if (premise && !target.contains(a)) return StarCounterexample{i, j, a};
      }
    }
  return std::nullopt;
}

// Monomial times a matrix unit: m * e_{row,col}.
struct MatrixMonomial {
  CommMonomial m;
  int row = 0, col = 0;
};

inline bool grid_element_valid(const IdealGrid& g, const MatrixMonomial& a) {
  return a.row == a.col || g.corner_module().contains(a.m);
}

inline bool grid_contains(const IdealGrid& g, const MatrixMonomial& a) {
  return g.at(a.row, a.col).contains(a.m);
}

// Whether a * r * b lands in g for every ring element r. Only the
// (a.col, b.row) entry of r survives the product, so this is one sandwich
// containment against the corresponding slot module.
inline bool grid_pair_annihilates(const IdealGrid& g, const MatrixMonomial& a,
                                  const MatrixMonomial& b) {
  CommVarIdeal middle =
      a.col == b.row ? CommVarIdeal::unit() : g.corner_module();
  return sandwich_subset_of(a.m, middle, b.m, g.at(a.row, b.col));
}

struct GridUnionReport {
  IdealGrid union_grid;
  bool semiprime = false;
  bool prime = false;
  std::optional<std::pair<MatrixMonomial, MatrixMonomial>> not_prime_witness;
  bool minimal_primes_known = false;
  std::vector<IdealGrid> minimal_primes;
};

namespace detail {

inline void require_strict_ascent(const std::vector<IdealGrid>& stages) {
  if (stages.empty()) throw ConfigError("empty chain");
  for (std::size_t k = 0; k + 1 < stages.size(); ++k) {
    if (!stages[k].subset_of(stages[k + 1]) || stages[k] == stages[k + 1])
      throw ConfigError("chain stages must ascend strictly");
  }
}

// Smallest pair (a, b) outside u with a * R * b inside u, scanning slots in
// row-major order and monomials of degree <= 1 per slot.
inline std::optional<std::pair<MatrixMonomial, MatrixMonomial>> find_union_witness(
    const IdealGrid& u) {
  std::vector<MatrixMonomial> cands;
  std::vector<int> fams = grid_families(u);
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) {
      if (r == c) cands.push_back(MatrixMonomial{CommMonomial(), r, c});
      for (int f : fams) cands.push_back(MatrixMonomial{mono_var(f, 1), r, c});
    }
  for (const MatrixMonomial& a : cands) {
    if (!grid_element_valid(u, a) || grid_contains(u, a)) continue;
    for (const MatrixMonomial& b : cands) {
      if (!grid_element_valid(u, b) || grid_contains(u, b)) continue;
      if (grid_pair_annihilates(u, a, b)) return std::make_pair(a, b);
    }
  }
  return std::nullopt;
}

inline void fill_union_verdicts(GridUnionReport& rep) {
  rep.semiprime = grid_is_semiprime(rep.union_grid);
  rep.prime = grid_is_prime(rep.union_grid);
  if (!rep.prime) rep.not_prime_witness = find_union_witness(rep.union_grid);
  const CommVarIdeal& m = rep.union_grid.corner_module();
  bool all_m = true;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      if (!(rep.union_grid.at(i, j) == m)) all_m = false;
  if (all_m) {
    // Over the all-M ideal the prime entry tables above it bottom out in
    // exactly two incomparable shapes.
    CommVarIdeal a = CommVarIdeal::unit();
    rep.minimal_primes.push_back(make_grid(m, m, m, m, a));
    rep.minimal_primes.push_back(make_grid(m, a, m, m, m));
    rep.minimal_primes_known = true;
  }
}

}  // namespace detail

// Union report for a finite ascending chain: the union is the entrywise sum.
inline GridUnionReport grid_union_report(const std::vector<IdealGrid>& stages) {
  detail::require_strict_ascent(stages);
  CommVarIdeal m = stages.front().corner_module();
  std::array<std::array<CommVarIdeal, 2>, 2> e;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      CommVarIdeal acc = stages.front().at(i, j);
      for (std::size_t k = 1; k < stages.size(); ++k) acc = sum(acc, stages[k].at(i, j));
      e[i][j] = acc;
    }
  GridUnionReport rep{IdealGrid(std::move(m), std::move(e))};
  detail::fill_union_verdicts(rep);
  return rep;
}

namespace detail {

// Certifies that the given limit entry really is the union of the stage
// entries when the chain keeps growing in the same pattern: either the
// stages already equal the limit, or the limit is a single whole family and
// the stages walk up its index prefixes.
inline bool union_entry_exact(const std::vector<const CommVarIdeal*>& stages,
                              const CommVarIdeal& limit) {
  bool constant = true;
  for (const CommVarIdeal* s : stages)
    if (!(*s == limit)) constant = false;
  if (constant) return true;
  if (!limit.explicit_gens().empty() || limit.family_gens().size() != 1) return false;
  int fam = *limit.family_gens().begin();
  int prev_top = 0;
  for (const CommVarIdeal* s : stages) {
    if (!s->family_gens().empty()) return false;
    int top = 0;
    std::set<int> seen;
    for (const CommMonomial& g : s->explicit_gens()) {
      if (g.size() != 1) return false;
      const CommVar& v = g.begin()->first;
      if (v.family != fam || g.begin()->second != 1) return false;
      seen.insert(v.index);
      top = std::max(top, v.index);
    }
    for (int i = 1; i <= top; ++i)
      if (!seen.count(i)) return false;  // must be a contiguous prefix
    if (top <= prev_top) return false;
    prev_top = top;
  }
  return prev_top > 0;
}

}  // namespace detail

// Union report for a chain described by finitely many sampled stages plus
// its full union. The sampled stages must ascend strictly into the union,
// and every entry must match a pattern whose union is certifiably the given
// one.
inline GridUnionReport grid_union_report(const std::vector<IdealGrid>& stages,
                                         const IdealGrid& union_grid) {
  detail::require_strict_ascent(stages);
  for (const IdealGrid& s : stages)
    if (!s.subset_of(union_grid)) throw ConfigError("stage not inside the claimed union");
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      std::vector<const CommVarIdeal*> entry;
      for (const IdealGrid& s : stages) entry.push_back(&s.at(i, j));
      if (!detail::union_entry_exact(entry, union_grid.at(i, j)))
        throw ConfigError("cannot certify the claimed union from the sampled stages");
    }
  GridUnionReport rep{union_grid};
  detail::fill_union_verdicts(rep);
  return rep;
}

}  // namespace chainforge
