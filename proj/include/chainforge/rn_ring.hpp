#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <chainforge/comm_var_ideal.hpp>
#include <chainforge/errors.hpp>
#include <chainforge/ideal_grid.hpp>

namespace chainforge {

// n x n matrix ring over the pattern polynomial ring in families 1..n-1,
// with slot modules: the diagonal carries the whole ring, slot (i,j) with
// i != j carries M_max(i,j) (0-based), where M_j is generated by all
// variables of families j..n-1. The slot modules shrink away from the
// diagonal, which is what makes the entry tables below two-sided ideals.
class RnRing {
 public:
  explicit RnRing(int n) : n_(n) {
    if (n < 2 || n > 5) throw ConfigError("matrix size must be between 2 and 5");
  }

  int size() const { return n_; }
  int stage_family() const { return n_ - 1; }

  // M_j, 1 <= j <= n-1; families j..n-1.
  CommVarIdeal module_m(int j) const {
    std::vector<int> fams;
    for (int f = j; f <= n_ - 1; ++f) fams.push_back(f);
    return CommVarIdeal::family_all(fams);
  }

  CommVarIdeal slot_module(int i, int j) const {
    if (i == j) return CommVarIdeal::unit();
    return module_m(std::max(i, j));
  }

  // I_i: the first i variables of the innermost family, n-1. The stage
  // ideal of the chain is the all-entries table of I_i.
  CommVarIdeal stage_entry(int i) const {
    std::vector<CommMonomial> gens;
    for (int k = 1; k <= i; ++k) gens.push_back(mono_var(n_ - 1, k));
    return CommVarIdeal::from_monomials(gens);
  }

  bool element_valid(const MatrixMonomial& a) const {
    return a.row >= 0 && a.row < n_ && a.col >= 0 && a.col < n_ &&
           (a.row == a.col || slot_module(a.row, a.col).contains(a.m));
  }

  // Whether a * r * b stays inside the all-entries ideal over `entry` for
  // every ring element r. Only the (a.col, b.row) slot of r matters.
  bool pair_annihilates_uniform(const CommVarIdeal& entry, const MatrixMonomial& a,
                                const MatrixMonomial& b) const {
    return sandwich_subset_of(a.m, slot_module(a.col, b.row), b.m, entry);
  }

 private:
  int n_;
};

struct RnStageProbe {
  bool violation_found = false;
  std::optional<std::pair<MatrixMonomial, MatrixMonomial>> witness;
  long pairs_checked = 0;
};

// Bounded falsification search against the primality of the all-entries
// stage ideal: a violating pair a = m e_jk, b = m' e_j'k' annihilates into
// the stage through the single slot module between them. Every placement is
// dominated by a diagonal one, so the search ranges over middle modules and
// monomial pairs.
inline RnStageProbe rn_stage_probe(const RnRing& r, const CommVarIdeal& stage,
                                   int degree_bound, int var_bound) {
  std::vector<CommVar> vars;
  for (int f = 1; f <= r.size() - 1; ++f)
    for (int i = 1; i <= var_bound; ++i) vars.push_back(CommVar{f, i});
  std::vector<CommMonomial> cands = detail::monomials_up_to(vars, degree_bound);
  std::vector<CommMonomial> outside;
  for (const CommMonomial& m : cands)
    if (!stage.contains(m)) outside.push_back(m);

  RnStageProbe out;
  for (int s = 0; s <= r.size() - 1; ++s) {
    // s = 0 is the diagonal (full) middle; s >= 1 the module M_s.
    CommVarIdeal middle = s == 0 ? CommVarIdeal::unit() : r.module_m(s);
    for (const CommMonomial& m : outside)
      for (const CommMonomial& m2 : outside) {
        ++out.pairs_checked;
        if (sandwich_subset_of(m, middle, m2, stage)) {
          out.violation_found = true;
          out.witness = std::make_pair(MatrixMonomial{m, 0, 0},
                                       MatrixMonomial{m2, s, s});
          return out;
        }
      }
  }
  return out;
}

struct RnLevelReport {
  int level = 0;
  int stage_family = 0;
  int stages_checked = 0;
  bool stages_prime = false;
  long probe_pairs_checked = 0;
  bool union_prime = false;
  bool union_semiprime = false;
  std::pair<MatrixMonomial, MatrixMonomial> union_witness;
  std::optional<int> minimal_prime_count;
  std::string note;
};

struct RnChainReport {
  int n = 0;
  std::vector<RnLevelReport> levels;  // sizes n down to 2
  int index_lower_bound = 0;          // non-prime unions accumulated
  bool index_below_matrix_size = false;
};

namespace detail {

inline RnLevelReport rn_level_report(int level, int stages_checked,
                                     int degree_bound, int var_bound) {
  RnRing ring(level);
  RnLevelReport rep;
  rep.level = level;
  rep.stage_family = ring.stage_family();
  rep.stages_checked = stages_checked;

  std::vector<CommVarIdeal> stages;
  for (int i = 1; i <= stages_checked; ++i) stages.push_back(ring.stage_entry(i));
  for (std::size_t k = 0; k + 1 < stages.size(); ++k)
    if (!stages[k].subset_of(stages[k + 1]) || stages[k] == stages[k + 1])
      throw ConfigError("stage entries must ascend strictly");

  rep.stages_prime = true;
  for (const CommVarIdeal& st : stages) {
    if (!cvi_is_prime(st)) rep.stages_prime = false;
    RnStageProbe probe = rn_stage_probe(ring, st, degree_bound, var_bound);
    rep.probe_pairs_checked += probe.pairs_checked;
    if (probe.violation_found) rep.stages_prime = false;
  }

  CommVarIdeal entry = ring.module_m(level - 1);
  std::vector<const CommVarIdeal*> sampled;
  for (const CommVarIdeal& st : stages) sampled.push_back(&st);
  if (!union_entry_exact(sampled, entry))
    throw ConfigError("stage entries do not certify the claimed union");

  if (level == 2) {
    // The two-by-two level is exactly the corner-ring chain; route it
    // through the grid machinery so the fields share one code path.
    CommVarIdeal m = ring.module_m(1);
    std::vector<IdealGrid> grid_stages;
    for (const CommVarIdeal& st : stages)
      grid_stages.push_back(make_grid(m, st, st, st, st));
    GridUnionReport gur =
        grid_union_report(grid_stages, make_grid(m, entry, entry, entry, entry));
    rep.union_prime = gur.prime;
    rep.union_semiprime = gur.semiprime;
    if (gur.not_prime_witness) rep.union_witness = *gur.not_prime_witness;
    if (gur.minimal_primes_known)
      rep.minimal_prime_count = static_cast<int>(gur.minimal_primes.size());
    rep.note = "quotient is commutative";
    return rep;
  }

  rep.union_prime = false;
  rep.union_semiprime = cvi_is_semiprime(entry);
  MatrixMonomial a{CommMonomial(), 0, 0};
  MatrixMonomial b{CommMonomial(), level - 1, level - 1};
  if (entry.contains(a.m) || entry.contains(b.m) ||
      !ring.pair_annihilates_uniform(entry, a, b))
    throw ConfigError("corner units fail to witness the union");
  rep.union_witness = std::make_pair(a, b);
  rep.note =
      "quotient splits as the next level times a commutative factor; the "
      "commutative factor adds no non-prime unions";
  return rep;
}

}  // namespace detail

// Walks the levels from n down to 2. Each level contributes one ascending
// chain of prime all-entries ideals whose union is not prime, and its
// quotient hands the recursion to the next level, so the accumulated index
// stays one below the matrix size.
inline RnChainReport rn_chain_report(int n, int stages_checked = 3,
                                     int degree_bound = 2, int var_bound = 2) {
  if (n < 2 || n > 5) throw ConfigError("matrix size must be between 2 and 5");
  if (stages_checked < 2) throw ConfigError("need at least two stages per level");
  RnChainReport rep;
  rep.n = n;
  for (int level = n; level >= 2; --level) {
    RnLevelReport lr =
        detail::rn_level_report(level, stages_checked, degree_bound, var_bound);
    if (!lr.union_prime) ++rep.index_lower_bound;
    rep.levels.push_back(std::move(lr));
  }
  rep.index_below_matrix_size = rep.index_lower_bound < n;
  return rep;
}

}  // namespace chainforge
