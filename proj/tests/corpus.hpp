#pragma once

// Random object generators shared by the unit tests and the acceptance
// binary. All draws go through the deterministic Rng so runs are
// reproducible.

#include <vector>

#include <chainforge/comm_var_ideal.hpp>
#include <chainforge/ideal_grid.hpp>
#include <chainforge/kl_ring.hpp>
#include <chainforge/random.hpp>

namespace corpus {

inline chainforge::CommMonomial random_monomial(chainforge::Rng& rng, int min_deg,
                                                int max_deg, int var_bound,
                                                int family = 1) {
  int d = rng.uniform_int(min_deg, max_deg);
  chainforge::CommMonomial m;
  for (int i = 0; i < d; ++i)
    ++m[chainforge::CommVar{family, rng.uniform_int(1, var_bound)}];
  return m;
}

// Single-family ideal over the first three variable indices: zero, the
// whole family, the unit ideal, or explicit monomials of degree at most
// two, with one branch forcing a squared variable into the generators.
inline chainforge::CommVarIdeal random_diag_entry(chainforge::Rng& rng) {
  using chainforge::CommVarIdeal;
  switch (rng.uniform_int(0, 5)) {
    case 0: return CommVarIdeal::zero();
    case 1: return CommVarIdeal::family_all({1});
    case 2: return CommVarIdeal::unit();
    case 3: {
      std::vector<chainforge::CommMonomial> gens{
          chainforge::mono_var(1, rng.uniform_int(1, 3), 2)};
      if (rng.coin()) gens.push_back(random_monomial(rng, 1, 2, 3));
      return CommVarIdeal::from_monomials(gens);
    }
    default: {
      std::vector<chainforge::CommMonomial> gens;
      int k = rng.uniform_int(1, 3);
      for (int i = 0; i < k; ++i) gens.push_back(random_monomial(rng, 1, 2, 3));
      return CommVarIdeal::from_monomials(gens);
    }
  }
}

// Samples entry tables over the single-family corner ring until the module
// closure conditions hold. Unconstrained independent draws almost never
// couple the corners to the diagonals, so the corner menu leans on the
// meets of the drawn diagonals to keep the accepted shapes diverse.
inline chainforge::IdealGrid random_valid_grid(chainforge::Rng& rng) {
  using chainforge::CommVarIdeal;
  CommVarIdeal m = CommVarIdeal::family_all({1});
  for (;;) {
    std::array<std::array<CommVarIdeal, 2>, 2> e;
    e[0][0] = random_diag_entry(rng);
    e[1][1] = rng.coin() ? e[0][0] : random_diag_entry(rng);
    auto corner = [&]() -> CommVarIdeal {
      switch (rng.uniform_int(0, 5)) {
        case 0: return CommVarIdeal::zero();
        case 1: return CommVarIdeal::family_all({1});
        case 2:
        case 3: return chainforge::grid_meet(m, e[0][0]);
        default: return chainforge::grid_meet(m, e[1][1]);
      }
    };
    e[0][1] = corner();
    e[1][0] = rng.uniform_int(0, 3) == 0 ? corner() : e[0][1];
    if (chainforge::IdealGrid::is_valid(m, e)) return chainforge::IdealGrid(m, e);
  }
}

// Strictly ascending chain of semiprime grids: squarefree diagonal ideals
// growing by one fresh squarefree monomial per stage, with corners pinned
// to the meet with M. The variable pool is wider than the longest chain, so
// a variable outside the ideal always remains and the rejection terminates.
inline std::vector<chainforge::IdealGrid> random_semiprime_chain(chainforge::Rng& rng,
                                                                 int length) {
  using chainforge::CommVarIdeal;
  CommVarIdeal m = CommVarIdeal::family_all({1});
  std::vector<chainforge::IdealGrid> chain;
  std::vector<chainforge::CommMonomial> gens;
  CommVarIdeal diag = CommVarIdeal::zero();
  while (static_cast<int>(chain.size()) < length) {
    chainforge::CommMonomial g;
    int d = rng.uniform_int(1, 2);
    while (static_cast<int>(g.size()) < d)
      g[chainforge::CommVar{1, rng.uniform_int(1, length + 2)}] = 1;  // squarefree
    if (diag.contains(g)) continue;
    gens.push_back(g);
    diag = CommVarIdeal::from_monomials(gens);
    CommVarIdeal corner = chainforge::grid_meet(m, diag);
    chain.push_back(chainforge::make_grid(m, diag, corner, corner, diag));
  }
  return chain;
}

inline chainforge::KLElement random_kl(chainforge::Rng& rng) {
  auto rat = [&] { return chainforge::Rational(rng.uniform_int(-3, 3)); };
  int plen = rng.uniform_int(0, 3);
  std::vector<chainforge::Mat2> prefix(plen);
  for (auto& m : prefix) m = chainforge::Mat2{rat(), rat(), rat(), rat()};
  chainforge::KLTail tail{rat(), rat(), {}};
  int devs = rng.uniform_int(0, 2);
  for (int i = 0; i < devs; ++i) tail.dev[plen + rng.uniform_int(0, 3)] = rat();
  return chainforge::KLElement(std::move(prefix), std::move(tail));
}

}  // namespace corpus
