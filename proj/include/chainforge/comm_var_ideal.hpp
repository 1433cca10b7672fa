#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <chainforge/errors.hpp>

namespace chainforge {

// A variable of the pattern-indexed polynomial ring: index is the subscript,
// family the superscript pattern tag. Rings with a single variable family
// use family 1 throughout.
struct CommVar {
  int family;
  int index;
  auto operator<=>(const CommVar&) const = default;
};

// Monomial as exponent map; the empty map is 1.
using CommMonomial = std::map<CommVar, int>;

inline int degree(const CommMonomial& m) {
  int d = 0;
  for (auto& [v, e] : m) d += e;
  return d;
}

inline bool divides(const CommMonomial& a, const CommMonomial& b) {
  for (auto& [v, e] : a) {
    auto it = b.find(v);
    if (it == b.end() || it->second < e) return false;
  }
  return true;
}

inline CommMonomial mono_mul(const CommMonomial& a, const CommMonomial& b) {
  CommMonomial out = a;
  for (auto& [v, e] : b) out[v] += e;
  return out;
}

inline CommMonomial mono_lcm(const CommMonomial& a, const CommMonomial& b) {
  CommMonomial out = a;
  for (auto& [v, e] : b) {
    int& slot = out[v];
    slot = std::max(slot, e);
  }
  return out;
}

inline CommMonomial mono_var(int family, int index, int exp = 1) {
  CommMonomial m;
  m[CommVar{family, index}] = exp;
  return m;
}

inline std::string display(const CommMonomial& m) {
  if (m.empty()) return "1";
  std::ostringstream os;
  bool first = true;
  for (auto& [v, e] : m) {
    if (!first) os << "*";
    first = false;
    os << "l" << v.index << "(" << v.family << ")";
    if (e > 1) os << "^" << e;
  }
  return os.str();
}

// Monomial ideal of the polynomial ring in pattern-indexed variables.
// Generators come in two kinds: explicit monomials, and whole families
// ("all variables with superscript j"). The representation is canonical:
// explicit generators divisible by an included family variable or by
// another generator are pruned.
class CommVarIdeal {
 public:
  CommVarIdeal() = default;  // zero ideal

  static CommVarIdeal zero() { return CommVarIdeal(); }

  static CommVarIdeal unit() {
    CommVarIdeal i;
    i.explicit_.insert(CommMonomial());
    return i;
  }

  static CommVarIdeal from_monomials(const std::vector<CommMonomial>& gens) {
    return make(gens, {});
  }

  static CommVarIdeal family_all(const std::vector<int>& families) {
    return make({}, families);
  }

  static CommVarIdeal make(const std::vector<CommMonomial>& gens,
                           const std::vector<int>& families) {
    CommVarIdeal i;
    i.families_.insert(families.begin(), families.end());
    for (const CommMonomial& g : gens) i.explicit_.insert(g);
    i.canonicalize();
    return i;
  }

  const std::set<CommMonomial>& explicit_gens() const { return explicit_; }
  const std::set<int>& family_gens() const { return families_; }

  bool is_zero() const { return explicit_.empty() && families_.empty(); }
  bool is_unit() const { return explicit_.count(CommMonomial()) > 0; }

  bool contains(const CommMonomial& m) const {
    for (auto& [v, e] : m)
      if (families_.count(v.family)) return true;
    for (const CommMonomial& g : explicit_)
      if (divides(g, m)) return true;
    return false;
  }

  bool subset_of(const CommVarIdeal& o) const {
    if (o.is_unit()) return true;
    // A whole family can only be covered by the same family tag: explicit
    // generators reach finitely many indices.
    for (int f : families_)
      if (!o.families_.count(f)) return false;
    for (const CommMonomial& g : explicit_)
      if (!o.contains(g)) return false;
    return true;
  }

  friend bool operator==(const CommVarIdeal& a, const CommVarIdeal& b) {
    return a.explicit_ == b.explicit_ && a.families_ == b.families_;
  }

  friend CommVarIdeal sum(const CommVarIdeal& a, const CommVarIdeal& b) {
    CommVarIdeal out;
    out.explicit_ = a.explicit_;
    out.explicit_.insert(b.explicit_.begin(), b.explicit_.end());
    out.families_ = a.families_;
    out.families_.insert(b.families_.begin(), b.families_.end());
    out.canonicalize();
    return out;
  }

  // Intersection, where finitely representable in this generator class.
  // Monomial ideals distribute intersection over generator sums, so the
  // result is assembled from pairwise generator intersections; a family
  // crossed with an unrelated generator has no finite pattern description
  // and raises UnsupportedError.
  friend CommVarIdeal intersect(const CommVarIdeal& a, const CommVarIdeal& b) {
    if (a.subset_of(b)) return a;
    if (b.subset_of(a)) return b;
    CommVarIdeal out;
    for (int f : a.families_) {
      if (b.families_.count(f)) {
        out.families_.insert(f);
        continue;
      }
      for (const CommMonomial& g : b.explicit_)
        out.explicit_.insert(family_meet_monomial(f, g));
      // Crossing f with a family common to both sides is redundant (the
      // common pair already contributes the larger ideal); crossing two
      // one-sided families has no finite pattern description.
      for (int f2 : b.families_)
        if (!a.families_.count(f2))
          throw UnsupportedError("intersection of distinct variable families is not representable");
    }
    for (int f : b.families_) {
      if (a.families_.count(f)) continue;
      for (const CommMonomial& g : a.explicit_)
        out.explicit_.insert(family_meet_monomial(f, g));
    }
    for (const CommMonomial& g : a.explicit_)
      for (const CommMonomial& h : b.explicit_)
        out.explicit_.insert(mono_lcm(g, h));
    out.canonicalize();
    return out;
  }

  // Largest variable index of the given family mentioned by the explicit
  // generators (0 when none); used to pick fresh indices.
  int max_index(int family) const {
    int mx = 0;
    for (const CommMonomial& g : explicit_)
      for (auto& [v, e] : g)
        if (v.family == family) mx = std::max(mx, v.index);
    return mx;
  }

 private:
  // <all lambda^(f)> meet <g>: finite exactly when g already contains a
  // family-f variable (then every lcm is divisible by g, giving back g).
  static CommMonomial family_meet_monomial(int f, const CommMonomial& g) {
    for (auto& [v, e] : g)
      if (v.family == f) return g;
    throw UnsupportedError("intersection of a family with an unrelated monomial is not representable");
  }

  void canonicalize() {
    if (explicit_.count(CommMonomial())) {  // unit swallows everything
      explicit_.clear();
      explicit_.insert(CommMonomial());
      families_.clear();
      return;
    }
    std::set<CommMonomial> kept;
    for (const CommMonomial& g : explicit_) {
      bool redundant = false;
      for (auto& [v, e] : g)
        if (families_.count(v.family)) {
          redundant = true;
          break;
        }
      if (redundant) continue;
      for (const CommMonomial& h : explicit_)
        if (h != g && divides(h, g)) {
          redundant = true;
          break;
        }
      if (!redundant) kept.insert(g);
    }
    explicit_ = std::move(kept);
  }

  std::set<CommMonomial> explicit_;
  std::set<int> families_;
};

namespace detail {

// Fresh index for family f: larger than anything f-indexed in the inputs,
// so that a generator of k divides m * lambda_fresh iff it divides m or is
// the family f tag itself. One generic index therefore decides the whole
// family quantification exactly.
inline int fresh_index(int family, const CommVarIdeal& k,
                       const CommMonomial& m1, const CommMonomial& m2) {
  int mx = k.max_index(family);
  for (auto& [v, e] : m1)
    if (v.family == family) mx = std::max(mx, v.index);
  for (auto& [v, e] : m2)
    if (v.family == family) mx = std::max(mx, v.index);
  return mx + 1;
}

}  // namespace detail

// Decides <m1> * S * <m2> inside K, with S a CommVarIdeal (unit allowed).
inline bool sandwich_subset_of(const CommMonomial& m1, const CommVarIdeal& s,
                               const CommMonomial& m2, const CommVarIdeal& k) {
  CommMonomial base = mono_mul(m1, m2);
  if (s.is_unit()) return k.contains(base);
  for (const CommMonomial& g : s.explicit_gens())
    if (!k.contains(mono_mul(base, g))) return false;
  for (int f : s.family_gens()) {
    int idx = detail::fresh_index(f, k, m1, m2);
    if (!k.contains(mono_mul(base, mono_var(f, idx)))) return false;
  }
  return true;
}

// Decides I * J inside K by checking all generator pairs; family generators
// are handled through fresh generic indices (exact, see fresh_index).
inline bool product_subset_of(const CommVarIdeal& i, const CommVarIdeal& j,
                              const CommVarIdeal& k) {
  const CommMonomial one;
  for (const CommMonomial& g : i.explicit_gens())
    for (const CommMonomial& h : j.explicit_gens())
      if (!k.contains(mono_mul(g, h))) return false;
  for (const CommMonomial& g : i.explicit_gens())
    for (int f : j.family_gens())
      if (!k.contains(mono_mul(g, mono_var(f, detail::fresh_index(f, k, g, one)))))
        return false;
  for (int f : i.family_gens()) {
    for (const CommMonomial& h : j.explicit_gens())
      if (!k.contains(mono_mul(h, mono_var(f, detail::fresh_index(f, k, h, one)))))
        return false;
    for (int f2 : j.family_gens()) {
      int i1 = detail::fresh_index(f, k, one, one);
      CommMonomial a = mono_var(f, i1);
      int i2 = detail::fresh_index(f2, k, a, one);
      if (f2 == f && i2 == i1) ++i2;
      if (!k.contains(mono_mul(a, mono_var(f2, i2)))) return false;
      if (f2 == f && !k.contains(mono_var(f, i1, 2))) return false;  // same-index square
    }
  }
  return true;
}

// Prime iff generated by variables (zero counts, the ring is a domain;
// the unit ideal does not).
inline bool cvi_is_prime(const CommVarIdeal& i) {
  if (i.is_unit()) return false;
  for (const CommMonomial& g : i.explicit_gens())
    if (degree(g) != 1) return false;
  return true;
}

// Semiprime iff generated by squarefree monomials.
inline bool cvi_is_semiprime(const CommVarIdeal& i) {
  for (const CommMonomial& g : i.explicit_gens())
    for (auto& [v, e] : g)
      if (e > 1) return false;
  return true;
}

}  // namespace chainforge
