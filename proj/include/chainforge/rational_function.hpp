#pragma once

#include <limits>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <chainforge/errors.hpp>
#include <chainforge/polynomial.hpp>

namespace chainforge {

// Valuation of the zero function. Every finite valuation that can occur here
// is tiny, so the sentinel never collides.
inline constexpr long kValuationInfinity = std::numeric_limits<long>::max();

// Reduced fraction of polynomials with monic denominator. Canonical: equal
// functions compare equal structurally.
class RatFunc {
 public:
  RatFunc() : num_(), den_(Rational(1)) {}
  RatFunc(Rational c) : num_(std::move(c)), den_(Rational(1)) {}  // NOLINT
  RatFunc(Poly num, Poly den) : num_(std::move(num)), den_(std::move(den)) {
    if (den_.is_zero()) throw ConfigError("rational function with zero denominator");
    reduce();
  }

  static RatFunc y_power(long k) {
    return k >= 0 ? RatFunc(Poly::y_power(static_cast<int>(k)), Poly(Rational(1)))
                  : RatFunc(Poly(Rational(1)), Poly::y_power(static_cast<int>(-k)));
  }

  const Poly& num() const { return num_; }
  const Poly& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }

  friend RatFunc operator+(const RatFunc& a, const RatFunc& b) {
    return RatFunc(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
  }
  friend RatFunc operator-(const RatFunc& a, const RatFunc& b) {
    return RatFunc(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
  }
  friend RatFunc operator*(const RatFunc& a, const RatFunc& b) {
    return RatFunc(a.num_ * b.num_, a.den_ * b.den_);
  }
  friend RatFunc operator/(const RatFunc& a, const RatFunc& b) {
    if (b.is_zero()) throw ConfigError("division by the zero function");
    return RatFunc(a.num_ * b.den_, a.den_ * b.num_);
  }
  RatFunc operator-() const { return RatFunc(Poly(Rational(-1)) * num_, den_); }
  friend bool operator==(const RatFunc& a, const RatFunc& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator!=(const RatFunc& a, const RatFunc& b) { return !(a == b); }

  std::string str() const {
    if (den_ == Poly(Rational(1))) return num_.str();
    std::string n = num_.str();
    std::string d = den_.str();
    return "(" + n + ")/(" + d + ")";
  }

 private:
  void reduce() {
    if (num_.is_zero()) {
      den_ = Poly(Rational(1));
      return;
    }
    Poly g = gcd(num_, den_);
    num_ = divmod(num_, g).first;
    den_ = divmod(den_, g).first;
    Rational lead = den_.coeffs().back();
    den_ = Poly(Rational(1) / lead) * den_;
    num_ = Poly(Rational(1) / lead) * num_;
  }

  Poly num_;
  Poly den_;  // monic, coprime to num_
};

// Order of vanishing at y = 0, with kValuationInfinity for the zero function.
inline long valuation(const RatFunc& f) {
  if (f.is_zero()) return kValuationInfinity;
  return static_cast<long>(f.num().ord()) - static_cast<long>(f.den().ord());
}

// Laurent coefficient of f at y^k, computed by the power-series division
// recurrence against the unit part of the denominator.
inline Rational laurent_coeff(const RatFunc& f, long k) {
  if (f.is_zero()) return 0;
  int s = f.den().ord();
  // f = num / (y^s * u) with u(0) != 0, so the coefficient at y^k is the
  // series coefficient of num/u at y^(k+s).
  long idx = k + s;
  if (idx < 0) return 0;
  std::vector<Rational> u(f.den().coeffs().begin() + s, f.den().coeffs().end());
  std::vector<Rational> q(idx + 1);
  for (long j = 0; j <= idx; ++j) {
    Rational acc = f.num().coeff(static_cast<int>(j));
    for (long i = 0; i < j; ++i) {
      long d = j - i;
      if (d < static_cast<long>(u.size())) acc -= q[i] * u[d];
    }
    q[j] = acc / u[0];
  }
  return q[idx];
}

// All Laurent coefficients of f strictly below `bound` (finitely many: they
// start at the valuation). Zero entries are omitted.
inline std::map<long, Rational> laurent_coeffs_below(const RatFunc& f, long bound) {
  std::map<long, Rational> out;
  if (f.is_zero()) return out;
  for (long k = valuation(f); k < bound; ++k) {
    Rational c = laurent_coeff(f, k);
    if (c != 0) out[k] = std::move(c);
  }
  return out;
}

// Membership in W_m: pole order at 0 is at most m.
inline bool in_Wm(const RatFunc& f, int m) { return valuation(f) >= -static_cast<long>(m); }

// Split f into its value at the grading origin and the complementary part:
// f = c + f0 where c is the Laurent coefficient at y^0 and f0 has none.
struct Decomposition {
  Rational c;
  RatFunc f0;
};

inline Decomposition decompose(const RatFunc& f) {
  Rational c = laurent_coeff(f, 0);
  return {c, f - RatFunc(c)};
}

}  // namespace chainforge
