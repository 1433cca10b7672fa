#pragma once

#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include <chainforge/errors.hpp>

namespace chainforge {

using Rational = boost::multiprecision::cpp_rational;

// Univariate polynomial over exact rationals, dense ascending coefficients,
// trailing zeros trimmed. The zero polynomial has no coefficients.
class Poly {
 public:
  Poly() = default;
  Poly(Rational c) {  // NOLINT: implicit scalar embedding is intended
    if (c != 0) c_.push_back(std::move(c));
  }
  explicit Poly(std::vector<Rational> coeffs) : c_(std::move(coeffs)) { trim(); }

  static Poly y_power(int k) {
    std::vector<Rational> c(k + 1);
    c[k] = 1;
    return Poly(std::move(c));
  }

  bool is_zero() const { return c_.empty(); }
  int degree() const { return static_cast<int>(c_.size()) - 1; }  // -1 for zero

  // Order of vanishing at 0; meaningless for the zero polynomial.
  int ord() const {
    for (std::size_t i = 0; i < c_.size(); ++i)
      if (c_[i] != 0) return static_cast<int>(i);
    throw ConfigError("order of the zero polynomial");
  }

  const Rational& coeff(int i) const {
    static const Rational kZero = 0;
    return i >= 0 && i < static_cast<int>(c_.size()) ? c_[i] : kZero;
  }
  const std::vector<Rational>& coeffs() const { return c_; }

  friend Poly operator+(const Poly& a, const Poly& b) {
    std::vector<Rational> c(std::max(a.c_.size(), b.c_.size()));
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = a.coeff(i) + b.coeff(i);
    return Poly(std::move(c));
  }
  friend Poly operator-(const Poly& a, const Poly& b) {
    std::vector<Rational> c(std::max(a.c_.size(), b.c_.size()));
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = a.coeff(i) - b.coeff(i);
    return Poly(std::move(c));
  }
  friend Poly operator*(const Poly& a, const Poly& b) {
    if (a.is_zero() || b.is_zero()) return Poly();
    std::vector<Rational> c(a.c_.size() + b.c_.size() - 1);
    for (std::size_t i = 0; i < a.c_.size(); ++i)
      for (std::size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
    return Poly(std::move(c));
  }
  friend bool operator==(const Poly& a, const Poly& b) { return a.c_ == b.c_; }

  // Exact division with remainder; the divisor must be nonzero.
  friend std::pair<Poly, Poly> divmod(Poly a, const Poly& b) {
    if (b.is_zero()) throw ConfigError("polynomial division by zero");
    std::vector<Rational> q;
    int shift = a.degree() - b.degree();
    if (shift >= 0) q.assign(shift + 1, Rational(0));
    while (!a.is_zero() && a.degree() >= b.degree()) {
      int k = a.degree() - b.degree();
      Rational f = a.c_.back() / b.c_.back();
      q[k] = f;
      std::vector<Rational> c = a.c_;
      for (std::size_t i = 0; i < b.c_.size(); ++i) c[k + i] -= f * b.c_[i];
      a = Poly(std::move(c));
    }
    return {Poly(std::move(q)), std::move(a)};
  }

  Poly monic() const {
    if (is_zero()) return Poly();
    std::vector<Rational> c = c_;
    Rational lead = c.back();
    for (Rational& x : c) x /= lead;
    return Poly(std::move(c));
  }

  friend Poly gcd(Poly a, Poly b) {
    while (!b.is_zero()) {
      Poly r = divmod(a, b).second;
      a = std::move(b);
      b = std::move(r);
    }
    return a.monic();  // gcd(0,0) stays zero
  }

  std::string str() const {
    if (is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (std::size_t i = 0; i < c_.size(); ++i) {
      if (c_[i] == 0) continue;
      Rational c = c_[i];
      if (first) {
        if (c < 0) os << "-";
      } else {
        os << (c < 0 ? " - " : " + ");
      }
      first = false;
      Rational mag = c < 0 ? Rational(-c) : c;
      if (i == 0) {
        os << mag;
      } else {
        if (mag != 1) os << mag << "*";
        os << "y";
        if (i > 1) os << "^" << i;
      }
    }
    return os.str();
  }

 private:
  void trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
  }

  std::vector<Rational> c_;
};

}  // namespace chainforge
