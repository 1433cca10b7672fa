#pragma once

#include <map>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include <chainforge/errors.hpp>

namespace chainforge {

using Rational = boost::multiprecision::cpp_rational;

struct Mat2 {
  Rational a, b, c, d;  // [[a, b], [c, d]]

  static Mat2 zero() { return Mat2{}; }
  static Mat2 identity() { return Mat2{1, 0, 0, 1}; }
  static Mat2 unit(int i, int j) {
    Mat2 m;
    (i == 0 ? (j == 0 ? m.a : m.b) : (j == 0 ? m.c : m.d)) = 1;
    return m;
  }

  const Rational& at(int i, int j) const {
    return i == 0 ? (j == 0 ? a : b) : (j == 0 ? c : d);
  }
  bool is_zero() const { return a == 0 && b == 0 && c == 0 && d == 0; }

  friend Mat2 operator+(const Mat2& x, const Mat2& y) {
    return Mat2{x.a + y.a, x.b + y.b, x.c + y.c, x.d + y.d};
  }
  friend Mat2 operator*(const Mat2& x, const Mat2& y) {
    return Mat2{x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d,
                x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
  }
  friend bool operator==(const Mat2& x, const Mat2& y) {
    return x.a == y.a && x.b == y.b && x.c == y.c && x.d == y.d;
  }
};

// Tail law of an eventually upper-triangular sequence: place n carries
// [[alpha, beta + dev(n)], [0, alpha]] with dev finitely supported. Closed
// under sums and products; templated on the scalar so the product identity
// can also be checked over symbolic coefficients.
template <class S>
struct BasicKLTail {
  S alpha{};
  S beta{};
  std::map<long, S> dev;

  void prune() {
    for (auto it = dev.begin(); it != dev.end();)
      it = it->second == S{} ? dev.erase(it) : std::next(it);
  }

  friend BasicKLTail operator+(const BasicKLTail& x, const BasicKLTail& y) {
    BasicKLTail out{x.alpha + y.alpha, x.beta + y.beta, x.dev};
    for (auto& [n, v] : y.dev) out.dev[n] = out.dev[n] + v;
    out.prune();
    return out;
  }

  // [[a,b],[0,a]] * [[a',b'],[0,a']] = [[aa', ab' + ba'],[0, aa']]: the
  // corner deviation stays finitely supported.
  friend BasicKLTail operator*(const BasicKLTail& x, const BasicKLTail& y) {
    BasicKLTail out{x.alpha * y.alpha, x.alpha * y.beta + x.beta * y.alpha, {}};
    for (auto& [n, v] : x.dev) out.dev[n] = out.dev[n] + v * y.alpha;
    for (auto& [n, v] : y.dev) out.dev[n] = out.dev[n] + x.alpha * v;
    out.prune();
    return out;
  }

  friend bool operator==(const BasicKLTail& x, const BasicKLTail& y) {
    return x.alpha == y.alpha && x.beta == y.beta && x.dev == y.dev;
  }
};

using KLTail = BasicKLTail<Rational>;

// Sequence of 2x2 rational matrices that is upper triangular with constant
// diagonal from some place on: finitely many free places, then the tail
// law. Canonical form trims prefix places that already match the plain
// tail and keeps deviation keys at or past the prefix.
class KLElement {
 public:
  KLElement() = default;
  KLElement(std::vector<Mat2> prefix, KLTail tail)
      : prefix_(std::move(prefix)), tail_(std::move(tail)) {
    normalize();
  }

  static KLElement zero() { return KLElement(); }
  static KLElement one() { return from_tail(1, 0); }
  static KLElement from_tail(Rational alpha, Rational beta) {
    return KLElement({}, KLTail{std::move(alpha), std::move(beta), {}});
  }

  const std::vector<Mat2>& prefix() const { return prefix_; }
  const KLTail& tail() const { return tail_; }

  Mat2 at(long n) const {
    if (n < static_cast<long>(prefix_.size())) return prefix_[n];
    Mat2 m{tail_.alpha, tail_.beta, 0, tail_.alpha};
    auto it = tail_.dev.find(n);
    if (it != tail_.dev.end()) m.b += it->second;
    return m;
  }

  friend KLElement operator+(const KLElement& x, const KLElement& y) {
    std::size_t p = std::max(x.prefix_.size(), y.prefix_.size());
    std::vector<Mat2> prefix(p);
    for (std::size_t i = 0; i < p; ++i) prefix[i] = x.at(i) + y.at(i);
    KLTail tail = x.tail_ + y.tail_;
    return KLElement(std::move(prefix), std::move(tail));
  }

  friend KLElement operator*(const KLElement& x, const KLElement& y) {
    std::size_t p = std::max(x.prefix_.size(), y.prefix_.size());
    std::vector<Mat2> prefix(p);
    for (std::size_t i = 0; i < p; ++i) prefix[i] = x.at(i) * y.at(i);
    KLTail tail = x.tail_ * y.tail_;
    return KLElement(std::move(prefix), std::move(tail));
  }

  friend bool operator==(const KLElement& x, const KLElement& y) {
    return x.prefix_ == y.prefix_ && x.tail_ == y.tail_;
  }

  bool is_zero() const {
    return prefix_.empty() && tail_ == KLTail{};
  }

 private:
  void normalize() {
    for (auto it = tail_.dev.begin(); it != tail_.dev.end();)
      it = it->first < static_cast<long>(prefix_.size()) ? tail_.dev.erase(it)
                                                         : std::next(it);
    tail_.prune();
    Mat2 plain{tail_.alpha, tail_.beta, 0, tail_.alpha};
    while (!prefix_.empty() && prefix_.back() == plain) prefix_.pop_back();
  }

  std::vector<Mat2> prefix_;
  KLTail tail_;
};

// Membership in the nth stage ideal: zero from place n on.
inline bool kl_in_In(const KLElement& e, long n) {
  if (e.tail().alpha != 0 || e.tail().beta != 0) return false;
  for (long k = n; k < static_cast<long>(e.prefix().size()); ++k)
    if (!e.prefix()[k].is_zero()) return false;
  for (auto& [k, v] : e.tail().dev)
    if (k >= n) return false;  // dev entries are nonzero after normalize
  return true;
}

// Membership in the union of all stages: eventually zero, i.e. the tail
// constants vanish (the deviation and prefix are finite anyway).
inline bool kl_in_union(const KLElement& e) {
  return e.tail().alpha == 0 && e.tail().beta == 0;
}

// Constructive semiprimality of the stage ideals: given e outside I_n,
// produce r with e * r * e still outside I_n. A nonzero diagonal tail
// squares through r = 1; otherwise a single nonzero entry at some place
// k >= n is revived by the transposed matrix unit at that place, since
// (A e_ji A)_(i,j) = A_ij^2.
inline KLElement kl_semiprime_probe(const KLElement& e, long n) {
  if (kl_in_In(e, n)) throw ConfigError("element already lies in the stage ideal");
  if (e.tail().alpha != 0) return KLElement::one();
  long k = -1;
  if (e.tail().beta != 0) {
    k = std::max(n, static_cast<long>(e.prefix().size()));
    if (!e.tail().dev.empty()) k = std::max(k, e.tail().dev.rbegin()->first + 1);
  } else {
    for (long p = n; p < static_cast<long>(e.prefix().size()) && k < 0; ++p)
      if (!e.prefix()[p].is_zero()) k = p;
    if (k < 0)
      for (auto& [place, v] : e.tail().dev)
        if (place >= n) {
          k = place;
          break;
        }
  }
  Mat2 a = e.at(k);
  int i = 0, j = 0;
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c)
      if (a.at(r, c) != 0) {
        i = r;
        j = c;
      }
  std::vector<Mat2> prefix(k + 1);
  prefix[k] = Mat2::unit(j, i);
  return KLElement(std::move(prefix), KLTail{});
}

}  // namespace chainforge
