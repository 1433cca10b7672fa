#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include <chainforge/errors.hpp>
#include <chainforge/polynomial.hpp>

namespace chainforge {

using QVector = std::vector<Rational>;

// Incremental exact row space. Rows are kept in echelon form so membership
// and coordinates are a single elimination pass. coords() expresses a vector
// over the echelon rows, which is all the zero tests here need: any basis of
// the span works.
class SpanBasis {
 public:
  explicit SpanBasis(std::size_t width) : width_(width) {}

  std::size_t dim() const { return rows_.size(); }
  std::size_t width() const { return width_; }

  // Adds v to the span; returns true if the dimension grew.
  bool add(const QVector& v) {
    QVector r = eliminate(v).first;
    std::size_t p = pivot_of(r);
    if (p == width_) return false;
    Rational lead = r[p];
    for (Rational& x : r) x /= lead;
    // Keep rows ordered by pivot column so elimination is deterministic.
    std::size_t at = 0;
    while (at < rows_.size() && pivots_[at] < p) ++at;
    rows_.insert(rows_.begin() + at, std::move(r));
    pivots_.insert(pivots_.begin() + at, p);
    return true;
  }

  bool contains(const QVector& v) const { return pivot_of(eliminate(v).first) == width_; }

  // Coordinates of v over the echelon rows, or nullopt if v is outside.
  std::optional<QVector> coords(const QVector& v) const {
    auto [residual, mu] = eliminate(v);
    if (pivot_of(residual) != width_) return std::nullopt;
    return mu;
  }

 private:
  std::size_t pivot_of(const QVector& r) const {
    for (std::size_t i = 0; i < r.size(); ++i)
      if (r[i] != 0) return i;
    return width_;
  }

  std::pair<QVector, QVector> eliminate(QVector v) const {
    if (v.size() != width_) throw ConfigError("vector width mismatch");
    QVector mu(rows_.size(), Rational(0));
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      Rational f = v[pivots_[i]];
      if (f == 0) continue;
      mu[i] = f;
      for (std::size_t j = pivots_[i]; j < width_; ++j) v[j] -= f * rows_[i][j];
    }
    return {std::move(v), std::move(mu)};
  }

  std::size_t width_;
  std::vector<QVector> rows_;       // echelon, unit pivots
  std::vector<std::size_t> pivots_;
};

// Basis of the solution space of A x = 0 in the given column order: one
// vector per free column, set to 1 there with pivot entries solved. The
// order of the free columns fixes the order of the basis.
inline std::vector<QVector> nullspace(std::vector<QVector> rows, std::size_t width) {
  std::vector<std::size_t> pivot_cols;
  std::size_t rank = 0;
  for (std::size_t col = 0; col < width && rank < rows.size(); ++col) {
    std::size_t sel = rank;
    while (sel < rows.size() && rows[sel][col] == 0) ++sel;
    if (sel == rows.size()) continue;
    std::swap(rows[rank], rows[sel]);
    Rational lead = rows[rank][col];
    for (std::size_t j = col; j < width; ++j) rows[rank][j] /= lead;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i == rank || rows[i][col] == 0) continue;
      Rational f = rows[i][col];
      for (std::size_t j = col; j < width; ++j) rows[i][j] -= f * rows[rank][j];
    }
    pivot_cols.push_back(col);
    ++rank;
  }
  std::vector<QVector> basis;
  std::size_t next_pivot = 0;
  for (std::size_t col = 0; col < width; ++col) {
    if (next_pivot < pivot_cols.size() && pivot_cols[next_pivot] == col) {
      ++next_pivot;
      continue;
    }
    QVector v(width, Rational(0));
    v[col] = 1;
    for (std::size_t i = 0; i < pivot_cols.size(); ++i) v[pivot_cols[i]] = -rows[i][col];
    basis.push_back(std::move(v));
  }
  return basis;
}

}  // namespace chainforge
