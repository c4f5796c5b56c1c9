#ifndef NCREAL_SUBSPACE_HPP
#define NCREAL_SUBSPACE_HPP

#include <ncreal/matrix.hpp>

#include <vector>

namespace ncreal {

/// Incrementally grown basis kept in semi-echelon form: stored row i is
/// zero at the pivots of rows inserted before it, so reduction in insertion
/// order is exact.
class EchelonBasis {
 public:
  explicit EchelonBasis(std::size_t ambient) : ambient_(ambient) {}

  std::size_t ambient() const { return ambient_; }
  std::size_t dim() const { return rows_.size(); }

  std::vector<Rat> reduce(std::vector<Rat> v) const {
    Rat t;
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      const Rat f = v[pivots_[i]];
      if (sgn(f) == 0) continue;
      for (std::size_t j = 0; j < ambient_; ++j) {
        if (sgn(rows_[i][j]) == 0) continue;
        t = f * rows_[i][j];
        v[j] -= t;
      }
    }
    return v;
  }

  bool contains(const std::vector<Rat>& v) const {
    for (const auto& x : reduce(v))
      if (sgn(x) != 0) return false;
    return true;
  }

  /// Adds v if it is independent of the current span; reports whether it was.
  bool insert(const std::vector<Rat>& v) {
    auto r = reduce(v);
    std::size_t p = 0;
    while (p < ambient_ && sgn(r[p]) == 0) ++p;
    if (p == ambient_) return false;
    const Rat inv = 1 / r[p];
    for (auto& x : r) x *= inv;
    rows_.push_back(std::move(r));
    pivots_.push_back(p);
    return true;
  }

  /// Basis vectors as rows (dim x ambient).
  Mat as_rows() const {
    Mat m(rows_.size(), ambient_);
    for (std::size_t i = 0; i < rows_.size(); ++i)
      for (std::size_t j = 0; j < ambient_; ++j) m(i, j) = rows_[i][j];
    return m;
  }

 private:
  std::size_t ambient_;
  std::vector<std::vector<Rat>> rows_;
  std::vector<std::size_t> pivots_;
};

inline std::vector<Rat> column_vector(const Mat& m, std::size_t j) {
  std::vector<Rat> v(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i) v[i] = m(i, j);
  return v;
}

inline std::vector<Rat> row_vector(const Mat& m, std::size_t i) {
  std::vector<Rat> v(m.cols());
  for (std::size_t j = 0; j < m.cols(); ++j) v[j] = m(i, j);
  return v;
}

/// A subspace of Q^n with its canonical basis: the rows of the reduced row
/// echelon form of any spanning set, returned as columns.
class Subspace {
 public:
  Subspace() = default;
  explicit Subspace(std::size_t ambient) : ambient_(ambient), rref_rows_(0, ambient) {}

  /// Span of the columns of `vectors` (ambient x k).
  static Subspace span_of_columns(const Mat& vectors) { return span_of_rows(vectors.transpose(), vectors.rows()); }

  static Subspace span_of_rows(const Mat& rows, std::size_t ambient) {
    Subspace out(ambient);
    if (rows.rows() == 0) return out;
    auto [r, piv] = rref(rows);
    out.rref_rows_ = r.block(0, 0, piv.size(), ambient);
    out.pivots_ = std::move(piv);
    return out;
  }

  static Subspace full(std::size_t n) { return span_of_columns(Mat::identity(n)); }

  std::size_t ambient() const { return ambient_; }
  std::size_t dim() const { return pivots_.size(); }
  bool is_full() const { return dim() == ambient_; }
  bool is_trivial() const { return dim() == 0; }

  /// Canonical basis as columns (ambient x dim).
  Mat basis() const { return rref_rows_.transpose(); }
  const Mat& basis_rows() const { return rref_rows_; }
  const std::vector<std::size_t>& pivots() const { return pivots_; }

  /// Left inverse of basis(): selects the pivot coordinates.
  Mat coordinates() const {
    Mat sel(dim(), ambient_);
    for (std::size_t i = 0; i < pivots_.size(); ++i) sel(i, pivots_[i]) = 1;
    return sel;
  }

  bool contains(const Mat& column) const { return rank(hstack({basis(), column})) == dim(); }

  friend bool operator==(const Subspace& a, const Subspace& b) {
    return a.ambient_ == b.ambient_ && a.rref_rows_ == b.rref_rows_;
  }

 private:
  std::size_t ambient_ = 0;
  Mat rref_rows_;
  std::vector<std::size_t> pivots_;
};

}  // namespace ncreal

#endif  // NCREAL_SUBSPACE_HPP
