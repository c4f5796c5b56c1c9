#ifndef NCREAL_MATRIX_HPP
#define NCREAL_MATRIX_HPP

#include <ncreal/rational.hpp>

#include <cassert>
#include <cstddef>
#include <initializer_list>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ncreal {

class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class SingularMatrix : public std::runtime_error {
 public:
  SingularMatrix() : std::runtime_error("matrix is singular") {}
};

/// Dense row-major matrix over Q. Empty shapes (0x0, 0xk, kx0) are valid.
class Mat {
 public:
  Mat() = default;
  Mat(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  Mat(std::initializer_list<std::initializer_list<Rat>> init) {
    rows_ = init.size();
    cols_ = rows_ ? init.begin()->size() : 0;
    data_.reserve(rows_ * cols_);
    for (const auto& row : init) {
      if (row.size() != cols_) throw ShapeError("ragged matrix initializer");
      data_.insert(data_.end(), row.begin(), row.end());
    }
  }

  static Mat zero(std::size_t r, std::size_t c) { return Mat(r, c); }
  static Mat identity(std::size_t n) {
    Mat m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }
  static Mat scalar(std::size_t n, const Rat& c) {
    Mat m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = c;
    return m;
  }
  /// Matrix unit E_ij of shape r x c.
  static Mat unit(std::size_t r, std::size_t c, std::size_t i, std::size_t j) {
    Mat m(r, c);
    m(i, j) = 1;
    return m;
  }
  static Mat column(const std::vector<Rat>& v) {
    Mat m(v.size(), 1);
    for (std::size_t i = 0; i < v.size(); ++i) m(i, 0) = v[i];
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }
  bool empty() const { return data_.empty(); }

  Rat& operator()(std::size_t i, std::size_t j) {
    assert(i < rows_ && j < cols_);
    return data_[i * cols_ + j];
  }
  const Rat& operator()(std::size_t i, std::size_t j) const {
    assert(i < rows_ && j < cols_);
    return data_[i * cols_ + j];
  }
  const std::vector<Rat>& data() const { return data_; }

  bool is_zero() const {
    for (const auto& x : data_)
      if (sgn(x) != 0) return false;
    return true;
  }

  Mat block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
    if (r0 + nr > rows_ || c0 + nc > cols_) throw ShapeError("block out of range");
    Mat out(nr, nc);
    for (std::size_t i = 0; i < nr; ++i)
      for (std::size_t j = 0; j < nc; ++j) out(i, j) = (*this)(r0 + i, c0 + j);
    return out;
  }
  void set_block(std::size_t r0, std::size_t c0, const Mat& b) {
    if (r0 + b.rows_ > rows_ || c0 + b.cols_ > cols_) throw ShapeError("set_block out of range");
    for (std::size_t i = 0; i < b.rows_; ++i)
      for (std::size_t j = 0; j < b.cols_; ++j) (*this)(r0 + i, c0 + j) = b(i, j);
  }
  Mat col(std::size_t j) const { return block(0, j, rows_, 1); }
  Mat row(std::size_t i) const { return block(i, 0, 1, cols_); }

  Mat transpose() const {
    Mat t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }
  Rat trace() const {
    if (!is_square()) throw ShapeError("trace of non-square matrix");
    Rat t = 0;
    for (std::size_t i = 0; i < rows_; ++i) t += (*this)(i, i);
    return t;
  }

  Mat& operator+=(const Mat& o) {
    check_same(o, "+");
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
    return *this;
  }
  Mat& operator-=(const Mat& o) {
    check_same(o, "-");
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
    return *this;
  }
  Mat& operator*=(const Rat& c) {
    if (sgn(c) == 0) {
      for (auto& x : data_) x = 0;
    } else {
      for (auto& x : data_) x *= c;
    }
    return *this;
  }
  /// this += c * o
  void add_scaled(const Rat& c, const Mat& o) {
    check_same(o, "add_scaled");
    if (sgn(c) == 0) return;
    Rat t;
    for (std::size_t k = 0; k < data_.size(); ++k) {
      if (sgn(o.data_[k]) == 0) continue;
      mpq_mul(t.get_mpq_t(), c.get_mpq_t(), o.data_[k].get_mpq_t());
      data_[k] += t;
    }
  }

  friend Mat operator+(Mat a, const Mat& b) { return a += b; }
  friend Mat operator-(Mat a, const Mat& b) { return a -= b; }
  friend Mat operator-(Mat a) {
    for (auto& x : a.data_) x = -x;
    return a;
  }
  friend Mat operator*(Mat a, const Rat& c) { return a *= c; }
  friend Mat operator*(const Rat& c, Mat a) { return a *= c; }

  friend Mat operator*(const Mat& a, const Mat& b) {
    if (a.cols_ != b.rows_)
      throw ShapeError("product of " + a.shape() + " and " + b.shape());
    Mat c(a.rows_, b.cols_);
    Rat t;
    for (std::size_t i = 0; i < a.rows_; ++i) {
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const Rat& aik = a(i, k);
        if (sgn(aik) == 0) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) {
          const Rat& bkj = b(k, j);
          if (sgn(bkj) == 0) continue;
          mpq_mul(t.get_mpq_t(), aik.get_mpq_t(), bkj.get_mpq_t());
          c(i, j) += t;
        }
      }
    }
    return c;
  }

  friend bool operator==(const Mat& a, const Mat& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

  std::string shape() const { return std::to_string(rows_) + "x" + std::to_string(cols_); }

 private:
  void check_same(const Mat& o, const char* op) const {
    if (rows_ != o.rows_ || cols_ != o.cols_)
      throw ShapeError(std::string("shape mismatch in ") + op + ": " + shape() + " vs " + o.shape());
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rat> data_;
};

inline std::ostream& operator<<(std::ostream& os, const Mat& m) {
  os << '[';
  for (std::size_t i = 0; i < m.rows(); ++i) {
    os << (i ? ", [" : "[");
    for (std::size_t j = 0; j < m.cols(); ++j) os << (j ? ", " : "") << to_string(m(i, j));
    os << ']';
  }
  return os << ']';
}

inline Mat commutator(const Mat& x, const Mat& y) { return x * y - y * x; }

/// Block diagonal X (+) X'.
inline Mat direct_sum(const Mat& a, const Mat& b) {
  Mat out(a.rows() + b.rows(), a.cols() + b.cols());
  out.set_block(0, 0, a);
  out.set_block(a.rows(), a.cols(), b);
  return out;
}

inline Mat hstack(const std::vector<Mat>& parts) {
  if (parts.empty()) return {};
  std::size_t r = parts.front().rows(), c = 0;
  for (const auto& p : parts) {
    if (p.rows() != r) throw ShapeError("hstack row mismatch");
    c += p.cols();
  }
  Mat out(r, c);
  std::size_t off = 0;
  for (const auto& p : parts) {
    out.set_block(0, off, p);
    off += p.cols();
  }
  return out;
}

inline Mat vstack(const std::vector<Mat>& parts) {
  if (parts.empty()) return {};
  std::size_t c = parts.front().cols(), r = 0;
  for (const auto& p : parts) {
    if (p.cols() != c) throw ShapeError("vstack column mismatch");
    r += p.rows();
  }
  Mat out(r, c);
  std::size_t off = 0;
  for (const auto& p : parts) {
    out.set_block(off, 0, p);
    off += p.rows();
  }
  return out;
}

/// Kronecker product: block (i,j) of the result is p_ij * Q.
inline Mat kron(const Mat& p, const Mat& q) {
  Mat out(p.rows() * q.rows(), p.cols() * q.cols());
  Rat t;
  for (std::size_t i = 0; i < p.rows(); ++i)
    for (std::size_t j = 0; j < p.cols(); ++j) {
      const Rat& pij = p(i, j);
      if (sgn(pij) == 0) continue;
      for (std::size_t k = 0; k < q.rows(); ++k)
        for (std::size_t l = 0; l < q.cols(); ++l) {
          if (sgn(q(k, l)) == 0) continue;
          mpq_mul(t.get_mpq_t(), pij.get_mpq_t(), q(k, l).get_mpq_t());
          out(i * q.rows() + k, j * q.cols() + l) = t;
        }
    }
  return out;
}

/// I_m (x) X without forming I_m explicitly.
inline Mat kron_identity(std::size_t m, const Mat& x) {
  Mat out(m * x.rows(), m * x.cols());
  for (std::size_t b = 0; b < m; ++b) out.set_block(b * x.rows(), b * x.cols(), x);
  return out;
}

/// E(n1,n2) = [E_ij^T] with E_ij in K^{n1 x n2}: the commutation matrix with
/// P (x) Q = E(n1,n3) (Q (x) P) E(n2,n4)^T for Q n1 x n2 and P n3 x n4.
inline Mat perm_matrix(std::size_t n1, std::size_t n2) {
  if (n1 == 0 || n2 == 0) throw ShapeError("perm_matrix needs positive sizes");
  // Block (i,j) is n2 x n1 and equals E_ij^T = e_j e_i^T.
  Mat out(n1 * n2, n1 * n2);
  for (std::size_t i = 0; i < n1; ++i)
    for (std::size_t j = 0; j < n2; ++j) out(i * n2 + j, j * n1 + i) = 1;
  return out;
}

// --------------------------------------------------------------------------
// Exact elimination.

namespace detail {

/// Row-scaled integer copy of a (each row multiplied by the lcm of its
/// denominators). Returns the product of the scale factors through `scale`.
inline std::vector<std::vector<Int>> integer_rows(const Mat& a, Int* scale = nullptr) {
  std::vector<std::vector<Int>> out(a.rows(), std::vector<Int>(a.cols()));
  if (scale) *scale = 1;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    Int l = 1;
    for (std::size_t j = 0; j < a.cols(); ++j) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), a(i, j).get_den_mpz_t());
    for (std::size_t j = 0; j < a.cols(); ++j) {
      if (sgn(a(i, j)) == 0) continue;
      Int f = l / a(i, j).get_den();
      out[i][j] = a(i, j).get_num() * f;
    }
    if (scale) *scale *= l;
  }
  return out;
}

/// Fraction-free (Bareiss) forward elimination in place on an integer
/// matrix restricted to the first `ncols_pivot` columns. Pivot rule: first
/// nonzero entry at or below the current row, columns in order. Returns the
/// pivot columns; `swaps` counts row interchanges.
inline std::vector<std::size_t> bareiss_forward(std::vector<std::vector<Int>>& m, std::size_t ncols_pivot,
                                                std::size_t* swaps = nullptr) {
  std::vector<std::size_t> pivots;
  const std::size_t nrows = m.size();
  const std::size_t ncols = nrows ? m[0].size() : 0;
  Int prev = 1;
  std::size_t r = 0;
  if (swaps) *swaps = 0;
  Int t;
  for (std::size_t c = 0; c < ncols_pivot && r < nrows; ++c) {
    std::size_t p = r;
    while (p < nrows && m[p][c] == 0) ++p;
    if (p == nrows) continue;
    if (p != r) {
      std::swap(m[p], m[r]);
      if (swaps) ++*swaps;
    }
    const Int& piv = m[r][c];
    for (std::size_t i = r + 1; i < nrows; ++i) {
      const Int mic = m[i][c];
      for (std::size_t j = c + 1; j < ncols; ++j) {
        // m_ij = (m_ij * piv - m_ic * m_rj) / prev
        mpz_mul(t.get_mpz_t(), m[i][j].get_mpz_t(), piv.get_mpz_t());
        mpz_submul(t.get_mpz_t(), mic.get_mpz_t(), m[r][j].get_mpz_t());
        mpz_divexact(m[i][j].get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
      }
      m[i][c] = 0;
    }
    // Columns left of c in rows below r are already zero.
    prev = piv;
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

}  // namespace detail

/// Determinant by Bareiss elimination; det of the 0x0 matrix is 1.
inline Rat det(const Mat& a) {
  if (!a.is_square()) throw ShapeError("det of non-square matrix " + a.shape());
  const std::size_t n = a.rows();
  if (n == 0) return 1;
  Int scale;
  auto m = detail::integer_rows(a, &scale);
  std::size_t swaps = 0;
  auto piv = detail::bareiss_forward(m, n, &swaps);
  if (piv.size() < n) return 0;
  Rat d(m[n - 1][n - 1], scale);
  d.canonicalize();
  return swaps % 2 ? Rat(-d) : d;
}

inline std::size_t rank(const Mat& a) {
  if (a.rows() == 0 || a.cols() == 0) return 0;
  auto m = detail::integer_rows(a);
  return detail::bareiss_forward(m, a.cols()).size();
}

/// Solves A W = B exactly for square A; nullopt when A is singular.
inline std::optional<Mat> solve(const Mat& a, const Mat& b) {
  if (!a.is_square()) throw ShapeError("solve needs a square system matrix");
  if (b.rows() != a.rows()) throw ShapeError("solve: right-hand side has wrong row count");
  const std::size_t n = a.rows(), k = b.cols();
  if (n == 0) return Mat(0, k);
  Mat aug = hstack({a, b});
  auto m = detail::integer_rows(aug);
  auto piv = detail::bareiss_forward(m, n);
  if (piv.size() < n) return std::nullopt;
  // Back substitution over Q on the upper triangular integer system.
  Mat w(n, k);
  Rat acc, t;
  for (std::size_t col = 0; col < k; ++col) {
    for (std::size_t ii = n; ii-- > 0;) {
      acc = Rat(m[ii][n + col]);
      for (std::size_t j = ii + 1; j < n; ++j) {
        if (m[ii][j] == 0 || sgn(w(j, col)) == 0) continue;
        t = Rat(m[ii][j]) * w(j, col);
        acc -= t;
      }
      acc /= Rat(m[ii][ii]);
      w(ii, col) = acc;
    }
  }
  return w;
}

inline std::optional<Mat> try_inverse(const Mat& a) { return solve(a, Mat::identity(a.rows())); }

/// Inverse; throws SingularMatrix when det(a) = 0.
inline Mat inverse(const Mat& a) {
  auto inv = try_inverse(a);
  if (!inv) throw SingularMatrix();
  return *std::move(inv);
}

/// Reduced row echelon form over Q with its pivot columns.
struct Rref {
  Mat reduced;
  std::vector<std::size_t> pivots;
};

inline Rref rref(Mat m) {
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  Rat f, t;
  for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
    std::size_t p = r;
    while (p < m.rows() && sgn(m(p, c)) == 0) ++p;
    if (p == m.rows()) continue;
    if (p != r)
      for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(p, j), m(r, j));
    f = 1 / m(r, c);
    for (std::size_t j = c; j < m.cols(); ++j) m(r, j) *= f;
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == r || sgn(m(i, c)) == 0) continue;
      f = m(i, c);
      for (std::size_t j = c; j < m.cols(); ++j) {
        if (sgn(m(r, j)) == 0) continue;
        t = f * m(r, j);
        m(i, j) -= t;
      }
    }
    pivots.push_back(c);
    ++r;
  }
  return {std::move(m), std::move(pivots)};
}

/// Basis of ker(A) as columns of the returned cols x nullity matrix; one
/// vector per free column, with a 1 in that free position.
inline Mat kernel_basis(const Mat& a) {
  auto [r, piv] = rref(a);
  std::vector<bool> is_piv(a.cols(), false);
  for (auto p : piv) is_piv[p] = true;
  std::vector<std::size_t> free;
  for (std::size_t j = 0; j < a.cols(); ++j)
    if (!is_piv[j]) free.push_back(j);
  Mat k(a.cols(), free.size());
  for (std::size_t f = 0; f < free.size(); ++f) {
    k(free[f], f) = 1;
    for (std::size_t i = 0; i < piv.size(); ++i) k(piv[i], f) = -r(i, free[f]);
  }
  return k;
}

/// Columns of A at the pivot columns of its echelon form.
inline Mat image_basis(const Mat& a) {
  auto piv = rref(a).pivots;
  Mat out(a.rows(), piv.size());
  for (std::size_t i = 0; i < piv.size(); ++i) out.set_block(0, i, a.col(piv[i]));
  return out;
}

/// Some X with A X = I, when A has full row rank.
inline std::optional<Mat> right_inverse(const Mat& a) {
  if (rank(a) != a.rows()) return std::nullopt;
  // A A^T is invertible when A has full row rank over Q.
  Mat at = a.transpose();
  auto g = solve(a * at, Mat::identity(a.rows()));
  if (!g) return std::nullopt;
  return at * *g;
}

/// Some X with X A = I, when A has full column rank.
inline std::optional<Mat> left_inverse(const Mat& a) {
  auto r = right_inverse(a.transpose());
  if (!r) return std::nullopt;
  return r->transpose();
}

}  // namespace ncreal

#endif  // NCREAL_MATRIX_HPP
