#ifndef NCREAL_BLOCK_MAP_HPP
#define NCREAL_BLOCK_MAP_HPP

#include <ncreal/matrix.hpp>

#include <functional>
#include <vector>

namespace ncreal {

/// A linear map K^{s x s} -> K^{r x c}, stored by its images of the matrix
/// units E_pq (row-major order p*s + q).
class BlockLinearMap {
 public:
  BlockLinearMap() = default;

  /// The zero map.
  BlockLinearMap(std::size_t s_in, std::size_t r_out, std::size_t c_out)
      : s_(s_in), r_(r_out), c_(c_out), images_(s_in * s_in, Mat(r_out, c_out)) {}

  BlockLinearMap(std::size_t s_in, std::size_t r_out, std::size_t c_out, std::vector<Mat> images)
      : s_(s_in), r_(r_out), c_(c_out), images_(std::move(images)) {
    if (images_.size() != s_ * s_) throw ShapeError("BlockLinearMap needs s^2 basis images");
    for (const auto& m : images_)
      if (m.rows() != r_ || m.cols() != c_) throw ShapeError("BlockLinearMap image has wrong shape");
  }

  /// Tabulates an arbitrary linear map given as a callable on s x s matrices.
  static BlockLinearMap from_function(std::size_t s_in, std::size_t r_out, std::size_t c_out,
                                      const std::function<Mat(const Mat&)>& f) {
    std::vector<Mat> imgs;
    imgs.reserve(s_in * s_in);
    for (std::size_t p = 0; p < s_in; ++p)
      for (std::size_t q = 0; q < s_in; ++q) imgs.push_back(f(Mat::unit(s_in, s_in, p, q)));
    return BlockLinearMap(s_in, r_out, c_out, std::move(imgs));
  }

  static BlockLinearMap identity(std::size_t s) {
    return from_function(s, s, s, [](const Mat& z) { return z; });
  }

  std::size_t s_in() const { return s_; }
  std::size_t r_out() const { return r_; }
  std::size_t c_out() const { return c_; }
  const std::vector<Mat>& images() const { return images_; }
  const Mat& image(std::size_t p, std::size_t q) const { return images_[p * s_ + q]; }
  const Mat& image(std::size_t idx) const { return images_[idx]; }

  bool is_zero() const {
    for (const auto& m : images_)
      if (!m.is_zero()) return false;
    return true;
  }

  /// T(Z) = sum_pq z_pq T(E_pq).
  Mat operator()(const Mat& z) const {
    if (z.rows() != s_ || z.cols() != s_) throw ShapeError("BlockLinearMap applied to " + z.shape());
    Mat out(r_, c_);
    for (std::size_t p = 0; p < s_; ++p)
      for (std::size_t q = 0; q < s_; ++q) out.add_scaled(z(p, q), images_[p * s_ + q]);
    return out;
  }

  /// Blockwise extension to an (s n) x (s m) matrix: block (i,j) -> T(X_ij).
  Mat apply_blocks(const Mat& x) const {
    if (s_ == 0) {
      if (x.rows() || x.cols()) throw ShapeError("block size 0 map applied to non-empty matrix");
      return {};
    }
    if (x.rows() % s_ || x.cols() % s_)
      throw ShapeError("matrix " + x.shape() + " is not blocked by " + std::to_string(s_));
    const std::size_t n = x.rows() / s_, m = x.cols() / s_;
    Mat out(r_ * n, c_ * m);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < m; ++j) {
        bool any = false;
        Mat blk(r_, c_);
        for (std::size_t p = 0; p < s_; ++p)
          for (std::size_t q = 0; q < s_; ++q) {
            const Rat& z = x(i * s_ + p, j * s_ + q);
            if (sgn(z) == 0) continue;
            blk.add_scaled(z, images_[p * s_ + q]);
            any = true;
          }
        if (any) out.set_block(i * r_, j * c_, blk);
      }
    return out;
  }

  // Algebraic combinators used by the synthesis builders.

  /// Z -> M T(Z)
  BlockLinearMap left_mul(const Mat& m) const {
    std::vector<Mat> imgs;
    for (const auto& im : images_) imgs.push_back(m * im);
    return BlockLinearMap(s_, m.rows(), c_, std::move(imgs));
  }
  /// Z -> T(Z) M
  BlockLinearMap right_mul(const Mat& m) const {
    std::vector<Mat> imgs;
    for (const auto& im : images_) imgs.push_back(im * m);
    return BlockLinearMap(s_, r_, m.cols(), std::move(imgs));
  }
  BlockLinearMap operator+(const BlockLinearMap& o) const {
    check_compatible(o);
    std::vector<Mat> imgs;
    for (std::size_t k = 0; k < images_.size(); ++k) imgs.push_back(images_[k] + o.images_[k]);
    return BlockLinearMap(s_, r_, c_, std::move(imgs));
  }
  BlockLinearMap operator-(const BlockLinearMap& o) const {
    check_compatible(o);
    std::vector<Mat> imgs;
    for (std::size_t k = 0; k < images_.size(); ++k) imgs.push_back(images_[k] - o.images_[k]);
    return BlockLinearMap(s_, r_, c_, std::move(imgs));
  }

  using Row = std::vector<BlockLinearMap>;

  /// Z -> [[T1(Z), T2(Z)], [T3(Z), T4(Z)]] style assembly from a block grid.
  static BlockLinearMap assemble(const std::vector<Row>& grid) {
    const std::size_t s = grid.at(0).at(0).s_in();
    std::vector<Mat> imgs;
    for (std::size_t idx = 0; idx < s * s; ++idx) {
      std::vector<Mat> rows;
      for (const auto& row : grid) {
        std::vector<Mat> parts;
        for (const auto& t : row) parts.push_back(t.image(idx));
        rows.push_back(hstack(parts));
      }
      imgs.push_back(vstack(rows));
    }
    const std::size_t r = imgs[0].rows(), c = imgs[0].cols();
    return BlockLinearMap(s, r, c, std::move(imgs));
  }

  friend bool operator==(const BlockLinearMap& a, const BlockLinearMap& b) {
    return a.s_ == b.s_ && a.r_ == b.r_ && a.c_ == b.c_ && a.images_ == b.images_;
  }

 private:
  void check_compatible(const BlockLinearMap& o) const {
    if (s_ != o.s_ || r_ != o.r_ || c_ != o.c_) throw ShapeError("incompatible BlockLinearMaps");
  }

  std::size_t s_ = 0, r_ = 0, c_ = 0;
  std::vector<Mat> images_;
};

/// (X)T for X an m x m matrix of s x s blocks.
inline Mat block_apply(const BlockLinearMap& t, const Mat& x, std::size_t m) {
  if (x.rows() != t.s_in() * m || x.cols() != t.s_in() * m)
    throw ShapeError("block_apply: expected a " + std::to_string(t.s_in() * m) + " square matrix, got " + x.shape());
  return t.apply_blocks(x);
}

}  // namespace ncreal

#endif  // NCREAL_BLOCK_MAP_HPP
