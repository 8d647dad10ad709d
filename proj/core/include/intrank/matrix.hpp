#pragma once

#include <cstddef>
#include <initializer_list>
#include <tuple>
#include <vector>

#include "intrank/interval.hpp"
#include "intrank/quadext.hpp"
#include "intrank/rational.hpp"

namespace intrank {

template <class T>
class Mat {
 public:
  Mat() : rows_(0), cols_(0) {}
  Mat(std::size_t rows, std::size_t cols, const T& fill = T())
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  Mat(std::initializer_list<std::initializer_list<T>> rows) {
    rows_ = rows.size();
    cols_ = rows_ ? rows.begin()->size() : 0;
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
      if (r.size() != cols_) fail(ErrorKind::DimensionMismatch, "ragged initializer");
      for (const auto& v : r) data_.push_back(v);
    }
  }

  static Mat identity(std::size_t n) {
    Mat m(n, n, T(0));
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  T& at(std::size_t i, std::size_t j) {
    if (i >= rows_ || j >= cols_) fail(ErrorKind::IndexOutOfRange, "matrix index");
    return (*this)(i, j);
  }
  const T& at(std::size_t i, std::size_t j) const {
    if (i >= rows_ || j >= cols_) fail(ErrorKind::IndexOutOfRange, "matrix index");
    return (*this)(i, j);
  }

  // Submatrix by explicit row/column index lists, in the given orders.
  Mat submatrix(const std::vector<std::size_t>& row_idx,
                const std::vector<std::size_t>& col_idx) const {
    Mat out(row_idx.size(), col_idx.size());
    for (std::size_t i = 0; i < row_idx.size(); ++i) {
      if (row_idx[i] >= rows_) fail(ErrorKind::IndexOutOfRange, "row index");
      for (std::size_t j = 0; j < col_idx.size(); ++j) {
        if (col_idx[j] >= cols_) fail(ErrorKind::IndexOutOfRange, "column index");
        out(i, j) = (*this)(row_idx[i], col_idx[j]);
      }
    }
    return out;
  }

  Mat transpose() const {
    Mat out(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
    return out;
  }

  std::vector<T> row(std::size_t i) const {
    std::vector<T> out(cols_);
    for (std::size_t j = 0; j < cols_; ++j) out[j] = (*this)(i, j);
    return out;
  }
  std::vector<T> col(std::size_t j) const {
    std::vector<T> out(rows_);
    for (std::size_t i = 0; i < rows_; ++i) out[i] = (*this)(i, j);
    return out;
  }

  friend bool operator==(const Mat& a, const Mat& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

 private:
  std::size_t rows_, cols_;
  std::vector<T> data_;
};

using RationalMatrix = Mat<Rational>;
using QuadMatrix = Mat<QuadExt>;

template <class T>
std::vector<T> mat_vec(const Mat<T>& A, const std::vector<T>& x) {
  if (x.size() != A.cols()) fail(ErrorKind::DimensionMismatch, "mat_vec");
  std::vector<T> out(A.rows(), T(0));
  for (std::size_t i = 0; i < A.rows(); ++i)
    for (std::size_t j = 0; j < A.cols(); ++j) out[i] += A(i, j) * x[j];
  return out;
}

inline QuadMatrix to_quad(const RationalMatrix& A) {
  QuadMatrix Q(A.rows(), A.cols());
  for (std::size_t i = 0; i < A.rows(); ++i)
    for (std::size_t j = 0; j < A.cols(); ++j) Q(i, j) = QuadExt(A(i, j));
  return Q;
}

// p x q grid of closed rational-endpoint intervals; the object every
// full-rank test and realization operates on.
class IntervalMatrix {
 public:
  IntervalMatrix() = default;
  IntervalMatrix(std::size_t rows, std::size_t cols)
      : grid_(rows, cols, RatInterval()) {}
  explicit IntervalMatrix(Mat<RatInterval> grid) : grid_(std::move(grid)) {}

  static IntervalMatrix degenerate_at(const RationalMatrix& A) {
    IntervalMatrix m(A.rows(), A.cols());
    for (std::size_t i = 0; i < A.rows(); ++i)
      for (std::size_t j = 0; j < A.cols(); ++j)
        m(i, j) = RatInterval::point(A(i, j));
    return m;
  }

  std::size_t rows() const { return grid_.rows(); }
  std::size_t cols() const { return grid_.cols(); }
  RatInterval& operator()(std::size_t i, std::size_t j) { return grid_(i, j); }
  const RatInterval& operator()(std::size_t i, std::size_t j) const { return grid_(i, j); }

  bool subset_of(const IntervalMatrix& outer) const;

  friend bool operator==(const IntervalMatrix& a, const IntervalMatrix& b) {
    return a.grid_ == b.grid_;
  }

 private:
  Mat<RatInterval> grid_;
};

struct MidRadMod {
  RationalMatrix mid, rad, mod;
};

MidRadMod mid_rad_mod(const IntervalMatrix& m);

bool contains(const IntervalMatrix& m, const RationalMatrix& A);
bool contains(const IntervalMatrix& m, const QuadMatrix& A);

}  // namespace intrank
