#pragma once

#include <cstddef>
#include <vector>

#include "filtlab/errors.hpp"

namespace filtlab {

// Minimal dense row-major matrix. State counts stay small (<= a few hundred)
// and entries are rationals or doubles, so nothing fancier is warranted.
template <class T>
class Matrix {
 public:
  Matrix() : rows_(0), cols_(0) {}
  Matrix(std::size_t rows, std::size_t cols, const T& fill = T(0))
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Matrix from_rows(const std::vector<std::vector<T>>& rows) {
    if (rows.empty()) return Matrix();
    Matrix m(rows.size(), rows[0].size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != m.cols_)
        throw Error(ErrorCode::ShapeMismatch, "ragged matrix rows");
      for (std::size_t j = 0; j < m.cols_; ++j) m(i, j) = rows[i][j];
    }
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::vector<T> row(std::size_t i) const {
    return std::vector<T>(data_.begin() + i * cols_, data_.begin() + (i + 1) * cols_);
  }

  // this (m x k) times other (k x l)
  Matrix multiply(const Matrix& other) const {
    if (cols_ != other.rows_)
      throw Error(ErrorCode::ShapeMismatch, "matrix product shape mismatch");
    Matrix out(rows_, other.cols_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) {
        const T& a = (*this)(i, j);
        if (a == T(0)) continue;
        for (std::size_t l = 0; l < other.cols_; ++l) out(i, l) += a * other(j, l);
      }
    return out;
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

 private:
  std::size_t rows_, cols_;
  std::vector<T> data_;
};

// row vector (1 x n semantics) times matrix (n x k)
template <class T>
std::vector<T> vec_mat(const std::vector<T>& v, const Matrix<T>& m) {
  if (v.size() != m.rows())
    throw Error(ErrorCode::ShapeMismatch, "vector/matrix shape mismatch");
  std::vector<T> out(m.cols(), T(0));
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] == T(0)) continue;
    for (std::size_t j = 0; j < m.cols(); ++j) out[j] += v[i] * m(i, j);
  }
  return out;
}

}  // namespace filtlab
