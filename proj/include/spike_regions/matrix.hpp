#pragma once

#include <cassert>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include "spike_regions/errors.hpp"

namespace spike_regions {

// Row-major dense matrix. Small by design: layer widths in this library are
// tens of neurons, not thousands.
template <typename S>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, const S& fill = S(0))
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  Matrix(std::initializer_list<std::initializer_list<S>> rows) {
    rows_ = rows.size();
    cols_ = rows_ ? rows.begin()->size() : 0;
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
      if (r.size() != cols_) throw DimensionError("ragged matrix initializer");
      data_.insert(data_.end(), r.begin(), r.end());
    }
  }

  static Matrix identity(std::size_t n, const S& diag = S(1)) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = diag;
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  S& operator()(std::size_t r, std::size_t c) {
    assert(r < rows_ && c < cols_);
    return data_[r * cols_ + c];
  }
  const S& operator()(std::size_t r, std::size_t c) const {
    assert(r < rows_ && c < cols_);
    return data_[r * cols_ + c];
  }

  std::span<const S> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }
  std::span<S> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }

  const std::vector<S>& data() const { return data_; }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<S> data_;
};

template <typename S>
std::vector<S> multiply(const Matrix<S>& m, std::span<const S> v) {
  if (v.size() != m.cols()) throw DimensionError("matrix-vector dimension mismatch");
  std::vector<S> out(m.rows(), S(0));
  for (std::size_t r = 0; r < m.rows(); ++r) {
    S acc(0);
    for (std::size_t c = 0; c < m.cols(); ++c) acc += m(r, c) * v[c];
    out[r] = acc;
  }
  return out;
}

}  // namespace spike_regions
