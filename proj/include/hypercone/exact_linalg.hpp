#pragma once

#include <vector>

#include "hypercone/phase_poly.hpp"

namespace hypercone {

/// Row-major dense matrix over Q. Small sizes only (at most a few dozen).
class RationalMatrix {
 public:
  RationalMatrix() = default;
  RationalMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols) {}
  static RationalMatrix from_rows(const std::vector<RationalVector>& rows);
  static RationalMatrix from_columns(const std::vector<RationalVector>& cols);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  Rational& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  const Rational& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

  RationalMatrix operator*(const RationalMatrix& o) const;
  RationalVector operator*(const RationalVector& v) const;
  RationalMatrix transpose() const;
  bool is_zero() const;
  std::vector<double> to_double_row_major() const;

  std::size_t rank() const;
  Rational determinant() const;
  /// Basis of {v : A v = 0}.
  std::vector<RationalVector> kernel() const;
  /// Basis of the column space (pivot columns of A).
  std::vector<RationalVector> column_space() const;

 private:
  /// Reduced row echelon form in place; returns pivot columns.
  std::vector<std::size_t> rref();

  std::size_t rows_ = 0, cols_ = 0;
  std::vector<Rational> a_;
};

Rational dot(const RationalVector& a, const RationalVector& b);

}  // namespace hypercone
