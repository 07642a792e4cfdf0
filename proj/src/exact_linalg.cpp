#include "hypercone/exact_linalg.hpp"

namespace hypercone {

RationalMatrix RationalMatrix::from_rows(const std::vector<RationalVector>& rows) {
  if (rows.empty()) return {};
  RationalMatrix m(rows.size(), rows[0].size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != m.cols_) throw DimensionError("ragged matrix rows");
    for (std::size_t j = 0; j < m.cols_; ++j) m(i, j) = rows[i][j];
  }
  return m;
}

RationalMatrix RationalMatrix::from_columns(const std::vector<RationalVector>& cols) {
  return from_rows(cols).transpose();
}

RationalMatrix RationalMatrix::operator*(const RationalMatrix& o) const {
  if (cols_ != o.rows_) throw DimensionError("matrix product dimension mismatch");
  RationalMatrix r(rows_, o.cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t k = 0; k < cols_; ++k) {
      const Rational& a = (*this)(i, k);
      if (a == 0) continue;
      for (std::size_t j = 0; j < o.cols_; ++j) r(i, j) += a * o(k, j);
    }
  return r;
}

RationalVector RationalMatrix::operator*(const RationalVector& v) const {
  if (cols_ != v.size()) throw DimensionError("matrix-vector dimension mismatch");
  RationalVector r(rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) r[i] += (*this)(i, j) * v[j];
  return r;
}

RationalMatrix RationalMatrix::transpose() const {
  RationalMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

bool RationalMatrix::is_zero() const {
  for (const auto& v : a_)
    if (v != 0) return false;
  return true;
}

std::vector<double> RationalMatrix::to_double_row_major() const {
  std::vector<double> d(a_.size());
  for (std::size_t i = 0; i < a_.size(); ++i) d[i] = a_[i].get_d();
  return d;
}

std::vector<std::size_t> RationalMatrix::rref() {
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < cols_ && row < rows_; ++col) {
    std::size_t p = row;
    while (p < rows_ && (*this)(p, col) == 0) ++p;
    if (p == rows_) continue;
    if (p != row)
      for (std::size_t j = 0; j < cols_; ++j) std::swap((*this)(p, j), (*this)(row, j));
    Rational inv = 1 / (*this)(row, col);
    for (std::size_t j = col; j < cols_; ++j) (*this)(row, j) *= inv;
    for (std::size_t i = 0; i < rows_; ++i) {
      if (i == row || (*this)(i, col) == 0) continue;
      Rational f = (*this)(i, col);
      for (std::size_t j = col; j < cols_; ++j) (*this)(i, j) -= f * (*this)(row, j);
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

std::size_t RationalMatrix::rank() const {
  RationalMatrix c(*this);
  return c.rref().size();
}

Rational RationalMatrix::determinant() const {
  if (rows_ != cols_) throw DimensionError("determinant of a non-square matrix");
  RationalMatrix c(*this);
  Rational det = 1;
  for (std::size_t col = 0; col < cols_; ++col) {
    std::size_t p = col;
    while (p < rows_ && c(p, col) == 0) ++p;
    if (p == rows_) return 0;
    if (p != col) {
      for (std::size_t j = 0; j < cols_; ++j) std::swap(c(p, j), c(col, j));
      det = -det;
    }
    det *= c(col, col);
    for (std::size_t i = col + 1; i < rows_; ++i) {
      if (c(i, col) == 0) continue;
      Rational f = c(i, col) / c(col, col);
      for (std::size_t j = col; j < cols_; ++j) c(i, j) -= f * c(col, j);
    }
  }
  return det;
}

std::vector<RationalVector> RationalMatrix::kernel() const {
  RationalMatrix c(*this);
  auto pivots = c.rref();
  std::vector<bool> is_pivot(cols_, false);
  for (auto p : pivots) is_pivot[p] = true;
  std::vector<RationalVector> basis;
  for (std::size_t free = 0; free < cols_; ++free) {
    if (is_pivot[free]) continue;
    RationalVector v(cols_);
    v[free] = 1;
    for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -c(r, free);
    basis.push_back(std::move(v));
  }
  return basis;
}

std::vector<RationalVector> RationalMatrix::column_space() const {
  RationalMatrix c(*this);
  auto pivots = c.rref();
  std::vector<RationalVector> basis;
  for (auto p : pivots) {
    RationalVector v(rows_);
    for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, p);
    basis.push_back(std::move(v));
  }
  return basis;
}

Rational dot(const RationalVector& a, const RationalVector& b) {
  if (a.size() != b.size()) throw DimensionError("dot: dimension mismatch");
  Rational s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace hypercone
