#ifndef HPL_LINALG_HPP
#define HPL_LINALG_HPP

#include <cstddef>
#include <optional>
#include <vector>

#include "hpl/errors.hpp"
#include "hpl/rational.hpp"

namespace hpl {

using DenseVector = std::vector<Rational>;

/// Dense rational matrix, row-major.
class Matrix {
 public:
  Matrix() = default;
  Matrix(size_t rows, size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  static Matrix identity(size_t n) {
    Matrix m(n, n);
    for (size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  /// Matrix whose columns are the given vectors.
  static Matrix from_columns(const std::vector<DenseVector>& cols, size_t rows) {
    Matrix m(rows, cols.size());
    for (size_t c = 0; c < cols.size(); ++c) {
      if (cols[c].size() != rows) throw ConsistencyError("from_columns: length mismatch");
      for (size_t r = 0; r < rows; ++r) m(r, c) = cols[c][r];
    }
    return m;
  }

  size_t rows() const { return rows_; }
  size_t cols() const { return cols_; }
  Rational& operator()(size_t r, size_t c) { return data_[r * cols_ + c]; }
  const Rational& operator()(size_t r, size_t c) const { return data_[r * cols_ + c]; }

  bool is_zero() const {
    for (const auto& x : data_)
      if (x != 0) return false;
    return true;
  }

  DenseVector apply(const DenseVector& v) const {
    if (v.size() != cols_) throw ConsistencyError("Matrix::apply: size mismatch");
    DenseVector out(rows_);
    for (size_t r = 0; r < rows_; ++r)
      for (size_t c = 0; c < cols_; ++c)
        if ((*this)(r, c) != 0 && v[c] != 0) out[r] += (*this)(r, c) * v[c];
    return out;
  }

  DenseVector column(size_t c) const {
    DenseVector out(rows_);
    for (size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
    return out;
  }

  void append_row(const DenseVector& row) {
    if (rows_ == 0 && cols_ == 0) cols_ = row.size();
    if (row.size() != cols_) throw ConsistencyError("append_row: width mismatch");
    data_.insert(data_.end(), row.begin(), row.end());
    ++rows_;
  }

  Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (size_t r = 0; r < rows_; ++r)
      for (size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
    return t;
  }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) throw ConsistencyError("matrix product: shape mismatch");
    Matrix m(a.rows_, b.cols_);
    for (size_t i = 0; i < a.rows_; ++i)
      for (size_t k = 0; k < a.cols_; ++k) {
        const Rational& x = a(i, k);
        if (x == 0) continue;
        for (size_t j = 0; j < b.cols_; ++j)
          if (b(k, j) != 0) m(i, j) += x * b(k, j);
      }
    return m;
  }
  Matrix& operator+=(const Matrix& o) {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw ConsistencyError("matrix sum: shape mismatch");
    for (size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
    return *this;
  }
  Matrix& operator-=(const Matrix& o) {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw ConsistencyError("matrix sum: shape mismatch");
    for (size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
    return *this;
  }
  Matrix& operator*=(const Rational& s) {
    for (auto& x : data_) x *= s;
    return *this;
  }
  friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
  friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
  friend Matrix operator*(const Rational& s, Matrix a) { return a *= s; }
  bool operator==(const Matrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
  }

 private:
  size_t rows_ = 0;
  size_t cols_ = 0;
  std::vector<Rational> data_;
};

struct RrefResult {
  Matrix reduced;
  std::vector<size_t> pivots;  ///< pivot column of each nonzero row
};

/// Reduced row echelon form by Gauss-Jordan elimination over Q.
inline RrefResult rref(Matrix m) {
  RrefResult res;
  size_t row = 0;
  for (size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
    size_t piv = row;
    while (piv < m.rows() && m(piv, col) == 0) ++piv;
    if (piv == m.rows()) continue;
    if (piv != row)
      for (size_t c = 0; c < m.cols(); ++c) std::swap(m(piv, c), m(row, c));
    Rational inv = 1 / m(row, col);
    for (size_t c = col; c < m.cols(); ++c) m(row, c) *= inv;
    for (size_t r = 0; r < m.rows(); ++r) {
      if (r == row || m(r, col) == 0) continue;
      Rational f = m(r, col);
      for (size_t c = col; c < m.cols(); ++c)
        if (m(row, c) != 0) m(r, c) -= f * m(row, c);
    }
    res.pivots.push_back(col);
    ++row;
  }
  res.reduced = std::move(m);
  return res;
}

inline size_t rank(const Matrix& m) { return rref(m).pivots.size(); }

/// Rank by fraction-free (Bareiss) elimination after clearing denominators
/// row by row. Independent of the Gauss-Jordan route.
inline size_t bareiss_rank(const Matrix& m) {
  size_t rows = m.rows(), cols = m.cols();
  std::vector<std::vector<mpz_class>> a(rows, std::vector<mpz_class>(cols));
  for (size_t r = 0; r < rows; ++r) {
    mpz_class l = 1;
    for (size_t c = 0; c < cols; ++c) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), m(r, c).get_den_mpz_t());
    for (size_t c = 0; c < cols; ++c) {
      mpq_class scaled = m(r, c) * mpq_class(l);
      a[r][c] = scaled.get_num();
    }
  }
  mpz_class prev = 1;
  size_t rk = 0;
  for (size_t col = 0; col < cols && rk < rows; ++col) {
    size_t piv = rk;
    while (piv < rows && a[piv][col] == 0) ++piv;
    if (piv == rows) continue;
    std::swap(a[piv], a[rk]);
    for (size_t r = rk + 1; r < rows; ++r) {
      for (size_t c = col + 1; c < cols; ++c) {
        mpz_class v = a[rk][col] * a[r][c] - a[r][col] * a[rk][c];
        mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), prev.get_mpz_t());
        a[r][c] = v;
      }
      a[r][col] = 0;
    }
    prev = a[rk][col];
    ++rk;
  }
  return rk;
}

/// Basis of {x : m x = 0}, one vector per free column (free entry = 1).
inline std::vector<DenseVector> nullspace(const Matrix& m) {
  auto [red, pivots] = rref(m);
  std::vector<bool> is_pivot(m.cols(), false);
  for (size_t p : pivots) is_pivot[p] = true;
  std::vector<DenseVector> basis;
  for (size_t f = 0; f < m.cols(); ++f) {
    if (is_pivot[f]) continue;
    DenseVector v(m.cols());
    v[f] = 1;
    for (size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -red(r, f);
    basis.push_back(std::move(v));
  }
  return basis;
}

/// Linearly independent columns spanning a subspace of Q^ambient, with
/// coordinate extraction.
class SubspaceBasis {
 public:
  SubspaceBasis() = default;
  SubspaceBasis(std::vector<DenseVector> vectors, size_t ambient)
      : vectors_(std::move(vectors)), ambient_(ambient) {
    size_t k = vectors_.size();
    Matrix aug(ambient_, k + ambient_);
    for (size_t c = 0; c < k; ++c) {
      if (vectors_[c].size() != ambient_) throw ConsistencyError("SubspaceBasis: length mismatch");
      for (size_t r = 0; r < ambient_; ++r) aug(r, c) = vectors_[c][r];
    }
    for (size_t r = 0; r < ambient_; ++r) aug(r, k + r) = 1;
    auto res = rref(aug);
    for (size_t i = 0; i < k; ++i)
      if (i >= res.pivots.size() || res.pivots[i] != i)
        throw ConsistencyError("SubspaceBasis: vectors are linearly dependent");
    transform_ = Matrix(ambient_, ambient_);
    for (size_t r = 0; r < ambient_; ++r)
      for (size_t c = 0; c < ambient_; ++c) transform_(r, c) = res.reduced(r, k + c);
  }

  size_t size() const { return vectors_.size(); }
  size_t ambient() const { return ambient_; }
  const std::vector<DenseVector>& vectors() const { return vectors_; }

  /// Coordinates of v in this basis, or nullopt when v is outside the span.
  std::optional<DenseVector> coordinates(const DenseVector& v) const {
    DenseVector t = transform_.apply(v);
    for (size_t r = vectors_.size(); r < ambient_; ++r)
      if (t[r] != 0) return std::nullopt;
    t.resize(vectors_.size());
    return t;
  }

  bool contains(const DenseVector& v) const { return coordinates(v).has_value(); }

  DenseVector combine(const DenseVector& coords) const {
    DenseVector out(ambient_);
    for (size_t i = 0; i < coords.size(); ++i)
      if (coords[i] != 0)
        for (size_t r = 0; r < ambient_; ++r) out[r] += coords[i] * vectors_[i][r];
    return out;
  }

 private:
  std::vector<DenseVector> vectors_;
  size_t ambient_ = 0;
  Matrix transform_;
};

/// A maximal independent subset of the given vectors (first occurrences kept).
inline std::vector<DenseVector> independent_subset(const std::vector<DenseVector>& vs, size_t ambient) {
  if (vs.empty()) return {};
  auto res = rref(Matrix::from_columns(vs, ambient));
  std::vector<DenseVector> out;
  for (size_t p : res.pivots) out.push_back(vs[p]);
  return out;
}

inline bool is_zero(const DenseVector& v) {
  for (const auto& x : v)
    if (x != 0) return false;
  return true;
}

}  // namespace hpl

#endif  // HPL_LINALG_HPP
