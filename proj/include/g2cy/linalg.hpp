#pragma once

// Small dense matrices over any scalar backend. Elimination pivots on the
// largest magnitude, which is exact for rationals and stable for floats.

#include <algorithm>
#include <cstddef>
#include <sstream>
#include <string>
#include <stdexcept>
#include <utility>
#include <vector>

#include "g2cy/scalar.hpp"

namespace g2cy {

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class SingularMatrixError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

template <class S>
using Vec = std::vector<S>;

template <class S>
class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols) : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows * cols), S(0)) {}

  static Matrix identity(int n) {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = S(1);
    return m;
  }

  static Matrix diagonal(const Vec<S>& d) {
    Matrix m(static_cast<int>(d.size()), static_cast<int>(d.size()));
    for (std::size_t i = 0; i < d.size(); ++i) m(static_cast<int>(i), static_cast<int>(i)) = d[i];
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  S& operator()(int i, int j) { return data_[static_cast<std::size_t>(i * cols_ + j)]; }
  const S& operator()(int i, int j) const { return data_[static_cast<std::size_t>(i * cols_ + j)]; }

  Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  Matrix& operator+=(const Matrix& o) {
    check_same(o);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
    return *this;
  }
  Matrix& operator-=(const Matrix& o) {
    check_same(o);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
    return *this;
  }
  Matrix& operator*=(const S& s) {
    for (auto& x : data_) x *= s;
    return *this;
  }
  friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
  friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
  friend Matrix operator*(Matrix a, const S& s) { return a *= s; }
  friend Matrix operator*(const S& s, Matrix a) { return a *= s; }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) throw DimensionError("matrix product shape mismatch");
    Matrix c(a.rows_, b.cols_);
    for (int i = 0; i < a.rows_; ++i)
      for (int k = 0; k < a.cols_; ++k) {
        if (is_zero(a(i, k))) continue;
        for (int j = 0; j < b.cols_; ++j) c(i, j) += a(i, k) * b(k, j);
      }
    return c;
  }

  friend Vec<S> operator*(const Matrix& a, const Vec<S>& v) {
    if (a.cols_ != static_cast<int>(v.size())) throw DimensionError("matrix-vector shape mismatch");
    Vec<S> out(static_cast<std::size_t>(a.rows_), S(0));
    for (int i = 0; i < a.rows_; ++i)
      for (int j = 0; j < a.cols_; ++j) out[static_cast<std::size_t>(i)] += a(i, j) * v[static_cast<std::size_t>(j)];
    return out;
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

  bool is_symmetric() const {
    if (rows_ != cols_) return false;
    for (int i = 0; i < rows_; ++i)
      for (int j = i + 1; j < cols_; ++j)
        if (!((*this)(i, j) == (*this)(j, i))) return false;
    return true;
  }

  double max_abs() const {
    double m = 0;
    for (const auto& x : data_) m = std::max(m, magnitude(x));
    return m;
  }

 private:
  void check_same(const Matrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw DimensionError("matrix shape mismatch");
  }

  int rows_ = 0;
  int cols_ = 0;
  std::vector<S> data_;
};

namespace detail {
// In-place row reduction of `a` with the same operations applied to `rhs`.
// Returns the determinant sign-and-scale product (for square systems).
template <class S>
S eliminate(Matrix<S>& a, Matrix<S>* rhs, bool& singular) {
  const int n = a.rows();
  S det(1);
  singular = false;
  for (int col = 0; col < n; ++col) {
    int piv = -1;
    double best = 0.0;
    for (int r = col; r < n; ++r) {
      double m = magnitude(a(r, col));
      if (!is_zero(a(r, col)) && (piv < 0 || m > best)) {
        piv = r;
        best = m;
      }
    }
    if (piv < 0) {
      singular = true;
      return S(0);
    }
    if (piv != col) {
      for (int j = 0; j < a.cols(); ++j) std::swap(a(piv, j), a(col, j));
      if (rhs)
        for (int j = 0; j < rhs->cols(); ++j) std::swap((*rhs)(piv, j), (*rhs)(col, j));
      det = -det;
    }
    const S p = a(col, col);
    det *= p;
    for (int r = 0; r < n; ++r) {
      if (r == col || is_zero(a(r, col))) continue;
      const S f = a(r, col) / p;
      for (int j = col; j < a.cols(); ++j) a(r, j) -= f * a(col, j);
      if (rhs)
        for (int j = 0; j < rhs->cols(); ++j) (*rhs)(r, j) -= f * (*rhs)(col, j);
    }
  }
  return det;
}
}  // namespace detail

template <class S>
S determinant(Matrix<S> a) {
  if (a.rows() != a.cols()) throw DimensionError("determinant of a non-square matrix");
  if (a.rows() == 0) return S(1);
  bool singular = false;
  S det = detail::eliminate(a, static_cast<Matrix<S>*>(nullptr), singular);
  return singular ? S(0) : det;
}

/// Solves a X = b. Throws SingularMatrixError when a has no pivot in a column.
template <class S>
Matrix<S> solve(Matrix<S> a, Matrix<S> b) {
  if (a.rows() != a.cols() || b.rows() != a.rows()) throw DimensionError("solve shape mismatch");
  bool singular = false;
  detail::eliminate(a, &b, singular);
  if (singular) throw SingularMatrixError("singular matrix");
  for (int i = 0; i < a.rows(); ++i) {
    const S p = a(i, i);
    for (int j = 0; j < b.cols(); ++j) b(i, j) /= p;
  }
  return b;
}

template <class S>
Vec<S> solve(const Matrix<S>& a, const Vec<S>& b) {
  Matrix<S> rhs(static_cast<int>(b.size()), 1);
  for (std::size_t i = 0; i < b.size(); ++i) rhs(static_cast<int>(i), 0) = b[i];
  Matrix<S> x = solve(a, rhs);
  Vec<S> out(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) out[i] = x(static_cast<int>(i), 0);
  return out;
}

template <class S>
Matrix<S> inverse(const Matrix<S>& a) {
  return solve(a, Matrix<S>::identity(a.rows()));
}

/// Rank by elimination. `tol` is a relative threshold for float scalars and is
/// ignored for exact scalars.
template <class S>
int rank(Matrix<S> a, double tol = 1e-12) {
  const double scale = std::max(1.0, a.max_abs());
  int r = 0;
  for (int col = 0; col < a.cols() && r < a.rows(); ++col) {
    int piv = -1;
    double best = 0.0;
    for (int i = r; i < a.rows(); ++i) {
      double m = magnitude(a(i, col));
      bool nonzero = is_exact_v<S> ? !is_zero(a(i, col)) : m > tol * scale;
      if (nonzero && (piv < 0 || m > best)) {
        piv = i;
        best = m;
      }
    }
    if (piv < 0) continue;
    for (int j = 0; j < a.cols(); ++j) std::swap(a(piv, j), a(r, j));
    for (int i = r + 1; i < a.rows(); ++i) {
      if (is_zero(a(i, col))) continue;
      const S f = a(i, col) / a(r, col);
      for (int j = col; j < a.cols(); ++j) a(i, j) -= f * a(r, j);
    }
    ++r;
  }
  return r;
}

/// Basis of the null space {x : a x = 0}, one vector per free column.
template <class S>
std::vector<Vec<S>> null_space(Matrix<S> a, double tol = 1e-12) {
  const double scale = std::max(1.0, a.max_abs());
  const int m = a.rows();
  const int n = a.cols();
  std::vector<int> pivot_cols;
  int r = 0;
  for (int col = 0; col < n && r < m; ++col) {
    int piv = -1;
    double best = 0.0;
    for (int i = r; i < m; ++i) {
      double mag = magnitude(a(i, col));
      bool nonzero = is_exact_v<S> ? !is_zero(a(i, col)) : mag > tol * scale;
      if (nonzero && (piv < 0 || mag > best)) {
        piv = i;
        best = mag;
      }
    }
    if (piv < 0) continue;
    for (int j = 0; j < n; ++j) std::swap(a(piv, j), a(r, j));
    const S p = a(r, col);
    for (int j = 0; j < n; ++j) a(r, j) /= p;
    for (int i = 0; i < m; ++i) {
      if (i == r || is_zero(a(i, col))) continue;
      const S f = a(i, col);
      for (int j = 0; j < n; ++j) a(i, j) -= f * a(r, j);
    }
    pivot_cols.push_back(col);
    ++r;
  }
  std::vector<Vec<S>> basis;
  std::vector<bool> is_pivot(static_cast<std::size_t>(n), false);
  for (int c : pivot_cols) is_pivot[static_cast<std::size_t>(c)] = true;
  for (int free = 0; free < n; ++free) {
    if (is_pivot[static_cast<std::size_t>(free)]) continue;
    Vec<S> v(static_cast<std::size_t>(n), S(0));
    v[static_cast<std::size_t>(free)] = S(1);
    for (std::size_t k = 0; k < pivot_cols.size(); ++k)
      v[static_cast<std::size_t>(pivot_cols[k])] = -a(static_cast<int>(k), free);
    basis.push_back(std::move(v));
  }
  return basis;
}

/// Pivots of the symmetric LDL^T factorisation without pivoting. A symmetric
/// matrix is positive-definite exactly when every pivot is positive.
template <class S>
Vec<S> ldl_pivots(Matrix<S> a) {
  const int n = a.rows();
  Vec<S> d;
  for (int k = 0; k < n; ++k) {
    const S p = a(k, k);
    d.push_back(p);
    if (sign_of(p) <= 0) return d;
    for (int i = k + 1; i < n; ++i) {
      const S f = a(i, k) / p;
      for (int j = k; j < n; ++j) a(i, j) -= f * a(k, j);
    }
  }
  return d;
}

template <class S>
bool is_positive_definite(const Matrix<S>& a) {
  if (a.rows() != a.cols()) return false;
  Vec<S> d = ldl_pivots(a);
  if (static_cast<int>(d.size()) != a.rows()) return false;
  for (const auto& p : d)
    if (sign_of(p) <= 0) return false;
  return true;
}

template <class S>
std::string to_string(const Matrix<S>& m) {
  std::ostringstream os;
  for (int i = 0; i < m.rows(); ++i) {
    for (int j = 0; j < m.cols(); ++j) os << (j ? " " : "") << to_double(m(i, j));
    os << '\n';
  }
  return os.str();
}

template <class To, class From>
Matrix<To> convert(const Matrix<From>& m) {
  Matrix<To> out(m.rows(), m.cols());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) out(i, j) = To(to_double(m(i, j)));
  return out;
}

}  // namespace g2cy
