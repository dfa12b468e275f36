#pragma once

// Small dense linear algebra over Rational (exact) or double (Eigen-backed
// eigenvalues). Matrices here are tiny (at most a few dozen rows).

#include "hrpair/scalar.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

namespace hrpair {

template <class T>
using Vec = std::vector<T>;

template <class T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, T(0)) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
  }
  static Matrix fromRows(const std::vector<std::vector<T>>& rows) {
    Matrix m(rows.size(), rows.empty() ? 0 : rows.front().size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != m.cols_) throw DomainError("ragged matrix");
      for (std::size_t j = 0; j < m.cols_; ++j) m(i, j) = rows[i][j];
    }
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  Vec<T> column(std::size_t j) const {
    Vec<T> c(rows_);
    for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
    return c;
  }

  Vec<T> apply(const Vec<T>& x) const {
    if (x.size() != cols_) throw DomainError("dimension mismatch in matrix-vector product");
    Vec<T> y(rows_, T(0));
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) y[i] += (*this)(i, j) * x[j];
    return y;
  }

  Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) throw DomainError("dimension mismatch in matrix product");
    Matrix c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        if (a(i, k) == 0) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += a(i, k) * b(k, j);
      }
    return c;
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

  double maxAbs() const {
    double m = 0;
    for (const T& x : data_) m = std::max(m, std::abs(toDouble(x)));
    return m;
  }

  template <class U>
  Matrix<U> cast() const {
    Matrix<U> m(rows_, cols_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) {
        if constexpr (std::is_same_v<U, double>)
          m(i, j) = toDouble((*this)(i, j));
        else
          m(i, j) = U((*this)(i, j));
      }
    return m;
  }

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<T> data_;
};

template <class T>
T dot(const Vec<T>& a, const Vec<T>& b) {
  T s(0);
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

/// x^T Q y
template <class T>
T bilinear(const Matrix<T>& q, const Vec<T>& x, const Vec<T>& y) {
  return dot(x, q.apply(y));
}

namespace detail {

// Pivot choice: exact backend takes any nonzero entry; float backend takes
// the largest entry and treats anything below tol * scale as zero.
template <class T>
std::optional<std::size_t> pickPivot(const Matrix<T>& a, std::size_t col, std::size_t fromRow, double tol, double scale) {
  std::optional<std::size_t> best;
  double bestAbs = 0;
  for (std::size_t r = fromRow; r < a.rows(); ++r) {
    if (nearZero(a(r, col), tol, scale)) continue;
    if constexpr (is_exact_v<T>) return r;
    double v = std::abs(toDouble(a(r, col)));
    if (v > bestAbs) {
      bestAbs = v;
      best = r;
    }
  }
  return best;
}

}  // namespace detail

/// Reduced row echelon form; returns pivot columns.
template <class T>
std::vector<std::size_t> rref(Matrix<T>& a, double tol = kDefaultTolerance) {
  std::vector<std::size_t> pivots;
  const double scale = std::max(1.0, a.maxAbs());
  std::size_t row = 0;
  for (std::size_t col = 0; col < a.cols() && row < a.rows(); ++col) {
    auto p = detail::pickPivot(a, col, row, tol, scale);
    if (!p) {
      for (std::size_t r = row; r < a.rows(); ++r) a(r, col) = T(0);
      continue;
    }
    if (*p != row)
      for (std::size_t j = 0; j < a.cols(); ++j) std::swap(a(*p, j), a(row, j));
    T inv = T(1) / a(row, col);
    for (std::size_t j = 0; j < a.cols(); ++j) a(row, j) *= inv;
    for (std::size_t r = 0; r < a.rows(); ++r) {
      if (r == row || a(r, col) == 0) continue;
      T f = a(r, col);
      for (std::size_t j = 0; j < a.cols(); ++j) a(r, j) -= f * a(row, j);
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

template <class T>
std::size_t rank(Matrix<T> a, double tol = kDefaultTolerance) {
  return rref(a, tol).size();
}

/// Basis of {x : A x = 0}.
template <class T>
std::vector<Vec<T>> nullspace(Matrix<T> a, double tol = kDefaultTolerance) {
  auto pivots = rref(a, tol);
  std::vector<bool> isPivot(a.cols(), false);
  for (auto p : pivots) isPivot[p] = true;
  std::vector<Vec<T>> basis;
  for (std::size_t free = 0; free < a.cols(); ++free) {
    if (isPivot[free]) continue;
    Vec<T> v(a.cols(), T(0));
    v[free] = T(1);
    for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -a(r, free);
    basis.push_back(std::move(v));
  }
  return basis;
}

/// Solves A x = b for square nonsingular A; nullopt when A is singular.
template <class T>
std::optional<Vec<T>> solve(const Matrix<T>& a, const Vec<T>& b, double tol = kDefaultTolerance) {
  const std::size_t n = a.rows();
  if (a.cols() != n || b.size() != n) throw DomainError("solve expects a square system");
  Matrix<T> aug(n, n + 1);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug(i, j) = a(i, j);
    aug(i, n) = b[i];
  }
  // Pivot only over the coefficient block.
  const double scale = std::max(1.0, a.maxAbs());
  for (std::size_t col = 0; col < n; ++col) {
    auto p = detail::pickPivot(aug, col, col, tol, scale);
    if (!p) return std::nullopt;
    if (*p != col)
      for (std::size_t j = 0; j <= n; ++j) std::swap(aug(*p, j), aug(col, j));
    T inv = T(1) / aug(col, col);
    for (std::size_t j = col; j <= n; ++j) aug(col, j) *= inv;
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || aug(r, col) == 0) continue;
      T f = aug(r, col);
      for (std::size_t j = col; j <= n; ++j) aug(r, j) -= f * aug(col, j);
    }
  }
  Vec<T> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = aug(i, n);
  return x;
}

// ---------------------------------------------------------------------------
// Symmetric forms

struct Signature {
  int positive = 0;
  int zero = 0;
  int negative = 0;
  int dimension() const { return positive + zero + negative; }
  friend bool operator==(const Signature&, const Signature&) = default;
};

/// Congruence diagonalization B^T Q B = diag(d) (columns of B are the new
/// basis). Exact: symmetric Gaussian elimination. Float: Eigen eigenvectors.
template <class T>
struct Diagonalization {
  Vec<T> diagonal;
  Matrix<T> basis;
};

template <class T>
Diagonalization<T> diagonalize(const Matrix<T>& q) {
  const std::size_t n = q.rows();
  if (q.cols() != n) throw DomainError("diagonalize expects a square matrix");
  if constexpr (std::is_floating_point_v<T>) {
    Eigen::MatrixXd m(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) m(i, j) = 0.5 * (q(i, j) + q(j, i));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
    Diagonalization<T> out{Vec<T>(n), Matrix<T>(n, n)};
    for (std::size_t k = 0; k < n; ++k) {
      out.diagonal[k] = es.eigenvalues()(k);
      for (std::size_t i = 0; i < n; ++i) out.basis(i, k) = es.eigenvectors()(i, k);
    }
    return out;
  } else {
    Matrix<T> a = q;
    Matrix<T> b = Matrix<T>::identity(n);
    auto swapIndex = [&](std::size_t i, std::size_t j) {
      if (i == j) return;
      for (std::size_t k = 0; k < n; ++k) std::swap(a(i, k), a(j, k));
      for (std::size_t k = 0; k < n; ++k) std::swap(a(k, i), a(k, j));
      for (std::size_t k = 0; k < n; ++k) std::swap(b(k, i), b(k, j));
    };
    // v_i <- v_i + f v_j
    auto addIndex = [&](std::size_t i, std::size_t j, const T& f) {
      for (std::size_t k = 0; k < n; ++k) a(i, k) += f * a(j, k);
      for (std::size_t k = 0; k < n; ++k) a(k, i) += f * a(k, j);
      for (std::size_t k = 0; k < n; ++k) b(k, i) += f * b(k, j);
    };
    for (std::size_t k = 0; k < n; ++k) {
      std::optional<std::size_t> piv;
      for (std::size_t i = k; i < n && !piv; ++i)
        if (a(i, i) != 0) piv = i;
      if (!piv) {
        for (std::size_t i = k; i < n && !piv; ++i)
          for (std::size_t j = i + 1; j < n && !piv; ++j)
            if (a(i, j) != 0) {
              addIndex(i, j, T(1));
              piv = i;
            }
      }
      if (!piv) break;  // remaining block is zero
      swapIndex(k, *piv);
      for (std::size_t j = k + 1; j < n; ++j) {
        if (a(j, k) == 0) continue;
        addIndex(j, k, -(a(j, k) / a(k, k)));
      }
    }
    Diagonalization<T> out{Vec<T>(n), b};
    for (std::size_t k = 0; k < n; ++k) out.diagonal[k] = a(k, k);
    return out;
  }
}

/// Largest |d_k|, used as the scale for relative zero tests.
template <class T>
double spectralScale(const Vec<T>& d) {
  double m = 0;
  for (const T& x : d) m = std::max(m, std::abs(toDouble(x)));
  return m;
}

template <class T>
Signature signatureOf(const Diagonalization<T>& dg, double tol = kDefaultTolerance) {
  Signature s;
  const double scale = spectralScale(dg.diagonal);
  for (const T& x : dg.diagonal) {
    int sg = signOf(x, tol, scale);
    if (sg > 0)
      ++s.positive;
    else if (sg < 0)
      ++s.negative;
    else
      ++s.zero;
  }
  return s;
}

/// Sylvester inertia. Exact backend uses no tolerance; float backend counts
/// eigenvalues with |lambda| < tol * max|lambda| as zero.
template <class T>
Signature inertia(const Matrix<T>& q, double tol = kDefaultTolerance) {
  return signatureOf(diagonalize(q), tol);
}

/// Eigenvalues (ascending) as doubles, for reporting.
template <class T>
std::vector<double> symmetricEigenvalues(const Matrix<T>& q) {
  const std::size_t n = q.rows();
  Eigen::MatrixXd m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) = 0.5 * (toDouble(q(i, j)) + toDouble(q(j, i)));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = es.eigenvalues()(i);
  return out;
}

/// Real 2n x 2n symmetric embedding [[Re, -Im], [Im, Re]] of a Hermitian
/// matrix; every eigenvalue of H appears twice.
template <class T>
Matrix<T> realEmbedding(const Matrix<Complex<T>>& h) {
  const std::size_t n = h.rows();
  Matrix<T> m(2 * n, 2 * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      m(i, j) = h(i, j).re;
      m(n + i, n + j) = h(i, j).re;
      m(i, n + j) = -h(i, j).im;
      m(n + i, j) = h(i, j).im;
    }
  return m;
}

/// Determinant over a field (Gaussian elimination).
template <class F>
F determinant(std::vector<std::vector<F>> m) {
  const std::size_t n = m.size();
  F det(1);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    double best = -1;
    for (std::size_t r = c; r < n; ++r) {
      double v;
      if constexpr (requires { m[r][c].absApprox(); })
        v = m[r][c].absApprox();
      else
        v = std::abs(toDouble(m[r][c]));
      if (v > best) {
        best = v;
        p = r;
      }
    }
    if (m[p][c] == F(0)) return F(0);
    if (p != c) {
      std::swap(m[p], m[c]);
      det = -det;
    }
    det = det * m[c][c];
    for (std::size_t r = c + 1; r < n; ++r) {
      if (m[r][c] == F(0)) continue;
      F f = m[r][c] / m[c][c];
      for (std::size_t k = c; k < n; ++k) m[r][k] = m[r][k] - f * m[c][k];
    }
  }
  return det;
}

}  // namespace hrpair
