#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace iegs {

// Dense row-major matrix, sized for desk-scale systems.
class Matrix {
 public:
  Matrix() : rows_(0), cols_(0) {}
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  Matrix operator*(const Matrix& other) const {
    if (cols_ != other.rows_) throw std::invalid_argument("matrix product dimension mismatch");
    Matrix out(rows_, other.cols_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t k = 0; k < cols_; ++k) {
        const double a = (*this)(i, k);
        if (a == 0.0) continue;
        for (std::size_t j = 0; j < other.cols_; ++j) out(i, j) += a * other(k, j);
      }
    return out;
  }

  std::vector<double> operator*(const std::vector<double>& v) const {
    if (cols_ != v.size()) throw std::invalid_argument("matrix-vector dimension mismatch");
    std::vector<double> out(rows_, 0.0);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) out[i] += (*this)(i, j) * v[j];
    return out;
  }

  Matrix transposed() const {
    Matrix out(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
    return out;
  }

 private:
  std::size_t rows_, cols_;
  std::vector<double> data_;
};

// LU factorization with partial pivoting.
class LuFactor {
 public:
  explicit LuFactor(Matrix a) : lu_(std::move(a)), perm_(lu_.rows()), sign_(1) {
    if (lu_.rows() != lu_.cols()) throw std::invalid_argument("LU requires a square matrix");
    const std::size_t n = lu_.rows();
    for (std::size_t i = 0; i < n; ++i) perm_[i] = i;
    for (std::size_t k = 0; k < n; ++k) {
      std::size_t piv = k;
      double best = std::fabs(lu_(k, k));
      for (std::size_t i = k + 1; i < n; ++i) {
        const double v = std::fabs(lu_(i, k));
        if (v > best) {
          best = v;
          piv = i;
        }
      }
      if (best < 1e-12) {
        singular_ = true;
        return;
      }
      if (piv != k) {
        for (std::size_t j = 0; j < n; ++j) std::swap(lu_(k, j), lu_(piv, j));
        std::swap(perm_[k], perm_[piv]);
        sign_ = -sign_;
      }
      for (std::size_t i = k + 1; i < n; ++i) {
        lu_(i, k) /= lu_(k, k);
        const double f = lu_(i, k);
        if (f == 0.0) continue;
        for (std::size_t j = k + 1; j < n; ++j) lu_(i, j) -= f * lu_(k, j);
      }
    }
  }

  bool singular() const { return singular_; }

  std::vector<double> solve(const std::vector<double>& b) const {
    if (singular_) throw std::runtime_error("LU solve on singular matrix");
    const std::size_t n = lu_.rows();
    if (b.size() != n) throw std::invalid_argument("LU solve dimension mismatch");
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = b[perm_[i]];
    for (std::size_t i = 1; i < n; ++i)
      for (std::size_t j = 0; j < i; ++j) x[i] -= lu_(i, j) * x[j];
    for (std::size_t i = n; i-- > 0;) {
      for (std::size_t j = i + 1; j < n; ++j) x[i] -= lu_(i, j) * x[j];
      x[i] /= lu_(i, i);
    }
    return x;
  }

  Matrix inverse() const {
    const std::size_t n = lu_.rows();
    Matrix inv(n, n);
    std::vector<double> e(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
      e[j] = 1.0;
      const auto col = solve(e);
      e[j] = 0.0;
      for (std::size_t i = 0; i < n; ++i) inv(i, j) = col[i];
    }
    return inv;
  }

  double determinant() const {
    if (singular_) return 0.0;
    double det = static_cast<double>(sign_);
    for (std::size_t i = 0; i < lu_.rows(); ++i) det *= lu_(i, i);
    return det;
  }

 private:
  Matrix lu_;
  std::vector<std::size_t> perm_;
  int sign_;
  bool singular_ = false;
};

}  // namespace iegs
