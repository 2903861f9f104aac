#ifndef HBVM_LINALG_HPP
#define HBVM_LINALG_HPP

// Small dense linear algebra. Every matrix handled by the library is at most a
// few hundred rows, so everything here is plain row-major storage and textbook
// O(n^3) kernels.

#include <algorithm>
#include <cassert>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <limits>
#include <span>
#include <vector>

#include "hbvm/errors.hpp"

namespace hbvm {

using Complex = std::complex<double>;
using Vector = std::vector<double>;

template <typename T>
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols, T fill = T{})
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  DenseMatrix(std::initializer_list<std::initializer_list<T>> init)
      : rows_(init.size()), cols_(init.size() ? init.begin()->size() : 0) {
    data_.reserve(rows_ * cols_);
    for (const auto& row : init) {
      if (row.size() != cols_) throw InvalidArgument("ragged matrix initializer");
      data_.insert(data_.end(), row.begin(), row.end());
    }
  }

  static DenseMatrix identity(std::size_t n) {
    DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return data_.empty(); }

  T& operator()(std::size_t i, std::size_t j) {
    assert(i < rows_ && j < cols_);
    return data_[i * cols_ + j];
  }
  const T& operator()(std::size_t i, std::size_t j) const {
    assert(i < rows_ && j < cols_);
    return data_[i * cols_ + j];
  }

  std::span<T> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const T> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }

  std::vector<T> column(std::size_t j) const {
    std::vector<T> c(rows_);
    for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
    return c;
  }

  DenseMatrix transposed() const {
    DenseMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  DenseMatrix& operator+=(const DenseMatrix& o) {
    check_same_shape(o);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
    return *this;
  }
  DenseMatrix& operator-=(const DenseMatrix& o) {
    check_same_shape(o);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
    return *this;
  }
  DenseMatrix& operator*=(T scale) {
    for (auto& x : data_) x *= scale;
    return *this;
  }

  friend DenseMatrix operator+(DenseMatrix a, const DenseMatrix& b) { return a += b; }
  friend DenseMatrix operator-(DenseMatrix a, const DenseMatrix& b) { return a -= b; }
  friend DenseMatrix operator*(T scale, DenseMatrix a) { return a *= scale; }

  friend DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.cols_ != b.rows_) throw InvalidArgument("matrix product: inner dimensions differ");
    DenseMatrix c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t l = 0; l < a.cols_; ++l) {
        const T ail = a(i, l);
        if (ail == T{}) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += ail * b(l, j);
      }
    return c;
  }

  friend std::vector<T> operator*(const DenseMatrix& a, std::span<const T> x) {
    if (a.cols_ != x.size()) throw InvalidArgument("matrix-vector product: size mismatch");
    std::vector<T> y(a.rows_, T{});
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t j = 0; j < a.cols_; ++j) y[i] += a(i, j) * x[j];
    return y;
  }
  friend std::vector<T> operator*(const DenseMatrix& a, const std::vector<T>& x) {
    return a * std::span<const T>(x);
  }

 private:
  void check_same_shape(const DenseMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw InvalidArgument("matrix shapes differ");
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

using Matrix = DenseMatrix<double>;
using ComplexMatrix = DenseMatrix<Complex>;

/// Max-row-sum norm.
template <typename T>
double norm_inf(const DenseMatrix<T>& m) {
  double best = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    double sum = 0.0;
    for (std::size_t j = 0; j < m.cols(); ++j) sum += std::abs(m(i, j));
    best = std::max(best, sum);
  }
  return best;
}

/// Largest absolute entry.
template <typename T>
double max_abs(const DenseMatrix<T>& m) {
  double best = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) best = std::max(best, double(std::abs(m(i, j))));
  return best;
}

inline double norm_inf(std::span<const double> v) {
  double best = 0.0;
  for (double x : v) best = std::max(best, std::abs(x));
  return best;
}

/// LU factorization with partial pivoting, PA = LU.
///
/// A pivot below n * eps * max|A| marks the matrix as singular; solve() then
/// throws. Callers that need a domain-specific error check singular() first.
template <typename T>
class LuFactorization {
 public:
  explicit LuFactorization(DenseMatrix<T> a) : lu_(std::move(a)), perm_(lu_.rows()) {
    if (lu_.rows() != lu_.cols()) throw InvalidArgument("LU of a non-square matrix");
    const std::size_t n = lu_.rows();
    const double scale = max_abs(lu_);
    const double tiny = double(std::max<std::size_t>(n, 1)) *
                        std::numeric_limits<double>::epsilon() * scale;
    for (std::size_t i = 0; i < n; ++i) perm_[i] = i;
    singular_ = scale == 0.0 && n > 0;
    for (std::size_t k = 0; k < n && !singular_; ++k) {
      std::size_t p = k;
      for (std::size_t i = k + 1; i < n; ++i)
        if (std::abs(lu_(i, k)) > std::abs(lu_(p, k))) p = i;
      if (std::abs(lu_(p, k)) <= tiny) {
        singular_ = true;
        break;
      }
      if (p != k) {
        for (std::size_t j = 0; j < n; ++j) std::swap(lu_(k, j), lu_(p, j));
        std::swap(perm_[k], perm_[p]);
      }
      for (std::size_t i = k + 1; i < n; ++i) {
        const T factor = lu_(i, k) / lu_(k, k);
        lu_(i, k) = factor;
        for (std::size_t j = k + 1; j < n; ++j) lu_(i, j) -= factor * lu_(k, j);
      }
    }
  }

  bool singular() const noexcept { return singular_; }
  std::size_t size() const noexcept { return lu_.rows(); }

  std::vector<T> solve(std::span<const T> b) const {
    const std::size_t n = lu_.rows();
    if (singular_) throw InvalidArgument("solve with a singular matrix");
    if (b.size() != n) throw InvalidArgument("LU solve: right-hand side has wrong size");
    std::vector<T> x(n);
    for (std::size_t i = 0; i < n; ++i) {
      T sum = b[perm_[i]];
      for (std::size_t j = 0; j < i; ++j) sum -= lu_(i, j) * x[j];
      x[i] = sum;
    }
    for (std::size_t i = n; i-- > 0;) {
      T sum = x[i];
      for (std::size_t j = i + 1; j < n; ++j) sum -= lu_(i, j) * x[j];
      x[i] = sum / lu_(i, i);
    }
    return x;
  }
  std::vector<T> solve(const std::vector<T>& b) const { return solve(std::span<const T>(b)); }

  /// Solves A X = B column by column.
  DenseMatrix<T> solve(const DenseMatrix<T>& b) const {
    DenseMatrix<T> x(b.rows(), b.cols());
    for (std::size_t j = 0; j < b.cols(); ++j) {
      const auto col = solve(b.column(j));
      for (std::size_t i = 0; i < b.rows(); ++i) x(i, j) = col[i];
    }
    return x;
  }

  DenseMatrix<T> inverse() const { return solve(DenseMatrix<T>::identity(lu_.rows())); }

 private:
  DenseMatrix<T> lu_;
  std::vector<std::size_t> perm_;
  bool singular_ = false;
};

/// All eigenvalues of a real square matrix: balancing, reduction to upper
/// Hessenberg form and Francis double-shift QR. Complex pairs come out as
/// adjacent conjugates. Throws NumericError if QR stalls.
std::vector<Complex> eigenvalues(const Matrix& m);

/// Largest |lambda| over eigenvalues(m).
double spectral_radius(const Matrix& m);

/// Singular values in decreasing order (one-sided Jacobi).
Vector singular_values(const Matrix& m);

/// Spectral norm, the largest singular value.
double norm2(const Matrix& m);

}  // namespace hbvm

#endif  // HBVM_LINALG_HPP
