#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string_view>
#include <vector>

namespace hebbd {

using Vector = std::vector<double>;

/// Dense row-major matrix of doubles.
///
/// A weight matrix is stored as n_inputs x n_outputs, so the forward pass of a
/// layer is W^T (x - mu) + b and a data batch stores one pattern per row.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  static Matrix identity(std::size_t n);
  static Matrix from_rows(std::span<const Vector> rows);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  double& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * cols_ + j]; }

  std::span<double> row(std::size_t i) noexcept { return {data_.data() + i * cols_, cols_}; }
  std::span<const double> row(std::size_t i) const noexcept {
    return {data_.data() + i * cols_, cols_};
  }
  Vector row_vector(std::size_t i) const;

  std::span<double> data() noexcept { return data_; }
  std::span<const double> data() const noexcept { return data_; }

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// Throws ShapeError with `what` in the message when the sizes differ.
void require_same_size(std::size_t a, std::size_t b, std::string_view what);

/// result[i][j] = u[i] * v[j]
Matrix outer(std::span<const double> u, std::span<const double> v);

/// W^T x, with x indexing the rows of W.
Vector matvec_t(const Matrix& W, std::span<const double> x);

/// W y, with y indexing the columns of W.
Vector matvec(const Matrix& W, std::span<const double> y);

/// Column-wise mean of a non-empty matrix.
Vector mean_rows(const Matrix& X);

Vector subtract(std::span<const double> a, std::span<const double> b);
Vector hadamard(std::span<const double> a, std::span<const double> b);
double dot(std::span<const double> a, std::span<const double> b);
double frobenius_norm(const Matrix& M);
double max_abs_diff(std::span<const double> a, std::span<const double> b);

Matrix select_rows(const Matrix& M, std::span<const std::size_t> indices);
Matrix row_range(const Matrix& M, std::size_t begin, std::size_t end);

bool all_finite(std::span<const double> v) noexcept;

}  // namespace hebbd
