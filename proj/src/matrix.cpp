#include "hebbd/matrix.hpp"

#include <cmath>
#include <string>

#include "hebbd/error.hpp"

namespace hebbd {

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw ShapeError("ragged initializer list for Matrix");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::from_rows(std::span<const Vector> rows) {
  if (rows.empty()) return {};
  Matrix m(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    require_same_size(rows[i].size(), m.cols(), "Matrix::from_rows row length");
    std::copy(rows[i].begin(), rows[i].end(), m.row(i).begin());
  }
  return m;
}

Vector Matrix::row_vector(std::size_t i) const {
  auto r = row(i);
  return {r.begin(), r.end()};
}

void require_same_size(std::size_t a, std::size_t b, std::string_view what) {
  if (a != b) {
    throw ShapeError(std::string(what) + ": " + std::to_string(a) + " != " + std::to_string(b));
  }
}

Matrix outer(std::span<const double> u, std::span<const double> v) {
  Matrix m(u.size(), v.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    auto r = m.row(i);
    for (std::size_t j = 0; j < v.size(); ++j) r[j] = u[i] * v[j];
  }
  return m;
}

Vector matvec_t(const Matrix& W, std::span<const double> x) {
  require_same_size(x.size(), W.rows(), "matvec_t: len(x) vs rows(W)");
  Vector out(W.cols(), 0.0);
  for (std::size_t i = 0; i < W.rows(); ++i) {
    const double xi = x[i];
    if (xi == 0.0) continue;
    auto r = W.row(i);
    for (std::size_t j = 0; j < W.cols(); ++j) out[j] += r[j] * xi;
  }
  return out;
}

Vector matvec(const Matrix& W, std::span<const double> y) {
  require_same_size(y.size(), W.cols(), "matvec: len(y) vs cols(W)");
  Vector out(W.rows(), 0.0);
  for (std::size_t i = 0; i < W.rows(); ++i) {
    auto r = W.row(i);
    double s = 0.0;
    for (std::size_t j = 0; j < W.cols(); ++j) s += r[j] * y[j];
    out[i] = s;
  }
  return out;
}

Vector mean_rows(const Matrix& X) {
  if (X.rows() == 0) throw ShapeError("mean_rows: empty matrix");
  Vector mean(X.cols(), 0.0);
  for (std::size_t i = 0; i < X.rows(); ++i) {
    auto r = X.row(i);
    for (std::size_t j = 0; j < X.cols(); ++j) mean[j] += r[j];
  }
  const double inv = 1.0 / static_cast<double>(X.rows());
  for (double& v : mean) v *= inv;
  return mean;
}

Vector subtract(std::span<const double> a, std::span<const double> b) {
  require_same_size(a.size(), b.size(), "subtract");
  Vector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

Vector hadamard(std::span<const double> a, std::span<const double> b) {
  require_same_size(a.size(), b.size(), "hadamard");
  Vector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] * b[i];
  return out;
}

double dot(std::span<const double> a, std::span<const double> b) {
  require_same_size(a.size(), b.size(), "dot");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double frobenius_norm(const Matrix& M) {
  double s = 0.0;
  for (double v : M.data()) s += v * v;
  return std::sqrt(s);
}

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  require_same_size(a.size(), b.size(), "max_abs_diff");
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

Matrix select_rows(const Matrix& M, std::span<const std::size_t> indices) {
  Matrix out(indices.size(), M.cols());
  for (std::size_t k = 0; k < indices.size(); ++k) {
    auto src = M.row(indices[k]);
    std::copy(src.begin(), src.end(), out.row(k).begin());
  }
  return out;
}

Matrix row_range(const Matrix& M, std::size_t begin, std::size_t end) {
  Matrix out(end - begin, M.cols());
  for (std::size_t k = begin; k < end; ++k) {
    auto src = M.row(k);
    std::copy(src.begin(), src.end(), out.row(k - begin).begin());
  }
  return out;
}

bool all_finite(std::span<const double> v) noexcept {
  for (double x : v) {
    if (!std::isfinite(x)) return false;
  }
  return true;
}

}  // namespace hebbd
