#include "hebbd/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "hebbd/error.hpp"

namespace hebbd {

namespace {

Vector ranks(std::span<const double> v) {
  std::vector<std::size_t> idx(v.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  Vector r(v.size());
  for (std::size_t i = 0; i < idx.size();) {
    std::size_t j = i;
    while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
    const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) r[idx[k]] = avg;
    i = j + 1;
  }
  return r;
}

}  // namespace

double mae(const Matrix& P, const Matrix& T) {
  require_same_size(P.rows(), T.rows(), "mae: rows");
  require_same_size(P.cols(), T.cols(), "mae: cols");
  if (P.empty()) return 0.0;
  double s = 0.0;
  for (std::size_t k = 0; k < P.size(); ++k) s += std::abs(P.data()[k] - T.data()[k]);
  return s / static_cast<double>(P.size());
}

std::size_t argmax(std::span<const double> v) {
  std::size_t best = 0;
  for (std::size_t k = 1; k < v.size(); ++k)
    if (v[k] > v[best]) best = k;
  return best;
}

double classification_error(const Matrix& H, std::span<const std::size_t> labels) {
  require_same_size(H.rows(), labels.size(), "classification_error: rows vs labels");
  if (labels.empty()) return 0.0;
  std::size_t wrong = 0;
  for (std::size_t r = 0; r < H.rows(); ++r)
    if (argmax(H.row(r)) != labels[r]) ++wrong;
  return static_cast<double>(wrong) / static_cast<double>(labels.size());
}

Vector per_pattern_mae(const CenteredLayer& layer, const Matrix& X, const Matrix& T) {
  require_same_size(X.rows(), T.rows(), "per_pattern_mae: rows");
  require_same_size(T.cols(), layer.n_outputs(), "per_pattern_mae: output dimension");
  Vector out(X.rows());
  for (std::size_t r = 0; r < X.rows(); ++r) {
    const Vector h = forward(layer, X.row(r)).h;
    const auto t = T.row(r);
    double s = 0.0;
    for (std::size_t j = 0; j < h.size(); ++j) s += std::abs(h[j] - t[j]);
    out[r] = s / static_cast<double>(h.size());
  }
  return out;
}

double spearman(std::span<const double> x, std::span<const double> y) {
  require_same_size(x.size(), y.size(), "spearman");
  if (x.size() < 2) throw std::invalid_argument("spearman needs at least two points");
  const Vector rx = ranks(x);
  const Vector ry = ranks(y);
  const double mx = mean(rx);
  const double my = mean(ry);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t k = 0; k < rx.size(); ++k) {
    sxy += (rx[k] - mx) * (ry[k] - my);
    sxx += (rx[k] - mx) * (rx[k] - mx);
    syy += (ry[k] - my) * (ry[k] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

double mean(std::span<const double> v) {
  if (v.empty()) return 0.0;
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double stddev(std::span<const double> v) {
  if (v.empty()) return 0.0;
  const double m = mean(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(v.size()));
}

}  // namespace hebbd
