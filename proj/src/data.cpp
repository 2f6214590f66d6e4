#include "hebbd/data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iterator>
#include <sstream>

#include "hebbd/error.hpp"

namespace hebbd {

Dataset gen_rand(std::size_t d, std::size_t n, Rng& rng) {
  Dataset ds{Matrix(d, n), std::nullopt, {}, "rand"};
  for (double& v : ds.X.data()) v = rng.bernoulli(0.5) ? 1.0 : 0.0;
  return ds;
}

Dataset gen_randn(std::size_t d, std::size_t n, Rng& rng) {
  if (d * n < 2) throw std::invalid_argument("gen_randn needs at least two values");
  Dataset ds{Matrix(d, n), std::nullopt, {}, "randn"};
  for (double& v : ds.X.data()) v = rng.normal();
  const auto [lo, hi] = std::minmax_element(ds.X.data().begin(), ds.X.data().end());
  const double min = *lo, range = *hi - *lo;
  if (range == 0.0) throw std::invalid_argument("gen_randn: degenerate sample");
  for (double& v : ds.X.data()) v = (v - min) / range;
  return ds;
}

namespace {

std::uint32_t read_be32(const std::vector<std::uint8_t>& buf, std::size_t pos) {
  return (std::uint32_t{buf[pos]} << 24) | (std::uint32_t{buf[pos + 1]} << 16) |
         (std::uint32_t{buf[pos + 2]} << 8) | std::uint32_t{buf[pos + 3]};
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), {}};
}

}  // namespace

Dataset load_idx(const std::filesystem::path& path) {
  const auto buf = read_file(path);
  if (buf.size() < 4) throw ParseError(buf.size(), "IDX file shorter than its magic number");
  if (buf[0] != 0 || buf[1] != 0) throw ParseError(0, "IDX magic must start with two zero bytes");
  if (buf[2] != 0x08) throw ParseError(2, "only unsigned byte IDX data (type 0x08) is supported");
  const std::size_t ndims = buf[3];
  if (ndims == 0) throw ParseError(3, "IDX file with zero dimensions");
  if (buf.size() < 4 + 4 * ndims) throw ParseError(buf.size(), "IDX header truncated");
  std::vector<std::size_t> dims(ndims);
  std::size_t total = 1;
  for (std::size_t k = 0; k < ndims; ++k) {
    dims[k] = read_be32(buf, 4 + 4 * k);
    total *= dims[k];
  }
  const std::size_t offset = 4 + 4 * ndims;
  if (buf.size() < offset + total)
    throw ParseError(buf.size(), "IDX payload truncated: expected " + std::to_string(total) + " bytes");
  if (buf.size() > offset + total) throw ParseError(offset + total, "trailing bytes after IDX payload");

  Dataset ds;
  ds.name = path.filename().string();
  if (ndims == 1) {
    ds.labels.assign(buf.begin() + static_cast<std::ptrdiff_t>(offset), buf.end());
    return ds;
  }
  const std::size_t count = dims[0];
  const std::size_t width = count == 0 ? 0 : total / count;
  ds.X = Matrix(count, width);
  for (std::size_t k = 0; k < total; ++k) ds.X.data()[k] = buf[offset + k] / 255.0;
  return ds;
}

Dataset load_idx(const std::filesystem::path& images, const std::filesystem::path& labels) {
  Dataset ds = load_idx(images);
  Dataset lab = load_idx(labels);
  if (!lab.X.empty()) throw ParseError(3, "label file must have exactly one dimension");
  require_same_size(lab.labels.size(), ds.X.rows(), "load_idx: label count vs image count");
  ds.labels = std::move(lab.labels);
  return ds;
}

void write_idx(const std::filesystem::path& path, const std::vector<std::uint32_t>& dims,
               const std::vector<std::uint8_t>& payload) {
  std::vector<std::uint8_t> buf{0, 0, 0x08, static_cast<std::uint8_t>(dims.size())};
  for (std::uint32_t d : dims)
    for (int s = 24; s >= 0; s -= 8) buf.push_back(static_cast<std::uint8_t>(d >> s));
  buf.insert(buf.end(), payload.begin(), payload.end());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
}

Dataset load_dense(const std::filesystem::path& path, bool label_last) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::vector<Vector> rows;
  std::vector<std::size_t> labels;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream tokens(line);
    std::string tok;
    Vector values;
    while (tokens >> tok) {
      if (values.empty() && tok.starts_with('#')) break;
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
      if (ec != std::errc() || ptr != tok.data() + tok.size() || !std::isfinite(v))
        throw ParseError(lineno, "line " + std::to_string(lineno) + ": bad number '" + tok + "'");
      values.push_back(v);
    }
    if (values.empty()) continue;
    if (label_last) {
      const double lab = values.back();
      if (lab < 0 || lab != std::floor(lab))
        throw ParseError(lineno, "line " + std::to_string(lineno) + ": label must be a non-negative integer");
      labels.push_back(static_cast<std::size_t>(lab));
      values.pop_back();
      if (values.empty())
        throw ParseError(lineno, "line " + std::to_string(lineno) + ": no feature columns");
    }
    if (!rows.empty() && values.size() != rows.front().size())
      throw ParseError(lineno, "line " + std::to_string(lineno) + ": expected " +
                                   std::to_string(rows.front().size()) + " columns, got " +
                                   std::to_string(values.size()));
    rows.push_back(std::move(values));
  }
  if (rows.empty()) throw ParseError(lineno, "no data rows in " + path.string());
  return {Matrix::from_rows(rows), std::nullopt, std::move(labels), path.filename().string()};
}

double baseline_mae(const Matrix& T) {
  const Vector m = mean_rows(T);
  double s = 0.0;
  for (std::size_t r = 0; r < T.rows(); ++r)
    for (std::size_t j = 0; j < T.cols(); ++j) s += std::abs(T(r, j) - m[j]);
  return s / static_cast<double>(T.size());
}

Matrix one_hot(const std::vector<std::size_t>& labels, std::size_t classes) {
  Matrix T(labels.size(), classes);
  for (std::size_t r = 0; r < labels.size(); ++r) {
    if (labels[r] >= classes) throw std::out_of_range("label exceeds class count");
    T(r, labels[r]) = 1.0;
  }
  return T;
}

}  // namespace hebbd
