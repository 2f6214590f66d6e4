#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "hebbd/matrix.hpp"
#include "hebbd/rng.hpp"

namespace hebbd {

struct Dataset {
  Matrix X;
  std::optional<Matrix> T;
  std::vector<std::size_t> labels;
  std::string name;
};

// d patterns of n i.i.d. Bernoulli(0.5) entries.
Dataset gen_rand(std::size_t d, std::size_t n, Rng& rng);

// d x n standard normal draws rescaled by the global min and max to [0, 1].
Dataset gen_randn(std::size_t d, std::size_t n, Rng& rng);

// IDX file with unsigned byte payload (type 0x08). One dimension yields
// labels, two or more yield images flattened row-major and divided by 255.
// Throws ParseError carrying the byte offset of the problem.
Dataset load_idx(const std::filesystem::path& path);
// Images and labels from two files, counts must agree.
Dataset load_idx(const std::filesystem::path& images, const std::filesystem::path& labels);

// Writes unsigned bytes with the given dimensions, e.g. {count, rows, cols}.
void write_idx(const std::filesystem::path& path, const std::vector<std::uint32_t>& dims,
               const std::vector<std::uint8_t>& payload);

// One pattern per line, comma or whitespace separated. With label_last the
// final column is an integer class label. Blank lines and lines starting
// with '#' are skipped. Throws ParseError carrying the 1-based line number.
Dataset load_dense(const std::filesystem::path& path, bool label_last = false);

// MAE of the predictor that always returns the column mean of T.
double baseline_mae(const Matrix& T);

// Row r has a 1 in column labels[r].
Matrix one_hot(const std::vector<std::size_t>& labels, std::size_t classes);

}  // namespace hebbd
