#pragma once

#include <span>
#include <vector>

#include "hebbd/model.hpp"

namespace hebbd {

// Mean of |P - T| over every entry.
double mae(const Matrix& P, const Matrix& T);

// Fraction of rows whose argmax differs from the label. Ties go to the
// smallest index.
double classification_error(const Matrix& H, std::span<const std::size_t> labels);

std::size_t argmax(std::span<const double> v);

// MAE of each row after one forward pass.
Vector per_pattern_mae(const CenteredLayer& layer, const Matrix& X, const Matrix& T);

// Spearman rank correlation, tied values get their average rank.
double spearman(std::span<const double> x, std::span<const double> y);

double mean(std::span<const double> v);
// Population standard deviation.
double stddev(std::span<const double> v);

}  // namespace hebbd
