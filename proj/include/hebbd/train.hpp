#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <variant>
#include <vector>

#include "hebbd/rules.hpp"

namespace hebbd {

struct TrainConfig {
  double eta = 0.1;
  double omega = 0.0;
  std::size_t batch_size = 1;
  std::size_t epochs = 1;
  double nu_input = 0.0;   // 0 keeps the input offsets frozen
  double nu_hidden = 0.0;  // auto-encoder only
  std::uint64_t seed = 0;  // drives shuffling
  bool shuffle = false;
  bool update_bias = true;  // false pins b at its initial value
};

struct TraceRecord {
  std::size_t update = 0;
  std::size_t epoch = 0;
  std::size_t pattern_index = 0;  // first pattern of the batch
  std::size_t batch_size = 0;
  double batch_mae = 0.0;  // output MAE on the batch before the update
};

struct HeteroTrace {
  std::vector<TraceRecord> records;
  Vector pattern_mae;  // recall per pattern after all training
  CenteredLayer model;
};

using AutoRule = std::variant<HebbianDescentRule, GradientDescentRule>;

struct AutoTrace {
  std::vector<TraceRecord> records;
  Vector pattern_mae;  // reconstruction MAE per pattern after training
  TiedAutoEncoder model;
};

// (1 - nu) mu + nu batch_mean
Vector update_offsets(std::span<const double> mu, std::span<const double> batch_mean, double nu);

using HeteroEpochHook = std::function<void(std::size_t epoch, const CenteredLayer&)>;
using AutoEpochHook = std::function<void(std::size_t epoch, const TiedAutoEncoder&)>;

// Per batch: averaged rule update, apply_update, then the input offset EMA
// when nu_input > 0. Hebb and covariance never touch the bias.
HeteroTrace train_hetero(CenteredLayer layer, const RuleKind& rule, const Matrix& X, const Matrix& T,
                         const TrainConfig& cfg, const HeteroEpochHook& on_epoch = {});

// Per batch: averaged update, apply_update, then the hidden offset EMA on the
// pre-update batch mean of h (nu_hidden) and the input offset EMA (nu_input).
AutoTrace train_auto(TiedAutoEncoder ae, const AutoRule& rule, const Matrix& X, const TrainConfig& cfg,
                     const std::optional<Vector>& lambda_target = std::nullopt,
                     const AutoEpochHook& on_epoch = {});

}  // namespace hebbd
