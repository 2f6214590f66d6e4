#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string_view>
#include <vector>

#include "hebbd/train.hpp"

namespace hebbd {

struct Objective {
  enum class Kind : std::uint8_t { MaeAll, MaeLastK, ClassificationError };
  Kind kind = Kind::MaeAll;
  std::size_t k = 0;

  static Objective mae_all() { return {Kind::MaeAll}; }
  static Objective mae_last_k(std::size_t k) { return {Kind::MaeLastK, k}; }
  static Objective classification_error() { return {Kind::ClassificationError}; }
  // "all", "lastK" (e.g. last20) or "classification"
  static Objective parse(std::string_view text);
};

// Mean of pattern_mae, or of its last k entries.
double mae_objective(const Objective& obj, std::span<const double> pattern_mae);

struct HyperGrid {
  Vector etas;
  Vector omegas{0.0};
  Objective objective;
};

struct GridRow {
  double eta = 0.0;
  double omega = 0.0;
  double score = 0.0;
};

struct GridResult {
  double best_eta = 0.0;
  double best_omega = 0.0;
  double best_score = 0.0;
  std::vector<GridRow> table;  // etas outer, omegas inner, grid order
};

// Score of one training run; lower is better.
using TrialEvaluator = std::function<double(double eta, double omega, std::size_t trial)>;

// Averages `trials` evaluations per grid point on `jobs` threads (0 = all
// cores). A NumericError scores +inf. The argmin prefers the smaller eta,
// then the smaller omega, on ties. Results do not depend on `jobs`.
GridResult grid_search(const HyperGrid& grid, std::size_t trials, const TrialEvaluator& evaluate,
                       std::size_t jobs = 0);

// The 35 learning rates and 20 weight decays of the reference protocol.
Vector reference_learning_rates();
Vector reference_weight_decays();

/// A hetero-associative experiment: data, model shape and rule. Trial i
/// initialises weights from derive_seed(seed, i) so every rule and learning
/// rate sees the same initial weights for the same trial.
struct HeteroTask {
  Matrix X;
  Matrix T;
  Activation act = Activation::sigmoid();
  RuleKind rule = HebbianDescentRule{};
  Vector mu;  // initial input offsets
  TrainConfig base;
  std::uint64_t seed = 0;
  Objective objective = Objective::mae_all();
  // Held-out data for the classification objective.
  std::optional<Matrix> test_X;
  std::vector<std::size_t> test_labels;
};

HeteroTrace run_hetero(const HeteroTask& task, double eta, double omega, std::size_t trial,
                       const HeteroEpochHook& on_epoch = {});
double score_hetero(const HeteroTask& task, const HeteroTrace& trace);
GridResult grid_search_hetero(const HeteroTask& task, const HyperGrid& grid, std::size_t trials,
                              std::size_t jobs = 0);

}  // namespace hebbd
