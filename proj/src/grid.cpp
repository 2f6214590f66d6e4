#include "hebbd/grid.hpp"

#include <atomic>
#include <charconv>
#include <cmath>
#include <limits>
#include <string>
#include <thread>

#include "hebbd/error.hpp"
#include "hebbd/metrics.hpp"

namespace hebbd {

Objective Objective::parse(std::string_view text) {
  if (text == "all") return mae_all();
  if (text == "classification") return classification_error();
  if (text.starts_with("last")) {
    std::size_t k = 0;
    const auto digits = text.substr(4);
    const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), k);
    if (ec == std::errc() && ptr == digits.data() + digits.size() && k > 0) return mae_last_k(k);
  }
  throw std::invalid_argument("unknown objective '" + std::string(text) + "'");
}

double mae_objective(const Objective& obj, std::span<const double> pattern_mae) {
  if (obj.kind == Objective::Kind::MaeLastK) {
    const std::size_t k = std::min(obj.k, pattern_mae.size());
    return mean(pattern_mae.last(k));
  }
  return mean(pattern_mae);
}

GridResult grid_search(const HyperGrid& grid, std::size_t trials, const TrialEvaluator& evaluate,
                       std::size_t jobs) {
  if (grid.etas.empty() || grid.omegas.empty()) throw std::invalid_argument("empty hyperparameter grid");
  if (trials == 0) throw std::invalid_argument("grid search needs at least one trial");
  const std::size_t points = grid.etas.size() * grid.omegas.size();
  const std::size_t tasks = points * trials;
  std::vector<double> scores(tasks);
  std::atomic<std::size_t> next{0};

  auto worker = [&] {
    for (std::size_t i = next++; i < tasks; i = next++) {
      const std::size_t p = i / trials;
      const double eta = grid.etas[p / grid.omegas.size()];
      const double omega = grid.omegas[p % grid.omegas.size()];
      try {
        scores[i] = evaluate(eta, omega, i % trials);
      } catch (const NumericError&) {
        scores[i] = std::numeric_limits<double>::infinity();
      }
      if (std::isnan(scores[i])) scores[i] = std::numeric_limits<double>::infinity();
    }
  };
  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
  jobs = std::min(jobs, tasks);
  std::vector<std::jthread> pool;
  for (std::size_t j = 1; j < jobs; ++j) pool.emplace_back(worker);
  worker();
  pool.clear();

  GridResult result;
  result.best_score = std::numeric_limits<double>::infinity();
  bool found = false;
  for (std::size_t p = 0; p < points; ++p) {
    double sum = 0.0;
    for (std::size_t t = 0; t < trials; ++t) sum += scores[p * trials + t];
    const GridRow row{grid.etas[p / grid.omegas.size()], grid.omegas[p % grid.omegas.size()],
                      sum / static_cast<double>(trials)};
    result.table.push_back(row);
    const bool better = row.score < result.best_score ||
                        (row.score == result.best_score &&
                         (row.eta < result.best_eta ||
                          (row.eta == result.best_eta && row.omega < result.best_omega)));
    if (!found || better) {
      result.best_eta = row.eta;
      result.best_omega = row.omega;
      result.best_score = row.score;
      found = true;
    }
  }
  return result;
}

Vector reference_learning_rates() {
  return {100,    80,     60,     40,     20,     10,     8,      6,      4,
          2,      1,      0.8,    0.6,    0.4,    0.2,    0.1,    0.08,   0.06,
          0.04,   0.02,   0.01,   0.008,  0.006,  0.004,  0.002,  0.001,  0.0008,
          0.0006, 0.0004, 0.0002, 0.0001, 0.00008, 0.00006, 0.00004, 0.00002};
}

Vector reference_weight_decays() {
  return {2.0,   1.0,   0.8,   0.6,   0.4,   0.2,   0.1,    0.08,   0.06, 0.04,
          0.02,  0.01,  0.008, 0.006, 0.004, 0.002, 0.001, 0.0005, 0.0001, 0.0};
}

HeteroTrace run_hetero(const HeteroTask& task, double eta, double omega, std::size_t trial,
                       const HeteroEpochHook& on_epoch) {
  const std::uint64_t trial_seed = derive_seed(task.seed, trial);
  Rng rng(trial_seed);
  CenteredLayer layer = init_layer(task.X.cols(), task.T.cols(), task.act, task.mu, rng);
  TrainConfig cfg = task.base;
  cfg.eta = eta;
  cfg.omega = omega;
  cfg.seed = derive_seed(trial_seed, 1);
  return train_hetero(std::move(layer), task.rule, task.X, task.T, cfg, on_epoch);
}

double score_hetero(const HeteroTask& task, const HeteroTrace& trace) {
  if (task.objective.kind == Objective::Kind::ClassificationError) {
    if (!task.test_X) throw std::invalid_argument("classification objective needs test data");
    return classification_error(forward_batch(trace.model, *task.test_X), task.test_labels);
  }
  return mae_objective(task.objective, trace.pattern_mae);
}

GridResult grid_search_hetero(const HeteroTask& task, const HyperGrid& grid, std::size_t trials,
                              std::size_t jobs) {
  HeteroTask t = task;
  t.objective = grid.objective;
  return grid_search(
      grid, trials,
      [&t](double eta, double omega, std::size_t trial) {
        return score_hetero(t, run_hetero(t, eta, omega, trial));
      },
      jobs);
}

}  // namespace hebbd
