#include "hebbd/train.hpp"

#include <cmath>
#include <numeric>

#include "hebbd/error.hpp"
#include "hebbd/metrics.hpp"

namespace hebbd {

namespace {

void validate(const TrainConfig& cfg) {
  if (!(cfg.eta >= 0.0)) throw std::invalid_argument("learning rate must be non-negative");
  if (!(cfg.omega >= 0.0)) throw std::invalid_argument("weight decay must be non-negative");
  if (cfg.batch_size == 0) throw std::invalid_argument("batch size must be positive");
  if (!(cfg.nu_input >= 0.0 && cfg.nu_input <= 1.0) || !(cfg.nu_hidden >= 0.0 && cfg.nu_hidden <= 1.0))
    throw std::invalid_argument("sliding factors must lie in [0, 1]");
}

void shuffle(std::vector<std::size_t>& order, Rng& rng) {
  for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);
}

void add_into(Vector& acc, std::span<const double> v) {
  for (std::size_t k = 0; k < acc.size(); ++k) acc[k] += v[k];
}

double abs_err_sum(std::span<const double> p, std::span<const double> t) {
  double s = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) s += std::abs(p[k] - t[k]);
  return s;
}

}  // namespace

Vector update_offsets(std::span<const double> mu, std::span<const double> batch_mean, double nu) {
  require_same_size(mu.size(), batch_mean.size(), "update_offsets");
  Vector out(mu.size());
  for (std::size_t k = 0; k < mu.size(); ++k) out[k] = (1.0 - nu) * mu[k] + nu * batch_mean[k];
  return out;
}

HeteroTrace train_hetero(CenteredLayer layer, const RuleKind& rule, const Matrix& X, const Matrix& T,
                         const TrainConfig& cfg, const HeteroEpochHook& on_epoch) {
  validate(cfg);
  require_same_size(X.rows(), T.rows(), "train_hetero: pattern count of X vs T");
  require_same_size(X.cols(), layer.n_inputs(), "train_hetero: input dimension");
  require_same_size(T.cols(), layer.n_outputs(), "train_hetero: output dimension");

  HeteroTrace trace;
  const bool bias = cfg.update_bias && rule_updates_bias(rule);
  const std::size_t d = X.rows();
  std::vector<std::size_t> order(d);
  std::iota(order.begin(), order.end(), 0);
  Rng rng(cfg.seed);
  std::size_t update = 0;
  ParamUpdate acc = zero_update(layer.n_inputs(), layer.n_outputs());

  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    if (cfg.shuffle) shuffle(order, rng);
    for (std::size_t start = 0; start < d; start += cfg.batch_size) {
      const std::size_t end = std::min(d, start + cfg.batch_size);
      const std::size_t count = end - start;
      Vector x_mean(layer.n_inputs(), 0.0);
      double err = 0.0;
      std::optional<RankOneUpdate> single;
      for (std::size_t k = start; k < end; ++k) {
        const auto x = X.row(order[k]);
        const auto t = T.row(order[k]);
        const LayerOutput out = forward(layer, x);
        err += abs_err_sum(out.h, t);
        RankOneUpdate f = hetero_factors(layer, rule, x, t, out);
        if (count == 1) {
          single = std::move(f);
        } else {
          for (std::size_t i = 0; i < f.u.size(); ++i) {
            auto row = acc.dW.row(i);
            for (std::size_t j = 0; j < row.size(); ++j) row[j] += f.u[i] * f.v[j];
          }
          add_into(acc.db, f.db);
        }
        add_into(x_mean, x);
      }
      const double inv = 1.0 / static_cast<double>(count);
      if (single) {
        apply_update(layer, *single, cfg.eta, cfg.omega, bias);
      } else {
        scale(acc, inv);
        apply_update(layer, acc, cfg.eta, cfg.omega, bias);
        std::fill(acc.dW.data().begin(), acc.dW.data().end(), 0.0);
        std::fill(acc.db.begin(), acc.db.end(), 0.0);
      }
      if (cfg.nu_input > 0.0) {
        for (double& v : x_mean) v *= inv;
        layer.mu = update_offsets(layer.mu, x_mean, cfg.nu_input);
      }
      trace.records.push_back({update++, epoch, order[start], count,
                               err / static_cast<double>(count * layer.n_outputs())});
    }
    if (on_epoch) on_epoch(epoch, layer);
  }
  trace.pattern_mae = per_pattern_mae(layer, X, T);
  trace.model = std::move(layer);
  return trace;
}

AutoTrace train_auto(TiedAutoEncoder ae, const AutoRule& rule, const Matrix& X, const TrainConfig& cfg,
                     const std::optional<Vector>& lambda_target, const AutoEpochHook& on_epoch) {
  validate(cfg);
  require_same_size(X.cols(), ae.n_visible(), "train_auto: input dimension");
  if (lambda_target) require_same_size(lambda_target->size(), ae.n_hidden(), "train_auto: lambda target");

  AutoTrace trace;
  const std::size_t d = X.rows();
  std::vector<std::size_t> order(d);
  std::iota(order.begin(), order.end(), 0);
  Rng rng(cfg.seed);
  std::size_t update = 0;

  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    if (cfg.shuffle) shuffle(order, rng);
    for (std::size_t start = 0; start < d; start += cfg.batch_size) {
      const std::size_t end = std::min(d, start + cfg.batch_size);
      const std::size_t count = end - start;
      ParamUpdate acc = zero_update(ae.n_visible(), ae.n_hidden(), true);
      Vector x_mean(ae.n_visible(), 0.0);
      Vector h_mean(ae.n_hidden(), 0.0);
      double err = 0.0;
      for (std::size_t k = start; k < end; ++k) {
        const auto x = X.row(order[k]);
        const auto out = ae_forward(ae, x);
        err += abs_err_sum(out.z, x);
        add_into(h_mean, out.h);
        add_into(x_mean, x);
        if (const auto* hd = std::get_if<HebbianDescentRule>(&rule)) {
          accumulate(acc, hd_auto(ae, x, hd->term, lambda_target));
        } else {
          accumulate(acc, gd_auto(ae, x, std::get<GradientDescentRule>(rule).loss));
        }
      }
      const double inv = 1.0 / static_cast<double>(count);
      if (count > 1) scale(acc, inv);
      apply_update(ae, acc, cfg.eta, cfg.omega);
      if (cfg.nu_hidden > 0.0) {
        for (double& v : h_mean) v *= inv;
        ae.lambda = update_offsets(ae.lambda, h_mean, cfg.nu_hidden);
      }
      if (cfg.nu_input > 0.0) {
        for (double& v : x_mean) v *= inv;
        ae.mu = update_offsets(ae.mu, x_mean, cfg.nu_input);
      }
      trace.records.push_back({update++, epoch, order[start], count,
                               err / static_cast<double>(count * ae.n_visible())});
    }
    if (on_epoch) on_epoch(epoch, ae);
  }
  const Matrix Z = reconstruct_batch(ae, X);
  trace.pattern_mae.resize(d);
  for (std::size_t r = 0; r < d; ++r)
    trace.pattern_mae[r] = abs_err_sum(Z.row(r), X.row(r)) / static_cast<double>(X.cols());
  trace.model = std::move(ae);
  return trace;
}

}  // namespace hebbd
