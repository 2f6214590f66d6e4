#pragma once

#include <optional>
#include <variant>

#include "hebbd/loss.hpp"
#include "hebbd/model.hpp"

namespace hebbd {

struct HebbianDescentRule {
  ErrorTerm term = ErrorTerm::difference();
};
struct GradientDescentRule {
  Loss loss = Loss::squared_error();
};
struct HebbRule {};
// Means are dataset statistics fixed before training.
struct CovarianceRule {
  Vector x_mean;
  Vector t_mean;
};

using RuleKind = std::variant<HebbianDescentRule, GradientDescentRule, HebbRule, CovarianceRule>;

// Every rule returns the direction that apply_update adds, at unit rate.

// dW = -(x - mu) E^T, db = -E
ParamUpdate hd_hetero(const CenteredLayer& layer, std::span<const double> x,
                      std::span<const double> t, const ErrorTerm& term);

// dW = -(x - mu) delta^T, db = -delta, delta = J(a)^T dL/dh.
// CrossEntropy is accepted for Sigmoid and Softmax only.
ParamUpdate gd_hetero(const CenteredLayer& layer, std::span<const double> x,
                      std::span<const double> t, const Loss& loss);

// Gradient descent on a loss whose derivative w.r.t. h is the error term,
// i.e. delta = J(a)^T E. This is the partner of hd_hetero in the
// convergence argument.
ParamUpdate gd_hetero(const CenteredLayer& layer, std::span<const double> x,
                      std::span<const double> t, const ErrorTerm& term);

// dW = (x - mu) t^T, db = 0
ParamUpdate hebb_hetero(const CenteredLayer& layer, std::span<const double> x,
                        std::span<const double> t);

// dW = (x - <x>) (t - <t>)^T, db = 0
ParamUpdate cov_hetero(std::span<const double> x, std::span<const double> t,
                       std::span<const double> x_mean, std::span<const double> t_mean);

ParamUpdate hetero_update(const CenteredLayer& layer, const RuleKind& rule,
                          std::span<const double> x, std::span<const double> t);

// Every hetero-associative update is rank one: dW = u v^T.
struct RankOneUpdate {
  Vector u;
  Vector v;
  Vector db;
};

// Factors of hetero_update, reusing a forward pass of `layer` on x.
RankOneUpdate hetero_factors(const CenteredLayer& layer, const RuleKind& rule,
                             std::span<const double> x, std::span<const double> t,
                             const LayerOutput& out);

// Hebb and covariance leave the bias at its initial value.
bool rule_updates_bias(const RuleKind& rule) noexcept;

// dW = -E(x, z) (h - lambda)^T, dc = -E(x, z),
// db = -(h - lambda_target) when a target is given, else 0.
ParamUpdate hd_auto(const TiedAutoEncoder& ae, std::span<const double> x, const ErrorTerm& term,
                    const std::optional<Vector>& lambda_target = std::nullopt);

// Full tied-weight gradient of loss(x, z):
//   delta_dec = J_dec^T dL/dz, delta_enc = J_enc^T (W^T delta_dec)
//   dW = -[(x - mu) delta_enc^T + delta_dec (h - lambda)^T]
//   dc = -delta_dec, db = -delta_enc
// decoder_only drops the encoder part of dW and sets db = 0.
ParamUpdate gd_auto(const TiedAutoEncoder& ae, std::span<const double> x, const Loss& loss,
                    bool decoder_only = false);

// W += eta (dW - omega W), b += eta db (when update_bias), c += eta dc.
// Throws NumericError naming the parameter when a result is not finite.
void apply_update(CenteredLayer& layer, const ParamUpdate& upd, double eta, double omega = 0.0,
                  bool update_bias = true);
void apply_update(TiedAutoEncoder& ae, const ParamUpdate& upd, double eta, double omega = 0.0);

// Same as apply_update with dW = u v^T, without forming dW.
void apply_update(CenteredLayer& layer, const RankOneUpdate& upd, double eta, double omega = 0.0,
                  bool update_bias = true);

// acc += upd
void accumulate(ParamUpdate& acc, const ParamUpdate& upd);
// upd *= s
void scale(ParamUpdate& upd, double s);

}  // namespace hebbd
