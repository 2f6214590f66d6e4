#include "hebbd/rules.hpp"

#include <cmath>

#include "hebbd/error.hpp"

namespace hebbd {

namespace {

Vector neg(Vector v) {
  for (double& x : v) x = -x;
  return v;
}

// -(x - mu) delta^T and -delta
ParamUpdate descent_update(std::span<const double> x_centered, const Vector& delta) {
  ParamUpdate u{outer(x_centered, delta), neg(delta), std::nullopt};
  for (double& w : u.dW.data()) w = -w;
  return u;
}

void check_pair(const CenteredLayer& layer, std::span<const double> x, std::span<const double> t) {
  require_same_size(x.size(), layer.n_inputs(), "rule: len(x) vs inputs");
  require_same_size(t.size(), layer.n_outputs(), "rule: len(t) vs outputs");
}

// delta = dL/da for the hetero-associative and decoder sides.
Vector loss_delta(const Activation& act, const Loss& loss, std::span<const double> t,
                  std::span<const double> a, std::span<const double> h) {
  switch (loss.kind) {
    case Loss::Kind::SquaredError: return backprop(act, a, h, subtract(h, t));
    case Loss::Kind::CrossEntropy:
      if (act.kind == ActivationKind::Sigmoid) return subtract(h, t);  // canonical link
      if (act.kind == ActivationKind::Softmax) return backprop(act, a, h, loss_gradient(loss, t, h));
      throw UnsupportedError("cross-entropy needs a sigmoid or softmax output, got " +
                             std::string(name(act.kind)));
    case Loss::Kind::HebbianDescent:
      if (!hd_loss_supported(loss.act, loss.term))
        throw UnsupportedError("no Hebbian-descent loss for this pair");
      if (loss.act.kind != ActivationKind::Softmax && loss.act == act) return error(loss.term, t, h);
      return backprop(act, a, h, loss_gradient(loss, t, h, a));
  }
  return {};
}

void check_finite(std::span<const double> v, const char* param) {
  if (!all_finite(v)) throw NumericError(param, std::string("non-finite value in ") + param + " after update");
}

}  // namespace

ParamUpdate hd_hetero(const CenteredLayer& layer, std::span<const double> x,
                      std::span<const double> t, const ErrorTerm& term) {
  check_pair(layer, x, t);
  const Vector h = forward(layer, x).h;
  return descent_update(subtract(x, layer.mu), error(term, t, h));
}

ParamUpdate gd_hetero(const CenteredLayer& layer, std::span<const double> x,
                      std::span<const double> t, const Loss& loss) {
  check_pair(layer, x, t);
  const auto [a, h] = forward(layer, x);
  return descent_update(subtract(x, layer.mu), loss_delta(layer.act, loss, t, a, h));
}

ParamUpdate gd_hetero(const CenteredLayer& layer, std::span<const double> x,
                      std::span<const double> t, const ErrorTerm& term) {
  check_pair(layer, x, t);
  const auto [a, h] = forward(layer, x);
  return descent_update(subtract(x, layer.mu), backprop(layer.act, a, h, error(term, t, h)));
}

ParamUpdate hebb_hetero(const CenteredLayer& layer, std::span<const double> x,
                        std::span<const double> t) {
  check_pair(layer, x, t);
  return {outer(subtract(x, layer.mu), t), Vector(t.size(), 0.0), std::nullopt};
}

ParamUpdate cov_hetero(std::span<const double> x, std::span<const double> t,
                       std::span<const double> x_mean, std::span<const double> t_mean) {
  return {outer(subtract(x, x_mean), subtract(t, t_mean)), Vector(t.size(), 0.0), std::nullopt};
}

ParamUpdate hetero_update(const CenteredLayer& layer, const RuleKind& rule,
                          std::span<const double> x, std::span<const double> t) {
  check_pair(layer, x, t);
  const RankOneUpdate f = hetero_factors(layer, rule, x, t, forward(layer, x));
  return {outer(f.u, f.v), f.db, std::nullopt};
}

RankOneUpdate hetero_factors(const CenteredLayer& layer, const RuleKind& rule,
                             std::span<const double> x, std::span<const double> t,
                             const LayerOutput& out) {
  check_pair(layer, x, t);
  return std::visit(
      [&](const auto& r) -> RankOneUpdate {
        using R = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<R, HebbianDescentRule>) {
          Vector db = neg(error(r.term, t, out.h));
          return {subtract(x, layer.mu), db, db};
        } else if constexpr (std::is_same_v<R, GradientDescentRule>) {
          Vector db = neg(loss_delta(layer.act, r.loss, t, out.a, out.h));
          return {subtract(x, layer.mu), db, db};
        } else if constexpr (std::is_same_v<R, HebbRule>) {
          return {subtract(x, layer.mu), Vector(t.begin(), t.end()), Vector(t.size(), 0.0)};
        } else {
          return {subtract(x, r.x_mean), subtract(t, r.t_mean), Vector(t.size(), 0.0)};
        }
      },
      rule);
}

bool rule_updates_bias(const RuleKind& rule) noexcept {
  return std::holds_alternative<HebbianDescentRule>(rule) ||
         std::holds_alternative<GradientDescentRule>(rule);
}

ParamUpdate hd_auto(const TiedAutoEncoder& ae, std::span<const double> x, const ErrorTerm& term,
                    const std::optional<Vector>& lambda_target) {
  const auto out = ae_forward(ae, x);
  const Vector e = error(term, x, out.z);
  ParamUpdate u{outer(e, subtract(out.h, ae.lambda)), Vector(ae.n_hidden(), 0.0), neg(e)};
  for (double& w : u.dW.data()) w = -w;
  if (lambda_target) u.db = neg(subtract(out.h, *lambda_target));
  return u;
}

ParamUpdate gd_auto(const TiedAutoEncoder& ae, std::span<const double> x, const Loss& loss,
                    bool decoder_only) {
  const auto out = ae_forward(ae, x);
  const Vector delta_dec = loss_delta(ae.dec_act, loss, x, out.a_dec, out.z);
  ParamUpdate u{outer(delta_dec, subtract(out.h, ae.lambda)), Vector(ae.n_hidden(), 0.0),
                neg(delta_dec)};
  if (!decoder_only) {
    const Vector delta_enc = backprop(ae.enc_act, out.a_enc, out.h, matvec_t(ae.W, delta_dec));
    const Matrix enc = outer(subtract(x, ae.mu), delta_enc);
    for (std::size_t k = 0; k < enc.size(); ++k) u.dW.data()[k] += enc.data()[k];
    u.db = neg(delta_enc);
  }
  for (double& w : u.dW.data()) w = -w;
  return u;
}

void apply_update(CenteredLayer& layer, const ParamUpdate& upd, double eta, double omega,
                  bool update_bias) {
  require_same_size(upd.dW.rows(), layer.W.rows(), "apply_update: dW rows");
  require_same_size(upd.dW.cols(), layer.W.cols(), "apply_update: dW cols");
  auto W = layer.W.data();
  auto dW = upd.dW.data();
  if (omega == 0.0) {
    for (std::size_t k = 0; k < W.size(); ++k) W[k] += eta * dW[k];
  } else {
    for (std::size_t k = 0; k < W.size(); ++k) W[k] += eta * (dW[k] - omega * W[k]);
  }
  check_finite(W, "W");
  if (update_bias) {
    require_same_size(upd.db.size(), layer.b.size(), "apply_update: db");
    for (std::size_t j = 0; j < layer.b.size(); ++j) layer.b[j] += eta * upd.db[j];
    check_finite(layer.b, "b");
  }
}

void apply_update(CenteredLayer& layer, const RankOneUpdate& upd, double eta, double omega,
                  bool update_bias) {
  require_same_size(upd.u.size(), layer.W.rows(), "apply_update: len(u)");
  require_same_size(upd.v.size(), layer.W.cols(), "apply_update: len(v)");
  const double keep = 1.0 - eta * omega;
  for (std::size_t i = 0; i < layer.W.rows(); ++i) {
    auto row = layer.W.row(i);
    const double ui = eta * upd.u[i];
    if (omega == 0.0) {
      for (std::size_t j = 0; j < row.size(); ++j) row[j] += ui * upd.v[j];
    } else {
      for (std::size_t j = 0; j < row.size(); ++j) row[j] = keep * row[j] + ui * upd.v[j];
    }
  }
  check_finite(layer.W.data(), "W");
  if (update_bias) {
    require_same_size(upd.db.size(), layer.b.size(), "apply_update: db");
    for (std::size_t j = 0; j < layer.b.size(); ++j) layer.b[j] += eta * upd.db[j];
    check_finite(layer.b, "b");
  }
}

void apply_update(TiedAutoEncoder& ae, const ParamUpdate& upd, double eta, double omega) {
  require_same_size(upd.dW.rows(), ae.W.rows(), "apply_update: dW rows");
  require_same_size(upd.dW.cols(), ae.W.cols(), "apply_update: dW cols");
  require_same_size(upd.db.size(), ae.b.size(), "apply_update: db");
  auto W = ae.W.data();
  auto dW = upd.dW.data();
  for (std::size_t k = 0; k < W.size(); ++k) W[k] += eta * (dW[k] - omega * W[k]);
  check_finite(W, "W");
  for (std::size_t j = 0; j < ae.b.size(); ++j) ae.b[j] += eta * upd.db[j];
  check_finite(ae.b, "b");
  if (upd.dc) {
    require_same_size(upd.dc->size(), ae.c.size(), "apply_update: dc");
    for (std::size_t i = 0; i < ae.c.size(); ++i) ae.c[i] += eta * (*upd.dc)[i];
    check_finite(ae.c, "c");
  }
}

void accumulate(ParamUpdate& acc, const ParamUpdate& upd) {
  require_same_size(acc.dW.size(), upd.dW.size(), "accumulate: dW");
  require_same_size(acc.db.size(), upd.db.size(), "accumulate: db");
  for (std::size_t k = 0; k < acc.dW.size(); ++k) acc.dW.data()[k] += upd.dW.data()[k];
  for (std::size_t j = 0; j < acc.db.size(); ++j) acc.db[j] += upd.db[j];
  if (upd.dc) {
    if (!acc.dc) acc.dc = Vector(upd.dc->size(), 0.0);
    for (std::size_t i = 0; i < acc.dc->size(); ++i) (*acc.dc)[i] += (*upd.dc)[i];
  }
}

void scale(ParamUpdate& upd, double s) {
  for (double& w : upd.dW.data()) w *= s;
  for (double& v : upd.db) v *= s;
  if (upd.dc)
    for (double& v : *upd.dc) v *= s;
}

}  // namespace hebbd
