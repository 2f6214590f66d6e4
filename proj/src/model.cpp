#include "hebbd/model.hpp"

#include <cmath>

#include "hebbd/error.hpp"

namespace hebbd {

Matrix init_weights(std::size_t n, std::size_t m, Rng& rng) {
  const double bound = std::sqrt(6.0) / std::sqrt(static_cast<double>(n + m));
  Matrix W(n, m);
  for (double& w : W.data()) w = rng.uniform(-bound, bound);
  return W;
}

CenteredLayer init_layer(std::size_t n, std::size_t m, Activation act, Vector mu, Rng& rng) {
  if (n == 0 || m == 0) throw ShapeError("init_layer: dimensions must be positive");
  require_same_size(mu.size(), n, "init_layer: len(mu) vs n");
  return {init_weights(n, m, rng), Vector(m, 0.0), std::move(mu), act};
}

TiedAutoEncoder init_autoencoder(std::size_t n, std::size_t m, Activation enc_act, Activation dec_act,
                                 Vector mu, Rng& rng, double lambda_init) {
  if (n == 0 || m == 0) throw ShapeError("init_autoencoder: dimensions must be positive");
  require_same_size(mu.size(), n, "init_autoencoder: len(mu) vs n");
  return {init_weights(n, m, rng), Vector(m, 0.0), Vector(n, 0.0), std::move(mu),
          Vector(m, lambda_init), enc_act, dec_act};
}

LayerOutput forward(const CenteredLayer& layer, std::span<const double> x) {
  require_same_size(x.size(), layer.n_inputs(), "forward: len(x) vs inputs");
  require_same_size(layer.mu.size(), layer.n_inputs(), "forward: len(mu) vs inputs");
  require_same_size(layer.b.size(), layer.n_outputs(), "forward: len(b) vs outputs");
  Vector a = matvec_t(layer.W, subtract(x, layer.mu));
  for (std::size_t j = 0; j < a.size(); ++j) a[j] += layer.b[j];
  Vector h = apply(layer.act, a);
  return {std::move(a), std::move(h)};
}

CenteredLayer reparameterize_uncentered(const CenteredLayer& layer) {
  CenteredLayer out = layer;
  const Vector shift = matvec_t(layer.W, layer.mu);
  for (std::size_t j = 0; j < out.b.size(); ++j) out.b[j] -= shift[j];
  std::fill(out.mu.begin(), out.mu.end(), 0.0);
  return out;
}

AutoEncoderOutput ae_forward(const TiedAutoEncoder& ae, std::span<const double> x) {
  require_same_size(x.size(), ae.n_visible(), "ae_forward: len(x) vs visible");
  require_same_size(ae.mu.size(), ae.n_visible(), "ae_forward: len(mu) vs visible");
  require_same_size(ae.c.size(), ae.n_visible(), "ae_forward: len(c) vs visible");
  require_same_size(ae.b.size(), ae.n_hidden(), "ae_forward: len(b) vs hidden");
  require_same_size(ae.lambda.size(), ae.n_hidden(), "ae_forward: len(lambda) vs hidden");
  AutoEncoderOutput out;
  out.a_enc = matvec_t(ae.W, subtract(x, ae.mu));
  for (std::size_t j = 0; j < out.a_enc.size(); ++j) out.a_enc[j] += ae.b[j];
  out.h = apply(ae.enc_act, out.a_enc);
  out.a_dec = matvec(ae.W, subtract(out.h, ae.lambda));
  for (std::size_t i = 0; i < out.a_dec.size(); ++i) out.a_dec[i] += ae.c[i];
  out.z = apply(ae.dec_act, out.a_dec);
  return out;
}

Matrix forward_batch(const CenteredLayer& layer, const Matrix& X) {
  Matrix H(X.rows(), layer.n_outputs());
  for (std::size_t r = 0; r < X.rows(); ++r) {
    const Vector h = forward(layer, X.row(r)).h;
    std::copy(h.begin(), h.end(), H.row(r).begin());
  }
  return H;
}

Matrix reconstruct_batch(const TiedAutoEncoder& ae, const Matrix& X) {
  Matrix Z(X.rows(), ae.n_visible());
  for (std::size_t r = 0; r < X.rows(); ++r) {
    const Vector z = ae_forward(ae, X.row(r)).z;
    std::copy(z.begin(), z.end(), Z.row(r).begin());
  }
  return Z;
}

Matrix encode_batch(const TiedAutoEncoder& ae, const Matrix& X) {
  Matrix H(X.rows(), ae.n_hidden());
  for (std::size_t r = 0; r < X.rows(); ++r) {
    const Vector h = ae_forward(ae, X.row(r)).h;
    std::copy(h.begin(), h.end(), H.row(r).begin());
  }
  return H;
}

ParamUpdate zero_update(std::size_t n, std::size_t m, bool with_c) {
  ParamUpdate u{Matrix(n, m), Vector(m, 0.0), std::nullopt};
  if (with_c) u.dc = Vector(n, 0.0);
  return u;
}

}  // namespace hebbd
