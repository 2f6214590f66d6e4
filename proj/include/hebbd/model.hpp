#pragma once

#include <optional>

#include "hebbd/activation.hpp"
#include "hebbd/matrix.hpp"
#include "hebbd/rng.hpp"

namespace hebbd {

/// h = phi(W^T (x - mu) + b), W is n_inputs x n_outputs.
struct CenteredLayer {
  Matrix W;
  Vector b;
  Vector mu;
  Activation act;

  std::size_t n_inputs() const noexcept { return W.rows(); }
  std::size_t n_outputs() const noexcept { return W.cols(); }
};

/// Tied-weight auto-encoder:
///   h = phi_enc(W^T (x - mu) + b)
///   z = phi_dec(W (h - lambda) + c)
struct TiedAutoEncoder {
  Matrix W;
  Vector b;
  Vector c;
  Vector mu;
  Vector lambda;
  Activation enc_act;
  Activation dec_act;

  std::size_t n_visible() const noexcept { return W.rows(); }
  std::size_t n_hidden() const noexcept { return W.cols(); }
};

/// Unit-rate parameter direction. Learning rate and decay are applied later.
struct ParamUpdate {
  Matrix dW;
  Vector db;
  std::optional<Vector> dc;
};

struct LayerOutput {
  Vector a;
  Vector h;
};

struct AutoEncoderOutput {
  Vector a_enc;
  Vector h;
  Vector a_dec;
  Vector z;
};

// Uniform(+-sqrt(6)/sqrt(n + m)) over [lo, hi) drawn row-major.
Matrix init_weights(std::size_t n, std::size_t m, Rng& rng);

CenteredLayer init_layer(std::size_t n, std::size_t m, Activation act, Vector mu, Rng& rng);

// b = 0, c = 0, lambda filled with `lambda_init`.
TiedAutoEncoder init_autoencoder(std::size_t n, std::size_t m, Activation enc_act, Activation dec_act,
                                 Vector mu, Rng& rng, double lambda_init = 0.5);

LayerOutput forward(const CenteredLayer& layer, std::span<const double> x);

// Same map with mu = 0 and b' = b - W^T mu.
CenteredLayer reparameterize_uncentered(const CenteredLayer& layer);

AutoEncoderOutput ae_forward(const TiedAutoEncoder& ae, std::span<const double> x);

// Outputs for every row of X.
Matrix forward_batch(const CenteredLayer& layer, const Matrix& X);
Matrix reconstruct_batch(const TiedAutoEncoder& ae, const Matrix& X);
Matrix encode_batch(const TiedAutoEncoder& ae, const Matrix& X);

ParamUpdate zero_update(std::size_t n, std::size_t m, bool with_c = false);

}  // namespace hebbd
