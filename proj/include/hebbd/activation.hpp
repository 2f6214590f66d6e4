#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>

#include "hebbd/matrix.hpp"

namespace hebbd {

// Numeric ids are part of the model file format; append only.
enum class ActivationKind : std::uint8_t {
  Identity = 0,
  Sigmoid,
  Step,
  Softmax,
  Rectifier,
  LeakyRectifier,  // p1 = slope for a < 0
  ExpLin,          // p1 = alpha
  ScaledExpLin,    // p1 = lambda, p2 = alpha
  ScaledTanh,      // p1 = alpha
  SoftSign,
  SoftPlus,
  InvSqrt,  // p1 = alpha, a / sqrt(1 + alpha a^2)
};

struct Activation {
  ActivationKind kind = ActivationKind::Identity;
  double p1 = 0.0;
  double p2 = 0.0;

  static Activation identity() { return {ActivationKind::Identity}; }
  static Activation sigmoid() { return {ActivationKind::Sigmoid}; }
  static Activation step() { return {ActivationKind::Step}; }
  static Activation softmax() { return {ActivationKind::Softmax}; }
  static Activation rectifier() { return {ActivationKind::Rectifier}; }
  static Activation leaky_rectifier(double eps = 0.01) { return {ActivationKind::LeakyRectifier, eps}; }
  static Activation explin(double alpha = 1.0) { return {ActivationKind::ExpLin, alpha}; }
  // Defaults are the self-normalising constants.
  static Activation scaled_explin(double lambda = 1.0507009873554805,
                                  double alpha = 1.6732632423543772) {
    return {ActivationKind::ScaledExpLin, lambda, alpha};
  }
  static Activation scaled_tanh(double alpha = 1.0) { return {ActivationKind::ScaledTanh, alpha}; }
  static Activation softsign() { return {ActivationKind::SoftSign}; }
  static Activation softplus() { return {ActivationKind::SoftPlus}; }
  static Activation invsqrt(double alpha = 1.0) { return {ActivationKind::InvSqrt, alpha}; }

  // Default parameters for a kind.
  static Activation of(ActivationKind kind);

  bool operator==(const Activation&) const = default;
};

// Elementwise activity. Softmax is the only coupled kind.
Vector apply(const Activation& act, std::span<const double> a);

// Elementwise derivative. For Softmax this is the Jacobian diagonal
// h_j (1 - h_j); use softmax_jacobian or backprop for the full map.
// Step returns zeros, Rectifier returns 0 at a = 0.
Vector derivative(const Activation& act, std::span<const double> a);

// J[j][k] = h_j (delta_jk - h_k)
Matrix softmax_jacobian(std::span<const double> h);

// Vector-Jacobian product J(a)^T g, exact for every kind including Softmax.
Vector backprop(const Activation& act, std::span<const double> a, std::span<const double> h,
                std::span<const double> g);

// Scalar form for the decoupled kinds. Throws UnsupportedError for Softmax.
double apply_scalar(const Activation& act, double a);
double derivative_scalar(const Activation& act, double a);

// phi' > 0 everywhere.
bool strictly_positive_derivative(const Activation& act) noexcept;
// phi or phi' has a kink at a = 0; finite differences must stay away from it.
bool has_kink(const Activation& act) noexcept;

std::string_view name(ActivationKind kind) noexcept;
// Accepts the CLI names (identity, sigmoid, ..., invsqrt).
Activation parse_activation(std::string_view text);

struct ErrorTerm {
  enum class Kind : std::uint8_t { Difference, SaturatingTanh, LeakyHinge };
  Kind kind = Kind::Difference;
  double alpha = 1.0;
  double beta = 1.0;

  static ErrorTerm difference() { return {Kind::Difference}; }
  static ErrorTerm saturating_tanh(double alpha = 1.0, double beta = 1.0) {
    return {Kind::SaturatingTanh, alpha, beta};
  }
  static ErrorTerm leaky_hinge(double alpha = 0.01) { return {Kind::LeakyHinge, alpha}; }

  bool operator==(const ErrorTerm&) const = default;
};

// Difference: h - t. SaturatingTanh: alpha tanh(beta (h - t)).
// LeakyHinge: -t where t h < 1, alpha otherwise.
Vector error(const ErrorTerm& term, std::span<const double> t, std::span<const double> h);

std::string_view name(ErrorTerm::Kind kind) noexcept;
ErrorTerm parse_error_term(std::string_view text);

}  // namespace hebbd
