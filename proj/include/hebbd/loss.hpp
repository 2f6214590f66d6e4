#pragma once

#include <span>

#include "hebbd/activation.hpp"

namespace hebbd {

struct Loss {
  enum class Kind : std::uint8_t { SquaredError, CrossEntropy, HebbianDescent };
  Kind kind = Kind::SquaredError;
  // Only meaningful for HebbianDescent.
  Activation act{};
  ErrorTerm term{};

  static Loss squared_error() { return {Kind::SquaredError}; }
  static Loss cross_entropy() { return {Kind::CrossEntropy}; }
  static Loss hebbian_descent(Activation act, ErrorTerm term) {
    return {Kind::HebbianDescent, act, term};
  }
};

// Cross-entropy arguments are clamped to [kCeClamp, 1 - kCeClamp] before the
// log. Values of exactly 0 or 1 are rejected with DomainError instead.
inline constexpr double kCeClamp = 1e-12;

// True when (act, term) has a closed-form loss whose gradient through phi is
// the error term.
bool hd_loss_supported(const Activation& act, const ErrorTerm& term) noexcept;

// Summed Hebbian-descent loss. `a` selects the branch for piecewise kinds and
// plays the role of the constant a-hat for InvSqrt, SoftSign and SoftPlus.
// Softmax with Difference is the categorical cross-entropy -sum t ln h, whose
// gradient is h - t only when the targets sum to one.
double hd_loss(const Activation& act, const ErrorTerm& term, std::span<const double> t,
               std::span<const double> h, std::span<const double> a);

// SquaredError: 1/2 |h - t|^2. CrossEntropy: binary cross-entropy summed over
// units. HebbianDescent forwards to hd_loss and needs `a`.
double gd_loss(const Loss& loss, std::span<const double> t, std::span<const double> h,
               std::span<const double> a = {});

// dL/dh. For HebbianDescent losses this is E / phi'(a), undefined where
// phi' vanishes.
Vector loss_gradient(const Loss& loss, std::span<const double> t, std::span<const double> h,
                     std::span<const double> a = {});

}  // namespace hebbd
