#include "hebbd/activation.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "hebbd/error.hpp"

namespace hebbd {

namespace {

double sigmoid(double a) {
  if (a >= 0.0) return 1.0 / (1.0 + std::exp(-a));
  const double e = std::exp(a);
  return e / (1.0 + e);
}

double softplus(double a) {
  // log(1 + e^a) without overflow for large a
  return a > 0.0 ? a + std::log1p(std::exp(-a)) : std::log1p(std::exp(a));
}

constexpr std::array<std::string_view, 12> kActivationNames = {
    "identity",     "sigmoid",  "step",     "softmax",  "rectifier", "leaky_rectifier",
    "explin",       "scaled_explin", "scaled_tanh", "softsign", "softplus",  "invsqrt"};

}  // namespace

Activation Activation::of(ActivationKind kind) {
  switch (kind) {
    case ActivationKind::LeakyRectifier: return leaky_rectifier();
    case ActivationKind::ExpLin: return explin();
    case ActivationKind::ScaledExpLin: return scaled_explin();
    case ActivationKind::ScaledTanh: return scaled_tanh();
    case ActivationKind::InvSqrt: return invsqrt();
    default: return {kind};
  }
}

double apply_scalar(const Activation& act, double a) {
  switch (act.kind) {
    case ActivationKind::Identity: return a;
    case ActivationKind::Sigmoid: return sigmoid(a);
    case ActivationKind::Step: return a >= 0.0 ? 1.0 : 0.0;
    case ActivationKind::Rectifier: return a > 0.0 ? a : 0.0;
    case ActivationKind::LeakyRectifier: return a >= 0.0 ? a : act.p1 * a;
    case ActivationKind::ExpLin: return a >= 0.0 ? a : act.p1 * std::expm1(a);
    case ActivationKind::ScaledExpLin: return act.p1 * (a >= 0.0 ? a : act.p2 * std::expm1(a));
    case ActivationKind::ScaledTanh: return act.p1 * std::tanh(a);
    case ActivationKind::SoftSign: return a / (1.0 + std::abs(a));
    case ActivationKind::SoftPlus: return softplus(a);
    case ActivationKind::InvSqrt: return a / std::sqrt(1.0 + act.p1 * a * a);
    case ActivationKind::Softmax: break;
  }
  throw UnsupportedError("softmax has no scalar form");
}

double derivative_scalar(const Activation& act, double a) {
  switch (act.kind) {
    case ActivationKind::Identity: return 1.0;
    case ActivationKind::Sigmoid: {
      const double s = sigmoid(a);
      return s * (1.0 - s);
    }
    case ActivationKind::Step: return 0.0;
    case ActivationKind::Rectifier: return a > 0.0 ? 1.0 : 0.0;
    case ActivationKind::LeakyRectifier: return a >= 0.0 ? 1.0 : act.p1;
    case ActivationKind::ExpLin: return a >= 0.0 ? 1.0 : act.p1 * std::exp(a);
    case ActivationKind::ScaledExpLin: return act.p1 * (a >= 0.0 ? 1.0 : act.p2 * std::exp(a));
    case ActivationKind::ScaledTanh: {
      const double th = std::tanh(a);
      return act.p1 * (1.0 - th * th);
    }
    case ActivationKind::SoftSign: {
      const double d = 1.0 + std::abs(a);
      return 1.0 / (d * d);
    }
    case ActivationKind::SoftPlus: return sigmoid(a);
    case ActivationKind::InvSqrt: return std::pow(1.0 + act.p1 * a * a, -1.5);
    case ActivationKind::Softmax: break;
  }
  throw UnsupportedError("softmax has no scalar derivative");
}

Vector apply(const Activation& act, std::span<const double> a) {
  Vector h(a.size());
  if (act.kind == ActivationKind::Softmax) {
    if (a.empty()) return h;
    const double mx = *std::max_element(a.begin(), a.end());
    double sum = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) sum += (h[j] = std::exp(a[j] - mx));
    for (double& v : h) v /= sum;
    return h;
  }
  for (std::size_t j = 0; j < a.size(); ++j) h[j] = apply_scalar(act, a[j]);
  return h;
}

Vector derivative(const Activation& act, std::span<const double> a) {
  if (act.kind == ActivationKind::Softmax) {
    Vector d = apply(act, a);
    for (double& v : d) v = v * (1.0 - v);
    return d;
  }
  Vector d(a.size());
  for (std::size_t j = 0; j < a.size(); ++j) d[j] = derivative_scalar(act, a[j]);
  return d;
}

Matrix softmax_jacobian(std::span<const double> h) {
  Matrix J(h.size(), h.size());
  for (std::size_t j = 0; j < h.size(); ++j)
    for (std::size_t k = 0; k < h.size(); ++k) J(j, k) = h[j] * ((j == k ? 1.0 : 0.0) - h[k]);
  return J;
}

Vector backprop(const Activation& act, std::span<const double> a, std::span<const double> h,
                std::span<const double> g) {
  require_same_size(g.size(), a.size(), "backprop: len(g) vs len(a)");
  if (act.kind == ActivationKind::Softmax) {
    require_same_size(h.size(), a.size(), "backprop: len(h) vs len(a)");
    // J is symmetric, J g = h * (g - <g, h>)
    const double gh = dot(g, h);
    Vector out(g.size());
    for (std::size_t j = 0; j < g.size(); ++j) out[j] = h[j] * (g[j] - gh);
    return out;
  }
  Vector out(g.size());
  for (std::size_t j = 0; j < g.size(); ++j) out[j] = g[j] * derivative_scalar(act, a[j]);
  return out;
}

bool strictly_positive_derivative(const Activation& act) noexcept {
  switch (act.kind) {
    case ActivationKind::Identity:
    case ActivationKind::Sigmoid:
    case ActivationKind::ScaledTanh:
    case ActivationKind::SoftSign:
    case ActivationKind::SoftPlus:
    case ActivationKind::InvSqrt:
      return true;
    case ActivationKind::LeakyRectifier: return act.p1 > 0.0;
    case ActivationKind::ExpLin: return act.p1 > 0.0;
    case ActivationKind::ScaledExpLin: return act.p1 > 0.0 && act.p2 > 0.0;
    default: return false;
  }
}

bool has_kink(const Activation& act) noexcept {
  switch (act.kind) {
    case ActivationKind::Step:
    case ActivationKind::Rectifier:
    case ActivationKind::LeakyRectifier:
    case ActivationKind::ExpLin:
    case ActivationKind::ScaledExpLin:
    case ActivationKind::SoftSign:
      return true;
    default: return false;
  }
}

std::string_view name(ActivationKind kind) noexcept {
  const auto i = static_cast<std::size_t>(kind);
  return i < kActivationNames.size() ? kActivationNames[i] : "unknown";
}

Activation parse_activation(std::string_view text) {
  for (std::size_t i = 0; i < kActivationNames.size(); ++i) {
    if (kActivationNames[i] == text) return Activation::of(static_cast<ActivationKind>(i));
  }
  throw std::invalid_argument("unknown activation '" + std::string(text) + "'");
}

Vector error(const ErrorTerm& term, std::span<const double> t, std::span<const double> h) {
  require_same_size(t.size(), h.size(), "error: len(t) vs len(h)");
  Vector e(t.size());
  for (std::size_t j = 0; j < t.size(); ++j) {
    switch (term.kind) {
      case ErrorTerm::Kind::Difference: e[j] = h[j] - t[j]; break;
      case ErrorTerm::Kind::SaturatingTanh:
        e[j] = term.alpha * std::tanh(term.beta * (h[j] - t[j]));
        break;
      case ErrorTerm::Kind::LeakyHinge: e[j] = t[j] * h[j] < 1.0 ? -t[j] : term.alpha; break;
    }
  }
  return e;
}

std::string_view name(ErrorTerm::Kind kind) noexcept {
  switch (kind) {
    case ErrorTerm::Kind::Difference: return "difference";
    case ErrorTerm::Kind::SaturatingTanh: return "sat_tanh";
    case ErrorTerm::Kind::LeakyHinge: return "leaky_hinge";
  }
  return "unknown";
}

ErrorTerm parse_error_term(std::string_view text) {
  if (text == "difference") return ErrorTerm::difference();
  if (text == "sat_tanh") return ErrorTerm::saturating_tanh();
  if (text == "leaky_hinge") return ErrorTerm::leaky_hinge();
  throw std::invalid_argument("unknown error term '" + std::string(text) + "'");
}

}  // namespace hebbd
