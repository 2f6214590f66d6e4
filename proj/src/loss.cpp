#include "hebbd/loss.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hebbd/error.hpp"

namespace hebbd {

namespace {

using AK = ActivationKind;
using EK = ErrorTerm::Kind;

double clamp_prob(double h) {
  if (h == 0.0 || h == 1.0) throw DomainError("cross-entropy undefined at h = " + std::to_string(h));
  if (!(h > 0.0 && h < 1.0)) throw DomainError("cross-entropy needs 0 < h < 1");
  return std::clamp(h, kCeClamp, 1.0 - kCeClamp);
}

double log_cosh(double x) {
  const double ax = std::abs(x);
  // ln cosh x = |x| + ln(1 + e^{-2|x|}) - ln 2
  return ax + std::log1p(std::exp(-2.0 * ax)) - std::log(2.0);
}

[[noreturn]] void unsupported(const Activation& act, const ErrorTerm& term) {
  throw UnsupportedError("no Hebbian-descent loss for " + std::string(name(act.kind)) + " with " +
                         std::string(name(term.kind)));
}

}  // namespace

bool hd_loss_supported(const Activation& act, const ErrorTerm& term) noexcept {
  switch (term.kind) {
    case EK::Difference:
      return act.kind != AK::Step && act.kind != AK::Rectifier;
    case EK::SaturatingTanh: return act.kind == AK::Identity;
    case EK::LeakyHinge: return act.kind == AK::Identity || act.kind == AK::Sigmoid;
  }
  return false;
}

double hd_loss(const Activation& act, const ErrorTerm& term, std::span<const double> t,
               std::span<const double> h, std::span<const double> a) {
  require_same_size(t.size(), h.size(), "hd_loss: len(t) vs len(h)");
  if (!hd_loss_supported(act, term)) unsupported(act, term);
  const bool needs_a = act.kind != AK::Identity && act.kind != AK::Sigmoid &&
                       act.kind != AK::Softmax && act.kind != AK::ScaledTanh;
  if (needs_a) require_same_size(a.size(), h.size(), "hd_loss: len(a) vs len(h)");

  double total = 0.0;
  if (term.kind == EK::SaturatingTanh) {
    for (std::size_t j = 0; j < t.size(); ++j)
      total += term.alpha / term.beta * log_cosh(term.beta * (h[j] - t[j]));
    return total;
  }
  if (term.kind == EK::LeakyHinge) {
    for (std::size_t j = 0; j < t.size(); ++j) {
      const bool active = t[j] * h[j] < 1.0;
      if (act.kind == AK::Identity) {
        total += active ? 1.0 - t[j] * h[j] : term.alpha * h[j];
      } else {
        const double p = clamp_prob(h[j]);
        const double logit = std::log(p) - std::log1p(-p);
        total += (active ? -t[j] : term.alpha) * logit;
      }
    }
    return total;
  }

  for (std::size_t j = 0; j < t.size(); ++j) {
    const double d = h[j] - t[j];
    switch (act.kind) {
      case AK::Identity: total += 0.5 * d * d; break;
      case AK::Sigmoid: {
        const double p = clamp_prob(h[j]);
        total += -t[j] * std::log(p) - (1.0 - t[j]) * std::log1p(-p);
        break;
      }
      case AK::Softmax: {
        if (t[j] != 0.0) total += -t[j] * std::log(clamp_prob(h[j]));
        break;
      }
      case AK::ScaledTanh: {
        const double al = act.p1;
        if (!(std::abs(h[j]) < al)) throw DomainError("scaled tanh loss needs |h| < alpha");
        total += -0.5 * (al + t[j]) * std::log(al + h[j]) - 0.5 * (al - t[j]) * std::log(al - h[j]);
        break;
      }
      case AK::LeakyRectifier:
        total += (a[j] < 0.0 ? 0.5 / act.p1 : 0.5) * d * d;
        break;
      case AK::ExpLin:
      case AK::ScaledExpLin: {
        const double lam = act.kind == AK::ExpLin ? 1.0 : act.p1;
        const double al = act.kind == AK::ExpLin ? act.p1 : act.p2;
        if (a[j] < 0.0) {
          total += h[j] - (t[j] + lam * al) * std::log(h[j] + lam * al);
        } else {
          total += 0.5 / lam * d * d;
        }
        break;
      }
      case AK::InvSqrt: {
        const double s = act.p1 * a[j] * a[j] + 1.0;
        total += 0.5 * std::pow(s, 1.5) * d * d;
        break;
      }
      case AK::SoftSign: {
        const double s = 1.0 + std::abs(a[j]);
        total += 0.5 * s * s * d * d;
        break;
      }
      case AK::SoftPlus: total += 0.5 * (1.0 + std::exp(-a[j])) * d * d; break;
      default: unsupported(act, term);
    }
  }
  return total;
}

double gd_loss(const Loss& loss, std::span<const double> t, std::span<const double> h,
               std::span<const double> a) {
  require_same_size(t.size(), h.size(), "gd_loss: len(t) vs len(h)");
  double total = 0.0;
  switch (loss.kind) {
    case Loss::Kind::SquaredError:
      for (std::size_t j = 0; j < t.size(); ++j) total += 0.5 * (h[j] - t[j]) * (h[j] - t[j]);
      return total;
    case Loss::Kind::CrossEntropy:
      for (std::size_t j = 0; j < t.size(); ++j) {
        const double p = clamp_prob(h[j]);
        total += -t[j] * std::log(p) - (1.0 - t[j]) * std::log1p(-p);
      }
      return total;
    case Loss::Kind::HebbianDescent: return hd_loss(loss.act, loss.term, t, h, a);
  }
  return total;
}

Vector loss_gradient(const Loss& loss, std::span<const double> t, std::span<const double> h,
                     std::span<const double> a) {
  require_same_size(t.size(), h.size(), "loss_gradient: len(t) vs len(h)");
  Vector g(t.size());
  switch (loss.kind) {
    case Loss::Kind::SquaredError:
      for (std::size_t j = 0; j < t.size(); ++j) g[j] = h[j] - t[j];
      return g;
    case Loss::Kind::CrossEntropy:
      for (std::size_t j = 0; j < t.size(); ++j) {
        const double p = clamp_prob(h[j]);
        g[j] = (p - t[j]) / (p * (1.0 - p));
      }
      return g;
    case Loss::Kind::HebbianDescent: {
      if (!hd_loss_supported(loss.act, loss.term)) unsupported(loss.act, loss.term);
      const Vector e = error(loss.term, t, h);
      if (loss.act.kind == AK::Softmax) {
        for (std::size_t j = 0; j < t.size(); ++j) g[j] = -t[j] / clamp_prob(h[j]);
        return g;
      }
      require_same_size(a.size(), h.size(), "loss_gradient: len(a) vs len(h)");
      for (std::size_t j = 0; j < t.size(); ++j) g[j] = e[j] / derivative_scalar(loss.act, a[j]);
      return g;
    }
  }
  return g;
}

}  // namespace hebbd
