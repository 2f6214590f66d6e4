#include <doctest.h>

#include <cmath>

#include "hebbd/error.hpp"
#include "hebbd/loss.hpp"

using namespace hebbd;

TEST_CASE("hd_loss examples") {
  const auto sig = Activation::sigmoid();
  CHECK(hd_loss(sig, ErrorTerm::difference(), Vector{1}, Vector{1 - 1e-15}, Vector{}) ==
        doctest::Approx(0.0));
  CHECK(hd_loss(sig, ErrorTerm::difference(), Vector{1}, Vector{0.5}, Vector{}) ==
        doctest::Approx(std::log(2.0)).epsilon(1e-14));
  CHECK(hd_loss(Activation::identity(), ErrorTerm::saturating_tanh(1, 1), Vector{0}, Vector{0}, Vector{}) == 0.0);
  CHECK_THROWS_AS(hd_loss(sig, ErrorTerm::difference(), Vector{1}, Vector{1.0}, Vector{}), DomainError);
  CHECK_THROWS_AS(hd_loss(sig, ErrorTerm::difference(), Vector{1}, Vector{0.0}, Vector{}), DomainError);
}

TEST_CASE("hd_loss rejects pairs without a closed form") {
  CHECK_THROWS_AS(hd_loss(Activation::sigmoid(), ErrorTerm::saturating_tanh(), Vector{0}, Vector{0.5}, Vector{0}),
                  UnsupportedError);
  CHECK_THROWS_AS(hd_loss(Activation::step(), ErrorTerm::difference(), Vector{0}, Vector{1}, Vector{0}),
                  UnsupportedError);
  CHECK_THROWS_AS(hd_loss(Activation::rectifier(), ErrorTerm::difference(), Vector{0}, Vector{1}, Vector{1}),
                  UnsupportedError);
  CHECK_FALSE(hd_loss_supported(Activation::softplus(), ErrorTerm::leaky_hinge()));
}

TEST_CASE("hd_loss closed forms at hand-picked points") {
  const ErrorTerm diff = ErrorTerm::difference();
  CHECK(hd_loss(Activation::identity(), diff, Vector{1, 0}, Vector{0, 2}, Vector{}) == doctest::Approx(2.5));
  // Leaky rectifier branch selected by a.
  const auto lr = Activation::leaky_rectifier(0.1);
  CHECK(hd_loss(lr, diff, Vector{0}, Vector{-0.1}, Vector{-1}) == doctest::Approx(0.05));
  CHECK(hd_loss(lr, diff, Vector{0}, Vector{1}, Vector{1}) == doctest::Approx(0.5));
  // SoftSign with a-hat = 1: 1/2 * 4 * (h - t)^2
  CHECK(hd_loss(Activation::softsign(), diff, Vector{0}, Vector{0.5}, Vector{1}) == doctest::Approx(0.5));
  // InvSqrt with a-hat = 1, alpha = 1: 1/2 * 2^1.5 * 1
  CHECK(hd_loss(Activation::invsqrt(), diff, Vector{0}, Vector{1}, Vector{1}) ==
        doctest::Approx(0.5 * std::pow(2.0, 1.5)));
  // SoftPlus with a-hat = 0: 1/2 * 2 * (h - t)^2
  CHECK(hd_loss(Activation::softplus(), diff, Vector{1}, Vector{0}, Vector{0}) == doctest::Approx(1.0));
  // Identity leaky hinge
  CHECK(hd_loss(Activation::identity(), ErrorTerm::leaky_hinge(0.1), Vector{1, 1}, Vector{0.5, 2}, Vector{}) ==
        doctest::Approx(0.5 + 0.2));
  // Smooth Huber grows linearly far from the target.
  const double far = hd_loss(Activation::identity(), ErrorTerm::saturating_tanh(2, 1), Vector{0}, Vector{50}, Vector{});
  CHECK(far == doctest::Approx(2 * (50 - std::log(2.0))));
  // Categorical cross-entropy for softmax.
  CHECK(hd_loss(Activation::softmax(), diff, Vector{0, 1}, Vector{0.75, 0.25}, Vector{}) ==
        doctest::Approx(std::log(4.0)));
}

TEST_CASE("gd_loss examples") {
  CHECK(gd_loss(Loss::squared_error(), Vector{1, 0}, Vector{1, 0}) == 0.0);
  CHECK(gd_loss(Loss::squared_error(), Vector{1}, Vector{0.5}) == 0.125);
  CHECK(gd_loss(Loss::cross_entropy(), Vector{1}, Vector{0.5}) == doctest::Approx(std::log(2.0)).epsilon(1e-14));
  CHECK_THROWS_AS(gd_loss(Loss::cross_entropy(), Vector{1}, Vector{0.0}), DomainError);
  // Near-saturated values are clamped rather than producing infinities.
  CHECK(std::isfinite(gd_loss(Loss::cross_entropy(), Vector{0}, Vector{1 - 1e-14})));
  CHECK(gd_loss(Loss::cross_entropy(), Vector{1}, Vector{1e-300}) == doctest::Approx(-std::log(kCeClamp)));
}

TEST_CASE("squared error is non-negative and zero only at the target") {
  for (double h : {-1.0, 0.0, 0.3, 2.0}) {
    const double l = gd_loss(Loss::squared_error(), Vector{0.3}, Vector{h});
    CHECK(l >= 0.0);
    CHECK((l == 0.0) == (h == 0.3));
  }
}
