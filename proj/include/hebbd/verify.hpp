#pragma once

#include <string>
#include <vector>

#include "hebbd/rules.hpp"

namespace hebbd {

// Central finite differences, one parameter at a time.
inline constexpr double kFdStep = 1e-6;

struct GradCheck {
  bool skipped = false;  // activation not differentiable
  double max_rel_err = 0.0;
  std::string note;
};

// Relative error |an - fd| / (|fd| + 1e-12).
double relative_error(double analytic, double fd);

// -gd_hetero against FD of gd_loss w.r.t. W and b.
GradCheck check_gd_gradient(const CenteredLayer& layer, std::span<const double> x,
                            std::span<const double> t, const Loss& loss, double eps = kFdStep);

// -hd_hetero against FD of hd_loss with a-hat held at the unperturbed a.
GradCheck check_hd_loss_gradient(const CenteredLayer& layer, std::span<const double> x,
                                 std::span<const double> t, const ErrorTerm& term,
                                 double eps = kFdStep);

// hd_hetero (sigmoid, Difference) against FD of the Bernoulli log-likelihood
// sum_j t_j ln g_j + (1 - t_j) ln(1 - g_j), which the update ascends.
GradCheck check_glm_bernoulli(const CenteredLayer& layer, std::span<const double> x,
                              std::span<const double> t, double eps = kFdStep);

struct InnerProduct {
  double inner = 0.0;     // <hd, gd> over dW and db
  double identity = 0.0;  // sum of dHD^2 phi' per parameter
  bool hd_zero = false;
  bool gd_zero = false;
};

// Compares hd_hetero with the gradient step on the loss whose derivative is
// the error term. Decoupled activations only.
InnerProduct check_inner_product(const CenteredLayer& layer, std::span<const double> x,
                                 std::span<const double> t, const ErrorTerm& term);

struct CurlCheck {
  double d12 = 0.0;  // closed form of d(dW_0)/dw_1, update sign of the derivation
  double d21 = 0.0;
  double fd12 = 0.0;
  double fd21 = 0.0;
};

// 2 inputs, 1 linear hidden unit, linear output, zero biases and offsets.
CurlCheck check_auto_curl(std::span<const double> w, std::span<const double> x, double eps = kFdStep);

// Max entry of |epoch sum of centered Hebb (mu = <x>) - epoch sum of covariance|.
double check_hebb_cov(const Matrix& X, const Matrix& T);

struct Figure1Report {
  bool pass = false;
  Matrix hd_out;    // rounded outputs, first example
  Matrix hebb_out;
  Matrix cov_out;
  Matrix hd_bits;   // rounded outputs, 3-bit example
  Matrix hebb_bits;
  std::vector<bool> hd_bits_correct;
  std::vector<bool> hebb_bits_correct;
  std::string detail;
};

// Sigmoid, centered on the input mean, bias pinned at 0, 300 sweeps at
// eta = 10 from W = 0, then W rescaled to Frobenius norm 100 and outputs
// rounded to two decimals.
Figure1Report check_figure1();

// The data of both correlated-pattern examples.
struct Figure1Data {
  Matrix X, T;
};
Figure1Data figure1_patterns();
Figure1Data three_bit_patterns();

/// Random instance for the oracles. Entries are drawn so that no
/// pre-activation is within 1e-3 of a kink and the error and input
/// deviations are bounded away from zero.
struct Instance {
  CenteredLayer layer;
  Vector x;
  Vector t;
};
Instance random_instance(Rng& rng, Activation act, std::size_t n, std::size_t m,
                         const ErrorTerm& term = ErrorTerm::difference(), bool binary_targets = false);

struct CheckResult {
  std::string name;
  bool ok = false;
  std::string detail;
};

// Every check on `instances` seeded instances. Failures name the seed.
std::vector<CheckResult> run_battery(std::uint64_t seed = 1, std::size_t instances = 100);

}  // namespace hebbd
