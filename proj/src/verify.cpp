#include "hebbd/verify.hpp"

#include <cmath>
#include <functional>
#include <sstream>

#include "hebbd/error.hpp"
#include "hebbd/train.hpp"

namespace hebbd {

namespace {

using ParamLoss = std::function<double(const CenteredLayer&)>;

// Gradient of `f` w.r.t. every W entry then every b entry.
Vector fd_gradient(const CenteredLayer& layer, const ParamLoss& f, double eps) {
  CenteredLayer probe = layer;
  Vector g;
  g.reserve(layer.W.size() + layer.b.size());
  auto central = [&](double& p) {
    const double orig = p;
    p = orig + eps;
    const double up = f(probe);
    p = orig - eps;
    const double down = f(probe);
    p = orig;
    return (up - down) / (2.0 * eps);
  };
  for (double& w : probe.W.data()) g.push_back(central(w));
  for (double& b : probe.b) g.push_back(central(b));
  return g;
}

Vector flatten(const ParamUpdate& u, double sign = 1.0) {
  Vector v;
  v.reserve(u.dW.size() + u.db.size());
  for (double w : u.dW.data()) v.push_back(sign * w);
  for (double b : u.db) v.push_back(sign * b);
  return v;
}

double max_rel(std::span<const double> analytic, std::span<const double> fd) {
  double worst = 0.0;
  for (std::size_t k = 0; k < fd.size(); ++k) worst = std::max(worst, relative_error(analytic[k], fd[k]));
  return worst;
}

bool is_zero(const ParamUpdate& u) {
  for (double w : u.dW.data())
    if (w != 0.0) return false;
  for (double b : u.db)
    if (b != 0.0) return false;
  return true;
}

double uniform_away(Rng& rng, double lo, double hi, double avoid, double gap) {
  for (;;) {
    const double v = rng.uniform(lo, hi);
    if (std::abs(v - avoid) >= gap) return v;
  }
}

Matrix round2(const Matrix& H) {
  Matrix R = H;
  for (double& v : R.data()) v = std::round(v * 100.0) / 100.0;
  return R;
}

Matrix figure_run(const RuleKind& rule, const Figure1Data& data) {
  CenteredLayer layer{Matrix(data.X.cols(), data.T.cols()), Vector(data.T.cols(), 0.0),
                      mean_rows(data.X), Activation::sigmoid()};
  TrainConfig cfg;
  cfg.eta = 10.0;
  cfg.epochs = 300;
  cfg.batch_size = 1;
  cfg.update_bias = false;
  CenteredLayer trained = train_hetero(std::move(layer), rule, data.X, data.T, cfg).model;
  const double norm = frobenius_norm(trained.W);
  if (norm > 0.0)
    for (double& w : trained.W.data()) w *= 100.0 / norm;
  return round2(forward_batch(trained, data.X));
}

std::string matrix_text(const Matrix& M) {
  std::ostringstream os;
  for (std::size_t r = 0; r < M.rows(); ++r) {
    os << (r ? " (" : "(");
    for (std::size_t c = 0; c < M.cols(); ++c) os << (c ? "," : "") << M(r, c);
    os << ")";
  }
  return os.str();
}

}  // namespace

double relative_error(double analytic, double fd) {
  return std::abs(analytic - fd) / (std::abs(fd) + 1e-12);
}

GradCheck check_gd_gradient(const CenteredLayer& layer, std::span<const double> x,
                            std::span<const double> t, const Loss& loss, double eps) {
  if (layer.act.kind == ActivationKind::Step || layer.act.kind == ActivationKind::Rectifier)
    return {true, 0.0, "non-differentiable"};
  const Vector a_hat = forward(layer, x).a;
  const Vector fd = fd_gradient(
      layer, [&](const CenteredLayer& l) { return gd_loss(loss, t, forward(l, x).h, a_hat); }, eps);
  return {false, max_rel(flatten(gd_hetero(layer, x, t, loss), -1.0), fd), ""};
}

GradCheck check_hd_loss_gradient(const CenteredLayer& layer, std::span<const double> x,
                                 std::span<const double> t, const ErrorTerm& term, double eps) {
  if (!hd_loss_supported(layer.act, term))
    throw UnsupportedError("no Hebbian-descent loss for " + std::string(name(layer.act.kind)) +
                           " with " + std::string(name(term.kind)));
  const Vector a_hat = forward(layer, x).a;
  const Vector fd = fd_gradient(
      layer, [&](const CenteredLayer& l) { return hd_loss(l.act, term, t, forward(l, x).h, a_hat); },
      eps);
  return {false, max_rel(flatten(hd_hetero(layer, x, t, term), -1.0), fd), ""};
}

GradCheck check_glm_bernoulli(const CenteredLayer& layer, std::span<const double> x,
                              std::span<const double> t, double eps) {
  if (layer.act.kind != ActivationKind::Sigmoid)
    throw UnsupportedError("Bernoulli likelihood check needs a sigmoid layer");
  auto log_lik = [&](const CenteredLayer& l) {
    const Vector g = forward(l, x).h;
    double s = 0.0;
    for (std::size_t j = 0; j < g.size(); ++j) s += t[j] * std::log(g[j]) + (1.0 - t[j]) * std::log1p(-g[j]);
    return s;
  };
  const Vector fd = fd_gradient(layer, log_lik, eps);
  return {false, max_rel(flatten(hd_hetero(layer, x, t, ErrorTerm::difference())), fd), ""};
}

InnerProduct check_inner_product(const CenteredLayer& layer, std::span<const double> x,
                                 std::span<const double> t, const ErrorTerm& term) {
  if (layer.act.kind == ActivationKind::Softmax)
    throw UnsupportedError("inner product identity needs a decoupled activation");
  const ParamUpdate hd = hd_hetero(layer, x, t, term);
  const ParamUpdate gd = gd_hetero(layer, x, t, term);
  const Vector dphi = derivative(layer.act, forward(layer, x).a);
  InnerProduct r;
  r.inner = dot(flatten(hd), flatten(gd));
  for (std::size_t i = 0; i < hd.dW.rows(); ++i)
    for (std::size_t j = 0; j < hd.dW.cols(); ++j) r.identity += hd.dW(i, j) * hd.dW(i, j) * dphi[j];
  for (std::size_t j = 0; j < hd.db.size(); ++j) r.identity += hd.db[j] * hd.db[j] * dphi[j];
  r.hd_zero = is_zero(hd);
  r.gd_zero = is_zero(gd);
  return r;
}

CurlCheck check_auto_curl(std::span<const double> w, std::span<const double> x, double eps) {
  require_same_size(w.size(), 2, "check_auto_curl: w");
  require_same_size(x.size(), 2, "check_auto_curl: x");
  // The derivation states the descent direction, hd_auto returns its negative.
  auto update = [&](double w0, double w1, std::size_t k) {
    TiedAutoEncoder ae{Matrix{{w0}, {w1}}, {0.0},   {0.0, 0.0},          {0.0, 0.0},
                       {0.0},              Activation::identity(), Activation::identity()};
    return -hd_auto(ae, x, ErrorTerm::difference()).dW(k, 0);
  };
  CurlCheck c;
  c.d12 = 2 * w[0] * w[0] * x[0] * x[1] + 2 * w[0] * w[1] * x[1] * x[1] - x[0] * x[1];
  c.d21 = 2 * w[1] * w[1] * x[0] * x[1] + 2 * w[0] * w[1] * x[0] * x[0] - x[0] * x[1];
  c.fd12 = (update(w[0], w[1] + eps, 0) - update(w[0], w[1] - eps, 0)) / (2 * eps);
  c.fd21 = (update(w[0] + eps, w[1], 1) - update(w[0] - eps, w[1], 1)) / (2 * eps);
  return c;
}

double check_hebb_cov(const Matrix& X, const Matrix& T) {
  require_same_size(X.rows(), T.rows(), "check_hebb_cov: rows");
  const Vector xm = mean_rows(X);
  const Vector tm = mean_rows(T);
  const CenteredLayer layer{Matrix(X.cols(), T.cols()), Vector(T.cols(), 0.0), xm,
                            Activation::identity()};
  ParamUpdate hebb = zero_update(X.cols(), T.cols());
  ParamUpdate cov = zero_update(X.cols(), T.cols());
  for (std::size_t r = 0; r < X.rows(); ++r) {
    accumulate(hebb, hebb_hetero(layer, X.row(r), T.row(r)));
    accumulate(cov, cov_hetero(X.row(r), T.row(r), xm, tm));
  }
  return max_abs_diff(hebb.dW.data(), cov.dW.data());
}

Figure1Data figure1_patterns() {
  return {Matrix{{0, 1}, {1, 1}, {1, 0}, {1, 0}}, Matrix{{0, 1}, {1, 0}, {1, 1}, {1, 1}}};
}

Figure1Data three_bit_patterns() {
  return {Matrix{{0, 1, 0}, {0, 1, 1}, {1, 0, 1}, {1, 1, 0}},
          Matrix{{0, 1, 1}, {1, 0, 0}, {1, 1, 0}, {1, 0, 1}}};
}

Figure1Report check_figure1() {
  Figure1Report rep;
  const Figure1Data fig = figure1_patterns();
  const Figure1Data bits = three_bit_patterns();
  rep.hd_out = figure_run(HebbianDescentRule{}, fig);
  rep.hebb_out = figure_run(HebbRule{}, fig);
  rep.cov_out = figure_run(CovarianceRule{mean_rows(fig.X), mean_rows(fig.T)}, fig);
  rep.hd_bits = figure_run(HebbianDescentRule{}, bits);
  rep.hebb_bits = figure_run(HebbRule{}, bits);
  for (std::size_t r = 0; r < bits.T.rows(); ++r) {
    rep.hd_bits_correct.push_back(Matrix(row_range(rep.hd_bits, r, r + 1)) == row_range(bits.T, r, r + 1));
    rep.hebb_bits_correct.push_back(row_range(rep.hebb_bits, r, r + 1) == row_range(bits.T, r, r + 1));
  }
  const Matrix hebb_expected{{0, 0}, {0, 0}, {1, 1}, {1, 1}};
  const bool hd_ok = rep.hd_out == fig.T;
  const bool hebb_ok = rep.hebb_out == hebb_expected && rep.cov_out == hebb_expected;
  const bool bits_hd_ok = rep.hd_bits == bits.T;
  const std::vector<bool> only_third{false, false, true, false};
  const bool bits_hebb_ok = rep.hebb_bits_correct == only_third;
  rep.pass = hd_ok && hebb_ok && bits_hd_ok && bits_hebb_ok;
  std::ostringstream os;
  os << "hd " << matrix_text(rep.hd_out) << "; hebb " << matrix_text(rep.hebb_out) << "; cov "
     << matrix_text(rep.cov_out) << "; 3-bit hd " << matrix_text(rep.hd_bits) << "; 3-bit hebb "
     << matrix_text(rep.hebb_bits);
  rep.detail = os.str();
  return rep;
}

Instance random_instance(Rng& rng, Activation act, std::size_t n, std::size_t m, const ErrorTerm& term,
                         bool binary_targets) {
  for (;;) {
    Instance in;
    in.layer.act = act;
    in.layer.W = Matrix(n, m);
    for (double& w : in.layer.W.data()) w = rng.uniform(-1.0, 1.0);
    in.layer.b.resize(m);
    for (double& b : in.layer.b) b = rng.uniform(-0.5, 0.5);
    in.layer.mu.resize(n);
    in.x.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      in.layer.mu[i] = rng.uniform(0.2, 0.8);
      in.x[i] = uniform_away(rng, 0.0, 1.0, in.layer.mu[i], 0.05);
    }
    const auto [a, h] = forward(in.layer, in.x);
    if (has_kink(act) && std::any_of(a.begin(), a.end(), [](double v) { return std::abs(v) < 1e-3; }))
      continue;

    in.t.resize(m);
    if (term.kind == ErrorTerm::Kind::LeakyHinge) {
      bool ok = true;
      for (std::size_t j = 0; j < m; ++j) {
        in.t[j] = rng.bernoulli(0.5) ? 1.0 : -1.0;
        ok = ok && std::abs(in.t[j] * h[j] - 1.0) > 1e-3;
      }
      if (!ok) continue;
      return in;
    }
    if (act.kind == ActivationKind::Softmax) {
      double sum = 0.0;
      for (double& v : in.t) sum += (v = rng.uniform(0.05, 1.0));
      for (double& v : in.t) v /= sum;
    } else {
      double lo = 0.0, hi = 1.0;
      if (act.kind == ActivationKind::ScaledTanh) lo = -0.9 * act.p1, hi = 0.9 * act.p1;
      for (std::size_t j = 0; j < m; ++j)
        in.t[j] = binary_targets ? (rng.bernoulli(0.5) ? 1.0 : 0.0) : uniform_away(rng, lo, hi, h[j], 0.01);
    }
    bool far = true;
    for (std::size_t j = 0; j < m; ++j) far = far && std::abs(h[j] - in.t[j]) >= 0.01;
    if (far) return in;
  }
}

std::vector<CheckResult> run_battery(std::uint64_t seed, std::size_t instances) {
  std::vector<CheckResult> out;
  auto shape = [](Rng& rng, bool softmax) {
    return std::pair<std::size_t, std::size_t>{2 + rng.below(4), (softmax ? 2 : 1) + rng.below(3)};
  };

  {
    const Figure1Report rep = check_figure1();
    out.push_back({"figure1 correlated patterns", rep.pass, rep.detail});
  }

  auto equivalence = [&](const std::string& label, Activation act, const Loss& loss) {
    double worst = 0.0;
    std::uint64_t worst_seed = 0;
    for (std::size_t k = 0; k < instances; ++k) {
      const std::uint64_t s = derive_seed(seed, k);
      Rng rng(s);
      const auto [n, m] = shape(rng, false);
      const Instance in = random_instance(rng, act, n, m);
      const Vector hd = flatten(hd_hetero(in.layer, in.x, in.t, ErrorTerm::difference()));
      const Vector gd = flatten(gd_hetero(in.layer, in.x, in.t, loss));
      const double d = max_abs_diff(hd, gd);
      if (d > worst) worst = d, worst_seed = s;
    }
    std::ostringstream os;
    os << "max diff " << worst << " (seed " << worst_seed << ")";
    out.push_back({label, worst <= 1e-10, os.str()});
  };
  equivalence("hd == gd squared error, identity", Activation::identity(), Loss::squared_error());
  equivalence("hd == gd cross-entropy, sigmoid", Activation::sigmoid(), Loss::cross_entropy());

  {
    double worst = 0.0;
    for (std::size_t k = 0; k < instances; ++k) {
      Rng rng(derive_seed(seed, k));
      const std::size_t d = 2 + rng.below(10), n = 1 + rng.below(5), m = 1 + rng.below(4);
      Matrix X(d, n), T(d, m);
      for (double& v : X.data()) v = rng.uniform();
      for (double& v : T.data()) v = rng.uniform();
      worst = std::max(worst, check_hebb_cov(X, T));
    }
    out.push_back({"hebb epoch sum == covariance epoch sum", worst <= 1e-10,
                   "max diff " + std::to_string(worst)});
  }

  auto grad = [&](const std::string& label, Activation act, const ErrorTerm& term,
                  const std::function<GradCheck(const Instance&)>& fn, bool binary = false) {
    double worst = 0.0;
    std::uint64_t worst_seed = 0;
    for (std::size_t k = 0; k < instances; ++k) {
      const std::uint64_t s = derive_seed(seed, k);
      Rng rng(s);
      const auto [n, m] = shape(rng, act.kind == ActivationKind::Softmax);
      const GradCheck g = fn(random_instance(rng, act, n, m, term, binary));
      if (g.max_rel_err > worst) worst = g.max_rel_err, worst_seed = s;
    }
    std::ostringstream os;
    os << "max rel err " << worst << " (seed " << worst_seed << ")";
    out.push_back({label, worst <= 1e-5, os.str()});
  };

  const Activation smooth[] = {Activation::identity(), Activation::sigmoid(), Activation::softmax(),
                               Activation::leaky_rectifier(), Activation::explin(),
                               Activation::scaled_explin(), Activation::scaled_tanh(),
                               Activation::softsign(), Activation::softplus(), Activation::invsqrt()};
  for (const Activation& act : smooth) {
    grad("gd gradient, squared error, " + std::string(name(act.kind)), act, ErrorTerm::difference(),
         [](const Instance& in) { return check_gd_gradient(in.layer, in.x, in.t, Loss::squared_error()); });
  }
  for (const Activation& act : {Activation::sigmoid(), Activation::softmax()}) {
    grad("gd gradient, cross-entropy, " + std::string(name(act.kind)), act, ErrorTerm::difference(),
         [](const Instance& in) { return check_gd_gradient(in.layer, in.x, in.t, Loss::cross_entropy()); });
  }
  for (const Activation& act : smooth) {
    grad("hd loss gradient, difference, " + std::string(name(act.kind)), act, ErrorTerm::difference(),
         [](const Instance& in) {
           return check_hd_loss_gradient(in.layer, in.x, in.t, ErrorTerm::difference());
         });
  }
  grad("hd loss gradient, sat_tanh, identity", Activation::identity(), ErrorTerm::saturating_tanh(),
       [](const Instance& in) {
         return check_hd_loss_gradient(in.layer, in.x, in.t, ErrorTerm::saturating_tanh());
       });
  for (const Activation& act : {Activation::identity(), Activation::sigmoid()}) {
    grad("hd loss gradient, leaky_hinge, " + std::string(name(act.kind)), act, ErrorTerm::leaky_hinge(),
         [](const Instance& in) {
           return check_hd_loss_gradient(in.layer, in.x, in.t, ErrorTerm::leaky_hinge());
         });
  }
  grad("hd == bernoulli log-likelihood gradient", Activation::sigmoid(), ErrorTerm::difference(),
       [](const Instance& in) { return check_glm_bernoulli(in.layer, in.x, in.t); }, true);

  const Activation positive[] = {Activation::identity(),  Activation::sigmoid(),  Activation::leaky_rectifier(),
                                 Activation::explin(),    Activation::softplus(), Activation::softsign(),
                                 Activation::invsqrt(),   Activation::scaled_tanh()};
  for (const Activation& act : positive) {
    double min_inner = INFINITY, worst_identity = 0.0;
    std::uint64_t worst_seed = 0;
    for (std::size_t k = 0; k < 10 * instances; ++k) {
      const std::uint64_t s = derive_seed(seed, k);
      Rng rng(s);
      const auto [n, m] = shape(rng, false);
      const Instance in = random_instance(rng, act, n, m);
      const InnerProduct ip = check_inner_product(in.layer, in.x, in.t, ErrorTerm::difference());
      const double dev = std::abs(ip.inner - ip.identity) / std::max(1.0, std::abs(ip.identity));
      if (ip.inner < min_inner) min_inner = ip.inner, worst_seed = s;
      worst_identity = std::max(worst_identity, dev);
    }
    std::ostringstream os;
    os << "min inner " << min_inner << " (seed " << worst_seed << "), identity dev " << worst_identity;
    out.push_back({"convergence inner product, " + std::string(name(act.kind)),
                   min_inner >= 0.0 && worst_identity <= 1e-10, os.str()});
  }
  {
    // All pre-activations negative: GD is blind, HD still moves.
    const CenteredLayer layer{Matrix{{-1.0}, {-1.0}}, {-0.5}, {0.0, 0.0}, Activation::rectifier()};
    const Vector x{1.0, 1.0}, t{1.0};
    const InnerProduct ip = check_inner_product(layer, x, t, ErrorTerm::difference());
    out.push_back({"rectifier dead unit: gd zero, hd nonzero", ip.gd_zero && !ip.hd_zero && ip.inner == 0.0,
                   "inner " + std::to_string(ip.inner)});
  }
  {
    const Vector w{1.0, 0.5}, x{1.0, 1.0};
    const CurlCheck c = check_auto_curl(w, x);
    const bool ok = std::abs(c.d12 - 2.0) <= 1e-12 && std::abs(c.d21 - 0.5) <= 1e-12 &&
                    std::abs(c.fd12 - c.d12) <= 1e-5 && std::abs(c.fd21 - c.d21) <= 1e-5 &&
                    std::abs(std::abs(c.fd12 - c.fd21) - 1.5) <= 1e-5;
    std::ostringstream os;
    os << "d12 " << c.d12 << " d21 " << c.d21 << " fd12 " << c.fd12 << " fd21 " << c.fd21;
    out.push_back({"auto-encoder hd cross-partials differ", ok, os.str()});
  }
  return out;
}

}  // namespace hebbd
