// One PASS/FAIL line per acceptance criterion. Exit status is non-zero when
// any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include "hebbd/data.hpp"
#include "hebbd/grid.hpp"
#include "hebbd/metrics.hpp"
#include "hebbd/verify.hpp"

using namespace hebbd;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;
};

// Appends a formatted fragment to the detail and folds `cond` into ok.
void note(Outcome& o, bool cond, const char* fmt, auto... args) {
  if (!o.detail.empty()) o.detail += "; ";
  if constexpr (sizeof...(args) == 0) {
    o.detail += fmt;
  } else {
    char buf[256];
    std::snprintf(buf, sizeof buf, fmt, args...);
    o.detail += buf;
  }
  if (!cond) {
    o.detail += " [x]";
    o.ok = false;
  }
}

int failures = 0;

void run(int id, const char* title, double budget_s, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (budget_s > 0.0) note(o, secs < budget_s, "%.2fs (budget %.0fs)", secs, budget_s);
  if (!o.ok) ++failures;
  std::printf("criterion %2d: %s  %s\n    %s\n", id, o.ok ? "PASS" : "FAIL", title, o.detail.c_str());
  std::fflush(stdout);
}

Vector flatten(const ParamUpdate& u) {
  Vector v(u.dW.data().begin(), u.dW.data().end());
  v.insert(v.end(), u.db.begin(), u.db.end());
  return v;
}

std::pair<std::size_t, std::size_t> shape(Rng& rng, bool softmax) {
  return {2 + rng.below(5), (softmax ? 2 : 1) + rng.below(4)};
}

// RAND -> RAND data drawn the way the CLI draws it.
std::pair<Matrix, Matrix> rand_pair(std::uint64_t seed, std::size_t d, std::size_t n, std::size_t m) {
  Rng in(derive_seed(seed, 0x1001)), out(derive_seed(seed, 0x2002));
  Matrix X = gen_rand(d, n, in).X;
  Matrix T = gen_rand(d, m, out).X;
  return {std::move(X), std::move(T)};
}

HeteroTask hetero_task(Matrix X, Matrix T, Activation act, RuleKind rule, bool centered, std::uint64_t seed,
                       Objective obj, std::size_t epochs = 1) {
  HeteroTask task;
  task.mu = centered ? mean_rows(X) : Vector(X.cols(), 0.0);
  task.X = std::move(X);
  task.T = std::move(T);
  task.act = act;
  task.rule = std::move(rule);
  task.seed = seed;
  task.objective = obj;
  task.base.epochs = epochs;
  return task;
}

// Trial-averaged per-pattern MAE at a fixed learning rate.
Vector mean_curve(const HeteroTask& task, double eta, std::size_t trials) {
  Vector avg(task.X.rows(), 0.0);
  for (std::size_t t = 0; t < trials; ++t) {
    const HeteroTrace tr = run_hetero(task, eta, 0.0, t);
    for (std::size_t p = 0; p < avg.size(); ++p) avg[p] += tr.pattern_mae[p] / static_cast<double>(trials);
  }
  return avg;
}

double tail_mean(const Vector& v, std::size_t k) {
  return mean(std::span<const double>(v).subspan(v.size() - k));
}

// --- criteria ---------------------------------------------------------------

Outcome figure1() {
  Outcome o;
  const Figure1Report r = check_figure1();
  const Matrix hd{{0, 1}, {1, 0}, {1, 1}, {1, 1}};
  const Matrix hebb{{0, 0}, {0, 0}, {1, 1}, {1, 1}};
  note(o, r.hd_out == hd, "hd outputs %s", r.hd_out == hd ? "(0,1)(1,0)(1,1)(1,1)" : "differ");
  note(o, r.hebb_out == hebb && r.cov_out == hebb, "hebb/cov outputs %s",
       r.hebb_out == hebb && r.cov_out == hebb ? "(0,0)(0,0)(1,1)(1,1)" : "differ");
  const std::vector<bool> only3{false, false, true, false}, all4(4, true);
  note(o, r.hebb_bits_correct == only3, "3-bit: hebb correct on pattern 3 only");
  note(o, r.hd_bits_correct == all4, "3-bit: hd correct on all four");
  note(o, r.pass, "report %s", r.pass ? "pass" : r.detail.c_str());
  return o;
}

Outcome equivalences() {
  Outcome o;
  double id_diff = 0, sig_diff = 0, cov_diff = 0;
  for (std::size_t k = 0; k < 100; ++k) {
    Rng rng(derive_seed(2002, k));
    auto [n, m] = shape(rng, false);
    const Instance a = random_instance(rng, Activation::identity(), n, m);
    id_diff = std::max(id_diff, max_abs_diff(flatten(hd_hetero(a.layer, a.x, a.t, ErrorTerm::difference())),
                                             flatten(gd_hetero(a.layer, a.x, a.t, Loss::squared_error()))));
    const Instance b = random_instance(rng, Activation::sigmoid(), n, m, ErrorTerm::difference(), true);
    sig_diff = std::max(sig_diff, max_abs_diff(flatten(hd_hetero(b.layer, b.x, b.t, ErrorTerm::difference())),
                                               flatten(gd_hetero(b.layer, b.x, b.t, Loss::cross_entropy()))));
    const std::size_t d = 2 + rng.below(20);
    Matrix X(d, n), T(d, m);
    for (double& v : X.data()) v = rng.uniform();
    for (double& v : T.data()) v = rng.bernoulli(0.5) ? 1.0 : 0.0;
    cov_diff = std::max(cov_diff, check_hebb_cov(X, T));
  }
  note(o, id_diff <= 1e-10, "identity hd-gd %.3g", id_diff);
  note(o, sig_diff <= 1e-10, "sigmoid hd-gd(ce) %.3g", sig_diff);
  note(o, cov_diff <= 1e-10, "hebb-cov %.3g", cov_diff);
  return o;
}

Outcome gradient_oracles() {
  Outcome o;
  const std::size_t kInstances = 100;
  auto worst_over = [&](Activation act, const ErrorTerm& term, bool binary,
                        const std::function<GradCheck(const Instance&)>& fn) {
    double worst = 0.0;
    for (std::size_t k = 0; k < kInstances; ++k) {
      Rng rng(derive_seed(3003, k));
      auto [n, m] = shape(rng, act.kind == ActivationKind::Softmax);
      const GradCheck g = fn(random_instance(rng, act, n, m, term, binary));
      if (!g.skipped) worst = std::max(worst, g.max_rel_err);
    }
    return worst;
  };

  double gd_worst = 0.0, hd_worst = 0.0;
  int gd_pairs = 0, hd_pairs = 0;
  std::string gd_bad, hd_bad;
  for (int k = 0; k <= static_cast<int>(ActivationKind::InvSqrt); ++k) {
    const Activation act = Activation::of(static_cast<ActivationKind>(k));
    if (act.kind == ActivationKind::Step || act.kind == ActivationKind::Rectifier) continue;
    std::vector<Loss> losses{Loss::squared_error()};
    if (act.kind == ActivationKind::Sigmoid || act.kind == ActivationKind::Softmax)
      losses.push_back(Loss::cross_entropy());
    for (const Loss& loss : losses) {
      const bool binary = loss.kind == Loss::Kind::CrossEntropy;
      const double w = worst_over(act, ErrorTerm::difference(), binary, [&](const Instance& in) {
        return check_gd_gradient(in.layer, in.x, in.t, loss);
      });
      ++gd_pairs;
      gd_worst = std::max(gd_worst, w);
      if (w > 1e-5) gd_bad += std::string(" ") + std::string(name(act.kind));
    }
    for (const ErrorTerm& term : {ErrorTerm::difference(), ErrorTerm::saturating_tanh(), ErrorTerm::leaky_hinge()}) {
      if (!hd_loss_supported(act, term)) continue;
      const double w = worst_over(act, term, false, [&](const Instance& in) {
        return check_hd_loss_gradient(in.layer, in.x, in.t, term);
      });
      ++hd_pairs;
      hd_worst = std::max(hd_worst, w);
      if (w > 1e-5) hd_bad += std::string(" ") + std::string(name(act.kind)) + "/" + std::string(name(term.kind));
    }
  }
  const double glm = worst_over(Activation::sigmoid(), ErrorTerm::difference(), true,
                                [](const Instance& in) { return check_glm_bernoulli(in.layer, in.x, in.t); });
  note(o, gd_worst <= 1e-5, "gd vs fd: %d pairs, max rel %.3g%s", gd_pairs, gd_worst, gd_bad.c_str());
  note(o, hd_worst <= 1e-5, "hd vs fd of its loss: %d pairs, max rel %.3g%s", hd_pairs, hd_worst, hd_bad.c_str());
  note(o, glm <= 1e-5, "bernoulli likelihood max rel %.3g", glm);
  return o;
}

Outcome convergence_invariant() {
  Outcome o;
  double min_inner = INFINITY, worst_identity = 0.0;
  int kinds = 0;
  for (int k = 0; k <= static_cast<int>(ActivationKind::InvSqrt); ++k) {
    const Activation act = Activation::of(static_cast<ActivationKind>(k));
    if (!strictly_positive_derivative(act) || act.kind == ActivationKind::Softmax) continue;
    ++kinds;
    for (std::size_t i = 0; i < 1000; ++i) {
      Rng rng(derive_seed(4004, i));
      auto [n, m] = shape(rng, false);
      const Instance in = random_instance(rng, act, n, m);
      const InnerProduct ip = check_inner_product(in.layer, in.x, in.t, ErrorTerm::difference());
      min_inner = std::min(min_inner, ip.inner);
      worst_identity =
          std::max(worst_identity, std::abs(ip.inner - ip.identity) / std::max(1.0, std::abs(ip.identity)));
    }
  }
  note(o, min_inner >= 0.0, "%d activations x 1000, min inner %.3g", kinds, min_inner);
  note(o, worst_identity <= 1e-10, "identity deviation %.3g", worst_identity);
  const CenteredLayer dead{Matrix{{-1.0, 0.5}, {-1.0, -2.0}}, {-0.5, -0.1}, {0.0, 0.0}, Activation::rectifier()};
  const InnerProduct ip = check_inner_product(dead, Vector{1, 1}, Vector{1, 0.5}, ErrorTerm::difference());
  note(o, ip.gd_zero && !ip.hd_zero && ip.inner == 0.0, "rectifier case: gd zero %d, hd zero %d",
       int(ip.gd_zero), int(ip.hd_zero));
  return o;
}

Outcome curl() {
  Outcome o;
  const CurlCheck c = check_auto_curl(Vector{1.0, 0.5}, Vector{1.0, 1.0});
  note(o, std::abs(c.d12 - 2.0) <= 1e-12 && std::abs(c.d21 - 0.5) <= 1e-12, "d12 %.10g d21 %.10g", c.d12, c.d21);
  note(o, std::abs(c.fd12 - c.d12) <= 1e-5 && std::abs(c.fd21 - c.d21) <= 1e-5, "fd12 %.8g fd21 %.8g", c.fd12,
       c.fd21);
  note(o, std::abs(std::abs(c.fd12 - c.fd21) - 1.5) <= 1e-5, "asymmetry %.8g", std::abs(c.fd12 - c.fd21));
  return o;
}

// Learning rates chosen in criterion 6, reused by criterion 8.
struct OnlineSelection {
  double hd = 0.0, hebb = 0.0;
} selected;

constexpr std::uint64_t kOnlineSeed = 7;
constexpr std::size_t kTrials = 10;

Outcome online() {
  Outcome o;
  auto [X, T] = rand_pair(kOnlineSeed, 100, 200, 200);
  const Activation sig = Activation::sigmoid();
  const HyperGrid grid{reference_learning_rates(), {0.0}, Objective::mae_last_k(20)};
  auto best = [&](RuleKind rule, bool centered, Objective obj) {
    HyperGrid g = grid;
    g.objective = obj;
    return grid_search_hetero(hetero_task(X, T, sig, std::move(rule), centered, kOnlineSeed, obj), g, kTrials);
  };
  const GridResult hd = best(HebbianDescentRule{}, true, Objective::mae_last_k(20));
  const GridResult gd = best(GradientDescentRule{}, true, Objective::mae_last_k(20));
  const GridResult hebb = best(HebbRule{}, true, Objective::mae_last_k(20));
  const GridResult cov = best(CovarianceRule{mean_rows(X), mean_rows(T)}, true, Objective::mae_last_k(20));
  const GridResult raw = best(HebbRule{}, false, Objective::mae_all());
  selected = {hd.best_eta, hebb.best_eta};

  note(o, hd.best_score <= 0.06, "hd last20 %.4f (eta %g)", hd.best_score, hd.best_eta);
  note(o, hebb.best_score >= 0.05 && hebb.best_score <= 0.12, "hebb last20 %.4f (eta %g)", hebb.best_score,
       hebb.best_eta);
  note(o, std::abs(cov.best_score - hebb.best_score) <= 1e-9 && cov.best_eta == hebb.best_eta,
       "cov last20 %.4f (eta %g)", cov.best_score, cov.best_eta);
  note(o, gd.best_score >= hd.best_score, "gd last20 %.4f (eta %g)", gd.best_score, gd.best_eta);
  note(o, raw.best_score >= 0.45, "uncentered hebb all %.4f", raw.best_score);
  return o;
}

Outcome multi_epoch() {
  Outcome o;
  auto [X, T] = rand_pair(kOnlineSeed, 100, 200, 200);
  const HyperGrid grid{{0.1, 1.0, 10.0}, {0.0}, Objective::mae_all()};
  const std::size_t trials = 5;
  auto best = [&](Activation act, RuleKind rule) {
    return grid_search_hetero(hetero_task(X, T, act, std::move(rule), true, kOnlineSeed, Objective::mae_all(), 100),
                              grid, trials);
  };
  const GridResult hd_sig = best(Activation::sigmoid(), HebbianDescentRule{});
  const GridResult hd_step = best(Activation::step(), HebbianDescentRule{});
  const GridResult gd_step = best(Activation::step(), GradientDescentRule{});
  note(o, hd_sig.best_score <= 1e-3, "hd sigmoid %.3g (eta %g)", hd_sig.best_score, hd_sig.best_eta);
  note(o, hd_step.best_score <= 1e-3, "hd step %.3g (eta %g)", hd_step.best_score, hd_step.best_eta);
  note(o, gd_step.best_score >= 0.4, "gd step %.4f", gd_step.best_score);
  return o;
}

Outcome forgetting() {
  Outcome o;
  if (selected.hd == 0.0) return {false, "needs the learning rates selected in criterion 6"};
  const Activation sig = Activation::sigmoid();
  auto curves = [&](std::size_t d, Vector& hd, Vector& hebb, Vector& cov) {
    auto [X, T] = rand_pair(kOnlineSeed, d, 200, 200);
    const CovarianceRule covr{mean_rows(X), mean_rows(T)};
    hd = mean_curve(hetero_task(X, T, sig, HebbianDescentRule{}, true, kOnlineSeed, Objective::mae_all()),
                    selected.hd, kTrials);
    hebb = mean_curve(hetero_task(X, T, sig, HebbRule{}, true, kOnlineSeed, Objective::mae_all()), selected.hebb,
                      kTrials);
    cov = mean_curve(hetero_task(X, T, sig, covr, true, kOnlineSeed, Objective::mae_all()), selected.hebb, kTrials);
  };
  Vector hd100, hebb100, cov100;
  curves(100, hd100, hebb100, cov100);
  Vector order(100);
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<double>(i);
  const double r_hd = spearman(order, hd100), r_hebb = spearman(order, hebb100), r_cov = spearman(order, cov100);
  note(o, r_hd <= -0.8, "rho hd %.3f", r_hd);
  note(o, std::abs(r_hebb) <= 0.3, "rho hebb %.3f", r_hebb);
  note(o, std::abs(r_cov) <= 0.3, "rho cov %.3f", r_cov);

  Vector hd1k, hebb1k, cov1k;
  curves(1000, hd1k, hebb1k, cov1k);
  const double hd_small = mean(hd100), hd_big = tail_mean(hd1k, 100);
  const double hebb_small = mean(hebb100), hebb_big = tail_mean(hebb1k, 100);
  const double deg_hd = hd_big - hd_small, deg_hebb = hebb_big - hebb_small;
  note(o, hd_big <= 2.0 * hd_small && hd_big >= 0.5 * hd_small, "hd last100 %.4f vs %.4f", hd_big, hd_small);
  note(o, deg_hebb > 3.0 * std::abs(deg_hd), "degradation hebb %.4f vs hd %.4f", deg_hebb, deg_hd);
  return o;
}

Outcome auto_associative() {
  Outcome o;
  Rng data_rng(derive_seed(3, 0x1001));
  const Matrix X = gen_rand(500, 50, data_rng).X;
  const double baseline = baseline_mae(X);

  struct Result {
    double eta, mae, mean_h, unit_spread;
  };
  auto train = [&](const AutoRule& rule) {
    auto run = [&](double eta) {
      Rng rng(derive_seed(3, 0));
      TiedAutoEncoder ae = init_autoencoder(50, 20, Activation::identity(), Activation::sigmoid(), mean_rows(X), rng);
      TrainConfig cfg;
      cfg.eta = eta;
      cfg.epochs = 100;
      cfg.batch_size = 100;
      cfg.nu_hidden = 0.01;
      return train_auto(std::move(ae), rule, X, cfg);
    };
    const GridResult g = grid_search({reference_learning_rates(), {0.0}, Objective::mae_all()}, 1,
                                     [&](double eta, double, std::size_t) { return mean(run(eta).pattern_mae); });
    const AutoTrace tr = run(g.best_eta);
    const Matrix H = encode_batch(tr.model, X);
    const Vector unit_means = mean_rows(H);
    return Result{g.best_eta, mae(reconstruct_batch(tr.model, X), X), mean(H.data()), stddev(unit_means)};
  };
  const Result hd = train(HebbianDescentRule{});
  const Result gd = train(GradientDescentRule{});
  note(o, hd.mae <= 0.5 * baseline, "hd mae %.4f (eta %g, half baseline %.4f)", hd.mae, hd.eta, 0.5 * baseline);
  note(o, gd.mae <= 0.5 * baseline, "gd mae %.4f (eta %g)", gd.mae, gd.eta);
  note(o, std::abs(hd.mean_h) <= 0.05, "hd mean hidden %.3g (gd %.3g)", hd.mean_h, gd.mean_h);
  note(o, hd.unit_spread <= 0.5 * gd.unit_spread, "std of unit means hd %.3g gd %.3g", hd.unit_spread,
       gd.unit_spread);
  return o;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Outcome determinism() {
  Outcome o;
  const auto dir = std::filesystem::temp_directory_path() / "hebbd_acceptance";
  std::filesystem::create_directories(dir);
  const std::vector<std::pair<std::string, std::string>> cases{
      {"hetero", "hetero --in rand:40x30 --out rand:40x20 --centered --grid-lr --objective last10 --trials 3 --seed 11"},
      {"grid", "grid --in randn:30x20 --rule gd --lr 0.01,0.1,1 --wd 0,0.001 --trials 3 --seed 5"},
      {"curve", "curve --in rand:30x25 --rules hd,gd,hebb,cov --centered --lr 0.3 --trials 4 --seed 2"},
      {"auto", "auto --in rand:60x12 --hidden 4 --epochs 5 --batch 10 --shuffle --trials 2 --seed 9"},
      {"classify", "classify --train dense:" HEBBD_FIXTURES "/classes.csv,label-last --test dense:" HEBBD_FIXTURES
                   "/classes.csv,label-last --act softmax --lr 0.5 --epochs 5 --seed 4"},
  };
  for (const auto& [label, args] : cases) {
    std::string files[3];
    const char* jobs[3] = {"", " --jobs 1", ""};
    bool ran = true;
    for (int r = 0; r < 3; ++r) {
      const auto out = dir / (label + std::to_string(r) + ".csv");
      const bool grid_like = label == "hetero" || label == "grid" || label == "curve" || label == "auto";
      const std::string cmd = std::string("\"") + HEBBD_CLI + "\" " + args + (grid_like ? jobs[r] : "") +
                              " --csv \"" + out.string() + "\" 2>/dev/null";
      if (std::system(cmd.c_str()) != 0) ran = false;
      files[r] = slurp(out);
    }
    const bool same = ran && !files[0].empty() && files[0] == files[1] && files[0] == files[2];
    note(o, same, "%s %zu bytes", label.c_str(), files[0].size());
  }
  std::filesystem::remove_all(dir);
  return o;
}

}  // namespace

int main() {
  run(1, "correlated-pattern example (figure 1)", 1.0, figure1);
  run(2, "exact equivalences", 5.0, equivalences);
  run(3, "gradient oracles", 30.0, gradient_oracles);
  run(4, "convergence inner product", 10.0, convergence_invariant);
  run(5, "auto-encoder update is not a gradient field", 0.0, curl);
  run(6, "online RAND->RAND, grid-selected learning rates", 180.0, online);
  run(7, "multi-epoch RAND->RAND", 120.0, multi_epoch);
  run(8, "forgetting curves", 0.0, forgetting);
  run(9, "auto-associative 500x50 RAND", 120.0, auto_associative);
  run(10, "CLI output is byte-identical across runs", 0.0, determinism);
  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
