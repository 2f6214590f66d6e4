#include "hebbd/cli.hpp"

#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include "hebbd/data.hpp"
#include "hebbd/error.hpp"
#include "hebbd/grid.hpp"
#include "hebbd/metrics.hpp"
#include "hebbd/model_io.hpp"
#include "hebbd/verify.hpp"

namespace hebbd::cli {

namespace {

// Separate streams so input and target sets never share draws.
constexpr std::uint64_t kInputStream = 0x1001;
constexpr std::uint64_t kOutputStream = 0x2002;
constexpr std::uint64_t kTestStream = 0x3003;

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::pair<std::size_t, std::size_t> parse_dims(const std::string& text) {
  const auto x = text.find('x');
  if (x == std::string::npos) throw std::invalid_argument("expected DxN in '" + text + "'");
  std::size_t d = 0, n = 0;
  try {
    std::size_t used = 0;
    d = std::stoul(text.substr(0, x), &used);
    if (used != x) throw std::invalid_argument("");
    n = std::stoul(text.substr(x + 1), &used);
    if (used != text.size() - x - 1) throw std::invalid_argument("");
  } catch (const std::exception&) {
    throw std::invalid_argument("expected DxN in '" + text + "'");
  }
  if (d == 0 || n == 0) throw std::invalid_argument("dataset dimensions must be positive");
  return {d, n};
}

// rand:DxN, randn:DxN, idx:PATH[,labels=PATH], dense:PATH[,label-last]
Dataset load_spec(const std::string& spec, std::uint64_t seed) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos) throw std::invalid_argument("bad dataset specifier '" + spec + "'");
  const std::string kind = spec.substr(0, colon);
  std::string rest = spec.substr(colon + 1);
  if (kind == "rand" || kind == "randn") {
    const auto [d, n] = parse_dims(rest);
    Rng rng(seed);
    return kind == "rand" ? gen_rand(d, n, rng) : gen_randn(d, n, rng);
  }
  std::string option;
  if (const auto comma = rest.find(','); comma != std::string::npos) {
    option = rest.substr(comma + 1);
    rest = rest.substr(0, comma);
  }
  if (kind == "idx") {
    if (option.empty()) return load_idx(rest);
    if (!option.starts_with("labels=")) throw std::invalid_argument("unknown idx option '" + option + "'");
    return load_idx(rest, option.substr(7));
  }
  if (kind == "dense") {
    if (!option.empty() && option != "label-last")
      throw std::invalid_argument("unknown dense option '" + option + "'");
    return load_dense(rest, option == "label-last");
  }
  throw std::invalid_argument("unknown dataset kind '" + kind + "'");
}

class CsvOut {
 public:
  explicit CsvOut(const std::string& path) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw std::runtime_error("cannot open " + path + " for writing");
    }
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

struct HeteroOptions {
  std::string in, out;
  std::string rule = "hd";
  std::string act = "sigmoid";
  std::string error_term = "difference";
  std::string loss = "squared";
  bool centered = false;
  double adaptive = 0.0;
  std::size_t epochs = 1;
  std::size_t batch = 1;
  bool shuffle = false;
  std::vector<double> lr{0.1};
  std::vector<double> wd{0.0};
  bool grid_lr = false;
  bool grid_wd = false;
  std::string objective = "all";
  std::size_t trials = 10;
  std::size_t jobs = 0;
  std::uint64_t seed = 0;
  std::string csv;
  std::string save_model;
  std::string load_model;
};

void add_common(CLI::App* app, HeteroOptions& o) {
  app->add_option("--act", o.act, "output activation");
  app->add_option("--error", o.error_term, "error term for hd: difference, sat_tanh, leaky_hinge");
  app->add_option("--loss", o.loss, "loss for gd: squared, ce");
  app->add_flag("--centered", o.centered, "input offsets at the data mean (default 0)");
  app->add_option("--adaptive-offsets", o.adaptive, "offsets start at 0.5 and follow an EMA with this factor");
  app->add_option("--epochs", o.epochs)->check(CLI::PositiveNumber);
  app->add_option("--batch", o.batch)->check(CLI::PositiveNumber);
  app->add_flag("--shuffle", o.shuffle, "reshuffle patterns every epoch");
  app->add_option("--lr", o.lr, "learning rate(s)")->delimiter(',');
  app->add_option("--wd", o.wd, "weight decay value(s)")->delimiter(',');
  app->add_flag("--grid-lr", o.grid_lr, "search the built-in 35 learning rates");
  app->add_flag("--grid-wd", o.grid_wd, "search the built-in 20 weight decays");
  app->add_option("--objective", o.objective, "all, lastK or classification");
  app->add_option("--jobs", o.jobs, "worker threads for grid search (0 = all cores)");
  app->add_option("--seed", o.seed);
  app->add_option("--csv", o.csv, "output file (default stdout)");
}

RuleKind make_rule(const std::string& rule, const HeteroOptions& o, const Matrix& X, const Matrix& T) {
  if (rule == "hd") return HebbianDescentRule{parse_error_term(o.error_term)};
  if (rule == "gd") {
    if (o.loss == "squared") return GradientDescentRule{Loss::squared_error()};
    if (o.loss == "ce") return GradientDescentRule{Loss::cross_entropy()};
    if (o.loss == "hd") return GradientDescentRule{Loss::hebbian_descent(parse_activation(o.act), parse_error_term(o.error_term))};
    throw std::invalid_argument("unknown loss '" + o.loss + "'");
  }
  if (rule == "hebb") return HebbRule{};
  if (rule == "cov") return CovarianceRule{mean_rows(X), mean_rows(T)};
  throw std::invalid_argument("unknown rule '" + rule + "'");
}

HeteroTask make_task(const HeteroOptions& o, const std::string& rule, Matrix X, Matrix T) {
  HeteroTask task;
  task.act = parse_activation(o.act);
  task.rule = make_rule(rule, o, X, T);
  if (o.adaptive > 0.0) {
    task.mu = Vector(X.cols(), 0.5);
  } else {
    task.mu = o.centered ? mean_rows(X) : Vector(X.cols(), 0.0);
  }
  task.base.epochs = o.epochs;
  task.base.batch_size = o.batch;
  task.base.shuffle = o.shuffle;
  task.base.nu_input = o.adaptive;
  task.seed = o.seed;
  task.objective = Objective::parse(o.objective);
  task.X = std::move(X);
  task.T = std::move(T);
  return task;
}

HyperGrid make_grid(const HeteroOptions& o, const Objective& obj) {
  return {o.grid_lr ? reference_learning_rates() : Vector(o.lr.begin(), o.lr.end()),
          o.grid_wd ? reference_weight_decays() : Vector(o.wd.begin(), o.wd.end()), obj};
}

std::pair<double, double> select(const HeteroTask& task, const HeteroOptions& o, const std::string& label) {
  const HyperGrid grid = make_grid(o, task.objective);
  if (grid.etas.size() == 1 && grid.omegas.size() == 1) return {grid.etas[0], grid.omegas[0]};
  const GridResult res = grid_search_hetero(task, grid, o.trials, o.jobs);
  std::cerr << label << ": selected eta=" << fmt(res.best_eta) << " omega=" << fmt(res.best_omega)
            << " score=" << fmt(res.best_score) << "\n";
  return {res.best_eta, res.best_omega};
}

std::pair<Matrix, Matrix> hetero_data(const HeteroOptions& o) {
  Dataset in = load_spec(o.in, derive_seed(o.seed, kInputStream));
  Dataset out = load_spec(o.out.empty() ? o.in : o.out, derive_seed(o.seed, kOutputStream));
  require_same_size(in.X.rows(), out.X.rows(), "input vs output pattern count");
  return {std::move(in.X), std::move(out.X)};
}

int cmd_hetero(const HeteroOptions& o) {
  auto [X, T] = hetero_data(o);
  HeteroTask task = make_task(o, o.rule, std::move(X), std::move(T));
  std::optional<CenteredLayer> start;
  if (!o.load_model.empty()) start = std::get<CenteredLayer>(load_model(o.load_model));
  const auto [eta, omega] = select(task, o, o.rule);
  CsvOut csv(o.csv);
  csv.stream() << "trial,pattern_index,mae\n";
  for (std::size_t trial = 0; trial < o.trials; ++trial) {
    HeteroTrace trace;
    if (start) {
      TrainConfig cfg = task.base;
      cfg.eta = eta;
      cfg.omega = omega;
      cfg.seed = derive_seed(derive_seed(task.seed, trial), 1);
      trace = train_hetero(*start, task.rule, task.X, task.T, cfg);
    } else {
      trace = run_hetero(task, eta, omega, trial);
    }
    for (std::size_t p = 0; p < trace.pattern_mae.size(); ++p)
      csv.stream() << trial << ',' << p << ',' << fmt(trace.pattern_mae[p]) << '\n';
    if (trial == 0 && !o.save_model.empty()) save_model(o.save_model, trace.model);
  }
  return 0;
}

int cmd_grid(const HeteroOptions& o) {
  auto [X, T] = hetero_data(o);
  const HeteroTask task = make_task(o, o.rule, std::move(X), std::move(T));
  const GridResult res = grid_search_hetero(task, make_grid(o, task.objective), o.trials, o.jobs);
  CsvOut csv(o.csv);
  csv.stream() << "eta,omega,score\n";
  for (const GridRow& row : res.table)
    csv.stream() << fmt(row.eta) << ',' << fmt(row.omega) << ',' << fmt(row.score) << '\n';
  std::cerr << "best eta=" << fmt(res.best_eta) << " omega=" << fmt(res.best_omega)
            << " score=" << fmt(res.best_score) << "\n";
  return 0;
}

int cmd_curve(const HeteroOptions& o, const std::vector<std::string>& rules) {
  auto [X, T] = hetero_data(o);
  CsvOut csv(o.csv);
  csv.stream() << "rule,pattern_index,mae\n";
  for (const std::string& rule : rules) {
    const HeteroTask task = make_task(o, rule, X, T);
    const auto [eta, omega] = select(task, o, rule);
    Vector avg(X.rows(), 0.0);
    for (std::size_t trial = 0; trial < o.trials; ++trial) {
      const HeteroTrace trace = run_hetero(task, eta, omega, trial);
      for (std::size_t p = 0; p < avg.size(); ++p) avg[p] += trace.pattern_mae[p] / static_cast<double>(o.trials);
    }
    for (std::size_t p = 0; p < avg.size(); ++p) csv.stream() << rule << ',' << p << ',' << fmt(avg[p]) << '\n';
  }
  return 0;
}

int cmd_classify(const HeteroOptions& o, const std::string& train_spec, const std::string& test_spec) {
  Dataset train = load_spec(train_spec, derive_seed(o.seed, kInputStream));
  Dataset test = load_spec(test_spec, derive_seed(o.seed, kTestStream));
  if (train.labels.empty() || test.labels.empty())
    throw std::invalid_argument("classify needs labelled train and test sets");
  std::size_t classes = 0;
  for (auto l : train.labels) classes = std::max(classes, l + 1);
  for (auto l : test.labels) classes = std::max(classes, l + 1);
  HeteroOptions opts = o;
  if (opts.objective == "all") opts.objective = "classification";
  HeteroTask task = make_task(opts, o.rule, train.X, one_hot(train.labels, classes));
  task.test_X = test.X;
  task.test_labels = test.labels;
  const auto [eta, omega] = select(task, opts, o.rule);
  CsvOut csv(o.csv);
  csv.stream() << "trial,epoch,test_error\n";
  for (std::size_t trial = 0; trial < o.trials; ++trial) {
    std::ostringstream rows;
    const HeteroTrace trace = run_hetero(task, eta, omega, trial, [&](std::size_t epoch, const CenteredLayer& l) {
      rows << trial << ',' << epoch << ',' << fmt(classification_error(forward_batch(l, test.X), test.labels)) << '\n';
    });
    csv.stream() << rows.str();
    if (trial == 0 && !o.save_model.empty()) save_model(o.save_model, trace.model);
  }
  return 0;
}

struct AutoOptions {
  std::string in;
  std::size_t hidden = 16;
  std::string rule = "hd";
  std::string enc_act = "identity";
  std::string dec_act = "sigmoid";
  std::string loss = "squared";
  bool no_center = false;
  std::size_t epochs = 100;
  std::size_t batch = 100;
  bool shuffle = false;
  std::vector<double> lr{0.1};
  std::vector<double> wd{0.0};
  bool grid_lr = false;
  double nu_hidden = 0.01;
  double nu_input = 0.0;
  double lambda_init = 0.5;
  std::optional<double> lambda_target;
  std::size_t trials = 1;
  std::size_t jobs = 0;
  std::uint64_t seed = 0;
  std::string csv;
  std::string save_model;
  std::string load_model;
};

int cmd_auto(const AutoOptions& o) {
  const Dataset data = load_spec(o.in, derive_seed(o.seed, kInputStream));
  const Matrix& X = data.X;
  const Activation enc = parse_activation(o.enc_act), dec = parse_activation(o.dec_act);
  AutoRule rule = HebbianDescentRule{};
  if (o.rule == "gd") {
    if (o.loss == "squared") rule = GradientDescentRule{Loss::squared_error()};
    else if (o.loss == "ce") rule = GradientDescentRule{Loss::cross_entropy()};
    else throw std::invalid_argument("unknown loss '" + o.loss + "'");
  } else if (o.rule != "hd") {
    throw std::invalid_argument("auto supports rules hd and gd");
  }
  std::optional<Vector> target;
  if (o.lambda_target) target = Vector(o.hidden, *o.lambda_target);
  std::optional<TiedAutoEncoder> start;
  if (!o.load_model.empty()) start = std::get<TiedAutoEncoder>(load_model(o.load_model));

  auto run = [&](double eta, double omega, std::size_t trial, const AutoEpochHook& hook) {
    const std::uint64_t s = derive_seed(o.seed, trial);
    Rng rng(s);
    TiedAutoEncoder ae = start ? *start
                               : init_autoencoder(X.cols(), o.hidden, enc, dec,
                                                  o.no_center ? Vector(X.cols(), 0.0) : mean_rows(X), rng,
                                                  o.lambda_init);
    TrainConfig cfg;
    cfg.eta = eta;
    cfg.omega = omega;
    cfg.epochs = o.epochs;
    cfg.batch_size = o.batch;
    cfg.shuffle = o.shuffle;
    cfg.nu_hidden = o.nu_hidden;
    cfg.nu_input = o.nu_input;
    cfg.seed = derive_seed(s, 1);
    return train_auto(std::move(ae), rule, X, cfg, target, hook);
  };

  double eta = o.lr.front(), omega = o.wd.front();
  const HyperGrid grid{o.grid_lr ? reference_learning_rates() : Vector(o.lr.begin(), o.lr.end()),
                       Vector(o.wd.begin(), o.wd.end()), Objective::mae_all()};
  if (grid.etas.size() * grid.omegas.size() > 1) {
    const GridResult res = grid_search(
        grid, o.trials, [&](double e, double w, std::size_t t) { return mean(run(e, w, t, {}).pattern_mae); },
        o.jobs);
    eta = res.best_eta;
    omega = res.best_omega;
    std::cerr << o.rule << ": selected eta=" << fmt(eta) << " omega=" << fmt(omega)
              << " score=" << fmt(res.best_score) << "\n";
  }
  CsvOut csv(o.csv);
  csv.stream() << "trial,epoch,mae,mean_hidden\n";
  for (std::size_t trial = 0; trial < o.trials; ++trial) {
    const AutoTrace trace = run(eta, omega, trial, [&](std::size_t epoch, const TiedAutoEncoder& ae) {
      const double err = mae(reconstruct_batch(ae, X), X);
      csv.stream() << trial << ',' << epoch << ',' << fmt(err) << ',' << fmt(mean(encode_batch(ae, X).data()))
                   << '\n';
    });
    if (trial == 0 && !o.save_model.empty()) save_model(o.save_model, trace.model);
  }
  return 0;
}

int cmd_verify(std::uint64_t seed, std::size_t instances) {
  const auto results = run_battery(seed, instances);
  std::cout << "1.." << results.size() << "\n";
  bool ok = true;
  for (std::size_t k = 0; k < results.size(); ++k) {
    const auto& r = results[k];
    std::cout << (r.ok ? "ok " : "not ok ") << k + 1 << " - " << r.name << " # " << r.detail << "\n";
    ok = ok && r.ok;
  }
  return ok ? 0 : 1;
}

}  // namespace

int run_command(int argc, char** argv) {
  CLI::App app{"Centered single-layer networks trained with Hebbian-descent and related rules", "hebbd"};
  app.require_subcommand(1);

  HeteroOptions hetero;
  auto* h = app.add_subcommand("hetero", "online or multi-epoch hetero-association, per-pattern MAE CSV");
  h->add_option("--in", hetero.in, "input dataset")->required();
  h->add_option("--out", hetero.out, "target dataset (default: same as --in)");
  h->add_option("--rule", hetero.rule, "hd, gd, hebb or cov");
  h->add_option("--trials", hetero.trials);
  h->add_option("--save-model", hetero.save_model, "write the trial-0 model");
  h->add_option("--load-model", hetero.load_model, "start every trial from this model");
  add_common(h, hetero);

  HeteroOptions grid;
  auto* g = app.add_subcommand("grid", "hyperparameter grid, one CSV row per point");
  g->add_option("--in", grid.in, "input dataset")->required();
  g->add_option("--out", grid.out, "target dataset (default: same as --in)");
  g->add_option("--rule", grid.rule, "hd, gd, hebb or cov");
  g->add_option("--trials", grid.trials);
  add_common(g, grid);

  HeteroOptions curve;
  std::vector<std::string> curve_rules{"hd", "gd", "hebb", "cov"};
  auto* c = app.add_subcommand("curve", "forgetting curves averaged over trials for several rules");
  c->add_option("--in", curve.in, "input dataset")->required();
  c->add_option("--out", curve.out, "target dataset (default: same as --in)");
  c->add_option("--rules", curve_rules, "comma separated rules")->delimiter(',');
  c->add_option("--trials", curve.trials);
  add_common(c, curve);

  HeteroOptions classify;
  classify.trials = 1;
  classify.act = "softmax";
  std::string train_spec, test_spec;
  auto* k = app.add_subcommand("classify", "train on labelled data, report test error per epoch");
  k->add_option("--train", train_spec, "labelled training set")->required();
  k->add_option("--test", test_spec, "labelled test set")->required();
  k->add_option("--rule", classify.rule, "hd, gd, hebb or cov");
  k->add_option("--trials", classify.trials);
  k->add_option("--save-model", classify.save_model, "write the trial-0 model");
  add_common(k, classify);

  AutoOptions autoo;
  auto* a = app.add_subcommand("auto", "tied-weight auto-encoder, reconstruction MAE per epoch");
  a->add_option("--in", autoo.in, "dataset")->required();
  a->add_option("--hidden", autoo.hidden)->check(CLI::PositiveNumber);
  a->add_option("--rule", autoo.rule, "hd or gd");
  a->add_option("--enc-act", autoo.enc_act);
  a->add_option("--dec-act", autoo.dec_act);
  a->add_option("--loss", autoo.loss, "loss for gd: squared, ce");
  a->add_flag("--no-center", autoo.no_center, "input offsets at 0 instead of the data mean");
  a->add_option("--epochs", autoo.epochs)->check(CLI::PositiveNumber);
  a->add_option("--batch", autoo.batch)->check(CLI::PositiveNumber);
  a->add_flag("--shuffle", autoo.shuffle);
  a->add_option("--lr", autoo.lr, "learning rate(s)")->delimiter(',');
  a->add_option("--wd", autoo.wd, "weight decay value(s)")->delimiter(',');
  a->add_flag("--grid-lr", autoo.grid_lr, "search the built-in 35 learning rates");
  a->add_option("--nu-hidden", autoo.nu_hidden, "hidden offset sliding factor");
  a->add_option("--nu-input", autoo.nu_input, "input offset sliding factor");
  a->add_option("--lambda-init", autoo.lambda_init, "initial hidden offsets");
  a->add_option("--lambda-target", autoo.lambda_target, "regularise hidden activity towards this value (hd)");
  a->add_option("--trials", autoo.trials);
  a->add_option("--jobs", autoo.jobs);
  a->add_option("--seed", autoo.seed);
  a->add_option("--csv", autoo.csv, "output file (default stdout)");
  a->add_option("--save-model", autoo.save_model, "write the trial-0 model");
  a->add_option("--load-model", autoo.load_model, "start every trial from this model");

  std::uint64_t verify_seed = 1;
  std::size_t verify_instances = 100;
  auto* v = app.add_subcommand("verify", "run the oracle battery, TAP output");
  v->add_option("--seed", verify_seed);
  v->add_option("--instances", verify_instances)->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cerr << app.help();
    return 2;
  }

  try {
    if (h->parsed()) return cmd_hetero(hetero);
    if (g->parsed()) {
      if (!grid.grid_lr && grid.lr.size() == 1 && !grid.grid_wd && grid.wd.size() == 1) grid.grid_lr = true;
      return cmd_grid(grid);
    }
    if (c->parsed()) return cmd_curve(curve, curve_rules);
    if (k->parsed()) return cmd_classify(classify, train_spec, test_spec);
    if (a->parsed()) return cmd_auto(autoo);
    if (v->parsed()) return cmd_verify(verify_seed, verify_instances);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace hebbd::cli
