#pragma once

// Two-layer graph convolutional classifier trained transductively on the
// full graph:
//
//   H1     = ReLU(A_hat X  W1 + b1)
//   H2     = ReLU(A_hat H1 W2 + b2)
//   D      = dropout(dropout(H2))          (train mode only, inverted)
//   logits = D W_out + b_out,  P = softmax(logits)
//
// Loss is the mean cross-entropy over the labeled (masked) nodes. Gradients
// are derived by hand; parameters are updated with Adam.

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "error.hpp"
#include "eval.hpp"
#include "graph.hpp"
#include "random.hpp"
#include "text_io.hpp"

namespace vulgcn {

inline constexpr std::size_t num_classes = 2;
inline constexpr std::size_t default_hidden = 200;
inline constexpr std::string_view propagation_rule =
    "relu(a_hat * h * w + b), a_hat = D^-1/2 A D^-1/2";

/// Weights and biases. Biases are 1 x k matrices so every tensor can be
/// visited uniformly.
struct GcnParams {
  Eigen::MatrixXd w1, b1, w2, b2, w_out, b_out;

  static constexpr std::array<std::string_view, 6> names = {"W1", "b1", "W2",
                                                            "b2", "W_out", "b_out"};

  std::array<Eigen::MatrixXd *, 6> tensors() {
    return {&w1, &b1, &w2, &b2, &w_out, &b_out};
  }
  std::array<const Eigen::MatrixXd *, 6> tensors() const {
    return {&w1, &b1, &w2, &b2, &w_out, &b_out};
  }

  Eigen::Index input_dim() const { return w1.rows(); }
  Eigen::Index hidden() const { return w1.cols(); }

  /// Same shapes, all zeros.
  GcnParams zeros_like() const {
    GcnParams z;
    auto dst = z.tensors();
    auto src = tensors();
    for (std::size_t k = 0; k < dst.size(); ++k)
      *dst[k] = Eigen::MatrixXd::Zero(src[k]->rows(), src[k]->cols());
    return z;
  }

  bool all_finite() const {
    for (const auto *t : tensors())
      if (!t->allFinite())
        return false;
    return true;
  }

  friend bool operator==(const GcnParams &a, const GcnParams &b) {
    auto ta = a.tensors(), tb = b.tensors();
    for (std::size_t k = 0; k < ta.size(); ++k)
      if (ta[k]->rows() != tb[k]->rows() || ta[k]->cols() != tb[k]->cols() ||
          *ta[k] != *tb[k])
        return false;
    return true;
  }
};

/// Gaussian weights with standard deviation sqrt(2 / fan_in); zero biases.
inline GcnParams init_params(std::size_t input_dim, std::uint64_t seed,
                             std::size_t hidden = default_hidden) {
  if (input_dim == 0 || hidden == 0)
    throw usage_error("layer sizes must be positive");
  Rng rng(mix_seed(seed, 0x5EED));
  std::normal_distribution<double> normal(0.0, 1.0);
  auto gauss = [&](std::size_t rows, std::size_t cols) {
    const double sd = std::sqrt(2.0 / static_cast<double>(rows));
    Eigen::MatrixXd m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      for (Eigen::Index j = 0; j < m.cols(); ++j)
        m(i, j) = normal(rng) * sd;
    return m;
  };
  GcnParams p;
  p.w1 = gauss(input_dim, hidden);
  p.w2 = gauss(hidden, hidden);
  p.w_out = gauss(hidden, num_classes);
  p.b1 = Eigen::MatrixXd::Zero(1, static_cast<Eigen::Index>(hidden));
  p.b2 = Eigen::MatrixXd::Zero(1, static_cast<Eigen::Index>(hidden));
  p.b_out = Eigen::MatrixXd::Zero(1, static_cast<Eigen::Index>(num_classes));
  return p;
}

struct TrainConfig {
  double learning_rate = 0.001;
  std::size_t epochs = 4;
  double dropout_p = 0.5;
  std::size_t dropout_layers = 2; // 1 with --single-dropout
  std::uint64_t seed = 0;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  std::size_t hidden = default_hidden;

  void validate() const {
    if (!(learning_rate >= 0.0) || !std::isfinite(learning_rate))
      throw usage_error("learning rate must be finite and >= 0");
    if (!(dropout_p >= 0.0 && dropout_p < 1.0))
      throw usage_error("dropout probability must lie in [0,1)");
    if (dropout_layers > 2)
      throw usage_error("at most two dropout layers");
    if (hidden == 0)
      throw usage_error("hidden width must be positive");
  }
};

enum class Mode { train, eval };

/// Probabilities for a set of nodes, in the order of `nodes`.
struct Predictions {
  std::vector<std::size_t> nodes;
  Eigen::MatrixXd probs; // nodes.size() x 2
  std::vector<int> labels;
};

struct ForwardCache {
  Mode mode = Mode::eval;
  const SparseMatrix *a_hat = nullptr;
  const GcnParams *params = nullptr;
  double graph_fingerprint = 0.0;
  Eigen::MatrixXd ax, z1, h1, ah1, z2, h2, drop_scale, d, logits, log_probs, probs;
};

namespace detail {

inline double fingerprint(const SparseMatrix &a) {
  double s = static_cast<double>(a.rows()) * 1e-3 + static_cast<double>(a.nonZeros());
  for (Eigen::Index k = 0; k < a.nonZeros(); ++k)
    s += a.valuePtr()[k] * static_cast<double>((k % 7) + 1);
  return s;
}

inline Eigen::MatrixXd relu(const Eigen::MatrixXd &m) { return m.cwiseMax(0.0); }

inline void log_softmax_rows(const Eigen::MatrixXd &logits, Eigen::MatrixXd &log_probs,
                             Eigen::MatrixXd &probs) {
  log_probs.resize(logits.rows(), logits.cols());
  probs.resize(logits.rows(), logits.cols());
  for (Eigen::Index i = 0; i < logits.rows(); ++i) {
    const double mx = logits.row(i).maxCoeff();
    double sum = 0.0;
    for (Eigen::Index c = 0; c < logits.cols(); ++c)
      sum += std::exp(logits(i, c) - mx);
    const double lse = mx + std::log(sum);
    for (Eigen::Index c = 0; c < logits.cols(); ++c) {
      log_probs(i, c) = logits(i, c) - lse;
      probs(i, c) = std::exp(log_probs(i, c));
    }
  }
}

inline void check_mask(const std::vector<int> &labels, const std::vector<std::size_t> &mask,
                       Eigen::Index nodes) {
  if (mask.empty())
    throw data_error("loss: empty training mask");
  for (std::size_t i : mask) {
    if (static_cast<Eigen::Index>(i) >= nodes || i >= labels.size())
      throw data_error("mask node " + std::to_string(i) + " out of range");
    if (labels[i] != 0 && labels[i] != 1)
      throw data_error("mask node " + std::to_string(i) + " has no label");
  }
}

} // namespace detail

/// Forward pass with a precomputed A_hat X (constant across epochs).
inline ForwardCache forward_prepared(const SparseMatrix &a_hat, const Eigen::MatrixXd &ax,
                                     const GcnParams &p, Mode mode, std::uint64_t seed,
                                     double dropout_p = 0.5, std::size_t dropout_layers = 2) {
  if (ax.cols() != p.w1.rows())
    throw data_error("feature width " + std::to_string(ax.cols()) +
                     " does not match W1 rows " + std::to_string(p.w1.rows()));
  ForwardCache c;
  c.mode = mode;
  c.a_hat = &a_hat;
  c.params = &p;
  c.graph_fingerprint = detail::fingerprint(a_hat);
  c.ax = ax;

  c.z1.noalias() = ax * p.w1;
  c.z1.rowwise() += p.b1.row(0);
  c.h1 = detail::relu(c.z1);
  c.ah1 = a_hat * c.h1;
  c.z2.noalias() = c.ah1 * p.w2;
  c.z2.rowwise() += p.b2.row(0);
  c.h2 = detail::relu(c.z2);

  if (mode == Mode::train && dropout_p > 0.0 && dropout_layers > 0) {
    Rng rng(mix_seed(seed, 0xD80));
    std::bernoulli_distribution keep(1.0 - dropout_p);
    const double scale = 1.0 / (1.0 - dropout_p);
    c.drop_scale = Eigen::MatrixXd::Ones(c.h2.rows(), c.h2.cols());
    for (std::size_t layer = 0; layer < dropout_layers; ++layer)
      for (Eigen::Index j = 0; j < c.h2.cols(); ++j)
        for (Eigen::Index i = 0; i < c.h2.rows(); ++i)
          c.drop_scale(i, j) *= keep(rng) ? scale : 0.0;
    c.d = c.h2.cwiseProduct(c.drop_scale);
  } else {
    c.d = c.h2;
  }

  c.logits.noalias() = c.d * p.w_out;
  c.logits.rowwise() += p.b_out.row(0);
  detail::log_softmax_rows(c.logits, c.log_probs, c.probs);
  return c;
}

inline Eigen::MatrixXd propagate_features(const TextGraph &g) {
  if (g.a_hat.rows() != static_cast<Eigen::Index>(g.num_nodes()))
    throw data_error("graph is not normalized (A_hat missing)");
  if (g.x.rows() != static_cast<Eigen::Index>(g.num_nodes()))
    throw data_error("feature matrix rows (" + std::to_string(g.x.rows()) +
                     ") != node count (" + std::to_string(g.num_nodes()) + ")");
  return g.a_hat * g.x;
}

/// Slice-node predictions from a cache (all nodes are in cache.probs).
inline Predictions slice_predictions(const TextGraph &g, const ForwardCache &c) {
  Predictions p;
  for (std::size_t k = 0; k < g.num_slices(); ++k)
    p.nodes.push_back(g.slice_node(k));
  p.probs.resize(static_cast<Eigen::Index>(p.nodes.size()), 2);
  for (std::size_t r = 0; r < p.nodes.size(); ++r) {
    p.probs.row(static_cast<Eigen::Index>(r)) = c.probs.row(static_cast<Eigen::Index>(p.nodes[r]));
    p.labels.push_back(c.probs(static_cast<Eigen::Index>(p.nodes[r]), 1) >
                               c.probs(static_cast<Eigen::Index>(p.nodes[r]), 0)
                           ? 1
                           : 0);
  }
  return p;
}

inline std::pair<Predictions, ForwardCache>
forward(const TextGraph &g, const GcnParams &p, Mode mode, std::uint64_t seed = 0,
        double dropout_p = 0.5, std::size_t dropout_layers = 2) {
  ForwardCache c = forward_prepared(g.a_hat, propagate_features(g), p, mode, seed,
                                    dropout_p, dropout_layers);
  Predictions preds = slice_predictions(g, c);
  return {std::move(preds), std::move(c)};
}

/// Mean negative log-probability of the true class over `mask` (node rows
/// of `probs`).
inline double loss(const Eigen::MatrixXd &probs, const std::vector<int> &labels,
                   const std::vector<std::size_t> &mask) {
  detail::check_mask(labels, mask, probs.rows());
  double s = 0.0;
  for (std::size_t i : mask)
    s -= std::log(probs(static_cast<Eigen::Index>(i), labels[i]));
  return s / static_cast<double>(mask.size());
}

inline double loss_from_log_probs(const Eigen::MatrixXd &log_probs,
                                  const std::vector<int> &labels,
                                  const std::vector<std::size_t> &mask) {
  detail::check_mask(labels, mask, log_probs.rows());
  double s = 0.0;
  for (std::size_t i : mask)
    s -= log_probs(static_cast<Eigen::Index>(i), labels[i]);
  return s / static_cast<double>(mask.size());
}

/// Exact gradient of loss_from_log_probs(cache.log_probs, labels, mask) with
/// respect to every parameter used in the cached forward pass. Duplicate
/// mask entries count once per occurrence.
inline GcnParams backward(const ForwardCache &c, const std::vector<int> &labels,
                          const std::vector<std::size_t> &mask) {
  if (!c.a_hat || !c.params)
    throw data_error("backward: cache was not produced by forward");
  if (detail::fingerprint(*c.a_hat) != c.graph_fingerprint ||
      c.a_hat->rows() != c.probs.rows())
    throw data_error("backward: stale cache (graph changed since forward)");
  detail::check_mask(labels, mask, c.probs.rows());
  const GcnParams &p = *c.params;
  const SparseMatrix &a_hat = *c.a_hat;

  Eigen::MatrixXd g_logits = Eigen::MatrixXd::Zero(c.probs.rows(), c.probs.cols());
  const double inv_m = 1.0 / static_cast<double>(mask.size());
  for (std::size_t i : mask) {
    const auto r = static_cast<Eigen::Index>(i);
    g_logits.row(r) += c.probs.row(r) * inv_m;
    g_logits(r, labels[i]) -= inv_m;
  }

  GcnParams grad;
  grad.w_out.noalias() = c.d.transpose() * g_logits;
  grad.b_out = g_logits.colwise().sum();

  Eigen::MatrixXd g_h2 = g_logits * p.w_out.transpose();
  if (c.drop_scale.size())
    g_h2 = g_h2.cwiseProduct(c.drop_scale);
  Eigen::MatrixXd g_z2 = (c.z2.array() > 0.0).select(g_h2, 0.0);
  grad.w2.noalias() = c.ah1.transpose() * g_z2;
  grad.b2 = g_z2.colwise().sum();

  Eigen::MatrixXd g_ah1 = g_z2 * p.w2.transpose();
  Eigen::MatrixXd g_h1 = a_hat.transpose() * g_ah1;
  Eigen::MatrixXd g_z1 = (c.z1.array() > 0.0).select(g_h1, 0.0);
  grad.w1.noalias() = c.ax.transpose() * g_z1;
  grad.b1 = g_z1.colwise().sum();
  return grad;
}

class Adam {
public:
  Adam(const GcnParams &shape, const TrainConfig &cfg)
      : cfg_(cfg), m_(shape.zeros_like()), v_(shape.zeros_like()) {}

  void step(GcnParams &p, const GcnParams &grad) {
    ++t_;
    const double bc1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(t_));
    const double bc2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(t_));
    auto pt = p.tensors();
    auto gt = grad.tensors();
    auto mt = m_.tensors();
    auto vt = v_.tensors();
    for (std::size_t k = 0; k < pt.size(); ++k) {
      auto &m = *mt[k];
      auto &v = *vt[k];
      const auto &g = *gt[k];
      m = cfg_.beta1 * m + (1.0 - cfg_.beta1) * g;
      v = cfg_.beta2 * v + (1.0 - cfg_.beta2) * g.cwiseProduct(g);
      *pt[k] -= (cfg_.learning_rate *
                 ((m.array() / bc1) / ((v.array() / bc2).sqrt() + cfg_.epsilon)))
                    .matrix();
    }
  }

private:
  TrainConfig cfg_;
  GcnParams m_, v_;
  std::size_t t_ = 0;
};

/// Log class frequencies of the masked labels (add-one smoothed), used as
/// the initial output bias so the first epochs start from the label prior.
inline Eigen::MatrixXd prior_logits(const std::vector<int> &labels,
                                    const std::vector<std::size_t> &mask) {
  double counts[num_classes] = {1.0, 1.0};
  for (std::size_t i : mask)
    counts[labels.at(i)] += 1.0;
  const double total = counts[0] + counts[1];
  Eigen::MatrixXd b(1, static_cast<Eigen::Index>(num_classes));
  b(0, 0) = std::log(counts[0] / total);
  b(0, 1) = std::log(counts[1] / total);
  return b;
}

struct TrainResult {
  GcnParams params;
  /// Training-set loss after each epoch's update, evaluated without dropout.
  std::vector<double> loss_history;
};

/// Full-graph transductive training. `labels` is indexed by node (-1 or any
/// value outside {0,1} for unlabeled nodes); `train_mask` lists the labeled
/// training nodes.
inline TrainResult train(const TextGraph &g, const TrainConfig &cfg,
                         const std::vector<int> &labels,
                         const std::vector<std::size_t> &train_mask,
                         const std::function<void(std::size_t, double)> &on_epoch = {}) {
  cfg.validate();
  const Eigen::MatrixXd ax = propagate_features(g);
  detail::check_mask(labels, train_mask, ax.rows());

  TrainResult r;
  r.params = init_params(static_cast<std::size_t>(ax.cols()), cfg.seed, cfg.hidden);
  r.params.b_out = prior_logits(labels, train_mask);
  Adam opt(r.params, cfg);
  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    ForwardCache c = forward_prepared(g.a_hat, ax, r.params, Mode::train,
                                      mix_seed(cfg.seed, epoch + 1), cfg.dropout_p,
                                      cfg.dropout_layers);
    const double train_loss = loss_from_log_probs(c.log_probs, labels, train_mask);
    if (!std::isfinite(train_loss))
      throw Error(ErrorKind::divergence,
                  "training diverged at epoch " + std::to_string(epoch + 1));
    GcnParams grad = backward(c, labels, train_mask);
    opt.step(r.params, grad);
    if (!r.params.all_finite())
      throw Error(ErrorKind::divergence,
                  "non-finite parameters after epoch " + std::to_string(epoch + 1));

    ForwardCache e = forward_prepared(g.a_hat, ax, r.params, Mode::eval, 0);
    const double eval_loss = loss_from_log_probs(e.log_probs, labels, train_mask);
    if (!std::isfinite(eval_loss))
      throw Error(ErrorKind::divergence,
                  "training loss became non-finite at epoch " + std::to_string(epoch + 1));
    r.loss_history.push_back(eval_loss);
    if (on_epoch)
      on_epoch(epoch + 1, eval_loss);
  }
  return r;
}

/// Eval-mode predictions for the masked nodes, in mask order.
inline Predictions predict(const TextGraph &g, const GcnParams &params,
                           const std::vector<std::size_t> &mask) {
  Predictions p;
  if (mask.empty()) {
    p.probs.resize(0, 2);
    return p;
  }
  ForwardCache c = forward_prepared(g.a_hat, propagate_features(g), params, Mode::eval, 0);
  p.nodes = mask;
  p.probs.resize(static_cast<Eigen::Index>(mask.size()), 2);
  for (std::size_t r = 0; r < mask.size(); ++r) {
    const auto i = static_cast<Eigen::Index>(mask[r]);
    if (i >= c.probs.rows())
      throw data_error("predict: node " + std::to_string(mask[r]) + " out of range");
    p.probs.row(static_cast<Eigen::Index>(r)) = c.probs.row(i);
    p.labels.push_back(c.probs(i, 1) > c.probs(i, 0) ? 1 : 0);
  }
  return p;
}

struct BaselineResult {
  EvalReport report;
  std::vector<double> loss_history;
  std::vector<std::string> warnings;
};

/// Softmax-regression baseline on per-slice feature rows alone (no graph),
/// trained with the same Adam settings and epoch budget.
inline BaselineResult baseline_linear(const Eigen::MatrixXd &features,
                                      const std::vector<int> &labels,
                                      const std::vector<std::size_t> &train_rows,
                                      const std::vector<std::size_t> &test_rows,
                                      const TrainConfig &cfg) {
  cfg.validate();
  detail::check_mask(labels, train_rows, features.rows());
  BaselineResult res;
  {
    std::size_t pos = 0;
    for (std::size_t i : train_rows)
      pos += labels[i] == 1;
    if (pos == 0 || pos == train_rows.size())
      res.warnings.push_back("baseline: all training labels are identical; "
                             "the classifier is degenerate");
  }

  Rng rng(mix_seed(cfg.seed, 0xBA5E));
  std::normal_distribution<double> normal(0.0, 1.0);
  const double sd = std::sqrt(2.0 / static_cast<double>(features.cols()));
  Eigen::MatrixXd w(features.cols(), 2);
  for (Eigen::Index i = 0; i < w.rows(); ++i)
    for (Eigen::Index j = 0; j < 2; ++j)
      w(i, j) = normal(rng) * sd;
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(1, 2);
  Eigen::MatrixXd mw = Eigen::MatrixXd::Zero(w.rows(), 2), vw = mw;
  Eigen::MatrixXd mb = Eigen::MatrixXd::Zero(1, 2), vb = mb;

  Eigen::MatrixXd log_probs, probs;
  auto run = [&]() {
    Eigen::MatrixXd logits = features * w;
    logits.rowwise() += b.row(0);
    detail::log_softmax_rows(logits, log_probs, probs);
  };
  const double inv_m = 1.0 / static_cast<double>(train_rows.size());
  for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
    run();
    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(probs.rows(), 2);
    for (std::size_t i : train_rows) {
      const auto r = static_cast<Eigen::Index>(i);
      g.row(r) += probs.row(r) * inv_m;
      g(r, labels[i]) -= inv_m;
    }
    Eigen::MatrixXd gw = features.transpose() * g;
    Eigen::MatrixXd gb = g.colwise().sum();
    const double bc1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(epoch));
    const double bc2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(epoch));
    auto adam = [&](Eigen::MatrixXd &p, Eigen::MatrixXd &m, Eigen::MatrixXd &v,
                    const Eigen::MatrixXd &grad) {
      m = cfg.beta1 * m + (1.0 - cfg.beta1) * grad;
      v = cfg.beta2 * v + (1.0 - cfg.beta2) * grad.cwiseProduct(grad);
      p -= (cfg.learning_rate * ((m.array() / bc1) / ((v.array() / bc2).sqrt() + cfg.epsilon)))
               .matrix();
    };
    adam(w, mw, vw, gw);
    adam(b, mb, vb, gb);
    run();
    const double l = loss_from_log_probs(log_probs, labels, train_rows);
    if (!std::isfinite(l))
      throw Error(ErrorKind::divergence, "baseline diverged at epoch " + std::to_string(epoch));
    res.loss_history.push_back(l);
  }
  if (cfg.epochs == 0)
    run();

  std::vector<int> preds, truth;
  for (std::size_t i : test_rows) {
    const auto r = static_cast<Eigen::Index>(i);
    preds.push_back(probs(r, 1) > probs(r, 0) ? 1 : 0);
    truth.push_back(labels.at(i));
  }
  if (!preds.empty())
    res.report = evaluate(preds, truth);
  res.report.warnings.insert(res.report.warnings.end(), res.warnings.begin(),
                             res.warnings.end());
  return res;
}

// Checkpoint (text):
//   vulgcn-checkpoint 1
//   shapes input_dim=<d> hidden=<h> classes=2
//   seed=<s>
//   config <key=value ...>
//   propagation=<rule>
//   split train=<n>  /  <ids>  /  split test=<m>  /  <ids>
//   matrix <name> <rows> <cols>  followed by rows
//   loss_history <n>  followed by one value per line

struct Checkpoint {
  GcnParams params;
  TrainConfig config;
  double train_fraction = 0.8;
  bool stratify = false;
  std::vector<SliceId> train_ids, test_ids;
  std::vector<double> loss_history;
};

inline std::string format_checkpoint(const Checkpoint &ck) {
  const auto &c = ck.config;
  std::string out = "vulgcn-checkpoint 1\n";
  out += "shapes input_dim=" + std::to_string(ck.params.input_dim()) +
         " hidden=" + std::to_string(ck.params.hidden()) +
         " classes=" + std::to_string(num_classes) + "\n";
  out += "seed=" + std::to_string(c.seed) + "\n";
  out += "config learning_rate=" + io::format_double(c.learning_rate) +
         " epochs=" + std::to_string(c.epochs) +
         " dropout_p=" + io::format_double(c.dropout_p) +
         " dropout_layers=" + std::to_string(c.dropout_layers) +
         " beta1=" + io::format_double(c.beta1) + " beta2=" + io::format_double(c.beta2) +
         " epsilon=" + io::format_double(c.epsilon) +
         " train_fraction=" + io::format_double(ck.train_fraction) +
         " stratify=" + (ck.stratify ? "1" : "0") + "\n";
  out += "propagation=" + std::string(propagation_rule) + "\n";
  auto ids = [&](const char *name, const std::vector<SliceId> &v) {
    out += std::string("split ") + name + "=" + std::to_string(v.size()) + "\n";
    for (std::size_t k = 0; k < v.size(); ++k)
      out += (k ? " " : "") + std::to_string(v[k]);
    out += "\n";
  };
  ids("train", ck.train_ids);
  ids("test", ck.test_ids);
  auto tensors = ck.params.tensors();
  for (std::size_t k = 0; k < tensors.size(); ++k) {
    const auto &m = *tensors[k];
    out += "matrix " + std::string(GcnParams::names[k]) + " " + std::to_string(m.rows()) +
           " " + std::to_string(m.cols()) + "\n";
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      for (Eigen::Index j = 0; j < m.cols(); ++j) {
        if (j)
          out += ' ';
        out += io::format_double(m(i, j));
      }
      out += '\n';
    }
  }
  out += "loss_history " + std::to_string(ck.loss_history.size()) + "\n";
  for (double l : ck.loss_history)
    out += io::format_double(l) + "\n";
  return out;
}

inline Checkpoint parse_checkpoint(std::string_view text,
                                   const std::string &source = "<checkpoint>") {
  auto lines = io::split_lines(text);
  std::size_t ln = 0;
  auto need = [&](const char *what) -> const std::string & {
    if (ln >= lines.size())
      throw parse_error(source, ln + 1, std::string("unexpected end of file, expected ") + what);
    return lines[ln++];
  };
  auto fail = [&](const std::string &msg) { return parse_error(source, ln, msg); };
  auto value_of = [&](std::string_view field, std::string_view key) -> std::string_view {
    if (field.substr(0, key.size() + 1) != std::string(key) + "=")
      throw fail("expected " + std::string(key) + "=");
    return field.substr(key.size() + 1);
  };

  Checkpoint ck;
  if (need("magic") != "vulgcn-checkpoint 1")
    throw fail("not a vulgcn checkpoint (version 1)");
  std::size_t input_dim = 0, hidden = 0, classes = 0;
  {
    auto f = io::fields(need("shapes"));
    if (f.size() != 4 || f[0] != "shapes" ||
        !io::parse_int(value_of(f[1], "input_dim"), input_dim) ||
        !io::parse_int(value_of(f[2], "hidden"), hidden) ||
        !io::parse_int(value_of(f[3], "classes"), classes) || classes != num_classes)
      throw fail("malformed shapes line");
  }
  if (!io::parse_int(value_of(need("seed"), "seed"), ck.config.seed))
    throw fail("malformed seed");
  {
    auto f = io::fields(need("config"));
    if (f.size() != 10 || f[0] != "config")
      throw fail("malformed config line");
    std::size_t strat = 0;
    bool ok = io::parse_double(value_of(f[1], "learning_rate"), ck.config.learning_rate) &&
              io::parse_int(value_of(f[2], "epochs"), ck.config.epochs) &&
              io::parse_double(value_of(f[3], "dropout_p"), ck.config.dropout_p) &&
              io::parse_int(value_of(f[4], "dropout_layers"), ck.config.dropout_layers) &&
              io::parse_double(value_of(f[5], "beta1"), ck.config.beta1) &&
              io::parse_double(value_of(f[6], "beta2"), ck.config.beta2) &&
              io::parse_double(value_of(f[7], "epsilon"), ck.config.epsilon) &&
              io::parse_double(value_of(f[8], "train_fraction"), ck.train_fraction) &&
              io::parse_int(value_of(f[9], "stratify"), strat);
    if (!ok)
      throw fail("malformed config value");
    ck.stratify = strat != 0;
    ck.config.hidden = hidden;
  }
  if (need("propagation").rfind("propagation=", 0) != 0)
    throw fail("missing propagation line");
  auto read_ids = [&](const char *name, std::vector<SliceId> &out) {
    std::size_t n = 0;
    auto f = io::fields(need("split"));
    if (f.size() != 2 || f[0] != "split" || !io::parse_int(value_of(f[1], name), n))
      throw fail(std::string("malformed split ") + name + " line");
    auto vals = io::fields(need("split ids"));
    if (vals.size() != n)
      throw fail(std::string("split ") + name + ": expected " + std::to_string(n) + " ids");
    for (auto v : vals) {
      SliceId id = 0;
      if (!io::parse_int(v, id))
        throw fail("bad slice id in split");
      out.push_back(id);
    }
  };
  read_ids("train", ck.train_ids);
  read_ids("test", ck.test_ids);

  const std::array<std::pair<std::size_t, std::size_t>, 6> shapes = {{
      {input_dim, hidden}, {1, hidden}, {hidden, hidden}, {1, hidden},
      {hidden, num_classes}, {1, num_classes}}};
  auto tensors = ck.params.tensors();
  for (std::size_t k = 0; k < tensors.size(); ++k) {
    auto f = io::fields(need("matrix"));
    std::size_t r = 0, c = 0;
    if (f.size() != 4 || f[0] != "matrix" || f[1] != GcnParams::names[k] ||
        !io::parse_int(f[2], r) || !io::parse_int(f[3], c))
      throw fail("expected 'matrix " + std::string(GcnParams::names[k]) + " <rows> <cols>'");
    if (r != shapes[k].first || c != shapes[k].second)
      throw fail("matrix " + std::string(GcnParams::names[k]) + " has the wrong shape");
    Eigen::MatrixXd m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
    for (std::size_t i = 0; i < r; ++i) {
      auto vals = io::fields(need("matrix row"));
      if (vals.size() != c)
        throw fail("matrix row has " + std::to_string(vals.size()) + " values, expected " +
                   std::to_string(c));
      for (std::size_t j = 0; j < c; ++j)
        if (!io::parse_double(vals[j], m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j))))
          throw fail("non-numeric matrix value");
    }
    *tensors[k] = std::move(m);
  }
  {
    auto f = io::fields(need("loss_history"));
    std::size_t n = 0;
    if (f.size() != 2 || f[0] != "loss_history" || !io::parse_int(f[1], n))
      throw fail("malformed loss_history line");
    for (std::size_t i = 0; i < n; ++i) {
      double v = 0;
      if (!io::parse_double(need("loss value"), v))
        throw fail("bad loss value");
      ck.loss_history.push_back(v);
    }
  }
  return ck;
}

} // namespace vulgcn
