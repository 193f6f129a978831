// Copyright 2026 The depthsep Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "depthsep/depth3.hpp"
#include "depthsep/errors.hpp"
#include "depthsep/instance.hpp"
#include "depthsep/network.hpp"
#include "depthsep/random.hpp"

namespace depthsep {

enum class Optimizer { sgd, adam };

inline std::string optimizer_name(Optimizer o) { return o == Optimizer::sgd ? "sgd" : "adam"; }

inline Optimizer optimizer_from_name(const std::string& s) {
  if (s == "sgd") return Optimizer::sgd;
  if (s == "adam") return Optimizer::adam;
  throw InvalidArgument("unknown optimizer '" + s + "'");
}

struct TrainConfig {
  std::size_t width = 16;
  std::string activation = "relu";
  std::size_t epochs = 20;
  std::size_t batch_size = 64;
  std::size_t steps_per_epoch = 32;
  double learning_rate = 0.01;
  Optimizer optimizer = Optimizer::adam;
  std::optional<double> weight_clip;
  std::uint64_t seed = 0;

  void validate() const {
    detail::require(width >= 1, "TrainConfig: width must be >= 1");
    detail::require(epochs >= 1, "TrainConfig: epochs must be >= 1");
    detail::require(batch_size >= 1, "TrainConfig: batch_size must be >= 1");
    detail::require(steps_per_epoch >= 1, "TrainConfig: steps_per_epoch must be >= 1");
    detail::require(learning_rate > 0.0 && std::isfinite(learning_rate),
                    "TrainConfig: learning_rate must be positive");
    detail::require(!weight_clip || *weight_clip > 0.0, "TrainConfig: weight clip must be positive");
    const auto act = Activation::from_name(activation);
    detail::require(act.kind() == ActivationKind::relu || act.kind() == ActivationKind::sigmoid,
                    "TrainConfig: activation must be differentiable (relu or sigmoid)");
  }
};

// Gradient of the mean squared loss with respect to every parameter of a
// depth-2 network, laid out like the network itself.
struct Depth2Gradient {
  Eigen::MatrixXd weights;
  Eigen::VectorXd bias;
  Eigen::VectorXd out_weights;
  double out_bias = 0.0;
};

struct LossGradient {
  double loss = 0.0;
  Depth2Gradient grad;
};

// loss = mean_k (net(points_k) - targets_k)^2 over the columns of `points`.
inline LossGradient loss_and_gradient(const DenseNetwork& net, const Eigen::MatrixXd& points,
                                      const Eigen::VectorXd& targets) {
  detail::require(net.depth() == 2, "loss_and_gradient: network must have depth 2");
  detail::require_dim(static_cast<std::size_t>(points.rows()) == net.input_dim(),
                      "loss_and_gradient: point dimension mismatch");
  detail::require_dim(points.cols() == targets.size() && targets.size() > 0,
                      "loss_and_gradient: one target per point");
  const auto& layer = net.layers()[0];
  const auto& act = net.activation();
  const Eigen::MatrixXd pre = (layer.weights * points).colwise() + layer.bias;
  const Eigen::MatrixXd hidden = pre.unaryExpr([&](double t) { return act(t); });
  const Eigen::VectorXd out =
      (hidden.transpose() * net.output().weights).array() + net.output().bias;
  const Eigen::VectorXd resid = out - targets;
  const double n = static_cast<double>(targets.size());

  LossGradient lg;
  lg.loss = resid.squaredNorm() / n;
  const Eigen::VectorXd r = 2.0 * resid / n;
  lg.grad.out_weights = hidden * r;
  lg.grad.out_bias = r.sum();
  const Eigen::MatrixXd back =
      pre.unaryExpr([&](double t) { return act.derivative(t); }).cwiseProduct(
          net.output().weights * r.transpose());
  lg.grad.weights = back * points.transpose();
  lg.grad.bias = back.rowwise().sum();
  return lg;
}

struct LossEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t n = 0;

  double ci_low() const { return mean - 1.96 * std_error; }
  double ci_high() const { return mean + 1.96 * std_error; }
};

inline constexpr std::size_t kMinLossSamples = 1000;

// Monte-Carlo estimate of E[(net(x) - f_d(x))^2] over x ~ U(A_4d). Draws
// the same sample stream as sample_a4d(spec, n, seed).
inline LossEstimate estimate_population_loss(const DenseNetwork& net, const InstanceSpec& spec,
                                             std::size_t n, std::uint64_t seed) {
  validate(spec);
  detail::require_dim(net.input_dim() == spec.ambient_dim(),
                      "estimate_population_loss: network input dimension must be 4d");
  detail::require(n >= kMinLossSamples, "estimate_population_loss: need at least 1000 samples");
  const auto dim = static_cast<Eigen::Index>(spec.ambient_dim());
  double sum = 0.0, sum_sq = 0.0;
  std::size_t seen = 0;
  for (std::size_t b = 0; seen < n; ++b) {
    Rng rng = derive_rng(seed, b);
    const std::size_t take = std::min(kSampleBatch, n - seen);
    Eigen::MatrixXd pts(dim, static_cast<Eigen::Index>(take));
    Eigen::VectorXd labels(static_cast<Eigen::Index>(take));
    for (std::size_t k = 0; k < take; ++k) {
      const Sample s = draw_sample(spec, rng);
      pts.col(static_cast<Eigen::Index>(k)) = Eigen::Map<const Eigen::VectorXd>(s.point.data(), dim);
      labels(static_cast<Eigen::Index>(k)) = s.label;
    }
    const Eigen::VectorXd err = (net.evaluate_batch(pts) - labels).array().square();
    sum += err.sum();
    sum_sq += err.squaredNorm();
    seen += take;
  }
  const double mean = sum / static_cast<double>(n);
  const double var = std::max(0.0, (sum_sq - static_cast<double>(n) * mean * mean) /
                                       static_cast<double>(n - 1));
  return {mean, std::sqrt(var / static_cast<double>(n)), n};
}

struct TrainResult {
  DenseNetwork net;
  std::vector<double> loss_history;  // mean training loss per epoch
  std::vector<double> best_so_far;   // running minimum of loss_history
  bool diverged = false;
  std::size_t epochs_run = 0;
  double max_weight_seen = 0.0;      // largest max_weight after any step
};

namespace detail {

inline DenseNetwork init_depth2(std::size_t input_dim, const TrainConfig& cfg) {
  Rng rng = derive_rng(cfg.seed, 0x696e6974ULL);
  const auto m = static_cast<Eigen::Index>(cfg.width);
  const auto n = static_cast<Eigen::Index>(input_dim);
  const double s1 = std::sqrt(2.0 / static_cast<double>(n));
  const double s2 = std::sqrt(1.0 / static_cast<double>(m));
  HiddenLayer h{Eigen::MatrixXd(m, n), Eigen::VectorXd::Zero(m)};
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = 0; j < n; ++j) h.weights(i, j) = s1 * standard_normal(rng);
  OutputNeuron out{Eigen::VectorXd(m), 0.0};
  for (Eigen::Index i = 0; i < m; ++i) out.weights(i) = s2 * standard_normal(rng);
  return DenseNetwork(input_dim, {std::move(h)}, Activation::from_name(cfg.activation), std::move(out));
}

// Adam moment state, or plain SGD when unused.
struct OptimizerState {
  Depth2Gradient m, v;
  std::size_t t = 0;
};

template <typename Dense>
Eigen::Map<Eigen::ArrayXd> flat(Dense& x) {
  return {x.data(), x.size()};
}

inline void apply_update(Eigen::Map<Eigen::ArrayXd> param, const Eigen::ArrayXd& g,
                         Eigen::Map<Eigen::ArrayXd> m, Eigen::Map<Eigen::ArrayXd> v,
                         const TrainConfig& cfg, std::size_t t) {
  if (cfg.optimizer == Optimizer::sgd) {
    param -= cfg.learning_rate * g;
    return;
  }
  constexpr double b1 = 0.9, b2 = 0.999, eps = 1e-8;
  m = b1 * m + (1.0 - b1) * g;
  v = b2 * v + (1.0 - b2) * g.square();
  const double c1 = 1.0 - std::pow(b1, static_cast<double>(t));
  const double c2 = 1.0 - std::pow(b2, static_cast<double>(t));
  param -= cfg.learning_rate * (m / c1) / ((v / c2).sqrt() + eps);
}

}  // namespace detail

// Minibatch training of a depth-2 network on squared loss against f_d over
// fresh U(A_4d) batches. With a weight clip C every parameter is clamped to
// [-C, C] after each step. A non-finite loss stops training and is flagged.
inline TrainResult train_depth2(const InstanceSpec& spec, const TrainConfig& cfg) {
  validate(spec);
  cfg.validate();
  const auto dim = static_cast<Eigen::Index>(spec.ambient_dim());
  const auto m = static_cast<Eigen::Index>(cfg.width);
  DenseNetwork net = detail::init_depth2(spec.ambient_dim(), cfg);

  std::vector<HiddenLayer> layers = net.layers();
  OutputNeuron out = net.output();
  auto clip = [&] {
    if (!cfg.weight_clip) return;
    const double c = *cfg.weight_clip;
    layers[0].weights = layers[0].weights.cwiseMax(-c).cwiseMin(c);
    layers[0].bias = layers[0].bias.cwiseMax(-c).cwiseMin(c);
    out.weights = out.weights.cwiseMax(-c).cwiseMin(c);
    out.bias = std::clamp(out.bias, -c, c);
  };
  clip();
  net = DenseNetwork(spec.ambient_dim(), layers, net.activation(), out);

  detail::OptimizerState st;
  st.m = {Eigen::MatrixXd::Zero(m, dim), Eigen::VectorXd::Zero(m), Eigen::VectorXd::Zero(m), 0.0};
  st.v = st.m;

  TrainResult res{net, {}, {}, false, 0, net.max_weight()};
  Rng data_rng = derive_rng(cfg.seed, 0x64617461ULL);
  Eigen::MatrixXd pts(dim, static_cast<Eigen::Index>(cfg.batch_size));
  Eigen::VectorXd labels(static_cast<Eigen::Index>(cfg.batch_size));
  double best = std::numeric_limits<double>::infinity();

  for (std::size_t epoch = 0; epoch < cfg.epochs && !res.diverged; ++epoch) {
    double epoch_loss = 0.0;
    for (std::size_t step = 0; step < cfg.steps_per_epoch; ++step) {
      for (std::size_t k = 0; k < cfg.batch_size; ++k) {
        const Sample s = draw_sample(spec, data_rng);
        pts.col(static_cast<Eigen::Index>(k)) = Eigen::Map<const Eigen::VectorXd>(s.point.data(), dim);
        labels(static_cast<Eigen::Index>(k)) = s.label;
      }
      const auto lg = loss_and_gradient(net, pts, labels);
      if (!std::isfinite(lg.loss)) {
        res.diverged = true;
        break;
      }
      epoch_loss += lg.loss;
      ++st.t;
      using detail::flat;
      detail::apply_update(flat(layers[0].weights), lg.grad.weights.reshaped().array(), flat(st.m.weights),
                           flat(st.v.weights), cfg, st.t);
      detail::apply_update(flat(layers[0].bias), lg.grad.bias.array(), flat(st.m.bias),
                           flat(st.v.bias), cfg, st.t);
      detail::apply_update(flat(out.weights), lg.grad.out_weights.array(), flat(st.m.out_weights),
                           flat(st.v.out_weights), cfg, st.t);
      detail::apply_update({&out.bias, 1}, Eigen::ArrayXd::Constant(1, lg.grad.out_bias),
                           {&st.m.out_bias, 1}, {&st.v.out_bias, 1}, cfg, st.t);
      clip();
      net = DenseNetwork(spec.ambient_dim(), layers, net.activation(), out);
      res.max_weight_seen = std::max(res.max_weight_seen, net.max_weight());
    }
    if (res.diverged) break;
    const double mean_loss = epoch_loss / static_cast<double>(cfg.steps_per_epoch);
    if (!std::isfinite(mean_loss)) {
      res.diverged = true;
      break;
    }
    best = std::min(best, mean_loss);
    res.loss_history.push_back(mean_loss);
    res.best_so_far.push_back(best);
    res.net = net;
    ++res.epochs_run;
  }
  return res;
}

struct ReportRow {
  std::string kind;  // "trained", "trivial" or "exact_depth3"
  std::size_t width = 0;
  double final_loss = 0.0;
  double std_error = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  double best_train_loss = 0.0;
  bool diverged = false;

  friend bool operator==(const ReportRow&, const ReportRow&) = default;
};

struct ExperimentReport {
  int d = 0;
  std::uint64_t instance_seed = 0;
  std::size_t eval_samples = 0;
  TrainConfig config;
  std::vector<ReportRow> rows;
  std::vector<std::vector<double>> loss_curves;  // one per trained row, same order
};

inline ReportRow reference_row(const std::string& kind, const DenseNetwork& net,
                               const InstanceSpec& spec, std::size_t n, std::uint64_t seed) {
  const auto est = estimate_population_loss(net, spec, n, seed);
  return {kind, net.width(), est.mean, est.std_error, est.ci_low(), est.ci_high(), est.mean, false};
}

// Trains one depth-2 net per width (ascending) and tabulates the estimated
// population losses next to the constant-1/2 and exact depth-3 references.
// A diverged run appears as a row with diverged = true and NaN losses.
inline ExperimentReport run_separation_experiment(int d, std::vector<std::size_t> widths,
                                                  const TrainConfig& tmpl, std::uint64_t instance_seed,
                                                  std::size_t eval_samples = 10000) {
  detail::require(d >= 1 && d <= kMaxInstanceDim, "run_separation_experiment: d must be in [1, 6]");
  detail::require(!widths.empty(), "run_separation_experiment: no widths");
  std::sort(widths.begin(), widths.end());
  const auto spec = build_instance(d, instance_seed, kDefaultPackingAttempts);

  ExperimentReport rep;
  rep.d = d;
  rep.instance_seed = instance_seed;
  rep.eval_samples = eval_samples;
  rep.config = tmpl;
  const std::uint64_t eval_seed = mix64(tmpl.seed ^ 0x6576616cULL);
  rep.rows.push_back(reference_row(
      "trivial", DenseNetwork::constant(spec.ambient_dim(), 0.5, Activation::relu()), spec,
      eval_samples, eval_seed));
  rep.rows.push_back(reference_row("exact_depth3", build_exact_relu(d), spec, eval_samples, eval_seed));
  for (std::size_t w : widths) {
    TrainConfig cfg = tmpl;
    cfg.width = w;
    const auto tr = train_depth2(spec, cfg);
    ReportRow row;
    row.kind = "trained";
    row.width = w;
    row.diverged = tr.diverged;
    row.best_train_loss = tr.best_so_far.empty() ? std::nan("") : tr.best_so_far.back();
    if (tr.diverged) {
      row.final_loss = row.std_error = row.ci_low = row.ci_high = std::nan("");
    } else {
      const auto est = estimate_population_loss(tr.net, spec, eval_samples, eval_seed);
      row.final_loss = est.mean;
      row.std_error = est.std_error;
      row.ci_low = est.ci_low();
      row.ci_high = est.ci_high();
    }
    rep.rows.push_back(row);
    rep.loss_curves.push_back(tr.loss_history);
  }
  return rep;
}

}  // namespace depthsep
