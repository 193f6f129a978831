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
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "depthsep/errors.hpp"
#include "depthsep/random.hpp"

namespace depthsep {

enum class ActivationKind { relu, threshold, sigmoid, custom };

// Growth and total-variation envelope of an activation:
//   |σ(x)| <= c_sigma (1 + |x|^alpha_sigma)
//   V_a^b(σ) <= c_sigma (1 + (|a| + |b|)^alpha_sigma)
struct VariationProfile {
  double c_sigma = 1.0;
  double alpha_sigma = 1.0;

  double variation_bound(double radius) const {
    return c_sigma * (1.0 + std::pow(2.0 * radius, alpha_sigma));
  }
};

// Scalar activation shared by every hidden neuron of a network.
class Activation {
 public:
  static Activation relu() {
    return Activation(ActivationKind::relu, "relu", {1.0, 1.0}, 1.0, {}, true);
  }

  // σ(x) = 1 iff x >= 0.5.
  static Activation threshold() {
    return Activation(ActivationKind::threshold, "threshold", {1.0, 0.0}, std::nullopt, {0.5}, true);
  }

  static Activation sigmoid() {
    return Activation(ActivationKind::sigmoid, "sigmoid", {1.0, 0.0}, 0.25, {}, true);
  }

  // A user-supplied σ. Threshold compilation needs either a Lipschitz
  // constant or the full list of jump locations (for piecewise constant σ).
  static Activation custom(std::string name, std::function<double(double)> fn,
                           VariationProfile profile, std::optional<double> lipschitz,
                           std::vector<double> jumps = {}, bool monotone = false) {
    detail::require(static_cast<bool>(fn), "custom activation needs a callable");
    Activation a(ActivationKind::custom, std::move(name), profile, lipschitz, std::move(jumps),
                 monotone);
    a.fn_ = std::make_shared<std::function<double(double)>>(std::move(fn));
    return a;
  }

  static Activation from_name(const std::string& name) {
    if (name == "relu") return relu();
    if (name == "threshold") return threshold();
    if (name == "sigmoid") return sigmoid();
    throw InvalidArgument("unknown activation '" + name + "'");
  }

  double operator()(double x) const {
    switch (kind_) {
      case ActivationKind::relu:
        return x > 0.0 ? x : 0.0;
      case ActivationKind::threshold:
        return x >= 0.5 ? 1.0 : 0.0;
      case ActivationKind::sigmoid:
        return 1.0 / (1.0 + std::exp(-x));
      case ActivationKind::custom:
        return (*fn_)(x);
    }
    return 0.0;
  }

  // dσ/dx where it exists; zero for the threshold.
  double derivative(double x) const {
    switch (kind_) {
      case ActivationKind::relu:
        return x > 0.0 ? 1.0 : 0.0;
      case ActivationKind::sigmoid: {
        const double s = 1.0 / (1.0 + std::exp(-x));
        return s * (1.0 - s);
      }
      default:
        throw InvalidArgument("activation '" + name_ + "' has no usable derivative");
    }
  }

  ActivationKind kind() const { return kind_; }
  const std::string& name() const { return name_; }
  const VariationProfile& profile() const { return profile_; }
  const std::optional<double>& lipschitz() const { return lipschitz_; }
  const std::vector<double>& jumps() const { return jumps_; }
  bool monotone() const { return monotone_; }
  bool serializable() const { return kind_ != ActivationKind::custom; }

  friend bool operator==(const Activation& a, const Activation& b) {
    return a.kind_ == b.kind_ && a.name_ == b.name_;
  }

 private:
  Activation(ActivationKind kind, std::string name, VariationProfile profile,
             std::optional<double> lipschitz, std::vector<double> jumps, bool monotone)
      : kind_(kind),
        name_(std::move(name)),
        profile_(profile),
        lipschitz_(lipschitz),
        jumps_(std::move(jumps)),
        monotone_(monotone) {}

  ActivationKind kind_;
  std::string name_;
  VariationProfile profile_;
  std::optional<double> lipschitz_;
  std::vector<double> jumps_;
  bool monotone_;
  std::shared_ptr<std::function<double(double)>> fn_;
};

struct HiddenLayer {
  Eigen::MatrixXd weights;  // rows = neurons, cols = fan-in
  Eigen::VectorXd bias;
};

struct OutputNeuron {
  Eigen::VectorXd weights;
  double bias = 0.0;
};

// Feed-forward network: hidden layers apply an affine map followed by the
// shared activation; the single output neuron is affine.
class DenseNetwork {
 public:
  DenseNetwork(std::size_t input_dim, std::vector<HiddenLayer> layers, Activation activation,
               OutputNeuron output)
      : input_dim_(input_dim),
        layers_(std::move(layers)),
        activation_(std::move(activation)),
        output_(std::move(output)) {
    std::size_t fan_in = input_dim_;
    for (std::size_t k = 0; k < layers_.size(); ++k) {
      const auto& l = layers_[k];
      detail::require_dim(static_cast<std::size_t>(l.weights.cols()) == fan_in,
                          "layer " + std::to_string(k) + ": fan-in mismatch");
      detail::require_dim(l.bias.size() == l.weights.rows(),
                          "layer " + std::to_string(k) + ": bias length mismatch");
      fan_in = static_cast<std::size_t>(l.weights.rows());
    }
    detail::require_dim(static_cast<std::size_t>(output_.weights.size()) == fan_in,
                        "output neuron: fan-in mismatch");
  }

  // Depth-2 network with one dead hidden unit; outputs `value` everywhere.
  static DenseNetwork constant(std::size_t input_dim, double value,
                               Activation activation = Activation::relu()) {
    HiddenLayer h{Eigen::MatrixXd::Zero(1, static_cast<Eigen::Index>(input_dim)),
                  Eigen::VectorXd::Zero(1)};
    return DenseNetwork(input_dim, {std::move(h)}, std::move(activation),
                        OutputNeuron{Eigen::VectorXd::Zero(1), value});
  }

  std::size_t input_dim() const { return input_dim_; }
  std::size_t depth() const { return layers_.size() + 1; }
  const std::vector<HiddenLayer>& layers() const { return layers_; }
  const Activation& activation() const { return activation_; }
  const OutputNeuron& output() const { return output_; }

  std::vector<std::size_t> widths() const {
    std::vector<std::size_t> w;
    for (const auto& l : layers_) w.push_back(static_cast<std::size_t>(l.weights.rows()));
    return w;
  }

  std::size_t width() const {
    std::size_t w = 0;
    for (auto x : widths()) w = std::max(w, x);
    return w;
  }

  // Largest |entry| over weights and biases of hidden layer k; k == number of
  // hidden layers selects the output neuron.
  double layer_max_weight(std::size_t k) const {
    if (k == layers_.size()) {
      double m = std::abs(output_.bias);
      if (output_.weights.size() > 0) m = std::max(m, output_.weights.cwiseAbs().maxCoeff());
      return m;
    }
    const auto& l = layers_.at(k);
    double m = 0.0;
    if (l.weights.size() > 0) m = l.weights.cwiseAbs().maxCoeff();
    if (l.bias.size() > 0) m = std::max(m, l.bias.cwiseAbs().maxCoeff());
    return m;
  }

  double max_weight() const {
    double m = 0.0;
    for (std::size_t k = 0; k <= layers_.size(); ++k) m = std::max(m, layer_max_weight(k));
    return m;
  }

  double evaluate(const Eigen::VectorXd& x) const {
    detail::require_dim(static_cast<std::size_t>(x.size()) == input_dim_,
                        "evaluate: input has " + std::to_string(x.size()) + " entries, expected " +
                            std::to_string(input_dim_));
    Eigen::VectorXd h = x;
    for (const auto& l : layers_) {
      Eigen::VectorXd pre = l.weights * h + l.bias;
      h = pre.unaryExpr([this](double t) { return activation_(t); });
    }
    return output_.weights.dot(h) + output_.bias;
  }

  double evaluate(std::span<const double> x) const {
    return evaluate(Eigen::Map<const Eigen::VectorXd>(x.data(), static_cast<Eigen::Index>(x.size()))
                        .eval());
  }

  // Columns of `inputs` are input points.
  Eigen::VectorXd evaluate_batch(const Eigen::MatrixXd& inputs) const {
    detail::require_dim(static_cast<std::size_t>(inputs.rows()) == input_dim_,
                        "evaluate_batch: input dimension mismatch");
    Eigen::MatrixXd h = inputs;
    for (const auto& l : layers_) {
      Eigen::MatrixXd pre = (l.weights * h).colwise() + l.bias;
      h = pre.unaryExpr([this](double t) { return activation_(t); });
    }
    Eigen::VectorXd out = h.transpose() * output_.weights;
    out.array() += output_.bias;
    return out;
  }

 private:
  std::size_t input_dim_;
  std::vector<HiddenLayer> layers_;
  Activation activation_;
  OutputNeuron output_;
};

// Affine input map x -> P x + offset where each row of P has at most one
// nonzero entry, +1 or -1. Covers permutations, bit flips (x -> 1 - x),
// duplication, and constant assignment.
struct InputMap {
  struct Row {
    std::optional<std::size_t> source;  // caller coordinate; empty = constant
    double sign = 1.0;
    double offset = 0.0;
  };

  std::size_t caller_dim = 0;
  std::vector<Row> rows;

  Eigen::MatrixXd matrix() const {
    Eigen::MatrixXd p = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(rows.size()),
                                              static_cast<Eigen::Index>(caller_dim));
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (rows[r].source) {
        detail::require_dim(*rows[r].source < caller_dim, "InputMap: source out of range");
        p(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(*rows[r].source)) = rows[r].sign;
      }
    }
    return p;
  }

  Eigen::VectorXd offsets() const {
    Eigen::VectorXd b(static_cast<Eigen::Index>(rows.size()));
    for (std::size_t r = 0; r < rows.size(); ++r) b(static_cast<Eigen::Index>(r)) = rows[r].offset;
    return b;
  }

  Eigen::VectorXd apply(const Eigen::VectorXd& x) const { return matrix() * x + offsets(); }
};

// net'(z) = net(z + c). Only first-layer biases change.
inline DenseNetwork absorb_input_shift(const DenseNetwork& net, const Eigen::VectorXd& c) {
  detail::require_dim(static_cast<std::size_t>(c.size()) == net.input_dim(),
                      "absorb_input_shift: shift length mismatch");
  detail::require(net.depth() >= 2, "absorb_input_shift: network has no hidden layer");
  auto layers = net.layers();
  layers[0].bias += layers[0].weights * c;
  return DenseNetwork(net.input_dim(), std::move(layers), net.activation(), net.output());
}

// net'(x) = net(P x + offset). The caller dimension becomes P.cols().
inline DenseNetwork absorb_input_map(const DenseNetwork& net, const Eigen::MatrixXd& p,
                                     const Eigen::VectorXd& offset) {
  detail::require_dim(static_cast<std::size_t>(p.rows()) == net.input_dim(),
                      "absorb_input_map: P rows must equal network input dimension");
  detail::require_dim(offset.size() == p.rows(), "absorb_input_map: offset length mismatch");
  detail::require(net.depth() >= 2, "absorb_input_map: network has no hidden layer");
  auto layers = net.layers();
  layers[0].bias += layers[0].weights * offset;
  layers[0].weights = (layers[0].weights * p).eval();
  return DenseNetwork(static_cast<std::size_t>(p.cols()), std::move(layers), net.activation(),
                      net.output());
}

inline DenseNetwork absorb_input_map(const DenseNetwork& net, const InputMap& map) {
  return absorb_input_map(net, map.matrix(), map.offsets());
}

// Single depth-2 network computing sum_j coeffs[j] * nets[j](x).
inline DenseNetwork average_ensemble(const std::vector<DenseNetwork>& nets,
                                     std::span<const double> coeffs) {
  detail::require(!nets.empty(), "average_ensemble: no networks");
  detail::require_dim(coeffs.size() == nets.size(), "average_ensemble: one coefficient per net");
  const auto& first = nets.front();
  Eigen::Index total = 0;
  for (const auto& n : nets) {
    detail::require(n.depth() == 2, "average_ensemble: all networks must have depth 2");
    detail::require(n.activation() == first.activation(),
                    "average_ensemble: heterogeneous activations");
    detail::require_dim(n.input_dim() == first.input_dim(),
                        "average_ensemble: input dimensions differ");
    total += n.layers()[0].weights.rows();
  }
  HiddenLayer h{Eigen::MatrixXd(total, static_cast<Eigen::Index>(first.input_dim())),
                Eigen::VectorXd(total)};
  OutputNeuron out{Eigen::VectorXd(total), 0.0};
  Eigen::Index row = 0;
  for (std::size_t j = 0; j < nets.size(); ++j) {
    const auto& l = nets[j].layers()[0];
    const auto m = l.weights.rows();
    h.weights.middleRows(row, m) = l.weights;
    h.bias.segment(row, m) = l.bias;
    out.weights.segment(row, m) = coeffs[j] * nets[j].output().weights;
    out.bias += coeffs[j] * nets[j].output().bias;
    row += m;
  }
  return DenseNetwork(first.input_dim(), {std::move(h)}, first.activation(), std::move(out));
}

// Interval bound on the output over the box [lo, hi] (coordinatewise). Needs
// a monotone nondecreasing activation.
inline std::pair<double, double> output_interval(const DenseNetwork& net, const Eigen::VectorXd& lo,
                                                 const Eigen::VectorXd& hi) {
  detail::require(net.activation().monotone(), "output_interval: activation must be monotone");
  detail::require_dim(static_cast<std::size_t>(lo.size()) == net.input_dim() && lo.size() == hi.size(),
                      "output_interval: box dimension mismatch");
  Eigen::VectorXd l = lo, u = hi;
  for (const auto& layer : net.layers()) {
    const Eigen::MatrixXd pos = layer.weights.cwiseMax(0.0);
    const Eigen::MatrixXd neg = layer.weights.cwiseMin(0.0);
    Eigen::VectorXd pl = pos * l + neg * u + layer.bias;
    Eigen::VectorXd pu = pos * u + neg * l + layer.bias;
    l = pl.unaryExpr([&](double t) { return net.activation()(t); });
    u = pu.unaryExpr([&](double t) { return net.activation()(t); });
  }
  const Eigen::VectorXd pos = net.output().weights.cwiseMax(0.0);
  const Eigen::VectorXd neg = net.output().weights.cwiseMin(0.0);
  return {pos.dot(l) + neg.dot(u) + net.output().bias, pos.dot(u) + neg.dot(l) + net.output().bias};
}

// Depth-2 network with every parameter drawn uniformly from [-scale, scale].
inline DenseNetwork random_depth2(std::size_t input_dim, std::size_t width, double scale,
                                  const Activation& act, Rng& rng) {
  detail::require(input_dim >= 1 && width >= 1, "random_depth2: dimensions must be positive");
  detail::require(scale > 0.0, "random_depth2: scale must be positive");
  auto draw = [&] { return scale * (2.0 * uniform01(rng) - 1.0); };
  const auto m = static_cast<Eigen::Index>(width);
  const auto n = static_cast<Eigen::Index>(input_dim);
  HiddenLayer h{Eigen::MatrixXd(m, n), Eigen::VectorXd(m)};
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) h.weights(i, j) = draw();
    h.bias(i) = draw();
  }
  OutputNeuron out{Eigen::VectorXd(m), 0.0};
  for (Eigen::Index i = 0; i < m; ++i) out.weights(i) = draw();
  out.bias = draw();
  return DenseNetwork(input_dim, {std::move(h)}, act, std::move(out));
}

}  // namespace depthsep
