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

#include "depthsep/network.hpp"
#include "depthsep/training.hpp"

namespace depthsep::testing {

// Central differences of the batch loss in every parameter, laid out like
// Depth2Gradient.
inline Depth2Gradient numeric_gradient(const DenseNetwork& net, const Eigen::MatrixXd& pts,
                                       const Eigen::VectorXd& targets, double h) {
  auto loss_with = [&](auto&& edit) {
    auto layers = net.layers();
    auto out = net.output();
    edit(layers[0], out);
    return loss_and_gradient(DenseNetwork(net.input_dim(), layers, net.activation(), out), pts, targets)
        .loss;
  };
  const auto& l = net.layers()[0];
  Depth2Gradient g{Eigen::MatrixXd(l.weights.rows(), l.weights.cols()), Eigen::VectorXd(l.bias.size()),
                   Eigen::VectorXd(net.output().weights.size()), 0.0};
  for (Eigen::Index i = 0; i < l.weights.rows(); ++i)
    for (Eigen::Index j = 0; j < l.weights.cols(); ++j) {
      const double p = loss_with([&](HiddenLayer& hl, OutputNeuron&) { hl.weights(i, j) += h; });
      const double m = loss_with([&](HiddenLayer& hl, OutputNeuron&) { hl.weights(i, j) -= h; });
      g.weights(i, j) = (p - m) / (2 * h);
    }
  for (Eigen::Index i = 0; i < l.bias.size(); ++i) {
    const double p = loss_with([&](HiddenLayer& hl, OutputNeuron&) { hl.bias(i) += h; });
    const double m = loss_with([&](HiddenLayer& hl, OutputNeuron&) { hl.bias(i) -= h; });
    g.bias(i) = (p - m) / (2 * h);
  }
  for (Eigen::Index i = 0; i < g.out_weights.size(); ++i) {
    const double p = loss_with([&](HiddenLayer&, OutputNeuron& o) { o.weights(i) += h; });
    const double m = loss_with([&](HiddenLayer&, OutputNeuron& o) { o.weights(i) -= h; });
    g.out_weights(i) = (p - m) / (2 * h);
  }
  const double p = loss_with([&](HiddenLayer&, OutputNeuron& o) { o.bias += h; });
  const double m = loss_with([&](HiddenLayer&, OutputNeuron& o) { o.bias -= h; });
  g.out_bias = (p - m) / (2 * h);
  return g;
}

inline Eigen::VectorXd flatten(const Depth2Gradient& g) {
  Eigen::VectorXd v(g.weights.size() + g.bias.size() + g.out_weights.size() + 1);
  v << g.weights.reshaped(), g.bias, g.out_weights, g.out_bias;
  return v;
}

// Relative error of two gradients in the Euclidean norm.
inline double relative_error(const Depth2Gradient& a, const Depth2Gradient& b) {
  const Eigen::VectorXd u = flatten(a), v = flatten(b);
  return (u - v).norm() / std::max({u.norm(), v.norm(), 1e-300});
}

}  // namespace depthsep::testing
