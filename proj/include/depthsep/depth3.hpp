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
#include <functional>
#include <vector>

#include "depthsep/errors.hpp"
#include "depthsep/instance.hpp"
#include "depthsep/network.hpp"

namespace depthsep {

// Clamp ramp: 0 below 5, z - 5 on (5, 6), 1 from 6 on.
inline double reference_g1(double z) {
  if (z <= 5.0) return 0.0;
  if (z < 6.0) return z - 5.0;
  return 1.0;
}

// Unit triangle wave: z mod 1 on even unit intervals, 1 - (z mod 1) on odd.
inline double reference_g2(double z) {
  const double fl = std::floor(z);
  const double frac = z - fl;
  const bool even = std::fmod(std::abs(fl), 2.0) == 0.0;
  return even ? frac : 1.0 - frac;
}

// relu(z) + sum_{k=1}^{d} 2 (-1)^k relu(z - k); maps integers in [0, d] to
// their parity.
inline double parity_gadget(int d, double z) {
  auto relu = [](double t) { return t > 0.0 ? t : 0.0; };
  double acc = relu(z);
  for (int k = 1; k <= d; ++k) acc += 2.0 * (k % 2 == 0 ? 1.0 : -1.0) * relu(z - k);
  return acc;
}

// Depth-3 ReLU network equal to f_d on A_4d.
//
// Hidden layer 1 holds, for each coordinate pair i, the units
//   relu(12 sqrt(d) (x_i + y_i) - 5) and relu(12 sqrt(d) (x_i + y_i) - 6),
// whose difference is AND(round(3 sqrt(d) x_i), round(3 sqrt(d) y_i)) on the
// support. Hidden layer 2 realizes the parity gadget on the sum of those
// differences. The first 2d input coordinates get zero weight.
inline DenseNetwork build_exact_relu(int d) {
  detail::require(d >= 1, "build_exact_relu: d must be >= 1");
  const auto n = static_cast<Eigen::Index>(d);
  const double scale = 12.0 * std::sqrt(static_cast<double>(d));

  HiddenLayer l1{Eigen::MatrixXd::Zero(2 * n, 4 * n), Eigen::VectorXd(2 * n)};
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index r : {2 * i, 2 * i + 1}) {
      l1.weights(r, 2 * n + i) = scale;
      l1.weights(r, 3 * n + i) = scale;
    }
    l1.bias(2 * i) = -5.0;
    l1.bias(2 * i + 1) = -6.0;
  }

  HiddenLayer l2{Eigen::MatrixXd(n + 1, 2 * n), Eigen::VectorXd(n + 1)};
  OutputNeuron out{Eigen::VectorXd(n + 1), 0.0};
  for (Eigen::Index k = 0; k <= n; ++k) {
    for (Eigen::Index i = 0; i < n; ++i) {
      l2.weights(k, 2 * i) = 1.0;
      l2.weights(k, 2 * i + 1) = -1.0;
    }
    l2.bias(k) = -static_cast<double>(k);
    out.weights(k) = k == 0 ? 1.0 : 2.0 * (k % 2 == 0 ? 1.0 : -1.0);
  }
  return DenseNetwork(static_cast<std::size_t>(4 * d), {std::move(l1), std::move(l2)},
                      Activation::relu(), std::move(out));
}

// Request for a depth-2 approximation of an L-Lipschitz scalar function on
// [-radius, radius] to sup error `accuracy`.
struct Approx1DSpec {
  std::function<double(double)> target;
  double radius = 1.0;
  double lipschitz = 1.0;
  double accuracy = 0.1;

  void validate() const {
    detail::require(static_cast<bool>(target), "Approx1DSpec: missing target");
    detail::require(radius > 0.0, "Approx1DSpec: radius must be positive");
    detail::require(lipschitz >= 0.0, "Approx1DSpec: Lipschitz constant must be nonnegative");
    detail::require(accuracy > 0.0, "Approx1DSpec: accuracy must be positive");
  }
};

// Any routine returning a depth-2, single-input network h with
// sup_{[-R,R]} |target - h| <= accuracy.
using Approximator1D = std::function<DenseNetwork(const Approx1DSpec&)>;

// Piecewise-linear interpolant on a uniform knot grid of spacing at most
// accuracy / L, written as f(-R) + sum_k (s_k - s_{k-1}) relu(x - x_k).
// Interpolation error is at most L * spacing / 2.
inline DenseNetwork relu_1d_approximator(const Approx1DSpec& spec) {
  spec.validate();
  const double r = spec.radius;
  const auto segments = static_cast<Eigen::Index>(
      std::max(1.0, std::ceil(2.0 * r * spec.lipschitz / spec.accuracy)));
  const double h = 2.0 * r / static_cast<double>(segments);

  HiddenLayer layer{Eigen::MatrixXd::Ones(segments, 1), Eigen::VectorXd(segments)};
  OutputNeuron out{Eigen::VectorXd(segments), spec.target(-r)};
  double prev_slope = 0.0;
  for (Eigen::Index k = 0; k < segments; ++k) {
    const double x0 = -r + h * static_cast<double>(k);
    const double x1 = k + 1 == segments ? r : x0 + h;
    const double slope = (spec.target(x1) - spec.target(x0)) / (x1 - x0);
    layer.bias(k) = -x0;
    out.weights(k) = slope - prev_slope;
    prev_slope = slope;
  }
  return DenseNetwork(1, {std::move(layer)}, Activation::relu(), std::move(out));
}

// Width and weight bookkeeping of a generic depth-3 construction.
struct Depth3Accounting {
  int d = 0;
  double epsilon = 0.0;
  bool constant = false;
  std::size_t h1_width = 0;
  std::size_t h2_width = 0;
  std::vector<std::size_t> widths;
  std::vector<double> max_weights;  // per hidden layer, then output

  // Smallest c with widths[0] <= c d^2 / eps and layer-2 weight <= c d / eps^2.
  double width_constant() const {
    return constant ? 0.0 : static_cast<double>(widths[0]) * epsilon / (double(d) * d);
  }
  double weight_constant() const {
    return constant ? 0.0 : max_weights[1] * epsilon * epsilon / double(d);
  }
};

struct Depth3Build {
  DenseNetwork net;
  Depth3Accounting accounting;
};

inline Depth3Accounting account(const DenseNetwork& net, int d, double eps) {
  Depth3Accounting a;
  a.d = d;
  a.epsilon = eps;
  a.widths = net.widths();
  for (std::size_t k = 0; k <= net.layers().size(); ++k) a.max_weights.push_back(net.layer_max_weight(k));
  return a;
}

// Depth-3 network within eps of f_d on A_4d, composed as
//   h2( sum_i h1(12 sqrt(d) (x_i + y_i)) )
// where h1 approximates g1 to eps/(2d) on [-8, 8] and h2 approximates g2 to
// eps/2 on [-2d-1, 2d+1]. The output neuron of each h1 copy is folded into
// the second hidden layer. For eps > 1/2 the constant 1/2 already suffices.
inline Depth3Build build_generic(int d, double eps, const Approximator1D& approximator) {
  detail::require(d >= 1, "build_generic: d must be >= 1");
  detail::require(eps > 0.0, "build_generic: epsilon must be positive");
  const auto n = static_cast<Eigen::Index>(d);

  if (eps > 0.5) {
    HiddenLayer l1{Eigen::MatrixXd::Zero(1, 4 * n), Eigen::VectorXd::Zero(1)};
    HiddenLayer l2{Eigen::MatrixXd::Zero(1, 1), Eigen::VectorXd::Zero(1)};
    DenseNetwork net(static_cast<std::size_t>(4 * d), {std::move(l1), std::move(l2)},
                     Activation::relu(), OutputNeuron{Eigen::VectorXd::Zero(1), 0.5});
    auto acc = account(net, d, eps);
    acc.constant = true;
    return {std::move(net), std::move(acc)};
  }

  const DenseNetwork h1 =
      approximator(Approx1DSpec{reference_g1, 8.0, 1.0, eps / (2.0 * d)});
  const DenseNetwork h2 =
      approximator(Approx1DSpec{reference_g2, 2.0 * d + 1.0, 1.0, eps / 2.0});
  for (const auto* h : {&h1, &h2}) {
    detail::require(h->depth() == 2 && h->input_dim() == 1,
                    "build_generic: approximator must return a depth-2 scalar network");
  }
  detail::require(h1.activation() == h2.activation(),
                  "build_generic: approximations use different activations");

  const auto& a1 = h1.layers()[0];
  const auto& a2 = h2.layers()[0];
  const Eigen::Index w1 = a1.weights.rows();
  const Eigen::Index w2 = a2.weights.rows();
  const double scale = 12.0 * std::sqrt(static_cast<double>(d));

  HiddenLayer l1{Eigen::MatrixXd::Zero(n * w1, 4 * n), Eigen::VectorXd(n * w1)};
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < w1; ++j) {
      const Eigen::Index r = i * w1 + j;
      l1.weights(r, 2 * n + i) = scale * a1.weights(j, 0);
      l1.weights(r, 3 * n + i) = scale * a1.weights(j, 0);
      l1.bias(r) = a1.bias(j);
    }
  }

  // Sum over pairs of h1 outputs is d * out1.bias + sum_{i,j} out1.w_j u_{ij}.
  HiddenLayer l2{Eigen::MatrixXd(w2, n * w1), Eigen::VectorXd(w2)};
  for (Eigen::Index k = 0; k < w2; ++k) {
    const double beta = a2.weights(k, 0);
    for (Eigen::Index i = 0; i < n; ++i)
      l2.weights.block(k, i * w1, 1, w1) = beta * h1.output().weights.transpose();
    l2.bias(k) = a2.bias(k) + beta * static_cast<double>(d) * h1.output().bias;
  }

  DenseNetwork net(static_cast<std::size_t>(4 * d), {std::move(l1), std::move(l2)},
                   h1.activation(), h2.output());
  auto acc = account(net, d, eps);
  acc.h1_width = static_cast<std::size_t>(w1);
  acc.h2_width = static_cast<std::size_t>(w2);
  return {std::move(net), std::move(acc)};
}

// max |net - f_d| over every component center plus `n` samples of U(A_4d).
inline double measured_sup_error(const DenseNetwork& net, const InstanceSpec& spec, std::size_t n,
                                 std::uint64_t seed) {
  detail::require_dim(net.input_dim() == spec.ambient_dim(),
                      "measured_sup_error: network input dimension must be 4d");
  const auto dim = static_cast<Eigen::Index>(spec.ambient_dim());
  double worst = 0.0;
  auto flush = [&](const Eigen::MatrixXd& pts, const std::vector<int>& labels) {
    const Eigen::VectorXd out = net.evaluate_batch(pts);
    for (Eigen::Index k = 0; k < out.size(); ++k)
      worst = std::max(worst, std::abs(out(k) - labels[static_cast<std::size_t>(k)]));
  };

  constexpr std::size_t kChunk = 2048;
  std::vector<int> labels;
  Eigen::MatrixXd pts(dim, 0);
  auto push = [&](std::span<const double> p, int label, std::size_t cap) {
    if (pts.cols() == 0) pts.resize(dim, static_cast<Eigen::Index>(cap));
    pts.col(static_cast<Eigen::Index>(labels.size())) =
        Eigen::Map<const Eigen::VectorXd>(p.data(), dim);
    labels.push_back(label);
    if (labels.size() == cap) {
      flush(pts, labels);
      labels.clear();
      pts.resize(dim, 0);
    }
  };
  auto drain = [&] {
    if (!labels.empty()) {
      flush(pts.leftCols(static_cast<Eigen::Index>(labels.size())), labels);
      labels.clear();
      pts.resize(dim, 0);
    }
  };

  for (std::size_t i = 0; i < spec.num_components(); ++i) {
    const auto c = spec.center(i);
    push(c, eval_f(spec.d, c), kChunk);
  }
  drain();
  for (const auto& s : sample_a4d(spec, n, seed)) push(s.point, s.label, kChunk);
  drain();
  return worst;
}

}  // namespace depthsep
