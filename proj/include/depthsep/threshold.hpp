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
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "depthsep/depth3.hpp"
#include "depthsep/errors.hpp"
#include "depthsep/network.hpp"

namespace depthsep {

// Piecewise-constant approximation: level levels[i] holds on
// [breakpoints[i], breakpoints[i+1]), with the value at a breakpoint decided
// by the jump sign (+1: new level, -1: previous level).
struct SegmentPlan {
  std::vector<double> breakpoints;
  std::vector<double> levels;
  std::vector<int> signs;
  double tolerance = 0.0;
  double radius = 0.0;

  std::size_t size() const { return breakpoints.size(); }

  double evaluate(double x) const {
    double y = 0.0;
    for (std::size_t i = 0; i < breakpoints.size(); ++i) {
      const bool on = signs[i] > 0 ? x >= breakpoints[i] : x > breakpoints[i];
      if (!on) break;
      y = levels[i];
    }
    return y;
  }
};

namespace detail {

inline int jump_sign(double delta) { return delta < 0.0 ? -1 : 1; }

// Left-to-right greedy scan for an L-Lipschitz target. A segment grows while
// the range of target values on its grid points stays within 2 * 7/8 delta
// and takes the midpoint of that range as its level; the first violating grid
// cell is bisected down to delta / (100 L). Between accepted points the
// target moves by at most delta / 8, so the plan is within delta on the
// whole interval.
inline SegmentPlan scan_lipschitz(const std::function<double(double)>& f, double radius,
                                  double delta, double lipschitz) {
  SegmentPlan plan;
  plan.tolerance = delta;
  plan.radius = radius;
  double lo_v = f(-radius), hi_v = lo_v;
  plan.breakpoints.push_back(-radius);
  auto close_segment = [&] {
    const double level = 0.5 * (lo_v + hi_v);
    const double prev = plan.levels.empty() ? 0.0 : plan.levels.back();
    plan.levels.push_back(level);
    plan.signs.push_back(jump_sign(level - prev));
  };
  if (lipschitz <= 0.0) {
    close_segment();
    return plan;
  }

  const double span = 2.0 * 0.875 * delta;
  const double step = delta / (4.0 * lipschitz);
  const double resolution = delta / (100.0 * lipschitz);
  const auto cells = static_cast<std::uint64_t>(std::ceil(2.0 * radius / step));
  auto fits = [&](double v) { return std::max(hi_v, v) - std::min(lo_v, v) <= span; };
  double last_ok = -radius;
  for (std::uint64_t k = 1; k <= cells; ++k) {
    const double gx = k == cells ? radius : -radius + step * static_cast<double>(k);
    const double gv = f(gx);
    if (fits(gv)) {
      lo_v = std::min(lo_v, gv);
      hi_v = std::max(hi_v, gv);
      last_ok = gx;
      continue;
    }
    double lo = last_ok, hi = gx;
    while (hi - lo > resolution) {
      const double mid = 0.5 * (lo + hi);
      const double mv = f(mid);
      if (fits(mv)) {
        lo_v = std::min(lo_v, mv);
        hi_v = std::max(hi_v, mv);
        lo = mid;
      } else {
        hi = mid;
      }
    }
    close_segment();
    const double nv = f(hi);
    plan.breakpoints.push_back(hi);
    lo_v = std::min(nv, gv);
    hi_v = std::max(nv, gv);
    last_ok = gx;
  }
  close_segment();
  return plan;
}

// Exact plan for a piecewise-constant target with the given jump locations.
inline SegmentPlan plan_from_jumps(const std::function<double(double)>& f, double radius,
                                   std::vector<double> jumps) {
  SegmentPlan plan;
  plan.radius = radius;
  std::sort(jumps.begin(), jumps.end());
  jumps.erase(std::unique(jumps.begin(), jumps.end()), jumps.end());
  double level = f(-radius);
  plan.breakpoints.push_back(-radius);
  plan.levels.push_back(level);
  plan.signs.push_back(1);
  for (double j : jumps) {
    if (j <= -radius || j > radius) continue;
    const double at = f(j);
    // Value at the jump itself selects which side is closed.
    if (at != level) {
      plan.breakpoints.push_back(j);
      plan.levels.push_back(at);
      plan.signs.push_back(1);
      level = at;
    }
    const double right = f(std::nextafter(j, radius + 1.0));
    if (right != level) {
      plan.breakpoints.push_back(j);
      plan.levels.push_back(right);
      plan.signs.push_back(-1);
      level = right;
    }
  }
  return plan;
}

}  // namespace detail

// Depth-2 threshold network realizing a SegmentPlan exactly:
//   sum_i v_i thr(w_i x + b_i) + b_0,  w_i = xi_i, b_i = 0.5 - xi_i x_i,
//   v_i = xi_i (y_i - y_{i-1}),        b_0 = -0.5 sum_i (xi_i - 1)(y_i - y_{i-1}),
// with y_0 = 0 and thr(t) = [t >= 0.5].
inline DenseNetwork realize_plan(const SegmentPlan& plan) {
  std::vector<double> w, b, v;
  double b0 = 0.0;
  double prev = 0.0;
  for (std::size_t i = 0; i < plan.size(); ++i) {
    const double delta = plan.levels[i] - prev;
    prev = plan.levels[i];
    if (delta == 0.0) continue;
    const double xi = plan.signs[i];
    w.push_back(xi);
    b.push_back(0.5 - xi * plan.breakpoints[i]);
    v.push_back(xi * delta);
    b0 += -0.5 * (xi - 1.0) * delta;
  }
  if (w.empty()) {
    w.push_back(0.0);
    b.push_back(0.0);
    v.push_back(0.0);
  }
  const auto m = static_cast<Eigen::Index>(w.size());
  HiddenLayer layer{Eigen::Map<Eigen::MatrixXd>(w.data(), m, 1),
                    Eigen::Map<Eigen::VectorXd>(b.data(), m)};
  return DenseNetwork(1, {std::move(layer)}, Activation::threshold(),
                      OutputNeuron{Eigen::Map<Eigen::VectorXd>(v.data(), m), b0});
}

struct ScalarCompilation {
  DenseNetwork net;
  SegmentPlan plan;
};

// Depth-2 threshold network within delta of sigma on [-R, R].
inline ScalarCompilation compile_scalar(const Activation& sigma, double radius, double delta) {
  detail::require(radius > 0.0, "compile_scalar: radius must be positive");
  detail::require(delta > 0.0, "compile_scalar: delta must be positive");
  auto fn = [&sigma](double x) { return sigma(x); };
  SegmentPlan plan;
  if (sigma.lipschitz()) {
    plan = detail::scan_lipschitz(fn, radius, delta, *sigma.lipschitz());
  } else if (!sigma.jumps().empty()) {
    plan = detail::plan_from_jumps(fn, radius, sigma.jumps());
    plan.tolerance = delta;
  } else {
    throw InvalidArgument("compile_scalar: activation '" + sigma.name() +
                          "' declares neither a Lipschitz constant nor its jumps");
  }
  const auto& prof = sigma.profile();
  const double bound = 2.0 * prof.c_sigma * std::pow(1.0 + 2.0 * radius, prof.alpha_sigma) / delta;
  if (static_cast<double>(plan.size() - 1) > bound)
    throw BudgetExceeded("compile_scalar: " + std::to_string(plan.size()) +
                         " segments exceed the variation budget for '" + sigma.name() + "'");
  return {realize_plan(plan), std::move(plan)};
}

// Assumption-style approximator backed by threshold units, for build_generic.
inline DenseNetwork threshold_1d_approximator(const Approx1DSpec& spec) {
  spec.validate();
  return realize_plan(detail::scan_lipschitz(spec.target, spec.radius, spec.accuracy, spec.lipschitz));
}

// max |net(x) - f(x)| over `points` equally spaced points of [-R, R].
inline double certify_scalar(const DenseNetwork& net, const std::function<double(double)>& f,
                             double radius, std::size_t points) {
  detail::require(points >= 2, "certify_scalar: need at least two grid points");
  Eigen::MatrixXd xs(1, static_cast<Eigen::Index>(points));
  for (std::size_t k = 0; k < points; ++k)
    xs(0, static_cast<Eigen::Index>(k)) =
        k + 1 == points ? radius : -radius + 2.0 * radius * static_cast<double>(k) / double(points - 1);
  const Eigen::VectorXd out = net.evaluate_batch(xs);
  double worst = 0.0;
  for (Eigen::Index k = 0; k < out.size(); ++k) worst = std::max(worst, std::abs(out(k) - f(xs(0, k))));
  return worst;
}

struct CompileOptions {
  // Pre-activation range R; defaults to (d + 1) C.
  std::optional<double> preactivation_range;
  // Per-neuron accuracy; defaults to delta / (m C).
  std::optional<double> scalar_delta;
};

struct NetworkCompilation {
  DenseNetwork net;
  SegmentPlan plan;
  double preactivation_range = 0.0;
  double scalar_delta = 0.0;
  std::size_t source_width = 0;
  double source_max_weight = 0.0;
};

// Replaces every sigma-unit of a depth-2 network by its threshold
// compilation and merges the pieces into one depth-2 threshold network.
inline NetworkCompilation compile_network(const DenseNetwork& net, double delta,
                                          const CompileOptions& opts = {}) {
  detail::require(net.depth() == 2, "compile_network: only depth-2 networks are supported");
  detail::require(delta > 0.0, "compile_network: delta must be positive");
  const auto& hidden = net.layers()[0];
  const auto m = static_cast<std::size_t>(hidden.weights.rows());
  const double c = net.max_weight();
  const auto d = static_cast<double>(net.input_dim());

  NetworkCompilation out{net, {}, 0.0, 0.0, m, c};
  out.preactivation_range = opts.preactivation_range.value_or((d + 1.0) * std::max(c, 1e-300));
  out.scalar_delta = opts.scalar_delta.value_or(c > 0.0 ? delta / (static_cast<double>(m) * c) : delta);

  auto scalar = compile_scalar(net.activation(), out.preactivation_range, out.scalar_delta);
  const auto& s = scalar.net.layers()[0];
  const auto terms = s.weights.rows();
  const auto mm = static_cast<Eigen::Index>(m);

  HiddenLayer layer{Eigen::MatrixXd(mm * terms, hidden.weights.cols()), Eigen::VectorXd(mm * terms)};
  OutputNeuron o{Eigen::VectorXd(mm * terms), net.output().bias};
  for (Eigen::Index i = 0; i < mm; ++i) {
    const double vi = net.output().weights(i);
    for (Eigen::Index k = 0; k < terms; ++k) {
      const Eigen::Index r = i * terms + k;
      layer.weights.row(r) = s.weights(k, 0) * hidden.weights.row(i);
      layer.bias(r) = s.weights(k, 0) * hidden.bias(i) + s.bias(k);
      o.weights(r) = vi * scalar.net.output().weights(k);
    }
    o.bias += vi * scalar.net.output().bias;
  }
  out.net = DenseNetwork(net.input_dim(), {std::move(layer)}, Activation::threshold(), std::move(o));
  out.plan = std::move(scalar.plan);
  return out;
}

// All points of {0,1}^n as columns (n <= 20).
inline Eigen::MatrixXd boolean_cube(std::size_t n) {
  detail::require(n <= 20, "boolean_cube: dimension too large to enumerate");
  const auto count = static_cast<Eigen::Index>(std::size_t{1} << n);
  Eigen::MatrixXd pts(static_cast<Eigen::Index>(n), count);
  for (Eigen::Index c = 0; c < count; ++c)
    for (std::size_t j = 0; j < n; ++j) pts(static_cast<Eigen::Index>(j), c) = double((c >> j) & 1);
  return pts;
}

// max over {0,1}^n of |a(x) - b(x)|: exhaustive for n <= 12, otherwise over
// `samples` random cube points.
inline double max_error_on_cube(const DenseNetwork& a, const DenseNetwork& b,
                                std::uint64_t seed = 0, std::size_t samples = 1 << 14) {
  detail::require_dim(a.input_dim() == b.input_dim(), "max_error_on_cube: input dimensions differ");
  const std::size_t n = a.input_dim();
  Eigen::MatrixXd pts;
  if (n <= 12) {
    pts = boolean_cube(n);
  } else {
    Rng rng = derive_rng(seed, 0x63756265ULL);
    pts.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(samples));
    for (Eigen::Index c = 0; c < pts.cols(); ++c)
      for (Eigen::Index j = 0; j < pts.rows(); ++j) pts(j, c) = random_bit(rng);
  }
  double worst = 0.0;
  constexpr Eigen::Index kChunk = 512;
  for (Eigen::Index start = 0; start < pts.cols(); start += kChunk) {
    const auto len = std::min(kChunk, pts.cols() - start);
    const Eigen::MatrixXd block = pts.middleCols(start, len);
    worst = std::max(worst, (a.evaluate_batch(block) - b.evaluate_batch(block)).cwiseAbs().maxCoeff());
  }
  return worst;
}

// Threshold network whose output neuron is also thresholded.
class ThresholdCircuit {
 public:
  explicit ThresholdCircuit(DenseNetwork base) : base_(std::move(base)) {
    detail::require(base_.activation().kind() == ActivationKind::threshold,
                    "ThresholdCircuit: base network must use the threshold activation");
  }

  const DenseNetwork& base() const { return base_; }
  bool output_threshold() const { return true; }

  int evaluate(const Eigen::VectorXd& x) const { return base_.evaluate(x) >= 0.5 ? 1 : 0; }

 private:
  DenseNetwork base_;
};

inline ThresholdCircuit to_circuit(const DenseNetwork& net) { return ThresholdCircuit(net); }

}  // namespace depthsep
