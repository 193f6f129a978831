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

#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <vector>

#include "depthsep/errors.hpp"
#include "depthsep/io.hpp"
#include "depthsep/network.hpp"
#include "depthsep/random.hpp"

namespace ds = depthsep;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

ds::DenseNetwork single_unit(const ds::Activation& act) {
  ds::HiddenLayer h{MatrixXd::Constant(1, 1, 1.0), VectorXd::Zero(1)};
  return ds::DenseNetwork(1, {h}, act, ds::OutputNeuron{VectorXd::Constant(1, 1.0), 0.0});
}

VectorXd random_point(std::size_t n, ds::Rng& rng, double scale = 1.0) {
  VectorXd x(static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = scale * (2.0 * ds::uniform01(rng) - 1.0);
  return x;
}

ds::DenseNetwork random_deep(std::size_t n, ds::Rng& rng) {
  std::vector<ds::HiddenLayer> layers;
  std::size_t fan_in = n;
  for (std::size_t w : {5u, 3u}) {
    ds::HiddenLayer l{MatrixXd(w, fan_in), VectorXd(w)};
    for (Eigen::Index i = 0; i < l.weights.size(); ++i) l.weights.data()[i] = ds::standard_normal(rng);
    for (Eigen::Index i = 0; i < l.bias.size(); ++i) l.bias(i) = ds::standard_normal(rng);
    layers.push_back(l);
    fan_in = w;
  }
  ds::OutputNeuron out{VectorXd::Random(static_cast<Eigen::Index>(fan_in)), 0.25};
  return ds::DenseNetwork(n, layers, ds::Activation::relu(), out);
}

}  // namespace

TEST(Activation, ThresholdFiresAtOneHalf) {
  const auto t = ds::Activation::threshold();
  EXPECT_EQ(t(0.5), 1.0);
  EXPECT_EQ(t(0.4999999), 0.0);
  EXPECT_EQ(t(-3.0), 0.0);
}

TEST(Activation, FromNameRoundTripsBuiltins) {
  for (const char* n : {"relu", "threshold", "sigmoid"}) EXPECT_EQ(ds::Activation::from_name(n).name(), n);
  EXPECT_THROW(ds::Activation::from_name("tanh"), ds::InvalidArgument);
}

TEST(Evaluate, SingleUnitHandValues) {
  const auto relu = single_unit(ds::Activation::relu());
  EXPECT_EQ(relu.evaluate(VectorXd::Constant(1, 2.0)), 2.0);
  EXPECT_EQ(relu.evaluate(VectorXd::Constant(1, -1.0)), 0.0);
  EXPECT_EQ(single_unit(ds::Activation::threshold()).evaluate(VectorXd::Constant(1, 0.5)), 1.0);
}

TEST(Evaluate, DimensionMismatchThrows) {
  const auto net = single_unit(ds::Activation::relu());
  EXPECT_THROW(net.evaluate(VectorXd::Zero(2)), ds::DimensionError);
  EXPECT_THROW(ds::DenseNetwork(2, {ds::HiddenLayer{MatrixXd::Zero(1, 3), VectorXd::Zero(1)}},
                                ds::Activation::relu(), ds::OutputNeuron{VectorXd::Zero(1), 0.0}),
               ds::DimensionError);
}

TEST(Evaluate, BatchMatchesPointwise) {
  ds::Rng rng = ds::derive_rng(3, 0);
  const auto net = random_deep(4, rng);
  MatrixXd pts(4, 50);
  for (Eigen::Index c = 0; c < pts.cols(); ++c) pts.col(c) = random_point(4, rng);
  const VectorXd batch = net.evaluate_batch(pts);
  for (Eigen::Index c = 0; c < pts.cols(); ++c)
    EXPECT_NEAR(batch(c), net.evaluate(VectorXd(pts.col(c))), 1e-12);
}

TEST(Shape, DepthWidthAndMaxWeight) {
  ds::Rng rng = ds::derive_rng(4, 0);
  const auto net = random_deep(3, rng);
  EXPECT_EQ(net.depth(), 3u);
  EXPECT_EQ(net.widths(), (std::vector<std::size_t>{5, 3}));
  EXPECT_EQ(net.width(), 5u);
  double m = std::abs(net.output().bias);
  for (const auto& l : net.layers())
    m = std::max({m, l.weights.cwiseAbs().maxCoeff(), l.bias.cwiseAbs().maxCoeff()});
  m = std::max(m, net.output().weights.cwiseAbs().maxCoeff());
  EXPECT_EQ(net.max_weight(), m);
}

TEST(AbsorbShift, ZeroShiftIsIdentity) {
  ds::Rng rng = ds::derive_rng(5, 0);
  const auto net = ds::random_depth2(4, 8, 2.0, ds::Activation::relu(), rng);
  const auto same = ds::absorb_input_shift(net, VectorXd::Zero(4));
  EXPECT_EQ(same.layers()[0].weights, net.layers()[0].weights);
  EXPECT_EQ(same.layers()[0].bias, net.layers()[0].bias);
}

TEST(AbsorbShift, MatchesShiftedEvaluationAndWeightBound) {
  ds::Rng rng = ds::derive_rng(6, 0);
  const auto net = ds::random_depth2(4, 8, 2.0, ds::Activation::relu(), rng);
  const VectorXd c = random_point(4, rng, 3.0);
  const auto shifted = ds::absorb_input_shift(net, c);
  EXPECT_EQ(shifted.widths(), net.widths());
  EXPECT_LE(shifted.max_weight(), net.max_weight() * (1.0 + c.lpNorm<1>()));
  for (int t = 0; t < 10000; ++t) {
    const VectorXd z = random_point(4, rng);
    ASSERT_NEAR(shifted.evaluate(z), net.evaluate(VectorXd(z + c)), 1e-12);
  }
}

TEST(AbsorbMap, IdentitySwapAndFlip) {
  ds::Rng rng = ds::derive_rng(7, 0);
  const auto net = ds::random_depth2(2, 6, 2.0, ds::Activation::relu(), rng);
  const auto id = ds::absorb_input_map(net, MatrixXd::Identity(2, 2), VectorXd::Zero(2));
  EXPECT_EQ(id.layers()[0].weights, net.layers()[0].weights);

  ds::InputMap swap{2, {{1, 1.0, 0.0}, {0, 1.0, 0.0}}};
  ds::InputMap flip{2, {{0, -1.0, 1.0}, {1, 1.0, 0.0}}};
  const auto swapped = ds::absorb_input_map(net, swap);
  const auto flipped = ds::absorb_input_map(net, flip);
  EXPECT_EQ(swapped.depth(), net.depth());
  EXPECT_EQ(flipped.widths(), net.widths());
  for (int t = 0; t < 1000; ++t) {
    const VectorXd x = random_point(2, rng);
    ASSERT_NEAR(swapped.evaluate(x), net.evaluate(VectorXd{{x(1), x(0)}}), 1e-12);
    ASSERT_NEAR(flipped.evaluate(x), net.evaluate(VectorXd{{1.0 - x(0), x(1)}}), 1e-12);
  }
}

TEST(AbsorbMap, ConstantRowsAndDuplication) {
  ds::Rng rng = ds::derive_rng(8, 0);
  const auto net = ds::random_depth2(4, 5, 1.0, ds::Activation::relu(), rng);
  ds::InputMap map{2, {{0, 1.0, 0.0}, {std::nullopt, 1.0, 1.0}, {0, -1.0, 1.0}, {1, 1.0, 0.0}}};
  const auto mapped = ds::absorb_input_map(net, map);
  EXPECT_EQ(mapped.input_dim(), 2u);
  for (int t = 0; t < 1000; ++t) {
    const VectorXd x = random_point(2, rng);
    ASSERT_NEAR(mapped.evaluate(x), net.evaluate(VectorXd{{x(0), 1.0, 1.0 - x(0), x(1)}}), 1e-12);
  }
}

TEST(AverageEnsemble, SingleAndDuplicatedNets) {
  ds::Rng rng = ds::derive_rng(9, 0);
  const auto net = ds::random_depth2(3, 4, 2.0, ds::Activation::relu(), rng);
  const std::vector<double> one{1.0}, halves{0.5, 0.5};
  const auto same = ds::average_ensemble({net}, one);
  const auto twice = ds::average_ensemble({net, net}, halves);
  EXPECT_EQ(twice.width(), 8u);
  for (int t = 0; t < 1000; ++t) {
    const VectorXd x = random_point(3, rng);
    ASSERT_NEAR(same.evaluate(x), net.evaluate(x), 1e-12);
    ASSERT_NEAR(twice.evaluate(x), net.evaluate(x), 1e-12);
  }
}

TEST(AverageEnsemble, MeanOfRandomNets) {
  ds::Rng rng = ds::derive_rng(10, 0);
  std::vector<ds::DenseNetwork> nets;
  std::size_t total = 0;
  for (std::size_t k = 0; k < 7; ++k) {
    nets.push_back(ds::random_depth2(5, 2 + k, 2.0, ds::Activation::relu(), rng));
    total += 2 + k;
  }
  const std::vector<double> coeffs(7, 1.0 / 7.0);
  const auto avg = ds::average_ensemble(nets, coeffs);
  EXPECT_EQ(avg.width(), total);
  EXPECT_EQ(avg.depth(), 2u);
  for (int t = 0; t < 1000; ++t) {
    const VectorXd x = random_point(5, rng);
    double mean = 0.0;
    for (const auto& n : nets) mean += n.evaluate(x) / 7.0;
    ASSERT_NEAR(avg.evaluate(x), mean, 1e-9);
  }
}

TEST(AverageEnsemble, RejectsMixedInputs) {
  ds::Rng rng = ds::derive_rng(11, 0);
  const auto a = ds::random_depth2(3, 2, 1.0, ds::Activation::relu(), rng);
  const auto b = ds::random_depth2(4, 2, 1.0, ds::Activation::relu(), rng);
  const auto c = ds::random_depth2(3, 2, 1.0, ds::Activation::sigmoid(), rng);
  const std::vector<double> w{0.5, 0.5};
  EXPECT_THROW(ds::average_ensemble({a, b}, w), ds::DimensionError);
  EXPECT_THROW(ds::average_ensemble({a, c}, w), ds::InvalidArgument);
  EXPECT_THROW(ds::average_ensemble({a}, w), ds::DimensionError);
}

TEST(OutputInterval, ContainsSampledOutputs) {
  ds::Rng rng = ds::derive_rng(12, 0);
  const auto net = random_deep(4, rng);
  const auto [lo, hi] = ds::output_interval(net, VectorXd::Zero(4), VectorXd::Ones(4));
  for (int t = 0; t < 2000; ++t) {
    VectorXd x(4);
    for (Eigen::Index i = 0; i < 4; ++i) x(i) = ds::uniform01(rng);
    const double v = net.evaluate(x);
    ASSERT_GE(v, lo - 1e-12);
    ASSERT_LE(v, hi + 1e-12);
  }
}

TEST(Json, RoundTripIsBitExact) {
  ds::Rng rng = ds::derive_rng(13, 0);
  for (const auto& net : {random_deep(3, rng), ds::random_depth2(6, 9, 2.0, ds::Activation::sigmoid(), rng)}) {
    const std::string text = ds::network_to_json(net).dump();
    const auto back = ds::network_from_json(ds::parse_json(text));
    EXPECT_EQ(back.activation(), net.activation());
    ASSERT_EQ(back.layers().size(), net.layers().size());
    for (std::size_t k = 0; k < net.layers().size(); ++k) {
      EXPECT_EQ(back.layers()[k].weights, net.layers()[k].weights);
      EXPECT_EQ(back.layers()[k].bias, net.layers()[k].bias);
    }
    EXPECT_EQ(back.output().weights, net.output().weights);
    EXPECT_EQ(back.output().bias, net.output().bias);
    EXPECT_EQ(ds::network_to_json(back).dump(), text);
  }
}

TEST(Json, SchemaFieldNames) {
  const auto j = ds::network_to_json(single_unit(ds::Activation::relu()));
  EXPECT_EQ(j.at("input_dim"), 1);
  EXPECT_EQ(j.at("activation"), "relu");
  EXPECT_TRUE(j.at("layers")[0].contains("W"));
  EXPECT_TRUE(j.at("layers")[0].contains("b"));
  EXPECT_TRUE(j.at("output").contains("w"));
  EXPECT_TRUE(j.at("output").contains("b"));
}

TEST(Json, RejectsCustomNonFiniteAndMalformed) {
  const auto custom = ds::Activation::custom("square", [](double x) { return x * x; }, {1.0, 2.0},
                                             std::nullopt, {}, false);
  EXPECT_THROW(ds::network_to_json(single_unit(custom)), ds::InvalidArgument);
  ds::HiddenLayer h{MatrixXd::Constant(1, 1, std::numeric_limits<double>::infinity()), VectorXd::Zero(1)};
  const ds::DenseNetwork bad(1, {h}, ds::Activation::relu(), ds::OutputNeuron{VectorXd::Ones(1), 0.0});
  EXPECT_THROW(ds::network_to_json(bad), ds::InvalidArgument);
  EXPECT_THROW(ds::parse_json("{not json"), ds::ParseError);
  EXPECT_THROW(ds::network_from_json(ds::parse_json(R"({"input_dim": 2, "activation": "relu",
      "layers": [{"W": [[1.0]], "b": [0.0]}], "output": {"w": [1.0], "b": 0.0}})")),
               ds::DimensionError);
}
