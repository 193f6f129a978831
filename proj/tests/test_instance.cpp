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

#include <cmath>
#include <map>
#include <vector>

#include "depthsep/errors.hpp"
#include "depthsep/instance.hpp"
#include "depthsep/io.hpp"

namespace ds = depthsep;

namespace {

void expect_packing_invariants(const ds::Packing& p, int d) {
  EXPECT_EQ(p.points.size(), std::size_t{1} << (2 * d));
  EXPECT_TRUE(ds::packing_violations(p, d).empty());
  for (const auto& z : p.points) EXPECT_LE(ds::Packing::norm(z), 0.8);
  EXPECT_GT(p.min_pairwise_distance(), 0.4);
}

// d=1 instance with the four packing points on a square of radius 0.8.
ds::InstanceSpec square_instance() {
  ds::InstanceSpec s;
  s.d = 1;
  s.packing.dim = 2;
  s.packing.points = {{0.8, 0.0}, {0.0, 0.8}, {-0.8, 0.0}, {0.0, -0.8}};
  s.matching = {0, 1, 2, 3};
  return s;
}

}  // namespace

TEST(Packing, SmallCases) {
  expect_packing_invariants(ds::build_packing(1, 7, 10000), 1);
  expect_packing_invariants(ds::build_packing(3, 1, 1000000), 3);
}

TEST(Packing, TooFewAttemptsIsInfeasible) {
  EXPECT_THROW(ds::build_packing(1, 7, 3), ds::PackingInfeasible);
}

TEST(Packing, RejectsUnsupportedDimensions) {
  EXPECT_THROW(ds::build_packing(0, 1, 10), ds::InvalidArgument);
  EXPECT_THROW(ds::build_packing(7, 1, 10), ds::InvalidArgument);
}

TEST(Packing, DeterministicUnderSeed) {
  const auto a = ds::build_instance(2, 99, ds::kDefaultPackingAttempts);
  const auto b = ds::build_instance(2, 99, ds::kDefaultPackingAttempts);
  const auto c = ds::build_instance(2, 100, ds::kDefaultPackingAttempts);
  EXPECT_EQ(a.packing.points, b.packing.points);
  EXPECT_EQ(a.matching, b.matching);
  EXPECT_NE(a.packing.points, c.packing.points);
}

TEST(Packing, ViolationsAreReported) {
  auto p = ds::build_packing(1, 7, 10000);
  p.points[1] = p.points[0];
  p.points[1][0] += 0.1;
  EXPECT_FALSE(ds::packing_violations(p, 1).empty());
  p = ds::build_packing(1, 7, 10000);
  p.points[2] = {0.9, 0.0};
  EXPECT_FALSE(ds::packing_violations(p, 1).empty());
}

TEST(Instance, MatchingIsABijection) {
  const auto s = ds::build_instance(2, 4, ds::kDefaultPackingAttempts);
  std::vector<std::uint64_t> sorted = s.matching;
  std::sort(sorted.begin(), sorted.end());
  for (std::uint64_t i = 0; i < sorted.size(); ++i) EXPECT_EQ(sorted[i], i);
  auto broken = s;
  broken.matching[0] = broken.matching[1];
  EXPECT_THROW(ds::validate(broken), ds::InvalidArgument);
}

TEST(Instance, ScalesDeriveFromD) {
  const auto s = ds::build_instance(4, 1, ds::kDefaultPackingAttempts);
  EXPECT_DOUBLE_EQ(s.x_scale(), 1.0 / 8.0);
  EXPECT_DOUBLE_EQ(s.cube_edge(), 1.0 / 24.0);
  EXPECT_EQ(s.ambient_dim(), 16u);
}

TEST(EvalF, HandValues) {
  const std::vector<double> a{0.3, -0.2, 0.25, 0.25}, b{0.3, -0.2, 0.05, 0.30}, c{0.0, 0.0, 0.0, 0.0};
  EXPECT_EQ(ds::eval_f(1, a), 1);
  EXPECT_EQ(ds::eval_f(1, b), 0);
  EXPECT_EQ(ds::eval_f(1, c), 0);
  EXPECT_THROW(ds::eval_f(1, std::vector<double>{0.0, 0.0}), ds::DimensionError);
}

TEST(EvalF, CentersCarryTheMatchedInnerProduct) {
  for (int d = 1; d <= 4; ++d) {
    const auto s = ds::build_instance(d, 2, ds::kDefaultPackingAttempts);
    const auto ud = static_cast<std::size_t>(d);
    for (std::size_t i = 0; i < s.num_components(); ++i) {
      const auto bits = s.matched_bits(i);
      ASSERT_EQ(ds::eval_f(d, s.center(i)), ds::ip_mod2(bits.slice(0, ud), bits.slice(ud, ud)));
    }
  }
}

TEST(Samples, InsideUnitBallAndLabelled) {
  const auto s = ds::build_instance(1, 3, ds::kDefaultPackingAttempts);
  for (const auto& smp : ds::sample_a4d(s, 1000, 3)) {
    EXPECT_LE(ds::Packing::norm(smp.point), 1.0);
    EXPECT_EQ(ds::eval_f(1, smp.point), smp.label);
  }
}

TEST(Samples, WorstCaseSupportFitsTheUnitBall) {
  // Farthest point of any cube: packing norm at the sphere radius, all x/y
  // bits set, plus the cube diagonal.
  for (int d = 1; d <= 6; ++d) {
    const double r = ds::PackingOptions{}.sphere_radius;
    const double corner = std::sqrt(r * r + 2.0 * d / (16.0 * d));
    EXPECT_LE(corner + ds::kCubeDiameter, 1.0);
  }
}

TEST(Samples, ComponentFrequenciesAreUniform) {
  const auto s = ds::build_instance(2, 5, ds::kDefaultPackingAttempts);
  std::vector<int> counts(16, 0);
  for (const auto& smp : ds::sample_a4d(s, 10000, 5)) ++counts[smp.component_index];
  const double p = 1.0 / 16.0, sigma = std::sqrt(10000 * p * (1 - p));
  for (int c : counts) EXPECT_LE(std::abs(c - 10000 * p), 4 * sigma);
}

TEST(Samples, NearestCenterIsTheGeneratingOne) {
  for (int d = 1; d <= 3; ++d) {
    const auto s = ds::build_instance(d, 6, ds::kDefaultPackingAttempts);
    for (const auto& smp : ds::sample_a4d(s, 500, 6))
      ASSERT_EQ(ds::nearest_component(s, smp.point), smp.component_index);
  }
}

TEST(Samples, LabelsConstantPerComponent) {
  for (int d = 1; d <= 2; ++d) {
    const auto s = ds::build_instance(d, 8, ds::kDefaultPackingAttempts);
    std::map<std::size_t, int> label;
    for (const auto& smp : ds::sample_a4d(s, 1000 * s.num_components(), 8)) {
      auto [it, fresh] = label.emplace(smp.component_index, smp.label);
      ASSERT_EQ(it->second, smp.label);
    }
  }
}

TEST(Samples, DeterministicUnderSeed) {
  const auto s = ds::build_instance(2, 1, ds::kDefaultPackingAttempts);
  const auto a = ds::sample_a4d(s, 3000, 12), b = ds::sample_a4d(s, 3000, 12);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t k = 0; k < a.size(); ++k) {
    ASSERT_EQ(a[k].point, b[k].point);
    ASSERT_EQ(a[k].component_index, b[k].component_index);
  }
}

TEST(Separation, MinIntercomponentDistance) {
  for (int d = 1; d <= 3; ++d) {
    const auto s = ds::build_instance(d, 1, ds::kDefaultPackingAttempts);
    const double v = ds::min_intercomponent_distance(s);
    EXPECT_GE(v, 0.4 - 1.0 / 6.0);
    if (d == 1) EXPECT_LE(v, s.packing.min_pairwise_distance());
  }
  EXPECT_GT(ds::min_intercomponent_distance(square_instance()), 0.5 - 1.0 / 6.0);
}

TEST(Separation, LipschitzCertificate) {
  const auto s = ds::build_instance(2, 1, ds::kDefaultPackingAttempts);
  EXPECT_EQ(ds::lipschitz_certificate(s, 0, 1), 0.0);
  const double bound = 1.0 / ds::min_intercomponent_distance(s);
  const double cert = ds::lipschitz_certificate(s, 20000, 1);
  EXPECT_GT(cert, 0.0);
  EXPECT_LE(cert, bound);
  EXPECT_LE(bound, 1.0 / (0.4 - 1.0 / 6.0));
}

TEST(Io, InstanceJsonRoundTrip) {
  const auto s = ds::build_instance(2, 21, ds::kDefaultPackingAttempts);
  const std::string text = ds::instance_to_json(s).dump();
  const auto back = ds::instance_from_json(ds::parse_json(text));
  EXPECT_EQ(back.packing.points, s.packing.points);
  EXPECT_EQ(back.matching, s.matching);
  EXPECT_EQ(back.seed, s.seed);
  EXPECT_EQ(ds::instance_to_json(back).dump(), text);
}

TEST(Io, SamplesCsvRoundTrip) {
  const auto s = ds::build_instance(1, 2, ds::kDefaultPackingAttempts);
  const auto samples = ds::sample_a4d(s, 200, 2);
  const std::string csv = ds::samples_to_csv(1, samples);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "point_0,point_1,point_2,point_3,component_index,label");
  const auto back = ds::samples_from_csv(csv);
  ASSERT_EQ(back.size(), samples.size());
  for (std::size_t k = 0; k < back.size(); ++k) {
    EXPECT_EQ(back[k].point, samples[k].point);
    EXPECT_EQ(back[k].component_index, samples[k].component_index);
    EXPECT_EQ(back[k].label, samples[k].label);
  }
  EXPECT_EQ(ds::samples_to_csv(1, back), csv);
}
