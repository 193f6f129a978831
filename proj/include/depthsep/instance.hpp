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

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "depthsep/bits.hpp"
#include "depthsep/errors.hpp"
#include "depthsep/random.hpp"

namespace depthsep {

inline constexpr int kMaxInstanceDim = 6;
inline constexpr double kPackingNormBound = 0.8;
inline constexpr double kPackingMinDistance = 0.4;
// Diameter of the cube [0, 1/(12 sqrt d)]^{4d}, independent of d.
inline constexpr double kCubeDiameter = 1.0 / 6.0;
inline constexpr std::uint64_t kDefaultPackingAttempts = 1000000;

// 2^{2d} points in R^{2d}, norms <= 0.8, pairwise distances > 0.4.
struct Packing {
  int dim = 0;
  std::vector<std::vector<double>> points;

  double min_pairwise_distance() const {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < points.size(); ++i)
      for (std::size_t j = i + 1; j < points.size(); ++j)
        best = std::min(best, distance(points[i], points[j]));
    return best;
  }

  double radius_bound() const {
    double r = 0.0;
    for (const auto& p : points) r = std::max(r, norm(p));
    return r;
  }

  static double norm(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
  }

  static double distance(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) s += (a[k] - b[k]) * (a[k] - b[k]);
    return std::sqrt(s);
  }
};

// Human-readable list of violated Packing invariants for half-dimension d.
inline std::vector<std::string> packing_violations(const Packing& p, int d) {
  std::vector<std::string> out;
  const std::size_t expected = std::size_t{1} << (2 * d);
  if (p.dim != 2 * d) out.push_back("dimension " + std::to_string(p.dim) + " != 2d");
  if (p.points.size() != expected)
    out.push_back("expected " + std::to_string(expected) + " points, got " +
                  std::to_string(p.points.size()));
  for (std::size_t i = 0; i < p.points.size(); ++i) {
    if (p.points[i].size() != static_cast<std::size_t>(p.dim))
      out.push_back("point " + std::to_string(i) + " has wrong length");
    else if (Packing::norm(p.points[i]) > kPackingNormBound)
      out.push_back("point " + std::to_string(i) + " has norm > 0.8");
  }
  for (std::size_t i = 0; i < p.points.size(); ++i)
    for (std::size_t j = i + 1; j < p.points.size(); ++j)
      if (p.points[i].size() == p.points[j].size() &&
          !(Packing::distance(p.points[i], p.points[j]) > kPackingMinDistance))
        out.push_back("points " + std::to_string(i) + "," + std::to_string(j) +
                      " closer than 0.4");
  return out;
}

struct PackingOptions {
  // Greedy proposals are drawn on the sphere of this radius. 0.75 keeps
  // every point of the support inside the unit ball in the worst case.
  double sphere_radius = 0.75;
};

// Greedy rejection sampling on the sphere: accept a proposal iff it is
// farther than 0.4 from every accepted point.
inline Packing build_packing(int d, std::uint64_t seed, std::uint64_t max_attempts,
                             PackingOptions opts = {}) {
  detail::require(d >= 1, "build_packing: d must be >= 1");
  detail::require(d <= kMaxInstanceDim, "build_packing: d > 6 is not supported");
  detail::require(opts.sphere_radius > 0.0 && opts.sphere_radius <= kPackingNormBound,
                  "build_packing: sphere radius must lie in (0, 0.8]");
  const std::size_t target = std::size_t{1} << (2 * d);
  const int dim = 2 * d;
  Packing p{dim, {}};
  p.points.reserve(target);
  Rng rng = derive_rng(seed, 0x7061636bULL);
  std::vector<double> z(static_cast<std::size_t>(dim));
  for (std::uint64_t attempt = 0; attempt < max_attempts && p.points.size() < target; ++attempt) {
    double nrm = 0.0;
    do {
      for (auto& v : z) v = standard_normal(rng);
      nrm = Packing::norm(z);
    } while (nrm == 0.0);
    for (auto& v : z) v *= opts.sphere_radius / nrm;
    while (Packing::norm(z) > opts.sphere_radius)
      for (auto& v : z) v = std::nextafter(v, 0.0);
    const bool ok = std::all_of(p.points.begin(), p.points.end(), [&](const auto& q) {
      return Packing::distance(q, z) > kPackingMinDistance;
    });
    if (ok) p.points.push_back(z);
  }
  if (p.points.size() < target)
    throw PackingInfeasible("build_packing: placed " + std::to_string(p.points.size()) + " of " +
                            std::to_string(target) + " points in " +
                            std::to_string(max_attempts) + " attempts");
  return p;
}

// The packing, its pairing with the Boolean hypercube, and derived geometry.
// Component i is centered at (z_i, bits(matching[i]) / (4 sqrt d)).
struct InstanceSpec {
  int d = 0;
  std::uint64_t seed = 0;
  Packing packing;
  std::vector<std::uint64_t> matching;  // component -> hypercube index in [0, 4^d)

  double x_scale() const { return 1.0 / (4.0 * std::sqrt(static_cast<double>(d))); }
  double cube_edge() const { return 1.0 / (12.0 * std::sqrt(static_cast<double>(d))); }
  std::size_t num_components() const { return matching.size(); }
  std::size_t ambient_dim() const { return static_cast<std::size_t>(4 * d); }

  // Length-2d bit vector paired with component i; first d entries feed x,
  // last d feed y.
  BitVec matched_bits(std::size_t i) const {
    return BitVec::from_index(matching.at(i), static_cast<std::size_t>(2 * d));
  }

  std::vector<double> center(std::size_t i) const {
    std::vector<double> c(ambient_dim());
    const auto& z = packing.points.at(i);
    std::copy(z.begin(), z.end(), c.begin());
    const BitVec bits = matched_bits(i);
    for (std::size_t k = 0; k < bits.size(); ++k) c[2 * d + k] = bits[k] * x_scale();
    return c;
  }
};

inline void validate(const InstanceSpec& spec) {
  detail::require(spec.d >= 1 && spec.d <= kMaxInstanceDim, "instance: d must be in [1, 6]");
  const std::size_t n = std::size_t{1} << (2 * spec.d);
  detail::require(spec.packing.points.size() == n, "instance: packing has wrong size");
  detail::require(spec.matching.size() == n, "instance: matching has wrong size");
  std::vector<char> seen(n, 0);
  for (auto m : spec.matching) {
    detail::require(m < n && !seen[m], "instance: matching is not a bijection");
    seen[m] = 1;
  }
}

inline InstanceSpec build_instance(int d, std::uint64_t seed, std::uint64_t max_attempts,
                                   PackingOptions opts = {}) {
  InstanceSpec spec;
  spec.d = d;
  spec.seed = seed;
  spec.packing = build_packing(d, seed, max_attempts, opts);
  spec.matching.resize(spec.packing.points.size());
  std::iota(spec.matching.begin(), spec.matching.end(), std::uint64_t{0});
  Rng rng = derive_rng(seed, 0x6d617463ULL);
  shuffle(spec.matching.begin(), spec.matching.end(), rng);
  return spec;
}

// f_d(z, x, y) = IP_d(round(3 sqrt(d) x), round(3 sqrt(d) y)); z is ignored.
inline int eval_f(int d, std::span<const double> point) {
  detail::require(d >= 1, "eval_f: d must be >= 1");
  detail::require_dim(point.size() == static_cast<std::size_t>(4 * d),
                      "eval_f: point must have 4d coordinates");
  const double scale = 3.0 * std::sqrt(static_cast<double>(d));
  std::vector<double> xs(static_cast<std::size_t>(d)), ys(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) {
    xs[static_cast<std::size_t>(i)] = scale * point[static_cast<std::size_t>(2 * d + i)];
    ys[static_cast<std::size_t>(i)] = scale * point[static_cast<std::size_t>(3 * d + i)];
  }
  const auto rx = round_vec(xs);
  const auto ry = round_vec(ys);
  return ip_mod2(rx, ry);
}

struct Sample {
  std::vector<double> point;
  std::size_t component_index = 0;
  int label = 0;
};

inline constexpr std::size_t kSampleBatch = 1024;

inline Sample draw_sample(const InstanceSpec& spec, Rng& rng) {
  Sample s;
  s.component_index = static_cast<std::size_t>(uniform_index(rng, spec.num_components()));
  s.point = spec.center(s.component_index);
  const double edge = spec.cube_edge();
  for (auto& v : s.point) v += edge * uniform01(rng);
  s.label = eval_f(spec.d, s.point);
  return s;
}

// n i.i.d. draws from U(A_4d). Batch b of kSampleBatch samples uses its own
// stream derived from (seed, b).
inline std::vector<Sample> sample_a4d(const InstanceSpec& spec, std::size_t n, std::uint64_t seed) {
  validate(spec);
  std::vector<Sample> out;
  out.reserve(n);
  for (std::size_t b = 0; out.size() < n; ++b) {
    Rng rng = derive_rng(seed, b);
    for (std::size_t k = 0; k < kSampleBatch && out.size() < n; ++k)
      out.push_back(draw_sample(spec, rng));
  }
  return out;
}

// Index of the component center closest to `point`.
inline std::size_t nearest_component(const InstanceSpec& spec, std::span<const double> point) {
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < spec.num_components(); ++i) {
    const double dist = Packing::distance(spec.center(i), point);
    if (dist < best_d) {
      best_d = dist;
      best = i;
    }
  }
  return best;
}

// min_{i != j} |center_i - center_j| - diam(C_4d).
inline double min_intercomponent_distance(const InstanceSpec& spec) {
  validate(spec);
  std::vector<std::vector<double>> centers;
  centers.reserve(spec.num_components());
  for (std::size_t i = 0; i < spec.num_components(); ++i) centers.push_back(spec.center(i));
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < centers.size(); ++i)
    for (std::size_t j = i + 1; j < centers.size(); ++j)
      best = std::min(best, Packing::distance(centers[i], centers[j]));
  return best - kCubeDiameter;
}

// Empirical max of |f(u) - f(v)| / |u - v| over random pairs from U(A_4d).
inline double lipschitz_certificate(const InstanceSpec& spec, std::size_t trials,
                                    std::uint64_t seed) {
  validate(spec);
  Rng rng = derive_rng(seed, 0x6c697073ULL);
  double best = 0.0;
  for (std::size_t t = 0; t < trials; ++t) {
    const Sample u = draw_sample(spec, rng);
    const Sample v = draw_sample(spec, rng);
    if (u.label == v.label) continue;
    best = std::max(best, 1.0 / Packing::distance(u.point, v.point));
  }
  return best;
}

}  // namespace depthsep
