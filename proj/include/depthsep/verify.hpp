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
#include <chrono>
#include <cstdio>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"

#include "depthsep/bits.hpp"
#include "depthsep/depth3.hpp"
#include "depthsep/instance.hpp"
#include "depthsep/network.hpp"
#include "depthsep/reduction.hpp"
#include "depthsep/threshold.hpp"

namespace depthsep {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

struct VerifyOptions {
  std::uint64_t seed = 0;
  std::set<std::string> only;  // empty = every check
  // Moves one packing point to distance 0.1 from another before checking.
  bool corrupt_packing = false;
};

struct VerifySummary {
  std::vector<CheckResult> checks;

  bool all_pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }

  nlohmann::json to_json() const {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& c : checks)
      arr.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
    return {{"pass", all_pass()}, {"checks", std::move(arr)}};
  }
};

inline const std::vector<std::string>& verify_check_names() {
  static const std::vector<std::string> names{
      "packing",     "centers", "exact_net", "generic_depth3", "threshold_scalar",
      "threshold_network", "ip_preservation", "binomial", "moment", "l2"};
  return names;
}

namespace detail {

inline std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

inline CheckResult check_packing(const VerifyOptions& opt) {
  for (int d = 1; d <= 4; ++d) {
    auto spec = build_instance(d, opt.seed, kDefaultPackingAttempts);
    if (opt.corrupt_packing) {
      auto& a = spec.packing.points[1];
      a = spec.packing.points[0];
      a[0] += 0.1;
    }
    const auto v = packing_violations(spec.packing, d);
    if (!v.empty()) return {"packing", false, "d=" + std::to_string(d) + ": " + v.front()};
    const auto again = build_instance(d, opt.seed, kDefaultPackingAttempts);
    if (again.packing.points != spec.packing.points || again.matching != spec.matching)
      return {"packing", false, "d=" + std::to_string(d) + ": not deterministic"};
  }
  return {"packing", true, "d=1..4"};
}

inline CheckResult check_centers(const VerifyOptions& opt) {
  for (int d = 1; d <= 3; ++d) {
    const auto spec = build_instance(d, opt.seed, kDefaultPackingAttempts);
    const auto ud = static_cast<std::size_t>(d);
    for (std::size_t i = 0; i < spec.num_components(); ++i) {
      const auto bits = spec.matched_bits(i);
      const int want = ip_mod2(bits.slice(0, ud), bits.slice(ud, ud));
      if (eval_f(d, spec.center(i)) != want)
        return {"centers", false, "d=" + std::to_string(d) + " component " + std::to_string(i)};
    }
  }
  return {"centers", true, "d=1..3"};
}

inline CheckResult check_exact_net(const VerifyOptions& opt) {
  double worst = 0.0;
  for (int d = 1; d <= 4; ++d) {
    const auto spec = build_instance(d, opt.seed, kDefaultPackingAttempts);
    worst = std::max(worst, measured_sup_error(build_exact_relu(d), spec, 10000, opt.seed));
  }
  return {"exact_net", worst <= 1e-9, "max error " + fmt(worst)};
}

inline CheckResult check_generic(const VerifyOptions& opt) {
  std::string det;
  bool ok = true;
  for (int d = 1; d <= 2; ++d) {
    const auto spec = build_instance(d, opt.seed, kDefaultPackingAttempts);
    const auto b = build_generic(d, 0.1, relu_1d_approximator);
    const double err = measured_sup_error(b.net, spec, 10000, opt.seed);
    ok = ok && err <= 0.1;
    det += "d=" + std::to_string(d) + " err " + fmt(err) + "; ";
  }
  return {"generic_depth3", ok, det};
}

inline CheckResult check_threshold_scalar(const VerifyOptions&) {
  const auto relu = Activation::relu();
  const auto c = compile_scalar(relu, 10.0, 0.01);
  const double err = certify_scalar(c.net, [&](double x) { return relu(x); }, 10.0, 100000);
  return {"threshold_scalar", err <= 0.01 && c.plan.size() <= 2001,
          "error " + fmt(err) + ", segments " + std::to_string(c.plan.size())};
}

inline CheckResult check_threshold_network(const VerifyOptions& opt) {
  Rng rng = derive_rng(opt.seed, 0x746e6574ULL);
  double worst = 0.0;
  for (int k = 0; k < 5; ++k) {
    const auto net = random_depth2(8, 8, 2.0, Activation::relu(), rng);
    const auto comp = compile_network(net, 0.05);
    worst = std::max(worst, max_error_on_cube(net, comp.net));
  }
  return {"threshold_network", worst <= 0.05, "max error " + fmt(worst)};
}

inline CheckResult check_ip_preservation(const VerifyOptions& opt) {
  Rng rng = derive_rng(opt.seed, 0x6970ULL);
  std::size_t bad = 0, trials = 0;
  for (int d = 1; d <= 6; ++d) {
    const ReductionConfig cfg{d, 8 * d, opt.seed, 1};
    for (int t = 0; t < 5000; ++t, ++trials) {
      const auto ud = static_cast<std::size_t>(d);
      const BitVec x = BitVec::random(ud, rng), y = BitVec::random(ud, rng);
      const auto r = randomize_input(x, y, cfg, rng);
      if (ip_mod2(r.X, r.Y) != ip_mod2(x, y)) ++bad;
    }
  }
  return {"ip_preservation", bad == 0,
          std::to_string(bad) + " violations in " + std::to_string(trials) + " trials"};
}

inline CheckResult check_binomial(const VerifyOptions&) {
  double worst = 0.0;
  bool ok = true;
  for (int D : {4, 8}) {
    const auto r = verify_binomial_bound(4, D);
    worst = std::max(worst, r.max_ratio);
    ok = ok && r.pass && r.max_ratio < 1.0;
  }
  return {"binomial", ok, "d=4, D in {4,8}, max ratio " + fmt(worst)};
}

inline CheckResult check_moment(const VerifyOptions&) {
  double worst = 0.0;
  bool ok = true;
  for (int d = 1; d <= 3; ++d) {
    const auto r = verify_moment_bound(d, Real(1) / (48 * d), MomentMode::exhaustive);
    worst = std::max(worst, r.max_ratio);
    ok = ok && r.pass;
  }
  return {"moment", ok, "d=1..3, s=1/(48d), max ratio " + fmt(worst)};
}

inline CheckResult check_l2(const VerifyOptions&) {
  bool ok = true;
  double worst = 0.0;
  for (std::uint64_t a = 0; a < 2; ++a)
    for (std::uint64_t b = 0; b < 2; ++b) {
      const auto r = exact_l2_norm_squared(BitVec::from_index(a, 1), BitVec::from_index(b, 1), 100);
      ok = ok && r.within_bound;
      worst = std::max(worst, r.ratio_to_bound);
    }
  const auto u = check_conditional_uniformity(BitVec{1}, BitVec{1}, 2);
  ok = ok && u.conditionally_uniform && u.brute_force_l2 == u.formula_l2;
  return {"l2", ok, "d=1, D=100, max ratio to bound " + fmt(worst)};
}

}  // namespace detail

// Runs the property suite; a check that throws counts as a failure.
inline VerifySummary verify_all(const VerifyOptions& opt = {}) {
  using Fn = std::function<CheckResult(const VerifyOptions&)>;
  const std::vector<std::pair<std::string, Fn>> checks{
      {"packing", detail::check_packing},
      {"centers", detail::check_centers},
      {"exact_net", detail::check_exact_net},
      {"generic_depth3", detail::check_generic},
      {"threshold_scalar", detail::check_threshold_scalar},
      {"threshold_network", detail::check_threshold_network},
      {"ip_preservation", detail::check_ip_preservation},
      {"binomial", detail::check_binomial},
      {"moment", detail::check_moment},
      {"l2", detail::check_l2}};
  for (const auto& name : opt.only)
    detail::require(std::find(verify_check_names().begin(), verify_check_names().end(), name) !=
                        verify_check_names().end(),
                    "verify_all: unknown check '" + name + "'");
  VerifySummary s;
  for (const auto& [name, fn] : checks) {
    if (!opt.only.empty() && !opt.only.count(name)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    CheckResult r;
    try {
      r = fn(opt);
    } catch (const std::exception& e) {
      r = {name, false, std::string("threw: ") + e.what()};
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    s.checks.push_back(std::move(r));
  }
  return s;
}

}  // namespace depthsep
