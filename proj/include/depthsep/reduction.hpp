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
#include <map>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "depthsep/bits.hpp"
#include "depthsep/errors.hpp"
#include "depthsep/exact.hpp"
#include "depthsep/network.hpp"
#include "depthsep/random.hpp"

namespace depthsep {

struct ReductionConfig {
  int d = 1;
  int D = 100;
  std::uint64_t seed = 0;
  std::size_t n_blocks = 1;

  static ReductionConfig with_default_padding(int d, std::uint64_t seed = 0, std::size_t blocks = 1) {
    return {d, 100 * d, seed, blocks};
  }

  int padded_length() const { return 4 * d + D; }
  // The L2 bound is only claimed in the regime D >= 100 d.
  bool bound_armed() const { return D >= 100 * d; }

  void validate() const {
    detail::require(d >= 1, "ReductionConfig: d must be >= 1");
    detail::require(D >= 1, "ReductionConfig: D must be >= 1");
  }
};

// Randomness of one re-randomization: masks x', y' in {0,1}^d, padding
// x'', y'' in {0,1}^D with an even number of (1,1) columns, and a
// permutation with X[k] = pre[perm[k]].
struct RandomizationRecord {
  BitVec x_mask, y_mask;
  BitVec x_pad, y_pad;
  std::vector<std::size_t> perm;

  bool padding_even() const {
    std::size_t ones = 0;
    for (std::size_t j = 0; j < x_pad.size(); ++j) ones += static_cast<std::size_t>(x_pad[j] & y_pad[j]);
    return ones % 2 == 0;
  }
};

inline RandomizationRecord draw_record(const ReductionConfig& cfg, Rng& rng) {
  cfg.validate();
  RandomizationRecord r;
  const auto d = static_cast<std::size_t>(cfg.d);
  const auto D = static_cast<std::size_t>(cfg.D);
  r.x_mask = BitVec::random(d, rng);
  r.y_mask = BitVec::random(d, rng);
  do {
    r.x_pad = BitVec::random(D, rng);
    r.y_pad = BitVec::random(D, rng);
  } while (!r.padding_even());
  r.perm.resize(static_cast<std::size_t>(cfg.padded_length()));
  std::iota(r.perm.begin(), r.perm.end(), std::size_t{0});
  shuffle(r.perm.begin(), r.perm.end(), rng);
  return r;
}

// Blocks before permutation:
//   x side: (x + x', x', x + x', x', x'')
//   y side: (y + y', y', y', y + y', y'')
inline std::pair<BitVec, BitVec> apply_record(const BitVec& x, const BitVec& y,
                                              const RandomizationRecord& r) {
  detail::require_dim(x.size() == r.x_mask.size() && y.size() == r.y_mask.size(),
                      "apply_record: input length differs from record");
  const BitVec xs = xor_bits(x, r.x_mask);
  const BitVec ys = xor_bits(y, r.y_mask);
  BitVec px = xs, py = ys;
  px.append(r.x_mask);
  py.append(r.y_mask);
  px.append(xs);
  py.append(r.y_mask);
  px.append(r.x_mask);
  py.append(ys);
  px.append(r.x_pad);
  py.append(r.y_pad);
  detail::require_dim(px.size() == r.perm.size(), "apply_record: permutation length mismatch");
  BitVec X(px.size()), Y(py.size());
  for (std::size_t k = 0; k < r.perm.size(); ++k) {
    X.set(k, px[r.perm[k]]);
    Y.set(k, py[r.perm[k]]);
  }
  return {std::move(X), std::move(Y)};
}

struct RandomizedInput {
  BitVec X, Y;
  RandomizationRecord record;
};

// IP_{4d+D}(X, Y) == IP_d(x, y) for every draw.
inline RandomizedInput randomize_input(const BitVec& x, const BitVec& y, const ReductionConfig& cfg,
                                       Rng& rng) {
  detail::require_dim(x.size() == static_cast<std::size_t>(cfg.d) && y.size() == x.size(),
                      "randomize_input: inputs must have length d");
  auto rec = draw_record(cfg, rng);
  auto [X, Y] = apply_record(x, y, rec);
  return {std::move(X), std::move(Y), std::move(rec)};
}

// Column pattern counts (#00, #01, #10, #11) of the pair (X, Y).
inline Signature count_signature(const BitVec& X, const BitVec& Y) {
  detail::require_dim(X.size() == Y.size(), "count_signature: length mismatch");
  Signature s{};
  for (std::size_t j = 0; j < X.size(); ++j) ++s[static_cast<std::size_t>(2 * X[j] + Y[j])];
  return s;
}

// Exact law over count signatures as integer weights over a common
// denominator; weights sum to the denominator.
struct CountDistribution {
  std::map<Signature, BigInt> weights;
  BigInt denominator = 1;

  Rational probability(const Signature& s) const {
    auto it = weights.find(s);
    return it == weights.end() ? Rational(0) : Rational(it->second, denominator);
  }

  BigInt total_weight() const {
    BigInt t = 0;
    for (const auto& [s, w] : weights) t += w;
    return t;
  }

  Rational mean(std::size_t i) const {
    BigInt acc = 0;
    for (const auto& [s, w] : weights) acc += w * s[i];
    return Rational(acc, denominator);
  }
};

inline CountDistribution convolve(const CountDistribution& a, const CountDistribution& b) {
  CountDistribution out;
  out.denominator = a.denominator * b.denominator;
  for (const auto& [sa, wa] : a.weights)
    for (const auto& [sb, wb] : b.weights) {
      const Signature s{sa[0] + sb[0], sa[1] + sb[1], sa[2] + sb[2], sa[3] + sb[3]};
      out.weights[s] += wa * wb;
    }
  return out;
}

inline constexpr int kMaxEnumerationDim = 6;

// Law of the signature of the unpermuted 4d-block over all 4^d masks.
inline CountDistribution mask_block_law(const BitVec& x, const BitVec& y) {
  detail::require_dim(x.size() == y.size(), "mask_block_law: length mismatch");
  const auto d = x.size();
  if (d > static_cast<std::size_t>(kMaxEnumerationDim))
    throw EnumerationBudget("mask_block_law: d > 6 would enumerate more than 4^6 masks");
  CountDistribution law;
  law.denominator = BigInt(1) << (2 * d);
  const std::uint64_t count = std::uint64_t{1} << d;
  for (std::uint64_t a = 0; a < count; ++a)
    for (std::uint64_t b = 0; b < count; ++b) {
      const BitVec xm = BitVec::from_index(a, d), ym = BitVec::from_index(b, d);
      const BitVec xs = xor_bits(x, xm), ys = xor_bits(y, ym);
      Signature s{};
      for (std::size_t j = 0; j < d; ++j) {
        ++s[static_cast<std::size_t>(2 * xs[j] + ys[j])];
        ++s[static_cast<std::size_t>(2 * xm[j] + ym[j])];
        ++s[static_cast<std::size_t>(2 * xs[j] + ym[j])];
        ++s[static_cast<std::size_t>(2 * xm[j] + ys[j])];
      }
      law.weights[s] += 1;
    }
  return law;
}

// Number of (x'', y'') in ({0,1}^D)^2 with an even count of (1,1) columns:
// ((3+1)^D + (3-1)^D) / 2.
inline BigInt even_padding_count(int D) {
  return ((BigInt(1) << (2 * D)) + (BigInt(1) << D)) / 2;
}

// Multinomial law of the padding signature at parameter 1/4, conditioned on
// an even (1,1) count.
inline CountDistribution padding_law(int D, const FactorialTable& fact) {
  detail::require(D >= 0 && D <= fact.max(), "padding_law: D out of range");
  CountDistribution law;
  law.denominator = even_padding_count(D);
  for_each_composition(D, [&](const Signature& s) {
    if (s[3] % 2 == 0) law.weights[s] = fact.multinomial(s);
  });
  return law;
}

inline CountDistribution exact_count_distribution(const BitVec& x, const BitVec& y, int D,
                                                  const FactorialTable& fact) {
  return convolve(mask_block_law(x, y), padding_law(D, fact));
}

inline CountDistribution exact_count_distribution(const BitVec& x, const BitVec& y, int D) {
  const FactorialTable fact(D + 4 * static_cast<int>(x.size()));
  return exact_count_distribution(x, y, D, fact);
}

struct L2Result {
  Rational norm_squared;
  Rational bound_squared;  // (8 * 2^{-(4d+D)})^2
  bool bound_armed = false;
  bool within_bound = false;
  double ratio_to_bound = 0.0;
  double ratio_to_uniform = 0.0;
};

inline Rational uniform_l2_norm_squared(int length) {
  return Rational(BigInt(1), BigInt(1) << (2 * length));
}

// Squared L2 norm of the law of (X, Y). Given its signature n, the pair is
// uniform over the multinomial(4d+D; n) arrangements, so the norm is
// sum_n P[n]^2 / multinomial(n).
inline L2Result exact_l2_norm_squared(const BitVec& x, const BitVec& y, int D) {
  const int d = static_cast<int>(x.size());
  const int N = 4 * d + D;
  const FactorialTable fact(N);
  const auto law = exact_count_distribution(x, y, D, fact);
  // sum_n w_n^2 prod(n_i!) / (den^2 N!)
  BigInt acc = 0;
  for (const auto& [s, w] : law.weights) acc += w * w * fact.product(s);
  L2Result r;
  r.norm_squared = Rational(acc, law.denominator * law.denominator * fact(N));
  r.bound_squared = Rational(BigInt(64), BigInt(1) << (2 * N));
  r.bound_armed = D >= 100 * d;
  r.within_bound = r.norm_squared <= r.bound_squared;
  r.ratio_to_bound = static_cast<double>(to_real(r.norm_squared / r.bound_squared));
  r.ratio_to_uniform = static_cast<double>(to_real(r.norm_squared / uniform_l2_norm_squared(N)));
  return r;
}

// Brute-force law of (X, Y) over every mask, padding and permutation.
struct EnumeratedLaw {
  std::map<std::pair<std::uint64_t, std::uint64_t>, std::uint64_t> counts;
  std::uint64_t total = 0;
  int length = 0;
};

inline EnumeratedLaw enumerate_randomization(const BitVec& x, const BitVec& y, int D) {
  const int d = static_cast<int>(x.size());
  const int N = 4 * d + D;
  if (N > 8 || d > 2)
    throw EnumerationBudget("enumerate_randomization: 4d + D must be <= 8 and d <= 2");
  EnumeratedLaw law;
  law.length = N;
  const auto ud = static_cast<std::size_t>(d), uD = static_cast<std::size_t>(D);
  std::vector<std::size_t> perm(static_cast<std::size_t>(N));
  for (std::uint64_t a = 0; a < (1ULL << d); ++a)
    for (std::uint64_t b = 0; b < (1ULL << d); ++b)
      for (std::uint64_t p = 0; p < (1ULL << D); ++p)
        for (std::uint64_t q = 0; q < (1ULL << D); ++q) {
          RandomizationRecord r{BitVec::from_index(a, ud), BitVec::from_index(b, ud),
                                BitVec::from_index(p, uD), BitVec::from_index(q, uD), {}};
          if (!r.padding_even()) continue;
          std::iota(perm.begin(), perm.end(), std::size_t{0});
          do {
            r.perm = perm;
            const auto [X, Y] = apply_record(x, y, r);
            ++law.counts[{X.to_index(), Y.to_index()}];
            ++law.total;
          } while (std::next_permutation(perm.begin(), perm.end()));
        }
  return law;
}

struct UniformityCheck {
  bool conditionally_uniform = false;
  Rational brute_force_l2;
  Rational formula_l2;
  std::size_t outcomes = 0;
};

// Within each signature class, every arrangement must carry the same
// probability, and the brute-force squared norm must match the closed form.
inline UniformityCheck check_conditional_uniformity(const BitVec& x, const BitVec& y, int D) {
  const auto law = enumerate_randomization(x, y, D);
  const auto N = static_cast<std::size_t>(law.length);
  std::map<Signature, std::vector<std::uint64_t>> classes;
  BigInt sq = 0;
  for (const auto& [key, c] : law.counts) {
    const BitVec X = BitVec::from_index(key.first, N), Y = BitVec::from_index(key.second, N);
    classes[count_signature(X, Y)].push_back(c);
    sq += BigInt(c) * c;
  }
  const FactorialTable fact(static_cast<int>(N));
  bool uniform = true;
  for (const auto& [s, cs] : classes) {
    const bool full = BigInt(cs.size()) == fact.multinomial(s);
    const bool equal = std::all_of(cs.begin(), cs.end(), [&](auto c) { return c == cs.front(); });
    uniform = uniform && full && equal;
  }
  UniformityCheck out;
  out.conditionally_uniform = uniform;
  out.brute_force_l2 = Rational(sq, BigInt(law.total) * law.total);
  out.formula_l2 = exact_l2_norm_squared(x, y, D).norm_squared;
  out.outcomes = law.counts.size();
  return out;
}

struct LemmaReport {
  std::string lemma;
  std::string parameters;
  std::size_t cases = 0;
  double max_ratio = 0.0;
  bool pass = false;
};

inline constexpr double kInequalitySlack = 1e-10;

// Left side of the multinomial moment inequality for one split (d1..d4):
//   sum_{D1..D4} multinom(D; D_i)^2 / multinom(D+d; D_i+d_i),  exact.
inline Rational binomial_bound_lhs(const Signature& split, int D) {
  const int d = split[0] + split[1] + split[2] + split[3];
  const FactorialTable fact(D + d);
  BigInt acc = 0;
  for_each_composition(D, [&](const Signature& s) {
    const BigInt m = fact.multinomial(s);
    const Signature t{s[0] + split[0], s[1] + split[1], s[2] + split[2], s[3] + split[3]};
    acc += m * m * fact.product(t);
  });
  return Rational(acc, fact(D + d));
}

// exp((4/D) sum (d_i - d/4)^2) (1 + d/D)^{3/2} 4^{D-d} in 256-bit floats.
inline Real binomial_bound_rhs(const Signature& split, int D) {
  const int d = split[0] + split[1] + split[2] + split[3];
  const Real four = 4, dd = d, DD = D;
  Real dev = 0;
  for (int v : split) {
    const Real c = Real(v) - dd / four;
    dev += c * c;
  }
  return exp(four / DD * dev) * pow(1 + dd / DD, Real(1.5)) * pow(four, Real(D - d));
}

// Checks the inequality lhs <= rhs for every split of d, with d and D
// positive multiples of 4. The left side is summed exactly per split.
inline LemmaReport verify_binomial_bound(int d, int D) {
  detail::require(d > 0 && D > 0 && d % 4 == 0 && D % 4 == 0,
                  "verify_binomial_bound: d and D must be positive multiples of 4");
  const double work = std::pow(double(d + 1), 3) * std::pow(double(D + 1), 3) / 36.0;
  if (work > 5e7) throw EnumerationBudget("verify_binomial_bound: (d, D) too large to enumerate");
  const FactorialTable fact(D + d);
  std::vector<std::pair<Signature, BigInt>> pad;
  for_each_composition(D, [&](const Signature& s) {
    const BigInt m = fact.multinomial(s);
    pad.emplace_back(s, m * m);
  });

  LemmaReport rep;
  rep.lemma = "binomial";
  rep.parameters = "d=" + std::to_string(d) + ",D=" + std::to_string(D);
  Real worst = 0;
  bool ok = true;
  for_each_composition(d, [&](const Signature& split) {
    BigInt acc = 0;
    for (const auto& [s, m2] : pad) {
      const Signature t{s[0] + split[0], s[1] + split[1], s[2] + split[2], s[3] + split[3]};
      acc += m2 * fact.product(t);
    }
    const Real lhs = to_real(acc, fact(D + d));
    const Real rhs = binomial_bound_rhs(split, D);
    worst = std::max(worst, lhs / rhs);
    ok = ok && lhs <= rhs * (1 + Real(kInequalitySlack));
    ++rep.cases;
  });
  rep.max_ratio = static_cast<double>(worst);
  rep.pass = ok;
  return rep;
}

// The form used inside the L2 argument: the inequality with its d set to 4
// times the half-dimension of the instance.
inline LemmaReport verify_binomial_bound_as_applied(int half_dim, int D) {
  detail::require(half_dim >= 1, "verify_binomial_bound_as_applied: half-dimension must be >= 1");
  auto rep = verify_binomial_bound(4 * half_dim, D);
  rep.parameters = "4d with d=" + std::to_string(half_dim) + ",D=" + std::to_string(D);
  return rep;
}

enum class MomentMode { exhaustive, sampled };

// E over the 4^d masks of exp(s sum_i (d_i - d)^2), where (d_1..d_4) is
// the signature of the unpermuted 4d-block.
inline Real moment_expectation(const BitVec& x, const BitVec& y, const Real& s) {
  const auto law = mask_block_law(x, y);
  const int d = static_cast<int>(x.size());
  Real e = 0;
  for (const auto& [sig, w] : law.weights) {
    Real dev = 0;
    for (int v : sig) dev += Real(v - d) * Real(v - d);
    e += Real(w) * exp(s * dev);
  }
  return e / Real(law.denominator);
}

// E_{x',y'}[exp(s sum_i (d_i - d)^2)] <= (1 / (1 - 24 d s))^2 for the
// signature (d_1..d_4) of the unpermuted 4d-block. The expectation is an
// exact enumeration of the 4^d masks carried out in 256-bit floats.
inline LemmaReport verify_moment_bound(int d, const Real& s, MomentMode mode, std::size_t samples = 256,
                                   std::uint64_t seed = 0) {
  detail::require(d >= 1, "verify_moment_bound: d must be >= 1");
  detail::require(s >= 0 && s * 24 * d < 1, "verify_moment_bound: s must lie in [0, 1/(24d))");
  if (mode == MomentMode::exhaustive && d > 3)
    throw EnumerationBudget("verify_moment_bound: exhaustive mode needs d <= 3");
  if (d > 8) throw EnumerationBudget("verify_moment_bound: inner sweep needs d <= 8");
  const auto ud = static_cast<std::size_t>(d);
  const Real rhs = pow(1 / (1 - 24 * Real(d) * s), 2);

  std::map<Signature, Real> memo;
  auto term = [&](const Signature& sig) -> const Real& {
    auto it = memo.find(sig);
    if (it != memo.end()) return it->second;
    Real dev = 0;
    for (int v : sig) dev += Real(v - d) * Real(v - d);
    return memo.emplace(sig, exp(s * dev)).first->second;
  };

  LemmaReport rep;
  rep.lemma = "moment";
  rep.parameters = "d=" + std::to_string(d) + (mode == MomentMode::exhaustive ? ",exhaustive" : ",sampled");
  Real worst = 0;
  bool ok = true;
  auto check = [&](const BitVec& x, const BitVec& y) {
    const auto law = mask_block_law(x, y);
    Real e = 0;
    for (const auto& [sig, w] : law.weights) e += Real(w) * term(sig);
    e /= Real(law.denominator);
    worst = std::max(worst, e / rhs);
    ok = ok && e <= rhs * (1 + Real(kInequalitySlack));
    ++rep.cases;
  };
  if (mode == MomentMode::exhaustive) {
    for (std::uint64_t a = 0; a < (1ULL << d); ++a)
      for (std::uint64_t b = 0; b < (1ULL << d); ++b)
        check(BitVec::from_index(a, ud), BitVec::from_index(b, ud));
  } else {
    Rng rng = derive_rng(seed, 0x6132ULL);
    for (std::size_t k = 0; k < samples; ++k) {
      const BitVec x = BitVec::random(ud, rng), y = BitVec::random(ud, rng);
      check(x, y);
    }
  }
  rep.max_ratio = static_cast<double>(worst);
  rep.pass = ok;
  return rep;
}

// Affine map from the caller input (x, y) in R^{2d} to the base input
// (X, Y) in R^{2(4d+D)} fixed by one record: bit flips where the mask is 1,
// constants for mask and padding blocks, then the permutation.
inline InputMap record_input_map(const RandomizationRecord& r) {
  const std::size_t d = r.x_mask.size();
  const std::size_t N = r.perm.size();
  using Row = InputMap::Row;
  auto masked = [](std::size_t src, int mask) {
    return mask ? Row{src, -1.0, 1.0} : Row{src, 1.0, 0.0};
  };
  auto constant = [](int bit) { return Row{std::nullopt, 1.0, double(bit)}; };
  std::vector<Row> px, py;
  for (std::size_t i = 0; i < d; ++i) px.push_back(masked(i, r.x_mask[i]));
  for (std::size_t i = 0; i < d; ++i) px.push_back(constant(r.x_mask[i]));
  for (std::size_t i = 0; i < d; ++i) px.push_back(masked(i, r.x_mask[i]));
  for (std::size_t i = 0; i < d; ++i) px.push_back(constant(r.x_mask[i]));
  for (std::size_t i = 0; i < r.x_pad.size(); ++i) px.push_back(constant(r.x_pad[i]));
  for (std::size_t i = 0; i < d; ++i) py.push_back(masked(d + i, r.y_mask[i]));
  for (std::size_t i = 0; i < d; ++i) py.push_back(constant(r.y_mask[i]));
  for (std::size_t i = 0; i < d; ++i) py.push_back(constant(r.y_mask[i]));
  for (std::size_t i = 0; i < d; ++i) py.push_back(masked(d + i, r.y_mask[i]));
  for (std::size_t i = 0; i < r.y_pad.size(); ++i) py.push_back(constant(r.y_pad[i]));

  InputMap map;
  map.caller_dim = 2 * d;
  map.rows.resize(2 * N);
  for (std::size_t k = 0; k < N; ++k) {
    map.rows[k] = px[r.perm[k]];
    map.rows[N + k] = py[r.perm[k]];
  }
  return map;
}

struct AveragedNetwork {
  DenseNetwork net;
  std::vector<RandomizationRecord> records;
  std::vector<DenseNetwork> blocks;
};

// (1/n) sum_j base(X_j, Y_j) as a single depth-2 network on 2d inputs. Block
// j draws its record from the stream (seed, j).
inline AveragedNetwork build_averaged_network(const DenseNetwork& base, const ReductionConfig& cfg,
                                              std::uint64_t seed) {
  cfg.validate();
  detail::require(cfg.n_blocks >= 1, "build_averaged_network: need at least one block");
  detail::require(base.depth() == 2, "build_averaged_network: base must have depth 2");
  detail::require_dim(base.input_dim() == static_cast<std::size_t>(2 * cfg.padded_length()),
                      "build_averaged_network: base input dimension must be 2(4d + D)");
  std::vector<RandomizationRecord> records;
  std::vector<DenseNetwork> blocks;
  for (std::size_t j = 0; j < cfg.n_blocks; ++j) {
    Rng rng = derive_rng(seed, j);
    records.push_back(draw_record(cfg, rng));
    blocks.push_back(absorb_input_map(base, record_input_map(records.back())));
  }
  const std::vector<double> coeffs(cfg.n_blocks, 1.0 / static_cast<double>(cfg.n_blocks));
  auto net = average_ensemble(blocks, coeffs);
  return {std::move(net), std::move(records), std::move(blocks)};
}

// ceil(2500 B^2 d): enough blocks for the Hoeffding step of the reduction.
inline std::uint64_t hoeffding_block_count(double bound, int d) {
  detail::require(bound > 0.0, "hoeffding_block_count: B must be positive");
  detail::require(d >= 1, "hoeffding_block_count: d must be >= 1");
  return static_cast<std::uint64_t>(std::ceil(2500.0 * bound * bound * d));
}

// Sound bound on |net(x)| over x in [0,1]^n by interval propagation.
inline double output_bound_on_cube(const DenseNetwork& net) {
  const auto n = static_cast<Eigen::Index>(net.input_dim());
  const auto [lo, hi] = output_interval(net, Eigen::VectorXd::Zero(n), Eigen::VectorXd::Ones(n));
  return std::max(std::abs(lo), std::abs(hi));
}

// Empirical signature frequencies of randomize_input over `trials` draws.
inline std::map<Signature, double> empirical_signature_law(const BitVec& x, const BitVec& y,
                                                           const ReductionConfig& cfg,
                                                           std::size_t trials, std::uint64_t seed) {
  Rng rng = derive_rng(seed, 0x656d70ULL);
  std::map<Signature, std::size_t> counts;
  for (std::size_t t = 0; t < trials; ++t) {
    const auto r = randomize_input(x, y, cfg, rng);
    ++counts[count_signature(r.X, r.Y)];
  }
  std::map<Signature, double> out;
  for (const auto& [s, c] : counts) out[s] = static_cast<double>(c) / static_cast<double>(trials);
  return out;
}

inline double total_variation(const CountDistribution& exact, const std::map<Signature, double>& emp) {
  double acc = 0.0;
  for (const auto& [s, w] : exact.weights) {
    const double p = static_cast<double>(to_real(Rational(w, exact.denominator)));
    auto it = emp.find(s);
    acc += std::abs(p - (it == emp.end() ? 0.0 : it->second));
  }
  for (const auto& [s, q] : emp)
    if (!exact.weights.count(s)) acc += q;
  return 0.5 * acc;
}

}  // namespace depthsep
