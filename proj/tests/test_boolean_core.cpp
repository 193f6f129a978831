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

#include <cstdint>
#include <vector>

#include "depthsep/bits.hpp"
#include "depthsep/errors.hpp"
#include "depthsep/random.hpp"

namespace ds = depthsep;
using ds::BitVec;

namespace {

// Every BitVec of length n.
std::vector<BitVec> all_bits(std::size_t n) {
  std::vector<BitVec> out;
  for (std::uint64_t i = 0; i < (std::uint64_t{1} << n); ++i) out.push_back(BitVec::from_index(i, n));
  return out;
}

}  // namespace

TEST(IpMod2, HandValues) {
  EXPECT_EQ(ds::ip_mod2(BitVec{1}, BitVec{1}), 1);
  EXPECT_EQ(ds::ip_mod2(BitVec{1, 1}, BitVec{1, 1}), 0);
  EXPECT_EQ(ds::ip_mod2(BitVec{1, 0, 1}, BitVec{1, 1, 1}), 0);
  EXPECT_EQ(ds::ip_mod2(BitVec{0, 0}, BitVec{1, 1}), 0);
}

TEST(IpMod2, LengthMismatchThrows) {
  EXPECT_THROW(ds::ip_mod2(BitVec{1, 0}, BitVec{1}), ds::DimensionError);
}

TEST(IpMod2, IntegerExtensionTakesParity) {
  const std::vector<std::int64_t> x{3, -1, 2}, y{1, 1, 5};
  EXPECT_EQ(ds::ip_mod2(x, y), 0);  // 3 - 1 + 10 = 12
  const std::vector<std::int64_t> a{-3}, b{1};
  EXPECT_EQ(ds::ip_mod2(a, b), 1);
}

TEST(Xor, HandValues) {
  EXPECT_EQ(ds::xor_bits(BitVec{0, 1}, BitVec{1, 1}), (BitVec{1, 0}));
  EXPECT_EQ(ds::xor_bits(BitVec{1, 0, 1}, BitVec{0, 0, 0}), (BitVec{1, 0, 1}));
  EXPECT_EQ(ds::xor_bits(BitVec{1}, BitVec{1}), (BitVec{0}));
}

TEST(RoundVec, HandValues) {
  const std::vector<double> a{0.75, 0.05}, b{0.5}, c{-0.3, 2.6}, e{-0.5};
  EXPECT_EQ(ds::round_vec(a), (std::vector<std::int64_t>{1, 0}));
  EXPECT_EQ(ds::round_vec(b), (std::vector<std::int64_t>{1}));
  EXPECT_EQ(ds::round_vec(c), (std::vector<std::int64_t>{0, 3}));
  EXPECT_EQ(ds::round_vec(e), (std::vector<std::int64_t>{-1}));
}

TEST(BitVec, RejectsNonBinaryEntries) {
  EXPECT_THROW((BitVec{0, 2}), ds::InvalidArgument);
  BitVec v(3);
  EXPECT_THROW(v.set(0, -1), ds::InvalidArgument);
}

TEST(BitVec, IndexRoundTrip) {
  for (std::uint64_t i = 0; i < 256; ++i) EXPECT_EQ(BitVec::from_index(i, 8).to_index(), i);
  EXPECT_EQ(BitVec::from_index(0b110, 3), (BitVec{0, 1, 1}));
}

TEST(BitVec, SliceAndAppend) {
  BitVec v{1, 0, 1, 1};
  EXPECT_EQ(v.slice(1, 2), (BitVec{0, 1}));
  EXPECT_EQ(v.slice(4, 0).size(), 0u);
  EXPECT_THROW(v.slice(3, 2), ds::DimensionError);
  v.append(BitVec{0});
  EXPECT_EQ(v, (BitVec{1, 0, 1, 1, 0}));
  EXPECT_EQ(v.popcount(), 3u);
}

TEST(Properties, XorIsAnInvolution) {
  for (const auto& a : all_bits(4))
    for (const auto& b : all_bits(4)) EXPECT_EQ(ds::xor_bits(ds::xor_bits(a, b), b), a);
}

TEST(Properties, BilinearityExhaustiveUpToLength8) {
  for (std::size_t n : {1u, 3u, 8u}) {
    ds::Rng rng = ds::derive_rng(11, n);
    const std::size_t count = n <= 3 ? (std::size_t{1} << (3 * n)) : 20000;
    for (std::size_t t = 0; t < count; ++t) {
      BitVec a, b, c;
      if (n <= 3) {
        a = BitVec::from_index(t & ((1u << n) - 1), n);
        b = BitVec::from_index((t >> n) & ((1u << n) - 1), n);
        c = BitVec::from_index(t >> (2 * n), n);
      } else {
        a = BitVec::random(n, rng);
        b = BitVec::random(n, rng);
        c = BitVec::random(n, rng);
      }
      EXPECT_EQ(ds::ip_mod2(ds::xor_bits(a, c), b), (ds::ip_mod2(a, b) + ds::ip_mod2(c, b)) % 2);
    }
  }
}

// ip(x,y) = ip(x+x', y+y') + ip(x',y') + ip(x+x', y') + ip(x', y+y') mod 2.
int four_term(const BitVec& x, const BitVec& y, const BitVec& xp, const BitVec& yp) {
  const BitVec xs = ds::xor_bits(x, xp), ys = ds::xor_bits(y, yp);
  return (ds::ip_mod2(xs, ys) + ds::ip_mod2(xp, yp) + ds::ip_mod2(xs, yp) + ds::ip_mod2(xp, ys)) % 2;
}

TEST(Properties, FourTermIdentityExhaustiveLength4) {
  const auto all = all_bits(4);
  for (const auto& x : all)
    for (const auto& y : all)
      for (const auto& xp : all)
        for (const auto& yp : all) ASSERT_EQ(four_term(x, y, xp, yp), ds::ip_mod2(x, y));
}

TEST(Properties, FourTermIdentityRandomized) {
  ds::Rng rng = ds::derive_rng(5, 0);
  for (int t = 0; t < 5000; ++t) {
    const std::size_t n = 5 + ds::uniform_index(rng, 60);
    const BitVec x = BitVec::random(n, rng), y = BitVec::random(n, rng);
    const BitVec xp = BitVec::random(n, rng), yp = BitVec::random(n, rng);
    ASSERT_EQ(four_term(x, y, xp, yp), ds::ip_mod2(x, y));
  }
}

TEST(Random, DerivedStreamsAreReproducibleAndDistinct) {
  ds::Rng a = ds::derive_rng(42, 3), b = ds::derive_rng(42, 3), c = ds::derive_rng(42, 4);
  const auto va = a(), vb = b(), vc = c();
  EXPECT_EQ(va, vb);
  EXPECT_NE(va, vc);
}

TEST(Random, UniformIndexStaysInRangeAndCoversIt) {
  ds::Rng rng = ds::derive_rng(1, 1);
  std::vector<int> hits(7, 0);
  for (int t = 0; t < 7000; ++t) {
    const auto k = ds::uniform_index(rng, 7);
    ASSERT_LT(k, 7u);
    ++hits[k];
  }
  for (int h : hits) EXPECT_GT(h, 800);
}

TEST(Random, Uniform01InHalfOpenUnitInterval) {
  ds::Rng rng = ds::derive_rng(2, 2);
  double sum = 0.0;
  for (int t = 0; t < 100000; ++t) {
    const double u = ds::uniform01(rng);
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    sum += u;
  }
  EXPECT_NEAR(sum / 100000.0, 0.5, 0.005);
}
