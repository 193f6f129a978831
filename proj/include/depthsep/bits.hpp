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

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "depthsep/errors.hpp"
#include "depthsep/random.hpp"

namespace depthsep {

// Fixed-length vector over {0,1}.
class BitVec {
 public:
  BitVec() = default;
  explicit BitVec(std::size_t len) : bits_(len, 0) {}
  BitVec(std::initializer_list<int> bits) {
    bits_.reserve(bits.size());
    for (int b : bits) push_back(b);
  }
  explicit BitVec(std::span<const int> bits) {
    bits_.reserve(bits.size());
    for (int b : bits) push_back(b);
  }

  // Bit j of `index` becomes entry j.
  static BitVec from_index(std::uint64_t index, std::size_t len) {
    BitVec v(len);
    for (std::size_t j = 0; j < len; ++j) v.bits_[j] = (index >> j) & 1U;
    return v;
  }

  static BitVec random(std::size_t len, Rng& rng) {
    BitVec v(len);
    for (auto& b : v.bits_) b = static_cast<std::uint8_t>(random_bit(rng));
    return v;
  }

  std::uint64_t to_index() const {
    std::uint64_t idx = 0;
    for (std::size_t j = 0; j < bits_.size(); ++j) idx |= std::uint64_t{bits_[j]} << j;
    return idx;
  }

  std::size_t size() const { return bits_.size(); }
  bool empty() const { return bits_.empty(); }
  int operator[](std::size_t i) const { return bits_[i]; }

  void set(std::size_t i, int b) {
    detail::require(b == 0 || b == 1, "BitVec entries must be 0 or 1");
    bits_[i] = static_cast<std::uint8_t>(b);
  }

  void push_back(int b) {
    detail::require(b == 0 || b == 1, "BitVec entries must be 0 or 1");
    bits_.push_back(static_cast<std::uint8_t>(b));
  }

  void append(const BitVec& other) {
    bits_.insert(bits_.end(), other.bits_.begin(), other.bits_.end());
  }

  BitVec slice(std::size_t begin, std::size_t len) const {
    detail::require_dim(begin <= bits_.size() && len <= bits_.size() - begin,
                        "BitVec::slice: range out of bounds");
    BitVec v;
    const auto first = bits_.begin() + static_cast<std::ptrdiff_t>(begin);
    v.bits_.assign(first, first + static_cast<std::ptrdiff_t>(len));
    return v;
  }

  std::size_t popcount() const {
    std::size_t c = 0;
    for (auto b : bits_) c += b;
    return c;
  }

  std::vector<double> to_real() const { return {bits_.begin(), bits_.end()}; }

  std::string to_string() const {
    std::string s;
    for (auto b : bits_) s.push_back(b ? '1' : '0');
    return s;
  }

  friend bool operator==(const BitVec&, const BitVec&) = default;

 private:
  std::vector<std::uint8_t> bits_;
};

// <x, y> mod 2.
inline int ip_mod2(const BitVec& x, const BitVec& y) {
  detail::require_dim(x.size() == y.size(), "ip_mod2: length mismatch");
  int acc = 0;
  for (std::size_t i = 0; i < x.size(); ++i) acc ^= x[i] & y[i];
  return acc;
}

// Integer-extended inner product mod 2, used off the Boolean cube.
inline int ip_mod2(std::span<const std::int64_t> x, std::span<const std::int64_t> y) {
  detail::require_dim(x.size() == y.size(), "ip_mod2: length mismatch");
  std::int64_t acc = 0;
  for (std::size_t i = 0; i < x.size(); ++i) acc ^= (x[i] & 1) & (y[i] & 1);
  return static_cast<int>(acc);
}

// Coordinatewise addition mod 2.
inline BitVec xor_bits(const BitVec& x, const BitVec& y) {
  detail::require_dim(x.size() == y.size(), "xor_bits: length mismatch");
  BitVec out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out.set(i, x[i] ^ y[i]);
  return out;
}

// Nearest integer per coordinate; halves round away from zero.
inline std::vector<std::int64_t> round_vec(std::span<const double> v) {
  std::vector<std::int64_t> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = static_cast<std::int64_t>(std::round(v[i]));
  return out;
}

}  // namespace depthsep
