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

#include <array>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>
#include <cstddef>
#include <vector>

#include "depthsep/errors.hpp"

namespace depthsep {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;
// 256-bit binary mantissa.
using Real = boost::multiprecision::number<
    boost::multiprecision::cpp_bin_float<256, boost::multiprecision::digit_base_2>,
    boost::multiprecision::et_off>;

using Signature = std::array<int, 4>;

// n! for n = 0..max, computed once.
class FactorialTable {
 public:
  explicit FactorialTable(int max) : table_(static_cast<std::size_t>(max) + 1) {
    table_[0] = 1;
    for (std::size_t n = 1; n < table_.size(); ++n) table_[n] = table_[n - 1] * n;
  }

  const BigInt& operator()(int n) const {
    detail::require(n >= 0 && static_cast<std::size_t>(n) < table_.size(),
                    "FactorialTable: argument out of range");
    return table_[static_cast<std::size_t>(n)];
  }

  int max() const { return static_cast<int>(table_.size()) - 1; }

  // (sum k)! / prod k_i!
  BigInt multinomial(const Signature& k) const {
    const int total = k[0] + k[1] + k[2] + k[3];
    BigInt denom = (*this)(k[0]) * (*this)(k[1]) * (*this)(k[2]) * (*this)(k[3]);
    return (*this)(total) / denom;
  }

  BigInt product(const Signature& k) const {
    return (*this)(k[0]) * (*this)(k[1]) * (*this)(k[2]) * (*this)(k[3]);
  }

 private:
  std::vector<BigInt> table_;
};

// Calls fn(sig) for every (k1, k2, k3, k4) >= 0 with sum == total.
template <typename Fn>
void for_each_composition(int total, Fn&& fn) {
  Signature s{};
  for (s[0] = 0; s[0] <= total; ++s[0])
    for (s[1] = 0; s[0] + s[1] <= total; ++s[1])
      for (s[2] = 0; s[0] + s[1] + s[2] <= total; ++s[2]) {
        s[3] = total - s[0] - s[1] - s[2];
        fn(static_cast<const Signature&>(s));
      }
}

inline Real to_real(const Rational& q) {
  return Real(boost::multiprecision::numerator(q)) / Real(boost::multiprecision::denominator(q));
}

inline Real to_real(const BigInt& num, const BigInt& den) { return Real(num) / Real(den); }

}  // namespace depthsep
