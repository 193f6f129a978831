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

#include <stdexcept>
#include <string>

namespace depthsep {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Operand shapes disagree (vector lengths, layer dimensions, input maps).
class DimensionError : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// The greedy packing heuristic ran out of proposals. Raising the attempt
// budget or changing the seed usually fixes it.
class PackingInfeasible : public Error {
 public:
  using Error::Error;
};

// Segment count of a threshold compilation exceeded the total-variation bound
// declared for the activation.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

// Exhaustive enumeration requested beyond the supported size.
class EnumerationBudget : public Error {
 public:
  using Error::Error;
};

namespace detail {

inline void require(bool cond, const std::string& what) {
  if (!cond) throw InvalidArgument(what);
}

inline void require_dim(bool cond, const std::string& what) {
  if (!cond) throw DimensionError(what);
}

}  // namespace detail
}  // namespace depthsep
