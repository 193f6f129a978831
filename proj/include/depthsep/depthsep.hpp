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

#include "depthsep/bits.hpp"
#include "depthsep/depth3.hpp"
#include "depthsep/errors.hpp"
#include "depthsep/exact.hpp"
#include "depthsep/instance.hpp"
#include "depthsep/io.hpp"
#include "depthsep/network.hpp"
#include "depthsep/random.hpp"
#include "depthsep/reduction.hpp"
#include "depthsep/threshold.hpp"
#include "depthsep/training.hpp"
#include "depthsep/verify.hpp"
