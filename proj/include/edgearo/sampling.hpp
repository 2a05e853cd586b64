// Copyright 2026 The edgearo Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Random scenario ingredients shared by training and test generators.

#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace edgearo {

using Rng = std::mt19937_64;

/// Uniform draw from { z in {0,1}^n : sum z <= k }, empty set included: the
/// size is drawn with probability proportional to C(n, size), then a uniform
/// subset of that size.
std::vector<std::uint8_t> sample_failures(std::size_t n, int k, Rng& rng);

/// Normal(mean, sd) truncated to [lo, hi] by rejection; falls back to a
/// uniform draw on [lo, hi] when the window carries negligible mass.
double truncated_normal(double mean, double sd, double lo, double hi,
                        Rng& rng);

/// Lognormal with the given median and log-scale sigma, truncated to
/// [lo, hi] by rejection with the same fallback. Requires lo >= 0.
double truncated_lognormal(double median, double sigma, double lo, double hi,
                           Rng& rng);

}  // namespace edgearo
