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

#include "edgearo/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace edgearo {

namespace {

constexpr int kMaxRejections = 10000;

double log_binomial(std::size_t n, std::size_t k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

}  // namespace

std::vector<std::uint8_t> sample_failures(std::size_t n, int k, Rng& rng) {
  std::vector<std::uint8_t> z(n, 0);
  const std::size_t kmax = std::min<std::size_t>(n, std::max(k, 0));
  if (kmax == 0) return z;
  std::vector<double> weights;
  const double top = log_binomial(n, std::min(kmax, n / 2));
  for (std::size_t s = 0; s <= kmax; ++s) {
    weights.push_back(std::exp(log_binomial(n, s) - top));
  }
  std::discrete_distribution<std::size_t> size_dist(weights.begin(),
                                                    weights.end());
  const std::size_t size = size_dist(rng);
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  // Partial Fisher-Yates: the first `size` entries are a uniform subset.
  for (std::size_t s = 0; s < size; ++s) {
    std::uniform_int_distribution<std::size_t> pick(s, n - 1);
    std::swap(idx[s], idx[pick(rng)]);
    z[idx[s]] = 1;
  }
  return z;
}

double truncated_normal(double mean, double sd, double lo, double hi,
                        Rng& rng) {
  if (hi <= lo || sd <= 0.0) return std::clamp(mean, lo, hi);
  std::normal_distribution<double> dist(mean, sd);
  for (int k = 0; k < kMaxRejections; ++k) {
    const double x = dist(rng);
    if (x >= lo && x <= hi) return x;
  }
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

double truncated_lognormal(double median, double sigma, double lo, double hi,
                           Rng& rng) {
  if (hi <= lo || sigma <= 0.0 || median <= 0.0) {
    return std::clamp(median, lo, hi);
  }
  std::lognormal_distribution<double> dist(std::log(median), sigma);
  for (int k = 0; k < kMaxRejections; ++k) {
    const double x = dist(rng);
    if (x >= lo && x <= hi) return x;
  }
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

}  // namespace edgearo
