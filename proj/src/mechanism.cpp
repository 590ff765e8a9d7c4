// Copyright 2026 The bdpfl Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include "bdpfl/mechanism.hpp"

#include <cmath>
#include <numeric>

#include "bdpfl/errors.hpp"

namespace bdpfl {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_id_(stream_id) {
  // Mix seed and stream id into a single engine seed; mt19937_64 single-value
  // seeding is fully specified by the standard.
  const std::uint64_t mixed = splitmix64(seed ^ splitmix64(stream_id));
  engine_.seed(mixed);
}

double RngStream::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double RngStream::uniform_pos() {
  return (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53;
}

double RngStream::normal() {
  if (has_cached_) {
    has_cached_ = false;
    return cached_;
  }
  const double u1 = uniform_pos();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * M_PI * u2;
  cached_ = r * std::sin(theta);
  has_cached_ = true;
  return r * std::cos(theta);
}

std::size_t RngStream::uniform_index(std::size_t n) {
  if (n == 0) throw DomainError("uniform_index: n must be positive");
  // Rejection sampling over a power-of-two range keeps the draw unbiased.
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
  std::uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return static_cast<std::size_t>(x % n);
}

RngStream derive_stream(std::uint64_t seed, StreamPurpose purpose,
                        std::uint64_t round, std::uint64_t client) {
  const std::uint64_t id = (static_cast<std::uint64_t>(purpose) << 56) |
                           ((round & 0xFFFFFFFULL) << 28) |
                           (client & 0xFFFFFFFULL);
  return RngStream(seed, id);
}

double l2_norm(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

std::vector<double> clip(std::span<const double> v, double c) {
  if (!(c > 0)) throw DomainError("clip: threshold must be positive");
  std::vector<double> out(v.begin(), v.end());
  const double norm = l2_norm(v);
  if (norm > c) {
    const double scale = c / norm;
    for (double& x : out) x *= scale;
  }
  return out;
}

std::vector<double> gaussian_perturb(std::span<const double> v, double std_dev,
                                     RngStream& rng) {
  if (std_dev < 0) throw DomainError("gaussian_perturb: std must be >= 0");
  std::vector<double> out(v.begin(), v.end());
  if (std_dev == 0.0) return out;
  for (double& x : out) x += std_dev * rng.normal();
  return out;
}

std::vector<std::size_t> sample_subset(std::size_t n, double prob,
                                       RngStream& rng) {
  if (prob < 0.0 || prob > 1.0) {
    throw DomainError("sample_subset: prob outside [0, 1]");
  }
  std::vector<std::size_t> out;
  if (prob == 0.0) return out;
  if (prob == 1.0) {
    out.resize(n);
    std::iota(out.begin(), out.end(), std::size_t{0});
    return out;
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (rng.uniform() < prob) out.push_back(i);
  }
  return out;
}

std::vector<std::size_t> sample_without_replacement(std::size_t n,
                                                    std::size_t k,
                                                    RngStream& rng) {
  if (k > n) throw DomainError("sample_without_replacement: k > n");
  std::vector<std::size_t> pool(n);
  std::iota(pool.begin(), pool.end(), std::size_t{0});
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j = i + rng.uniform_index(n - i);
    std::swap(pool[i], pool[j]);
  }
  pool.resize(k);
  return pool;
}

}  // namespace bdpfl
