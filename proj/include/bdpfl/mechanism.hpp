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
#ifndef BDPFL_MECHANISM_HPP_
#define BDPFL_MECHANISM_HPP_

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace bdpfl {

// Deterministic random stream: identical (seed, stream_id) produce identical
// draw sequences on every platform. The engine is std::mt19937_64 (whose
// initialization and output are fully specified by the standard) and normals
// come from an in-house Box-Muller transform, so no implementation-defined
// distribution code is involved. Run headers declare this as
// "mt19937_64+box-muller".
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

  // Uniform on [0, 1) with 53-bit resolution.
  double uniform();

  // Uniform on (0, 1]; never returns zero (safe under log).
  double uniform_pos();

  // Standard normal via Box-Muller; draws are consumed in pairs with the
  // second value cached.
  double normal();

  // Uniform integer in [0, n).
  std::size_t uniform_index(std::size_t n);

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::mt19937_64 engine_;
  bool has_cached_ = false;
  double cached_ = 0.0;
};

// Identifies what a derived stream is used for, so that every draw in a
// simulation maps to a unique (seed, stream_id) pair.
enum class StreamPurpose : std::uint64_t {
  kData = 1,
  kPartition = 2,
  kModelInit = 3,
  kParticipation = 4,
  kBatch = 5,
  kLocalNoise = 6,
  kServerNoise = 7,
  kSensitivitySelection = 8,
  kOracle = 9,
};

// One stream per (purpose, round, client). Rounds and clients must fit in
// 28 bits each, which is far beyond desk scale.
RngStream derive_stream(std::uint64_t seed, StreamPurpose purpose,
                        std::uint64_t round, std::uint64_t client);

// Scales v to L2 norm at most c: v * min(1, c / ||v||). The zero vector maps
// to itself.
std::vector<double> clip(std::span<const double> v, double c);

double l2_norm(std::span<const double> v);

// v + z with z ~ N(0, std^2 I), drawn deterministically from rng.
std::vector<double> gaussian_perturb(std::span<const double> v, double std_dev,
                                     RngStream& rng);

// Poisson sampling: each index in [0, n) is included independently with
// probability prob. Returned indices are sorted.
std::vector<std::size_t> sample_subset(std::size_t n, double prob,
                                       RngStream& rng);

// Partial Fisher-Yates: the first k elements of a random permutation of
// [0, n). Used to pick estimator samples without replacement.
std::vector<std::size_t> sample_without_replacement(std::size_t n,
                                                    std::size_t k,
                                                    RngStream& rng);

}  // namespace bdpfl

#endif  // BDPFL_MECHANISM_HPP_
