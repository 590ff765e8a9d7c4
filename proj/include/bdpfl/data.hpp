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
#ifndef BDPFL_DATA_HPP_
#define BDPFL_DATA_HPP_

#include <cstddef>
#include <string>
#include <vector>

#include "bdpfl/mechanism.hpp"

namespace bdpfl {

// Dense feature/label storage; features are row-major n x dim.
struct DataSet {
  std::vector<double> features;
  std::vector<int> labels;
  std::size_t dim = 0;

  std::size_t n() const { return labels.size(); }
  const double* example(std::size_t i) const { return features.data() + i * dim; }
};

struct SynthSpec {
  int classes = 2;
  int dim = 2;
  int per_class = 100;
  double separation = 4.0;   // distance between paired class centers
  double cluster_std = 1.0;  // isotropic within-class std
};

// Gaussian class-conditional clusters. Class centers sit in +-pairs along
// the coordinate axes at distance `separation`, so separation 0 makes the
// classes indistinguishable and large separation makes them linearly
// separable. Deterministic given the stream.
DataSet synth_data(const SynthSpec& spec, RngStream& rng);

// IDX-format loader (big-endian headers, magic 0x00000803 for images and
// 0x00000801 for labels). Pixels are scaled to [0, 1]. Malformed or
// truncated files raise a format error naming the byte offset; no partial
// dataset is ever returned.
DataSet load_idx(const std::string& images_path,
                 const std::string& labels_path);

// One client's local view: indices into the shared DataSet plus the knobs
// the privacy machinery needs.
struct ClientShard {
  int client_id = 0;
  std::vector<std::size_t> example_ids;
  int batch_size = 0;         // B_i
  double participation = 1.0; // alpha

  std::size_t n_local() const { return example_ids.size(); }
};

// Uniform random partition with shard sizes differing by at most one.
// Throws when n_clients exceeds the number of examples.
std::vector<ClientShard> partition_iid(const DataSet& data, int n_clients,
                                       RngStream& rng);

// Label-homogeneous shards of `shard_size` points each, `shards_per_client`
// random shards per client, so every client holds at most that many
// distinct labels. Throws when the data cannot supply enough shards.
std::vector<ClientShard> partition_shards(const DataSet& data, int n_clients,
                                          int shards_per_client,
                                          int shard_size, RngStream& rng);

}  // namespace bdpfl

#endif  // BDPFL_DATA_HPP_
