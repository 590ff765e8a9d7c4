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
#include "bdpfl/data.hpp"

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <numeric>

#include "bdpfl/errors.hpp"

namespace bdpfl {

DataSet synth_data(const SynthSpec& spec, RngStream& rng) {
  if (spec.classes < 2) throw DomainError("synth_data: classes must be >= 2");
  if (spec.dim < 2) throw DomainError("synth_data: dimension must be >= 2");
  if (spec.per_class < 1) throw DomainError("synth_data: per_class must be >= 1");
  if (spec.cluster_std < 0) throw DomainError("synth_data: cluster_std < 0");
  if (spec.separation < 0) throw DomainError("synth_data: separation < 0");

  DataSet data;
  data.dim = static_cast<std::size_t>(spec.dim);
  const std::size_t n = static_cast<std::size_t>(spec.classes) *
                        static_cast<std::size_t>(spec.per_class);
  data.features.resize(n * data.dim);
  data.labels.resize(n);

  // Class c sits at (+-separation/2) along axis (c/2) mod dim; classes come
  // in opposing pairs so two classes are exactly `separation` apart.
  std::vector<double> center(data.dim);
  std::size_t row = 0;
  for (int c = 0; c < spec.classes; ++c) {
    std::fill(center.begin(), center.end(), 0.0);
    const std::size_t axis = static_cast<std::size_t>(c / 2) % data.dim;
    const double sign = (c % 2 == 0) ? -1.0 : 1.0;
    const double radius = 0.5 * spec.separation * (1.0 + c / (2 * spec.dim));
    center[axis] = sign * radius;
    for (int i = 0; i < spec.per_class; ++i, ++row) {
      double* x = data.features.data() + row * data.dim;
      for (std::size_t d = 0; d < data.dim; ++d) {
        x[d] = center[d] + spec.cluster_std * rng.normal();
      }
      data.labels[row] = c;
    }
  }
  return data;
}

namespace {

std::uint32_t read_be32(std::ifstream& in, const std::string& path,
                        std::size_t offset) {
  unsigned char buf[4];
  in.read(reinterpret_cast<char*>(buf), 4);
  if (!in) {
    throw Error("idx format error in " + path + ": truncated at byte offset " +
                std::to_string(offset));
  }
  return (std::uint32_t{buf[0]} << 24) | (std::uint32_t{buf[1]} << 16) |
         (std::uint32_t{buf[2]} << 8) | std::uint32_t{buf[3]};
}

}  // namespace

DataSet load_idx(const std::string& images_path,
                 const std::string& labels_path) {
  std::ifstream img(images_path, std::ios::binary);
  if (!img) throw Error("cannot open " + images_path);
  std::ifstream lab(labels_path, std::ios::binary);
  if (!lab) throw Error("cannot open " + labels_path);

  const std::uint32_t img_magic = read_be32(img, images_path, 0);
  if (img_magic != 0x00000803u) {
    throw Error("idx format error in " + images_path +
                ": bad image magic at byte offset 0");
  }
  const std::uint32_t n = read_be32(img, images_path, 4);
  const std::uint32_t rows = read_be32(img, images_path, 8);
  const std::uint32_t cols = read_be32(img, images_path, 12);

  const std::uint32_t lab_magic = read_be32(lab, labels_path, 0);
  if (lab_magic != 0x00000801u) {
    throw Error("idx format error in " + labels_path +
                ": bad label magic at byte offset 0");
  }
  const std::uint32_t n_labels = read_be32(lab, labels_path, 4);
  if (n_labels != n) {
    throw Error("idx format error: " + std::to_string(n) + " images vs " +
                std::to_string(n_labels) + " labels");
  }

  DataSet data;
  data.dim = static_cast<std::size_t>(rows) * cols;
  const std::size_t total = static_cast<std::size_t>(n) * data.dim;
  std::vector<unsigned char> pixels(total);
  img.read(reinterpret_cast<char*>(pixels.data()),
           static_cast<std::streamsize>(total));
  if (static_cast<std::size_t>(img.gcount()) != total) {
    throw Error("idx format error in " + images_path +
                ": truncated at byte offset " +
                std::to_string(16 + img.gcount()));
  }
  std::vector<unsigned char> raw_labels(n);
  lab.read(reinterpret_cast<char*>(raw_labels.data()), n);
  if (static_cast<std::size_t>(lab.gcount()) != n) {
    throw Error("idx format error in " + labels_path +
                ": truncated at byte offset " + std::to_string(8 + lab.gcount()));
  }

  data.features.resize(total);
  for (std::size_t i = 0; i < total; ++i) {
    data.features[i] = pixels[i] / 255.0;
  }
  data.labels.assign(raw_labels.begin(), raw_labels.end());
  return data;
}

std::vector<ClientShard> partition_iid(const DataSet& data, int n_clients,
                                       RngStream& rng) {
  if (n_clients < 1) throw DomainError("partition_iid: n_clients must be >= 1");
  const std::size_t n = data.n();
  if (static_cast<std::size_t>(n_clients) > n) {
    throw DomainError("partition_iid: more clients than examples");
  }
  std::vector<std::size_t> perm = sample_without_replacement(n, n, rng);
  std::vector<ClientShard> shards(n_clients);
  const std::size_t base = n / n_clients;
  const std::size_t extra = n % n_clients;
  std::size_t pos = 0;
  for (int c = 0; c < n_clients; ++c) {
    const std::size_t size = base + (static_cast<std::size_t>(c) < extra ? 1 : 0);
    shards[c].client_id = c;
    shards[c].example_ids.assign(perm.begin() + pos, perm.begin() + pos + size);
    pos += size;
  }
  return shards;
}

std::vector<ClientShard> partition_shards(const DataSet& data, int n_clients,
                                          int shards_per_client,
                                          int shard_size, RngStream& rng) {
  if (n_clients < 1 || shards_per_client < 1 || shard_size < 1) {
    throw DomainError("partition_shards: counts must be >= 1");
  }
  // Order examples by (label, index), then cut label-homogeneous shards.
  std::vector<std::size_t> order(data.n());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&data](std::size_t a, std::size_t b) {
                     return data.labels[a] < data.labels[b];
                   });
  std::vector<std::vector<std::size_t>> pool;
  std::size_t i = 0;
  while (i < order.size()) {
    const int label = data.labels[order[i]];
    std::size_t j = i;
    while (j < order.size() && data.labels[order[j]] == label) ++j;
    for (std::size_t s = i; s + shard_size <= j;
         s += static_cast<std::size_t>(shard_size)) {
      pool.emplace_back(order.begin() + s, order.begin() + s + shard_size);
    }
    i = j;
  }
  const std::size_t needed = static_cast<std::size_t>(n_clients) *
                             static_cast<std::size_t>(shards_per_client);
  if (pool.size() < needed) {
    throw DomainError("partition_shards: insufficient data: need " +
                      std::to_string(needed) + " shards, have " +
                      std::to_string(pool.size()));
  }
  const std::vector<std::size_t> deal =
      sample_without_replacement(pool.size(), needed, rng);
  std::vector<ClientShard> shards(n_clients);
  for (int c = 0; c < n_clients; ++c) {
    shards[c].client_id = c;
    for (int s = 0; s < shards_per_client; ++s) {
      const auto& piece = pool[deal[c * shards_per_client + s]];
      shards[c].example_ids.insert(shards[c].example_ids.end(), piece.begin(),
                                   piece.end());
    }
  }
  return shards;
}

}  // namespace bdpfl
