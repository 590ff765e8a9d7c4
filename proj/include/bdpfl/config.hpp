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
#ifndef BDPFL_CONFIG_HPP_
#define BDPFL_CONFIG_HPP_

#include <cstdint>
#include <string>

#include "bdpfl/model.hpp"

namespace bdpfl {

enum class PrivacyMode { kClient, kInstanceSeq, kInstancePar, kJoint };
enum class PartitionKind { kIid, kShards };
enum class DataKind { kSynthetic, kIdx };

std::string to_string(PrivacyMode mode);
std::string to_string(PartitionKind kind);
std::string to_string(DataKind kind);
std::string to_string(ModelKind kind);

// Full description of a simulation run; every numeric field is range-checked
// at parse time and unknown keys are rejected.
struct ExperimentConfig {
  struct Experiment {
    std::uint64_t seed = 1;
    int rounds = 50;
    int clients = 10;
    double participation = 1.0;
    PartitionKind partition = PartitionKind::kIid;
    int shards_per_client = 2;
  } experiment;

  struct Model {
    ModelKind kind = ModelKind::kLogistic;
    int dimension = 2;
    int classes = 2;
    double learning_rate = 0.5;  // pinned default; 0.1 when kind = mlp
    bool learning_rate_set = false;
  } model;

  struct Privacy {
    PrivacyMode mode = PrivacyMode::kClient;
    double sigma_client = 1.0;
    double sigma_instance = 0.0;  // > 0 adds the on-device mechanism
    double clip_client = 1.0;
    double clip_instance = 1.0;
    int batch = 0;  // B_i; 0 means the full local dataset
    double delta = 1e-3;
    int lambda_max = 64;
    int estimator_samples = 0;  // m for client-level estimation; 0 = all
    double epsilon_budget = 0.0;  // > 0 enables early stopping on eps_dp
  } privacy;

  struct Data {
    DataKind kind = DataKind::kSynthetic;
    int per_class = 50;
    double separation = 4.0;
    double cluster_std = 1.0;
    std::string images;  // idx only
    std::string labels;  // idx only
  } data;

  struct Output {
    std::string csv = "out/rounds.csv";
  } output;

  ModelSpec model_spec() const {
    return ModelSpec{model.kind, model.dimension, model.classes};
  }
};

// Parses INI-style sections of `key = value` lines with `#` comments.
// Errors (unknown key, bad value, out-of-range) name the offending line.
ExperimentConfig parse_config(const std::string& text);

ExperimentConfig load_config(const std::string& path);

// Emits a config that parses back to an identical structure.
std::string serialize_config(const ExperimentConfig& config);

}  // namespace bdpfl

#endif  // BDPFL_CONFIG_HPP_
