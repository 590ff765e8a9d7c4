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
#ifndef BDPFL_FEDERATION_HPP_
#define BDPFL_FEDERATION_HPP_

#include <optional>
#include <string>
#include <vector>

#include "bdpfl/accountant.hpp"
#include "bdpfl/config.hpp"
#include "bdpfl/data.hpp"
#include "bdpfl/dp_baseline.hpp"
#include "bdpfl/model.hpp"

namespace bdpfl {

// Round parameters the server broadcasts before local work starts. Sequential
// instance accounting discloses the total example count; joint accounting
// discloses the participant count and the effective aggregate noise std.
struct BroadcastInfo {
  int participants = 0;
  double sigma_eff = 0.0;
  std::size_t total_examples = 0;
};

struct ClientUpdate {
  std::vector<double> update;
  int batch_used = 0;
  bool empty_batch = false;  // batch empty after one resample; update is zero

  // Instance-level material (present when the on-device mechanism ran).
  std::vector<double> instance_sensitivities;      // ||clipped per-example g||
  std::optional<RoundCostEstimate> instance_cost;  // per-lambda c-hat_j

  // Joint accounting: per-lambda log-value lambda * D_{lambda+1} for leaving
  // this client's whole update out of the round aggregate.
  std::vector<double> joint_divergence;
};

struct RoundRecord {
  int round = 0;
  double train_acc = 0.0;
  double test_acc = 0.0;
  double eps_dp = 0.0;
  double eps_bdp_client = 0.0;
  double eps_bdp_instance = 0.0;
  double delta_total = 0.0;
  int participants = 0;
  double wall_ms = 0.0;  // not rendered into the CSV (reproducibility)
  bool skipped = false;
  bool truncated = false;
};

struct Ledgers {
  PrivacyLedger client;
  PrivacyLedger instance;
  DpLedger dp;
};

// Computes one client's contribution for the round. In client mode (without
// on-device noise) this is the plain average gradient over the sampled
// batch; otherwise each per-example gradient is clipped to clip_instance,
// summed, perturbed with N(0, (clip_instance * sigma_instance)^2 I) and
// divided by the expected batch size. An empty Poisson batch is resampled
// once; a second empty draw yields a flagged zero update.
ClientUpdate local_update(const ModelSpec& spec, const ModelState& model,
                          const DataSet& data, const ClientShard& shard,
                          const ExperimentConfig& config,
                          const BroadcastInfo& broadcast,
                          const LambdaGrid& grid, int round);

// Server-side combination. Client mode: clip each update to clip_client,
// average, perturb the mean with noise std clip_client * sigma_client, and
// emit leave-one-out sensitivity samples ||mean - mean_without_j|| computed
// with denominators n and n-1. Joint and instance modes: plain average, no
// server noise, no samples. Client mode requires at least two updates.
struct AggregateResult {
  std::vector<double> delta;
  std::vector<SensitivitySample> samples;
};
AggregateResult aggregate(const std::vector<ClientUpdate>& updates,
                          const MechanismParams& params, PrivacyMode mode,
                          int estimator_samples, RngStream& selection_rng,
                          RngStream& noise_rng);

struct RunResult {
  std::vector<RoundRecord> records;
  Ledgers ledgers;
  ModelState model;
  std::string header;
  bool truncated = false;
  int lambda_dropped = 0;  // orders removed by saturation handling
};

// Runs the full experiment described by the config: partition, T rounds of
// FedSGD with the configured privacy accounting, early stopping on the
// epsilon budget. Deterministic given the seed (records, ledgers and CSV
// bytes are identical across reruns and thread counts).
RunResult run_experiment(const ExperimentConfig& config,
                         ExecPolicy policy = ExecPolicy::kParallel);

// CSV rendering: header line plus one row per record,
// round,train_acc,test_acc,eps_dp,eps_bdp_client,eps_bdp_instance,delta_total
// with 6-decimal fixed rendering.
std::string records_to_csv(const std::vector<RoundRecord>& records);

}  // namespace bdpfl

#endif  // BDPFL_FEDERATION_HPP_
