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
#include <cmath>
#include <vector>

#include "bdpfl/errors.hpp"
#include "bdpfl/federation.hpp"
#include "doctest.h"

using namespace bdpfl;

namespace {

ExperimentConfig base_config() {
  ExperimentConfig cfg;
  cfg.experiment.seed = 7;
  cfg.experiment.rounds = 5;
  cfg.experiment.clients = 8;
  cfg.experiment.participation = 1.0;
  cfg.model.dimension = 2;
  cfg.model.classes = 2;
  cfg.data.per_class = 40;
  cfg.data.separation = 6.0;
  return cfg;
}

ClientUpdate make_update(std::vector<double> v) {
  ClientUpdate u;
  u.update = std::move(v);
  u.batch_used = 1;
  return u;
}

MechanismParams client_params(double sigma, double clip, double alpha) {
  MechanismParams p;
  p.sigma = sigma;
  p.clip = clip;
  p.sampling_prob = alpha;
  return p;
}

}  // namespace

TEST_SUITE("federation") {

TEST_CASE("aggregate client mode: identical updates have zero sensitivity") {
  std::vector<ClientUpdate> updates;
  for (int i = 0; i < 4; ++i) updates.push_back(make_update({0.3, -0.1}));
  RngStream sel(1, 0);
  RngStream noise(1, 1);
  const auto result = aggregate(updates, client_params(0.0, 10.0, 1.0),
                                PrivacyMode::kClient, 0, sel, noise);
  CHECK(result.delta[0] == doctest::Approx(0.3).epsilon(1e-15));
  CHECK(result.delta[1] == doctest::Approx(-0.1).epsilon(1e-15));
  REQUIRE(result.samples.size() == 4);
  for (const auto& s : result.samples) {
    CHECK(s.delta_norm == doctest::Approx(0.0).epsilon(1e-15));
  }
}

TEST_CASE("aggregate client mode: two-client leave-one-out arithmetic") {
  std::vector<ClientUpdate> updates;
  updates.push_back(make_update({1.0, 0.0}));
  updates.push_back(make_update({0.0, 1.0}));
  RngStream sel(2, 0);
  RngStream noise(2, 1);
  const auto result = aggregate(updates, client_params(0.0, 10.0, 1.0),
                                PrivacyMode::kClient, 0, sel, noise);
  // ||mean - mean_without_j|| = ||a - b|| / 2 for n = 2.
  const double expected = std::sqrt(2.0) / 2.0;
  REQUIRE(result.samples.size() == 2);
  CHECK(result.samples[0].delta_norm == doctest::Approx(expected).epsilon(1e-12));
  CHECK(result.samples[1].delta_norm == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("aggregate bounds sensitivity by 2C after clipping") {
  RngStream gen(3, 0);
  for (int trial = 0; trial < 25; ++trial) {
    std::vector<ClientUpdate> updates;
    const int n = 2 + static_cast<int>(gen.uniform_index(6));
    for (int i = 0; i < n; ++i) {
      std::vector<double> v(3);
      for (double& x : v) x = 5.0 * gen.normal();
      updates.push_back(make_update(std::move(v)));
    }
    const double c = 0.5 + gen.uniform();
    RngStream sel(3, 100 + trial);
    RngStream noise(3, 200 + trial);
    const auto result = aggregate(updates, client_params(0.0, c, 1.0),
                                  PrivacyMode::kClient, 0, sel, noise);
    for (const auto& s : result.samples) {
      CHECK(s.delta_norm <= 2.0 * c + 1e-12);
    }
  }
}

TEST_CASE("aggregate client mode requires two participants") {
  std::vector<ClientUpdate> updates{make_update({1.0})};
  RngStream sel(4, 0);
  RngStream noise(4, 1);
  CHECK_THROWS_WITH_AS(aggregate(updates, client_params(1.0, 1.0, 1.0),
                                 PrivacyMode::kClient, 0, sel, noise),
                       "aggregate: need >= 2 participants", DomainError);
}

TEST_CASE("aggregate joint mode adds no server noise") {
  std::vector<ClientUpdate> updates;
  updates.push_back(make_update({1.0, 2.0}));
  updates.push_back(make_update({3.0, -2.0}));
  RngStream sel_a(5, 0), noise_a(5, 1);
  RngStream sel_b(6, 2), noise_b(6, 3);
  const auto a = aggregate(updates, client_params(4.0, 1.0, 1.0),
                           PrivacyMode::kJoint, 0, sel_a, noise_a);
  const auto b = aggregate(updates, client_params(4.0, 1.0, 1.0),
                           PrivacyMode::kJoint, 0, sel_b, noise_b);
  CHECK(a.delta == b.delta);  // deterministic given fixed updates
  CHECK(a.delta[0] == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(a.samples.empty());
}

TEST_CASE("local_update without noise on a full batch is the exact mean gradient") {
  ExperimentConfig cfg = base_config();
  cfg.privacy.mode = PrivacyMode::kClient;
  cfg.privacy.sigma_client = 0.0;
  cfg.privacy.batch = 0;  // full local data

  RngStream data_rng = derive_stream(cfg.experiment.seed, StreamPurpose::kData, 0, 0);
  SynthSpec sspec{2, 2, 40, 6.0, 1.0};
  const DataSet data = synth_data(sspec, data_rng);
  RngStream part_rng = derive_stream(cfg.experiment.seed, StreamPurpose::kPartition, 0, 0);
  auto shards = partition_iid(data, 4, part_rng);

  const ModelSpec spec = cfg.model_spec();
  RngStream init_rng(1, 2);
  const ModelState model = init_model(spec, init_rng);
  const LambdaGrid grid = LambdaGrid::range(8);
  BroadcastInfo info{4, 0.0, data.n()};

  const ClientUpdate u = local_update(spec, model, data, shards[0], cfg, info, grid, 1);
  CHECK(u.batch_used == static_cast<int>(shards[0].n_local()));

  const auto grads = model_gradient(spec, model, data, shards[0].example_ids);
  std::vector<double> mean(spec.param_count(), 0.0);
  for (const auto& g : grads) {
    for (std::size_t j = 0; j < mean.size(); ++j) mean[j] += g[j];
  }
  for (double& x : mean) x /= static_cast<double>(grads.size());
  for (std::size_t j = 0; j < mean.size(); ++j) {
    CHECK(u.update[j] == doctest::Approx(mean[j]).epsilon(1e-12));
  }
}

TEST_CASE("local_update instance sensitivities are bounded by the clip") {
  ExperimentConfig cfg = base_config();
  cfg.privacy.mode = PrivacyMode::kInstanceSeq;
  cfg.privacy.sigma_instance = 6.0;
  cfg.privacy.clip_instance = 0.7;
  cfg.privacy.batch = 10;

  RngStream data_rng = derive_stream(cfg.experiment.seed, StreamPurpose::kData, 0, 0);
  SynthSpec sspec{2, 2, 40, 6.0, 1.0};
  const DataSet data = synth_data(sspec, data_rng);
  RngStream part_rng = derive_stream(cfg.experiment.seed, StreamPurpose::kPartition, 0, 0);
  auto shards = partition_iid(data, 4, part_rng);

  const ModelSpec spec = cfg.model_spec();
  RngStream init_rng(1, 2);
  const ModelState model = init_model(spec, init_rng);
  const LambdaGrid grid = LambdaGrid::range(8);
  BroadcastInfo info{4, 0.1, data.n()};

  const ClientUpdate u = local_update(spec, model, data, shards[1], cfg, info, grid, 2);
  CHECK(!u.instance_sensitivities.empty());
  for (double s : u.instance_sensitivities) {
    CHECK(s <= 0.7 + 1e-12);
  }
  REQUIRE(u.instance_cost.has_value());
  for (double c : u.instance_cost->per_lambda_cost) CHECK(c >= 0.0);
}

TEST_CASE("noiseless full-participation round equals the centralized step") {
  ExperimentConfig cfg = base_config();
  cfg.experiment.rounds = 1;
  cfg.experiment.clients = 8;  // divides 8 * 10 examples evenly
  cfg.data.per_class = 40;     // 80 total, 10 per client
  cfg.privacy.mode = PrivacyMode::kClient;
  cfg.privacy.sigma_client = 0.0;
  cfg.privacy.clip_client = 1e6;
  cfg.privacy.batch = 0;
  cfg.model.learning_rate = 0.5;

  const RunResult run = run_experiment(cfg);
  REQUIRE(run.records.size() == 1);

  // Rebuild the centralized full-batch step from the same data stream.
  RngStream data_rng = derive_stream(cfg.experiment.seed, StreamPurpose::kData, 0, 0);
  SynthSpec sspec{2, 2, 40, 6.0, 1.0};
  const DataSet data = synth_data(sspec, data_rng);
  const ModelSpec spec = cfg.model_spec();
  RngStream init_rng = derive_stream(cfg.experiment.seed, StreamPurpose::kModelInit, 0, 0);
  ModelState model = init_model(spec, init_rng);
  std::vector<std::size_t> all(data.n());
  for (std::size_t i = 0; i < data.n(); ++i) all[i] = i;
  const auto grads = model_gradient(spec, model, data, all);
  std::vector<double> mean(spec.param_count(), 0.0);
  for (const auto& g : grads) {
    for (std::size_t j = 0; j < mean.size(); ++j) mean[j] += g[j];
  }
  for (std::size_t j = 0; j < mean.size(); ++j) {
    model.weights[j] -= cfg.model.learning_rate * mean[j] / static_cast<double>(data.n());
  }
  for (std::size_t j = 0; j < model.weights.size(); ++j) {
    CHECK(run.model.weights[j] == doctest::Approx(model.weights[j]).epsilon(1e-12));
  }
}

TEST_CASE("run_experiment basics") {
  ExperimentConfig cfg = base_config();
  cfg.privacy.sigma_client = 2.0;

  SUBCASE("zero rounds give an empty record sequence") {
    cfg.experiment.rounds = 0;
    const RunResult run = run_experiment(cfg);
    CHECK(run.records.empty());
  }

  SUBCASE("identical config and seed give identical CSV bytes") {
    const RunResult a = run_experiment(cfg);
    const RunResult b = run_experiment(cfg);
    CHECK(records_to_csv(a.records) == records_to_csv(b.records));
    CHECK(a.header == b.header);
  }

  SUBCASE("serial and parallel execution agree bytewise") {
    const RunResult a = run_experiment(cfg, ExecPolicy::kParallel);
    const RunResult b = run_experiment(cfg, ExecPolicy::kSerial);
    CHECK(records_to_csv(a.records) == records_to_csv(b.records));
  }

  SUBCASE("epsilon columns are nondecreasing across rounds") {
    cfg.experiment.rounds = 10;
    cfg.experiment.participation = 0.6;
    const RunResult run = run_experiment(cfg);
    for (std::size_t i = 1; i < run.records.size(); ++i) {
      CHECK(run.records[i].eps_dp >= run.records[i - 1].eps_dp - 1e-12);
      CHECK(run.records[i].eps_bdp_client >=
            run.records[i - 1].eps_bdp_client - 1e-12);
      CHECK(run.records[i].eps_bdp_instance >=
            run.records[i - 1].eps_bdp_instance - 1e-12);
    }
  }
}

TEST_CASE("non-private baseline reaches 95 percent on separable data") {
  ExperimentConfig cfg = base_config();
  cfg.experiment.rounds = 200;
  cfg.experiment.clients = 10;
  cfg.experiment.participation = 1.0;
  cfg.data.per_class = 100;
  cfg.data.separation = 6.0;
  cfg.privacy.mode = PrivacyMode::kClient;
  cfg.privacy.sigma_client = 0.0;
  cfg.privacy.clip_client = 1e6;
  const RunResult run = run_experiment(cfg);
  bool reached = false;
  for (const auto& r : run.records) {
    if (r.test_acc >= 0.95) {
      reached = true;
      break;
    }
  }
  CHECK(reached);
}

TEST_CASE("rounds with too few participants are skipped and flagged") {
  ExperimentConfig cfg = base_config();
  cfg.experiment.clients = 3;
  cfg.experiment.participation = 0.05;
  cfg.experiment.rounds = 30;
  cfg.privacy.sigma_client = 2.0;
  const RunResult run = run_experiment(cfg);
  int skipped = 0;
  for (std::size_t i = 0; i < run.records.size(); ++i) {
    if (run.records[i].skipped) {
      ++skipped;
      if (i > 0) {
        // Model untouched: accuracy identical to the previous round.
        CHECK(run.records[i].test_acc == run.records[i - 1].test_acc);
        CHECK(run.records[i].eps_dp == run.records[i - 1].eps_dp);
      }
    }
  }
  CHECK(skipped > 0);
  CHECK(run.header.find("skipped_rounds") != std::string::npos);
}

TEST_CASE("saturating costs drop lambdas instead of clamping") {
  ExperimentConfig cfg = base_config();
  cfg.experiment.rounds = 2;
  cfg.privacy.mode = PrivacyMode::kInstanceSeq;
  cfg.privacy.sigma_instance = 0.05;  // tiny noise explodes high orders
  cfg.privacy.batch = 10;
  cfg.privacy.lambda_max = 64;
  const RunResult run = run_experiment(cfg);
  CHECK(run.lambda_dropped > 0);
  CHECK(run.ledgers.instance.grid().size() < 64);
  CHECK(run.header.find("lambda_dropped_by_saturation") != std::string::npos);
  // Bounds from the surviving grid are still finite and monotone.
  for (std::size_t i = 1; i < run.records.size(); ++i) {
    CHECK(run.records[i].eps_bdp_instance >=
          run.records[i - 1].eps_bdp_instance - 1e-12);
  }
}

TEST_CASE("invalid configs are rejected with the offending keys") {
  ExperimentConfig cfg = base_config();
  cfg.privacy.mode = PrivacyMode::kInstanceSeq;
  cfg.privacy.sigma_instance = 0.0;
  CHECK_THROWS_WITH_AS(run_experiment(cfg),
                       doctest::Contains("privacy.sigma_instance"), Error);
}

TEST_CASE("records_to_csv renders the pinned column set") {
  RoundRecord r;
  r.round = 3;
  r.train_acc = 0.5;
  r.test_acc = 0.25;
  r.eps_dp = 1.0 / 3.0;
  r.eps_bdp_client = 0.1;
  r.eps_bdp_instance = 0.2;
  r.delta_total = 1e-3;
  const std::string csv = records_to_csv({r});
  CHECK(csv ==
        "round,train_acc,test_acc,eps_dp,eps_bdp_client,eps_bdp_instance,"
        "delta_total\n3,0.500000,0.250000,0.333333,0.100000,0.200000,"
        "0.001000\n");
}

}  // TEST_SUITE
