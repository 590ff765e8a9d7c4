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
#include "bdpfl/federation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "bdpfl/errors.hpp"
#include "bdpfl/numerics.hpp"

namespace bdpfl {

namespace {

constexpr double kSaturationLog = 700.0;

bool instance_mechanism_active(const ExperimentConfig& cfg) {
  return cfg.privacy.mode != PrivacyMode::kClient ||
         cfg.privacy.sigma_instance > 0.0;
}

bool client_accounting_active(const ExperimentConfig& cfg) {
  if (cfg.privacy.mode == PrivacyMode::kJoint) return true;
  return cfg.privacy.mode == PrivacyMode::kClient &&
         cfg.privacy.sigma_client > 0.0;
}

int effective_batch(const ExperimentConfig& cfg, const ClientShard& shard) {
  const int n_local = static_cast<int>(shard.n_local());
  if (cfg.privacy.batch == 0) return n_local;
  return std::min(cfg.privacy.batch, n_local);
}

double round_delta_prime(const ExperimentConfig& cfg) {
  return cfg.privacy.delta / (2.0 * std::max(1, cfg.experiment.rounds));
}

}  // namespace

ClientUpdate local_update(const ModelSpec& spec, const ModelState& model,
                          const DataSet& data, const ClientShard& shard,
                          const ExperimentConfig& config,
                          const BroadcastInfo& broadcast,
                          const LambdaGrid& grid, int round) {
  const auto& priv = config.privacy;
  const std::uint64_t seed = config.experiment.seed;
  const std::uint64_t client = static_cast<std::uint64_t>(shard.client_id);
  const int n_local = static_cast<int>(shard.n_local());
  const int b_eff = effective_batch(config, shard);
  const double q_local = static_cast<double>(b_eff) / n_local;

  ClientUpdate out;
  out.update.assign(spec.param_count(), 0.0);

  RngStream batch_rng = derive_stream(seed, StreamPurpose::kBatch, round, client);
  std::vector<std::size_t> batch = sample_subset(shard.n_local(), q_local, batch_rng);
  if (batch.empty()) batch = sample_subset(shard.n_local(), q_local, batch_rng);
  if (batch.empty()) {
    out.empty_batch = true;
    return out;
  }
  out.batch_used = static_cast<int>(batch.size());

  std::vector<std::size_t> batch_global(batch.size());
  for (std::size_t i = 0; i < batch.size(); ++i) {
    batch_global[i] = shard.example_ids[batch[i]];
  }
  const std::vector<std::vector<double>> grads =
      model_gradient(spec, model, data, batch_global);

  const bool on_device_noise = instance_mechanism_active(config);
  if (!on_device_noise) {
    // Plain average gradient over the realized batch.
    for (const auto& g : grads) {
      for (std::size_t j = 0; j < g.size(); ++j) out.update[j] += g[j];
    }
    const double inv = 1.0 / static_cast<double>(grads.size());
    for (double& x : out.update) x *= inv;
    return out;
  }

  // Subsampled Gaussian mechanism on the device: clip each per-example
  // gradient, sum, perturb, normalize by the expected batch size.
  const double c_inst = priv.clip_instance;
  for (const auto& g : grads) {
    const std::vector<double> cg = clip(g, c_inst);
    for (std::size_t j = 0; j < cg.size(); ++j) out.update[j] += cg[j];
  }
  std::vector<double> signal = out.update;  // pre-noise clipped sum
  RngStream noise_rng =
      derive_stream(seed, StreamPurpose::kLocalNoise, round, client);
  out.update =
      gaussian_perturb(out.update, c_inst * priv.sigma_instance, noise_rng);
  const double inv_b = 1.0 / static_cast<double>(b_eff);
  for (double& x : out.update) x *= inv_b;
  for (double& x : signal) x *= inv_b;

  // Instance-level sensitivity samples: the clipped gradient norm of
  // m_local left-out examples drawn from the local data. The expected-batch
  // normalization cancels between sensitivity and noise, so samples are
  // expressed at the sum level.
  RngStream sens_rng =
      derive_stream(seed, StreamPurpose::kSensitivitySelection, round, client);
  const std::size_t m_local =
      std::min<std::size_t>(32, static_cast<std::size_t>(b_eff));
  const std::vector<std::size_t> picks =
      sample_without_replacement(shard.n_local(), m_local, sens_rng);
  std::vector<double> g_buf(spec.param_count());
  std::vector<SensitivitySample> sens;
  sens.reserve(picks.size());
  for (std::size_t p : picks) {
    const std::size_t id = shard.example_ids[p];
    example_gradient(spec, model, data.example(id), data.labels[id],
                     g_buf.data());
    const std::vector<double> cg = clip(g_buf, c_inst);
    const double norm = l2_norm(cg);
    out.instance_sensitivities.push_back(norm);
    sens.push_back(SensitivitySample{norm});
  }

  const bool sequential_q = priv.mode != PrivacyMode::kInstancePar;
  const double q_acc =
      sequential_q
          ? static_cast<double>(b_eff) / static_cast<double>(broadcast.total_examples)
          : q_local;
  MechanismParams acc_params;
  acc_params.sigma = priv.sigma_instance;
  acc_params.clip = c_inst;
  acc_params.sampling_prob = q_acc;
  const double dp_local =
      round_delta_prime(config) / std::max(1, broadcast.participants);
  out.instance_cost = estimate_round_cost(sens, acc_params, grid, dp_local,
                                          ExecPolicy::kSerial);

  if (priv.mode == PrivacyMode::kJoint) {
    // Leave-this-update-out divergence against the round aggregate, using
    // the broadcast participant count and effective noise scale. The
    // fixed-denominator mean shift ||u_j|| / n is locally computable.
    const double delta_norm =
        l2_norm(signal) / static_cast<double>(broadcast.participants);
    out.joint_divergence.resize(grid.size());
    for (std::size_t li = 0; li < grid.size(); ++li) {
      const int lambda = grid.lambdas[li];
      const double div = renyi_gaussian(SensitivitySample{delta_norm},
                                        broadcast.sigma_eff, lambda + 1.0);
      const double log_value = lambda * div;
      if (log_value > kSaturationLog) {
        throw CostOverflowError(lambda, delta_norm, log_value);
      }
      out.joint_divergence[li] = log_value;
    }
  }
  return out;
}

AggregateResult aggregate(const std::vector<ClientUpdate>& updates,
                          const MechanismParams& params, PrivacyMode mode,
                          int estimator_samples, RngStream& selection_rng,
                          RngStream& noise_rng) {
  if (updates.empty()) throw DomainError("aggregate: need at least one update");
  const std::size_t dim = updates.front().update.size();
  const std::size_t n = updates.size();
  AggregateResult result;

  if (mode != PrivacyMode::kClient) {
    // Joint and instance modes: plain averaging, no server-side noise.
    result.delta.assign(dim, 0.0);
    for (const auto& u : updates) {
      for (std::size_t j = 0; j < dim; ++j) result.delta[j] += u.update[j];
    }
    const double inv = 1.0 / static_cast<double>(n);
    for (double& x : result.delta) x *= inv;
    return result;
  }

  if (n < 2) throw DomainError("aggregate: need >= 2 participants");

  std::vector<std::vector<double>> clipped(n);
  for (std::size_t i = 0; i < n; ++i) {
    clipped[i] = clip(updates[i].update, params.clip);
  }
  std::vector<double> mean(dim, 0.0);
  for (const auto& c : clipped) {
    for (std::size_t j = 0; j < dim; ++j) mean[j] += c[j];
  }
  const double inv = 1.0 / static_cast<double>(n);
  for (double& x : mean) x *= inv;

  // Leave-one-out sensitivities with exact mean-of-(n-1) semantics:
  // ||mean_all - mean_without_j|| = ||clipped_j - mean_all|| / (n - 1).
  std::vector<std::size_t> chosen;
  if (estimator_samples >= 2 &&
      static_cast<std::size_t>(estimator_samples) < n) {
    chosen = sample_without_replacement(
        n, static_cast<std::size_t>(estimator_samples), selection_rng);
    std::sort(chosen.begin(), chosen.end());
  } else {
    chosen.resize(n);
    for (std::size_t i = 0; i < n; ++i) chosen[i] = i;
  }
  result.samples.reserve(chosen.size());
  for (std::size_t idx : chosen) {
    double s = 0.0;
    for (std::size_t j = 0; j < dim; ++j) {
      const double diff = clipped[idx][j] - mean[j];
      s += diff * diff;
    }
    result.samples.push_back(
        SensitivitySample{std::sqrt(s) / static_cast<double>(n - 1)});
  }

  result.delta = params.sigma > 0.0
                     ? gaussian_perturb(mean, params.noise_std(), noise_rng)
                     : mean;
  return result;
}

namespace {

struct RunState {
  ExperimentConfig cfg;
  ModelSpec spec;
  DataSet train;
  DataSet test;
  std::vector<ClientShard> shards;
  ModelState model;
  LambdaGrid grid;  // shared (prunable) grid for both BDP ledgers
  Ledgers ledgers;
  std::size_t total_examples = 0;
  int lambda_dropped = 0;
  int skipped_rounds = 0;
};

void validate_run_config(const ExperimentConfig& cfg) {
  std::vector<std::string> bad;
  if (cfg.privacy.mode != PrivacyMode::kClient &&
      cfg.privacy.sigma_instance <= 0.0) {
    bad.push_back("privacy.sigma_instance (must be > 0 for mode " +
                  to_string(cfg.privacy.mode) + ")");
  }
  if (instance_mechanism_active(cfg) && cfg.privacy.batch == 1) {
    bad.push_back("privacy.batch (instance estimation needs >= 2 samples)");
  }
  if (client_accounting_active(cfg) && cfg.experiment.clients < 2) {
    bad.push_back("experiment.clients (client-level accounting needs >= 2)");
  }
  if (!bad.empty()) {
    std::string msg = "invalid config:";
    for (const auto& k : bad) msg += " " + k + ";";
    throw Error(msg);
  }
}

double empty_grid_epsilon(const LambdaGrid& grid, double delta_tail) {
  double best = std::numeric_limits<double>::infinity();
  for (int l : grid.lambdas) {
    best = std::min(best, -std::log(delta_tail) / static_cast<double>(l));
  }
  return best;
}

// Drops a saturated order from the run grid and both BDP ledgers.
void prune_lambda(RunState& st, int lambda) {
  const auto it =
      std::find(st.grid.lambdas.begin(), st.grid.lambdas.end(), lambda);
  if (it == st.grid.lambdas.end() || st.grid.size() == 1) {
    throw Error("saturation pruning exhausted the lambda grid");
  }
  st.grid.lambdas.erase(it);
  st.ledgers.client.drop_lambda(lambda);
  st.ledgers.instance.drop_lambda(lambda);
  ++st.lambda_dropped;
}

struct RoundOutcome {
  std::vector<double> delta;
  std::optional<RoundCostEstimate> client_estimate;
  std::optional<RoundCostEstimate> instance_estimate;
  int dp_mechanism_count = 0;
  MechanismParams dp_params;
  bool dp_active = false;
  int participants = 0;
};

// One attempt at a round on the current grid; throws CostOverflowError when
// some lambda saturates, in which case the caller prunes and retries.
RoundOutcome attempt_round(RunState& st, int round,
                           const std::vector<std::size_t>& participants,
                           ExecPolicy policy) {
  const auto& cfg = st.cfg;
  const auto& priv = cfg.privacy;
  const int n = static_cast<int>(participants.size());

  BroadcastInfo info;
  info.participants = n;
  info.total_examples = st.total_examples;
  if (instance_mechanism_active(cfg)) {
    double var = 0.0;
    for (std::size_t p : participants) {
      const double per_client =
          priv.clip_instance * priv.sigma_instance /
          static_cast<double>(effective_batch(cfg, st.shards[p]));
      var += per_client * per_client;
    }
    info.sigma_eff = std::sqrt(var) / static_cast<double>(n);
  }

  std::vector<ClientUpdate> updates(participants.size());
  std::exception_ptr failure;
#pragma omp parallel for schedule(static) if (policy == ExecPolicy::kParallel)
  for (std::size_t i = 0; i < participants.size(); ++i) {
    try {
      updates[i] = local_update(st.spec, st.model, st.train,
                                st.shards[participants[i]], cfg, info, st.grid,
                                round);
    } catch (...) {
#pragma omp critical
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);

  RngStream sel_rng =
      derive_stream(cfg.experiment.seed, StreamPurpose::kSensitivitySelection,
                    round, static_cast<std::uint64_t>(cfg.experiment.clients));
  RngStream server_rng = derive_stream(cfg.experiment.seed,
                                       StreamPurpose::kServerNoise, round, 0);
  MechanismParams server_params;
  server_params.sigma = priv.sigma_client;  // 0 means no server noise
  server_params.clip = priv.clip_client;
  server_params.sampling_prob = cfg.experiment.participation;
  AggregateResult agg = aggregate(
      updates, server_params, priv.mode,
      priv.mode == PrivacyMode::kClient ? priv.estimator_samples : 0, sel_rng,
      server_rng);

  RoundOutcome out;
  out.delta = std::move(agg.delta);
  out.participants = n;

  const double dp_t = round_delta_prime(cfg);

  // Client-level Bayesian accounting.
  if (priv.mode == PrivacyMode::kClient && priv.sigma_client > 0.0) {
    out.client_estimate =
        estimate_round_cost(agg.samples, server_params, st.grid, dp_t, policy);
  } else if (priv.mode == PrivacyMode::kJoint) {
    // Server averages the clients' exponentiated divergence samples.
    RoundCostEstimate est;
    est.grid = st.grid;
    est.m = updates.size();
    est.delta_prime = dp_t;
    est.per_lambda_cost.resize(st.grid.size());
    est.log_sample_mean.resize(st.grid.size());
    est.log_sample_std.resize(st.grid.size());
    std::vector<double> row(updates.size());
    for (std::size_t li = 0; li < st.grid.size(); ++li) {
      for (std::size_t i = 0; i < updates.size(); ++i) {
        row[i] = updates[i].joint_divergence.empty()
                     ? 0.0
                     : updates[i].joint_divergence[li];
      }
      est.per_lambda_cost[li] = upper_confidence_log(row, dp_t);
      log_moments_of_exp(row, &est.log_sample_mean[li],
                         &est.log_sample_std[li]);
    }
    out.client_estimate = std::move(est);
  }

  // Instance-level Bayesian accounting (sequential sum or parallel max).
  if (instance_mechanism_active(cfg)) {
    RoundCostEstimate combined;
    combined.grid = st.grid;
    combined.per_lambda_cost.assign(st.grid.size(), 0.0);
    combined.log_sample_mean.assign(
        st.grid.size(), -std::numeric_limits<double>::infinity());
    combined.log_sample_std.assign(
        st.grid.size(), -std::numeric_limits<double>::infinity());
    combined.delta_prime = dp_t;
    combined.m = 0;
    bool any = false;
    for (const auto& u : updates) {
      if (!u.instance_cost) continue;
      any = true;
      combined.m += u.instance_cost->m;
      for (std::size_t li = 0; li < st.grid.size(); ++li) {
        const double c = u.instance_cost->per_lambda_cost[li];
        if (priv.mode == PrivacyMode::kInstancePar) {
          combined.per_lambda_cost[li] =
              std::max(combined.per_lambda_cost[li], c);
        } else {
          combined.per_lambda_cost[li] += c;
        }
      }
    }
    if (any) out.instance_estimate = std::move(combined);
  }

  // Matched classic-DP ledger update.
  if (priv.mode == PrivacyMode::kClient) {
    if (priv.sigma_client > 0.0) {
      out.dp_active = true;
      out.dp_params.sigma = priv.sigma_client;
      out.dp_params.clip = 1.0;
      out.dp_params.sampling_prob = cfg.experiment.participation;
      out.dp_mechanism_count = 1;
    }
  } else {
    out.dp_active = true;
    out.dp_params.sigma = priv.sigma_instance;
    out.dp_params.clip = 1.0;
    if (priv.mode == PrivacyMode::kInstancePar) {
      double q_max = 0.0;
      for (std::size_t p : participants) {
        const auto& shard = st.shards[p];
        q_max = std::max(q_max, static_cast<double>(effective_batch(cfg, shard)) /
                                    static_cast<double>(shard.n_local()));
      }
      out.dp_params.sampling_prob = q_max;
      out.dp_mechanism_count = 1;  // parallel composition within the round
    } else {
      double q_max = 0.0;
      for (std::size_t p : participants) {
        q_max = std::max(q_max,
                         static_cast<double>(effective_batch(cfg, st.shards[p])) /
                             static_cast<double>(st.total_examples));
      }
      out.dp_params.sampling_prob = q_max;
      out.dp_mechanism_count = n;  // one release per participating client
    }
  }
  return out;
}

std::string build_header(const RunState& st, bool truncated,
                         int truncated_at_round) {
  std::ostringstream out;
  out << "# bdpfl run header\n";
  out << "rng_family = mt19937_64+box-muller\n";
  out << "total_examples = " << st.total_examples << "\n";
  out << "test_examples = " << st.test.n() << "\n";
  out << "delta_tail = " << st.cfg.privacy.delta / 2.0 << "\n";
  out << "delta_prime_per_round = " << round_delta_prime(st.cfg) << "\n";
  const auto mode = st.cfg.privacy.mode;
  const bool seq_disclosure = instance_mechanism_active(st.cfg) &&
                              mode != PrivacyMode::kInstancePar;
  out << "broadcast_total_n = " << (seq_disclosure ? "true" : "false") << "\n";
  out << "broadcast_round_info = "
      << (mode == PrivacyMode::kJoint ? "(participants, sigma_eff)" : "none")
      << "\n";
  out << "dp_ledger_level = "
      << (mode == PrivacyMode::kClient ? "client" : "instance") << "\n";
  out << "split_regime = "
      << (mode == PrivacyMode::kClient && st.cfg.privacy.sigma_instance > 0.0
              ? "true"
              : "false")
      << "\n";
  out << "lambda_grid_size = " << st.grid.size() << "\n";
  if (st.lambda_dropped > 0) {
    out << "lambda_dropped_by_saturation = " << st.lambda_dropped << "\n";
  }
  if (st.skipped_rounds > 0) {
    out << "skipped_rounds = " << st.skipped_rounds << "\n";
  }
  if (truncated) {
    out << "truncated_at_round = " << truncated_at_round << "\n";
  }
  out << "# effective configuration\n";
  out << serialize_config(st.cfg);
  return out.str();
}

}  // namespace

RunResult run_experiment(const ExperimentConfig& config, ExecPolicy policy) {
  validate_run_config(config);
  RunState st;
  st.cfg = config;
  st.spec = config.model_spec();

  const std::uint64_t seed = config.experiment.seed;
  if (config.data.kind == DataKind::kSynthetic) {
    SynthSpec sspec{config.model.classes, config.model.dimension,
                    config.data.per_class, config.data.separation,
                    config.data.cluster_std};
    RngStream train_rng = derive_stream(seed, StreamPurpose::kData, 0, 0);
    st.train = synth_data(sspec, train_rng);
    RngStream test_rng = derive_stream(seed, StreamPurpose::kData, 1, 0);
    st.test = synth_data(sspec, test_rng);
  } else {
    st.train = load_idx(config.data.images, config.data.labels);
    st.test = st.train;  // no separate test split provided
    if (st.train.dim != static_cast<std::size_t>(config.model.dimension)) {
      throw Error("invalid config: model.dimension does not match idx data (" +
                  std::to_string(st.train.dim) + " features)");
    }
  }
  st.total_examples = st.train.n();

  RngStream part_rng = derive_stream(seed, StreamPurpose::kPartition, 0, 0);
  if (config.experiment.partition == PartitionKind::kIid) {
    st.shards = partition_iid(st.train, config.experiment.clients, part_rng);
  } else {
    const int denom =
        config.experiment.clients * config.experiment.shards_per_client;
    const int shard_size = static_cast<int>(st.train.n()) / denom;
    if (shard_size < 1) throw Error("invalid config: experiment.clients (too many shards for dataset)");
    st.shards = partition_shards(st.train, config.experiment.clients,
                                 config.experiment.shards_per_client,
                                 shard_size, part_rng);
  }
  for (auto& shard : st.shards) {
    shard.batch_size = effective_batch(config, shard);
    shard.participation = config.experiment.participation;
    if (instance_mechanism_active(config) && shard.batch_size < 2) {
      throw Error(
          "invalid config: privacy.batch / shard sizes (instance estimation "
          "needs >= 2 samples per client)");
    }
  }

  RngStream init_rng = derive_stream(seed, StreamPurpose::kModelInit, 0, 0);
  st.model = init_model(st.spec, init_rng);

  st.grid = LambdaGrid::range(config.privacy.lambda_max);
  st.ledgers.client = PrivacyLedger(st.grid);
  st.ledgers.instance = PrivacyLedger(st.grid);
  st.ledgers.dp = DpLedger(st.grid);

  RunResult result;
  const double delta_tail = config.privacy.delta / 2.0;
  const bool client_active = client_accounting_active(config);
  const bool instance_active = instance_mechanism_active(config);
  int truncated_at = 0;

  for (int round = 1; round <= config.experiment.rounds; ++round) {
    const auto t0 = std::chrono::steady_clock::now();
    RngStream part_stream =
        derive_stream(seed, StreamPurpose::kParticipation, round, 0);
    std::vector<std::size_t> participants = sample_subset(
        st.shards.size(), config.experiment.participation, part_stream);

    const bool needs_two = config.privacy.mode == PrivacyMode::kClient ||
                           config.privacy.mode == PrivacyMode::kJoint;
    RoundRecord rec;
    rec.round = round;
    rec.participants = static_cast<int>(participants.size());

    if ((needs_two && participants.size() < 2) || participants.empty()) {
      rec.skipped = true;
      ++st.skipped_rounds;
    } else {
      RoundOutcome outcome;
      while (true) {
        try {
          outcome = attempt_round(st, round, participants, policy);
          break;
        } catch (const CostOverflowError& e) {
          prune_lambda(st, e.lambda());
        }
      }
      if (outcome.client_estimate) {
        st.ledgers.client = ledger_add(st.ledgers.client, *outcome.client_estimate);
      }
      if (outcome.instance_estimate) {
        st.ledgers.instance =
            ledger_add(st.ledgers.instance, *outcome.instance_estimate);
      }
      if (outcome.dp_active) {
        st.ledgers.dp.add_rounds(outcome.dp_params, outcome.dp_mechanism_count);
      }
      // FedSGD step: the applied update is exactly the mechanism output
      // scaled by the declared learning rate.
      for (std::size_t j = 0; j < st.model.weights.size(); ++j) {
        st.model.weights[j] -= config.model.learning_rate * outcome.delta[j];
      }
      st.model.round = round;
    }

    rec.train_acc = accuracy(st.spec, st.model, st.train);
    rec.test_acc = accuracy(st.spec, st.model, st.test);
    rec.eps_bdp_client =
        client_active ? epsilon_for_delta(st.ledgers.client, delta_tail).epsilon
                      : empty_grid_epsilon(st.grid, delta_tail);
    rec.eps_bdp_instance =
        instance_active
            ? epsilon_for_delta(st.ledgers.instance, delta_tail).epsilon
            : empty_grid_epsilon(st.grid, delta_tail);
    rec.eps_dp = st.ledgers.dp.epsilon(config.privacy.delta);
    const PrivacyLedger& primary =
        config.privacy.mode == PrivacyMode::kClient ||
                config.privacy.mode == PrivacyMode::kJoint
            ? st.ledgers.client
            : st.ledgers.instance;
    rec.delta_total = delta_tail + primary.cumulative_delta_prime();
    rec.wall_ms = std::chrono::duration<double, std::milli>(
                      std::chrono::steady_clock::now() - t0)
                      .count();

    if (config.privacy.epsilon_budget > 0.0 && !rec.skipped &&
        rec.eps_dp >= config.privacy.epsilon_budget) {
      rec.truncated = true;
      result.truncated = true;
      truncated_at = round;
    }
    result.records.push_back(rec);
    if (result.truncated) break;
  }

  result.ledgers = std::move(st.ledgers);
  result.model = std::move(st.model);
  result.lambda_dropped = st.lambda_dropped;
  result.header = build_header(st, result.truncated, truncated_at);
  return result;
}

std::string records_to_csv(const std::vector<RoundRecord>& records) {
  std::string out =
      "round,train_acc,test_acc,eps_dp,eps_bdp_client,eps_bdp_instance,"
      "delta_total\n";
  char buf[256];
  for (const auto& r : records) {
    std::snprintf(buf, sizeof buf, "%d,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f\n",
                  r.round, r.train_acc, r.test_acc, r.eps_dp, r.eps_bdp_client,
                  r.eps_bdp_instance, r.delta_total);
    out += buf;
  }
  return out;
}

}  // namespace bdpfl
