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
//
// Times the OpenMP kernels against their serial reference implementations
// and checks that both produce bit-identical results.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "bdpfl/accountant.hpp"
#include "bdpfl/federation.hpp"
#include "bdpfl/mechanism.hpp"

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

void bench_estimator() {
  const int m = 20000;
  bdpfl::RngStream rng(7, 0);
  std::vector<bdpfl::SensitivitySample> samples(m);
  for (auto& s : samples) s.delta_norm = std::abs(1.0 + 0.25 * rng.normal());
  bdpfl::MechanismParams params;
  params.sigma = 4.0;
  params.clip = 2.0;
  params.sampling_prob = 0.05;
  const bdpfl::LambdaGrid grid = bdpfl::LambdaGrid::range(64);

  auto t0 = Clock::now();
  const auto serial =
      bdpfl::estimate_round_cost_serial(samples, params, grid, 0.05);
  const double t_serial = ms_since(t0);

  t0 = Clock::now();
  const auto parallel = bdpfl::estimate_round_cost(samples, params, grid, 0.05,
                                                   bdpfl::ExecPolicy::kParallel);
  const double t_parallel = ms_since(t0);

  bool identical = true;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (serial.per_lambda_cost[i] != parallel.per_lambda_cost[i]) {
      identical = false;
    }
  }
  std::printf("estimate_round_cost  m=%d grid=%zu  serial %8.1f ms  omp %8.1f ms"
              "  speedup %.2fx  identical=%s\n",
              m, grid.size(), t_serial, t_parallel, t_serial / t_parallel,
              identical ? "yes" : "NO");
}

void bench_round() {
  bdpfl::ExperimentConfig cfg;
  cfg.experiment.seed = 11;
  cfg.experiment.rounds = 5;
  cfg.experiment.clients = 64;
  cfg.experiment.participation = 1.0;
  cfg.model.dimension = 32;
  cfg.model.classes = 4;
  cfg.privacy.mode = bdpfl::PrivacyMode::kInstanceSeq;
  cfg.privacy.sigma_instance = 6.0;
  cfg.privacy.batch = 64;
  cfg.privacy.lambda_max = 32;
  cfg.data.per_class = 1600;

  auto t0 = Clock::now();
  const auto serial = bdpfl::run_experiment(cfg, bdpfl::ExecPolicy::kSerial);
  const double t_serial = ms_since(t0);

  t0 = Clock::now();
  const auto parallel = bdpfl::run_experiment(cfg, bdpfl::ExecPolicy::kParallel);
  const double t_parallel = ms_since(t0);

  const bool identical = bdpfl::records_to_csv(serial.records) ==
                         bdpfl::records_to_csv(parallel.records);
  std::printf("run_experiment       5 rounds, 64 clients  serial %8.1f ms  omp %8.1f ms"
              "  speedup %.2fx  identical=%s\n",
              t_serial, t_parallel, t_serial / t_parallel,
              identical ? "yes" : "NO");
}

}  // namespace

int main() {
#ifdef _OPENMP
  std::printf("OpenMP threads: %d\n", omp_get_max_threads());
#else
  std::printf("OpenMP: disabled at build time\n");
#endif
  bench_estimator();
  bench_round();
  return 0;
}
