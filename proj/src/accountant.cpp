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
#include "bdpfl/accountant.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "bdpfl/errors.hpp"
#include "bdpfl/numerics.hpp"

namespace bdpfl {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kSaturationLog = 700.0;

}  // namespace

void MechanismParams::validate() const {
  if (!(sigma > 0)) throw DomainError("MechanismParams: sigma must be > 0");
  if (!(clip > 0)) throw DomainError("MechanismParams: clip must be > 0");
  if (!(sampling_prob >= 0.0 && sampling_prob <= 1.0)) {
    throw DomainError("MechanismParams: sampling_prob outside [0, 1]");
  }
}

LambdaGrid LambdaGrid::range(int lambda_max) {
  if (lambda_max < 1) throw DomainError("LambdaGrid: lambda_max must be >= 1");
  LambdaGrid grid;
  grid.lambdas.reserve(lambda_max);
  for (int l = 1; l <= lambda_max; ++l) grid.lambdas.push_back(l);
  return grid;
}

void LambdaGrid::validate() const {
  if (lambdas.empty()) throw DomainError("LambdaGrid: empty grid");
  int prev = 0;
  for (int l : lambdas) {
    if (l < 1) throw DomainError("LambdaGrid: lambdas must be >= 1");
    if (l <= prev) throw DomainError("LambdaGrid: lambdas must be strictly increasing");
    prev = l;
  }
}

double renyi_gaussian(const SensitivitySample& sample, double sigma_abs,
                      double order) {
  if (!(sigma_abs > 0)) throw DomainError("renyi_gaussian: sigma_abs must be > 0");
  if (!(order > 1)) throw DomainError("renyi_gaussian: order must be > 1");
  if (sample.delta_norm < 0) {
    throw DomainError("renyi_gaussian: delta_norm must be >= 0");
  }
  return order * sample.delta_norm * sample.delta_norm /
         (2.0 * sigma_abs * sigma_abs);
}

double cost_sample(const SensitivitySample& sample,
                   const MechanismParams& params, int lambda, CostSide side) {
  params.validate();
  if (lambda < 1) throw DomainError("cost_sample: lambda must be >= 1");
  if (sample.delta_norm < 0) {
    throw DomainError("cost_sample: delta_norm must be >= 0");
  }
  const double s = params.noise_std();
  const double t = sample.delta_norm * sample.delta_norm / (2.0 * s * s);
  const int trials = side == CostSide::kLeft ? lambda + 1 : lambda;
  const double q = params.sampling_prob;

  std::vector<double> terms(trials + 1);
  for (int k = 0; k <= trials; ++k) {
    const double kk = static_cast<double>(k);
    const double exponent =
        side == CostSide::kLeft ? (kk * kk - kk) * t : (kk * kk + kk) * t;
    terms[k] = log_binomial_pmf(k, trials, q) + exponent;
  }
  const double result = log_sum_exp(terms);
  if (result > kSaturationLog) {
    throw CostOverflowError(lambda, sample.delta_norm, result);
  }
  // The k = 0 and k = 1 terms contribute e^0, so the expectation is >= 1 and
  // the log is >= 0 up to rounding; clamp the rounding.
  return std::max(result, 0.0);
}

void log_moments_of_exp(std::span<const double> log_values, double* log_mean,
                        double* log_std) {
  const std::size_t m = log_values.size();
  if (m < 2) throw DomainError("log_moments_of_exp: need m >= 2");
  double d_max = -kInf;
  for (double d : log_values) d_max = std::max(d_max, d);
  double mean_u = 0.0;
  for (double d : log_values) mean_u += std::exp(d - d_max);
  mean_u /= static_cast<double>(m);
  double var_u = 0.0;
  for (double d : log_values) {
    const double diff = std::exp(d - d_max) - mean_u;
    var_u += diff * diff;
  }
  var_u /= static_cast<double>(m - 1);
  *log_mean = d_max + std::log(mean_u);
  *log_std = var_u > 0.0 ? d_max + 0.5 * std::log(var_u) : -kInf;
}

double upper_confidence_log(std::span<const double> log_values,
                            double delta_prime) {
  const std::size_t m = log_values.size();
  if (m < 2) throw DomainError("insufficient samples: need m >= 2");
  if (!(delta_prime > 0.0 && delta_prime < 0.5)) {
    throw DomainError("delta_prime must lie in (0, 0.5)");
  }
  double d_max = -kInf;
  for (double d : log_values) d_max = std::max(d_max, d);
  // Work with u_i = v_i / v_max in [0, 1]; mean and sd rescale by e^{d_max}.
  double mean_u = 0.0;
  for (double d : log_values) mean_u += std::exp(d - d_max);
  mean_u /= static_cast<double>(m);
  double var_u = 0.0;
  for (double d : log_values) {
    const double diff = std::exp(d - d_max) - mean_u;
    var_u += diff * diff;
  }
  var_u /= static_cast<double>(m - 1);
  const double sd_u = std::sqrt(var_u);
  const double quantile =
      student_t_quantile(1.0 - delta_prime, static_cast<int>(m) - 1);
  const double kappa = quantile / std::sqrt(static_cast<double>(m - 1));
  const double c = d_max + std::log(mean_u + kappa * sd_u);
  // Every v_i >= 1 and kappa >= 0 for delta_prime < 0.5, so the true value is
  // nonnegative; clamp rounding noise.
  return std::max(c, 0.0);
}

namespace {

RoundCostEstimate estimate_impl(std::span<const SensitivitySample> samples,
                                const MechanismParams& params,
                                const LambdaGrid& grid, double delta_prime,
                                bool parallel) {
  params.validate();
  grid.validate();
  const std::size_t m = samples.size();
  if (m < 2) throw DomainError("insufficient samples: need m >= 2");
  if (!(delta_prime > 0.0 && delta_prime < 0.5)) {
    throw DomainError("delta_prime must lie in (0, 0.5)");
  }
  const std::size_t n_lambda = grid.size();

  // Per-(lambda, sample) log-values, filled by index so the reduction order
  // below is identical for the serial and parallel paths.
  std::vector<double> d(n_lambda * m);
  std::exception_ptr failure;

#pragma omp parallel for collapse(2) schedule(static) if (parallel)
  for (std::size_t li = 0; li < n_lambda; ++li) {
    for (std::size_t i = 0; i < m; ++i) {
      try {
        const int lambda = grid.lambdas[li];
        const double left =
            cost_sample(samples[i], params, lambda, CostSide::kLeft);
        const double right =
            cost_sample(samples[i], params, lambda, CostSide::kRight);
        d[li * m + i] = std::max(left, right);
      } catch (...) {
#pragma omp critical
        if (!failure) failure = std::current_exception();
      }
    }
  }
  if (failure) std::rethrow_exception(failure);

  RoundCostEstimate est;
  est.grid = grid;
  est.per_lambda_cost.resize(n_lambda);
  est.log_sample_mean.resize(n_lambda);
  est.log_sample_std.resize(n_lambda);
  est.m = m;
  est.delta_prime = delta_prime;

  for (std::size_t li = 0; li < n_lambda; ++li) {
    const std::span<const double> row(d.data() + li * m, m);
    est.per_lambda_cost[li] = upper_confidence_log(row, delta_prime);
    log_moments_of_exp(row, &est.log_sample_mean[li], &est.log_sample_std[li]);
  }
  return est;
}

}  // namespace

RoundCostEstimate estimate_round_cost(std::span<const SensitivitySample> samples,
                                      const MechanismParams& params,
                                      const LambdaGrid& grid,
                                      double delta_prime, ExecPolicy policy) {
  return estimate_impl(samples, params, grid, delta_prime,
                       policy == ExecPolicy::kParallel);
}

RoundCostEstimate estimate_round_cost_serial(
    std::span<const SensitivitySample> samples, const MechanismParams& params,
    const LambdaGrid& grid, double delta_prime) {
  return estimate_impl(samples, params, grid, delta_prime, false);
}

PrivacyLedger::PrivacyLedger(LambdaGrid grid) : grid_(std::move(grid)) {
  grid_.validate();
  cost_.assign(grid_.size(), 0.0);
}

void PrivacyLedger::drop_lambda(int lambda) {
  const auto it =
      std::find(grid_.lambdas.begin(), grid_.lambdas.end(), lambda);
  if (it == grid_.lambdas.end()) {
    throw DomainError("drop_lambda: lambda not in grid");
  }
  if (grid_.size() == 1) {
    throw DomainError("drop_lambda: cannot empty the grid");
  }
  const std::size_t idx = static_cast<std::size_t>(it - grid_.lambdas.begin());
  grid_.lambdas.erase(it);
  cost_.erase(cost_.begin() + static_cast<std::ptrdiff_t>(idx));
}

PrivacyLedger ledger_add(const PrivacyLedger& ledger,
                         const RoundCostEstimate& estimate) {
  if (!(ledger.grid_ == estimate.grid)) {
    throw DomainError("ledger_add: lambda grid mismatch");
  }
  for (double c : estimate.per_lambda_cost) {
    if (c < 0) throw DomainError("ledger_add: negative cost");
  }
  PrivacyLedger out = ledger;
  for (std::size_t i = 0; i < out.cost_.size(); ++i) {
    out.cost_[i] += estimate.per_lambda_cost[i];
  }
  out.rounds_ += 1;
  out.delta_prime_ += estimate.delta_prime;
  return out;
}

EpsDelta epsilon_for_delta(const PrivacyLedger& ledger, double delta_tail) {
  if (!(delta_tail > 0.0 && delta_tail < 1.0)) {
    throw DomainError("epsilon_for_delta: delta_tail outside (0, 1)");
  }
  const auto& grid = ledger.grid();
  const auto cost = ledger.cumulative_cost();
  double best = kInf;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double eps =
        (cost[i] - std::log(delta_tail)) / static_cast<double>(grid.lambdas[i]);
    if (eps < best) best = eps;  // strict <: ties go to the smallest lambda
  }
  return EpsDelta{best, delta_tail + ledger.cumulative_delta_prime()};
}

double delta_for_epsilon(const PrivacyLedger& ledger, double epsilon) {
  if (epsilon < 0) throw DomainError("delta_for_epsilon: epsilon must be >= 0");
  const auto& grid = ledger.grid();
  const auto cost = ledger.cumulative_cost();
  double best_log = kInf;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double log_tail =
        cost[i] - static_cast<double>(grid.lambdas[i]) * epsilon;
    best_log = std::min(best_log, log_tail);
  }
  const double tail = best_log >= 0 ? 1.0 : std::exp(best_log);
  return std::min(1.0, ledger.cumulative_delta_prime() + tail);
}

double attack_advantage(double epsilon) {
  if (epsilon < 0) throw DomainError("attack_advantage: epsilon must be >= 0");
  return 1.0 / (1.0 + std::exp(-epsilon));
}

std::string serialize_ledger(const PrivacyLedger& ledger) {
  std::string out;
  char buf[128];
  for (std::size_t i = 0; i < ledger.grid_.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%d,%.17g,%d,%.17g\n",
                  ledger.grid_.lambdas[i], ledger.cost_[i], ledger.rounds_,
                  ledger.delta_prime_);
    out += buf;
  }
  return out;
}

PrivacyLedger parse_ledger(const std::string& text) {
  PrivacyLedger ledger;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    int lambda = 0;
    double cost = 0.0;
    int rounds = 0;
    double delta_prime = 0.0;
    if (std::sscanf(line.c_str(), "%d,%lg,%d,%lg", &lambda, &cost, &rounds,
                    &delta_prime) != 4) {
      throw ParseError("malformed ledger line", line_no);
    }
    ledger.grid_.lambdas.push_back(lambda);
    ledger.cost_.push_back(cost);
    if (!first && (rounds != ledger.rounds_ ||
                   delta_prime != ledger.delta_prime_)) {
      throw ParseError("inconsistent rounds/delta_prime across ledger lines",
                       line_no);
    }
    ledger.rounds_ = rounds;
    ledger.delta_prime_ = delta_prime;
    first = false;
  }
  if (first) throw ParseError("empty ledger", 0);
  ledger.grid_.validate();
  return ledger;
}

}  // namespace bdpfl
