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
#ifndef BDPFL_ACCOUNTANT_HPP_
#define BDPFL_ACCOUNTANT_HPP_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace bdpfl {

// Knobs of the subsampled Gaussian mechanism. sigma is a dimensionless
// multiplier: the absolute noise standard deviation is clip * sigma.
struct MechanismParams {
  double sigma = 1.0;
  double clip = 1.0;
  double sampling_prob = 1.0;

  double noise_std() const { return clip * sigma; }
  void validate() const;  // throws DomainError on violated invariants
};

// Ordered set of moment orders the accountants track. Strictly increasing,
// all >= 1.
struct LambdaGrid {
  std::vector<int> lambdas;

  static LambdaGrid range(int lambda_max);  // {1, 2, ..., lambda_max}
  void validate() const;
  std::size_t size() const { return lambdas.size(); }
  bool operator==(const LambdaGrid& other) const = default;
};

// One realized leave-one-out sensitivity ||g - g'||, in the same units as
// the clipping norm. Together with MechanismParams this pins down the pair
// of equal-variance Gaussian mixtures whose divergence is being estimated.
struct SensitivitySample {
  double delta_norm = 0.0;
};

enum class CostSide { kLeft, kRight };

enum class ExecPolicy { kSerial, kParallel };

// Renyi divergence of the given order between N(0, sigma_abs^2) and
// N(delta_norm, sigma_abs^2): order * delta_norm^2 / (2 sigma_abs^2).
// Symmetric in direction for this family. Throws DomainError for
// order <= 1 or sigma_abs <= 0.
double renyi_gaussian(const SensitivitySample& sample, double sigma_abs,
                      double order);

// Log of the inner binomial expectation for one sampled sensitivity, with
// t = delta_norm^2 / (2 (clip * sigma)^2):
//   kLeft:  log E_{k ~ B(lambda+1, q)} exp((k^2 - k) t)
//   kRight: log E_{k ~ B(lambda,   q)} exp((k^2 + k) t)
// The sum is evaluated exactly in log space; the result is always >= 0.
// Throws CostOverflowError when the log-value exceeds 700.
double cost_sample(const SensitivitySample& sample,
                   const MechanismParams& params, int lambda, CostSide side);

// Upper-confidence estimate of one round's privacy cost on a lambda grid.
// Means and standard deviations are stored as logs; linear values can reach
// e^700 and would not survive a round trip through doubles otherwise.
struct RoundCostEstimate {
  LambdaGrid grid;
  std::vector<double> per_lambda_cost;  // c-hat_t(lambda), aligned with grid
  std::vector<double> log_sample_mean;  // log M(t)
  std::vector<double> log_sample_std;   // log S(t); -inf when S = 0
  std::size_t m = 0;
  double delta_prime = 0.0;
};

// For each lambda: v_i = exp(max(cost_sample(s_i, L), cost_sample(s_i, R))),
// M = mean(v), S = sample standard deviation(v), and
//   c-hat(lambda) = log[ M + F^{-1}(1 - delta_prime, m-1) / sqrt(m-1) * S ].
// All arithmetic is carried out in log space. Requires m >= 2 and
// 0 < delta_prime < 0.5.
RoundCostEstimate estimate_round_cost(std::span<const SensitivitySample> samples,
                                      const MechanismParams& params,
                                      const LambdaGrid& grid,
                                      double delta_prime,
                                      ExecPolicy policy = ExecPolicy::kParallel);

// Serial reference path; bit-identical to the parallel one by construction
// (per-sample values are written to indexed slots and reduced in index
// order either way).
RoundCostEstimate estimate_round_cost_serial(
    std::span<const SensitivitySample> samples, const MechanismParams& params,
    const LambdaGrid& grid, double delta_prime);

// The core of Eq.-5-style estimation: given per-sample log-values d_i, form
// log[ mean(e^d) + quantile/sqrt(m-1) * sd(e^d) ] without overflow. Exposed
// because joint accounting feeds it client divergence samples directly.
double upper_confidence_log(std::span<const double> log_values,
                            double delta_prime);

// log of the sample mean and sample standard deviation of exp(log_values),
// computed shift-stably. log_std is -inf for zero variance.
void log_moments_of_exp(std::span<const double> log_values, double* log_mean,
                        double* log_std);

// Accumulated privacy cost over a fixed lambda grid, plus the estimation
// failure mass absorbed into delta.
class PrivacyLedger {
 public:
  PrivacyLedger() = default;
  explicit PrivacyLedger(LambdaGrid grid);

  const LambdaGrid& grid() const { return grid_; }
  std::span<const double> cumulative_cost() const { return cost_; }
  int rounds() const { return rounds_; }
  double cumulative_delta_prime() const { return delta_prime_; }

  // Removes one lambda from the grid (saturation handling). Accumulated
  // values at the remaining orders are untouched, so subsequent bounds stay
  // valid, just restricted to a smaller grid.
  void drop_lambda(int lambda);

  friend PrivacyLedger ledger_add(const PrivacyLedger& ledger,
                                  const RoundCostEstimate& estimate);
  friend std::string serialize_ledger(const PrivacyLedger& ledger);
  friend PrivacyLedger parse_ledger(const std::string& text);

 private:
  LambdaGrid grid_;
  std::vector<double> cost_;
  int rounds_ = 0;
  double delta_prime_ = 0.0;
};

// Composition is additive in log space: cumulative_cost[lambda] += c-hat,
// rounds += 1, cumulative_delta_prime += delta_prime. Throws on grid
// mismatch. Returns a new ledger; ledgers are value-copyable checkpoints.
PrivacyLedger ledger_add(const PrivacyLedger& ledger,
                         const RoundCostEstimate& estimate);

struct EpsDelta {
  double epsilon = 0.0;
  double delta = 0.0;
};

// epsilon = min over lambda of [cost(lambda) - log(delta_tail)] / lambda,
// ties broken toward the smallest lambda. Reported delta adds the
// accumulated estimation-failure mass to the tail mass.
EpsDelta epsilon_for_delta(const PrivacyLedger& ledger, double delta_tail);

// cumulative_delta_prime + min over lambda of exp(cost(lambda) -
// lambda * epsilon), with the total capped at 1.
double delta_for_epsilon(const PrivacyLedger& ledger, double epsilon);

// Upper bound on the accuracy of the posterior-ratio attack: 1/(1 + e^-eps).
double attack_advantage(double epsilon);

// Text form: one line per lambda,
//   lambda,cumulative_cost,rounds,cumulative_delta_prime
// with 17 significant digits so parsing reproduces the exact doubles.
std::string serialize_ledger(const PrivacyLedger& ledger);
PrivacyLedger parse_ledger(const std::string& text);

}  // namespace bdpfl

#endif  // BDPFL_ACCOUNTANT_HPP_
