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
#ifndef BDPFL_DP_BASELINE_HPP_
#define BDPFL_DP_BASELINE_HPP_

#include <string>

#include "bdpfl/accountant.hpp"

namespace bdpfl {

// Classic (eps, delta)-DP accounting for the subsampled Gaussian mechanism,
// kept deliberately independent of the Bayesian route: log-moments here come
// from adaptive quadrature of the defining integrals, never from the
// binomial sums the Bayesian accountant uses.

enum class DpDirection {
  kRemove,  // E_{mu0}[(mu0/mu1)^lambda]: log-moment of the removal direction
  kAdd,     // E_{mu1}[(mu1/mu0)^lambda]: log-moment of the addition direction
};

// Log-moment of one direction between mu1 = (1-q) N(0, sigma^2) +
// q N(1, sigma^2) and mu0 = N(0, sigma^2) (sensitivity normalized to 1; the
// clipping norm cancels because the noise std is clip * sigma). Computed by
// adaptive quadrature with tolerance 1e-12 applied to the peak-normalized
// integrand, which for moments near 1 coincides with an absolute tolerance.
double dp_log_moment_direction(const MechanismParams& params, int lambda,
                               DpDirection direction);

// alpha(lambda) = max over the two directions. Data-independent and
// deterministic. Throws on quadrature failure.
double dp_log_moment(const MechanismParams& params, int lambda);

// Tail bound eps = min over the grid of (rounds * alpha(lambda) -
// log delta) / lambda.
double dp_epsilon(const MechanismParams& params, int rounds, double delta,
                  const LambdaGrid& grid);

// Cumulative log-moments over a lambda grid, mirroring PrivacyLedger.
class DpLedger {
 public:
  DpLedger() = default;
  explicit DpLedger(LambdaGrid grid);

  const LambdaGrid& grid() const { return grid_; }
  std::span<const double> log_moments() const { return moments_; }
  int rounds() const { return rounds_; }

  void drop_lambda(int lambda);

  // Adds `count` applications of the mechanism. Moments for the grid are
  // evaluated once and cached per (sigma, q) inside the call.
  void add_rounds(const MechanismParams& params, int count);

  double epsilon(double delta) const;

  std::string serialize() const;

 private:
  LambdaGrid grid_;
  std::vector<double> moments_;
  int rounds_ = 0;
};

}  // namespace bdpfl

#endif  // BDPFL_DP_BASELINE_HPP_
