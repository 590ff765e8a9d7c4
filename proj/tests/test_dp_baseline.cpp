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

#include "bdpfl/dp_baseline.hpp"
#include "bdpfl/errors.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace bdpfl;

namespace {

MechanismParams make_params(double sigma, double q) {
  MechanismParams p;
  p.sigma = sigma;
  p.clip = 1.0;
  p.sampling_prob = q;
  return p;
}

}  // namespace

TEST_SUITE("dp_baseline") {

TEST_CASE("dp_log_moment degenerate cases") {
  for (int lambda : {1, 2, 8, 32}) {
    CHECK(dp_log_moment(make_params(2.0, 0.0), lambda) == 0.0);
  }
  // q = 1: pure Gaussian moment lambda (lambda + 1) / (2 sigma^2).
  CHECK(dp_log_moment(make_params(1.0, 1.0), 2) ==
        doctest::Approx(3.0).epsilon(1e-9));
  CHECK(dp_log_moment(make_params(2.0, 1.0), 5) ==
        doctest::Approx(5.0 * 6.0 / 8.0).epsilon(1e-9));
}

TEST_CASE("dp_log_moment matches Monte-Carlo oracles per direction") {
  // Spec example point q = 0.01, sigma = 4, lambda = 8, plus one harder one.
  struct Point { double q, sigma; int lambda; };
  for (const auto& pt : {Point{0.01, 4.0, 8}, Point{0.1, 2.0, 8}}) {
    const auto params = make_params(pt.sigma, pt.q);
    const double add =
        dp_log_moment_direction(params, pt.lambda, DpDirection::kAdd);
    const auto add_mc = oracles::is_ratio_moment(
        oracles::RatioBase::kMixture, pt.lambda, pt.q, pt.sigma, 1.0,
        pt.lambda + 2, 1000000, 1234);
    CHECK(add_mc.covers(add, 3.0));

    const double remove =
        dp_log_moment_direction(params, pt.lambda, DpDirection::kRemove);
    const auto remove_mc = oracles::naive_ratio_moment(
        oracles::RatioBase::kNull, -static_cast<double>(pt.lambda), pt.q,
        pt.sigma, 1.0, 1000000, 4321);
    CHECK(remove_mc.covers(remove, 3.0));
  }
}

TEST_CASE("dp_log_moment is data-independent and deterministic") {
  const auto params = make_params(3.0, 0.2);
  const double a = dp_log_moment(params, 16);
  const double b = dp_log_moment(params, 16);
  CHECK(a == b);
}

TEST_CASE("dp_epsilon basics") {
  const LambdaGrid grid = LambdaGrid::range(64);
  const auto params = make_params(4.0, 0.05);
  // Zero rounds: min over lambda of -log(delta)/lambda.
  CHECK(dp_epsilon(params, 0, 1e-3, grid) ==
        doctest::Approx(-std::log(1e-3) / 64.0).epsilon(1e-12));
  // Sublinear in T: eps(4T) <= 4 eps(T).
  const double e1 = dp_epsilon(params, 25, 1e-3, grid);
  const double e4 = dp_epsilon(params, 100, 1e-3, grid);
  CHECK(e4 <= 4.0 * e1 + 1e-12);
}

TEST_CASE("dp_epsilon equals brute-force minimization over lambda = 1..512") {
  const auto params = make_params(4.0, 0.05);
  const double via_grid = dp_epsilon(params, 100, 1e-3, LambdaGrid::range(64));
  double brute = INFINITY;
  for (int lambda = 1; lambda <= 512; ++lambda) {
    const double eps =
        (100.0 * dp_log_moment(params, lambda) - std::log(1e-3)) / lambda;
    brute = std::min(brute, eps);
  }
  CHECK(via_grid == doctest::Approx(brute).epsilon(1e-9));
}

TEST_CASE("dp_epsilon monotonicity") {
  const LambdaGrid grid = LambdaGrid::range(32);
  const double base = dp_epsilon(make_params(2.0, 0.1), 50, 1e-3, grid);
  CHECK(dp_epsilon(make_params(3.0, 0.1), 50, 1e-3, grid) <= base + 1e-12);
  CHECK(dp_epsilon(make_params(2.0, 0.2), 50, 1e-3, grid) >= base - 1e-12);
  CHECK(dp_epsilon(make_params(2.0, 0.1), 100, 1e-3, grid) >= base - 1e-12);
}

TEST_CASE("DpLedger accumulates and serializes") {
  DpLedger ledger(LambdaGrid::range(8));
  ledger.add_rounds(make_params(2.0, 0.1), 3);
  CHECK(ledger.rounds() == 3);
  const double eps3 = ledger.epsilon(1e-3);
  ledger.add_rounds(make_params(2.0, 0.1), 3);
  CHECK(ledger.epsilon(1e-3) >= eps3);
  const std::string text = ledger.serialize();
  CHECK(text.find("6,") != std::string::npos);  // rounds column
}

TEST_CASE("worst-case-pinned Bayesian cost equals the DP moment at q = 1") {
  // Without subsampling both accountants track the same pure-Gaussian
  // moment, so matched ledgers give matched epsilon.
  const auto params = make_params(3.0, 1.0);
  const LambdaGrid grid = LambdaGrid::range(32);
  std::vector<SensitivitySample> pinned(4, SensitivitySample{1.0});
  PrivacyLedger bdp(grid);
  DpLedger dp(grid);
  const int rounds = 20;
  for (int t = 0; t < rounds; ++t) {
    bdp = ledger_add(bdp, estimate_round_cost(pinned, params, grid, 1e-6));
  }
  dp.add_rounds(params, rounds);
  const double eps_bdp = epsilon_for_delta(bdp, 1e-3).epsilon;
  const double eps_dp = dp.epsilon(1e-3);
  CHECK(std::abs(eps_bdp - eps_dp) < 0.1);
}

}  // TEST_SUITE
