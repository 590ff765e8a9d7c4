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
#include "bdpfl/dp_baseline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <mutex>
#include <tuple>

#include "bdpfl/errors.hpp"
#include "bdpfl/numerics.hpp"

namespace bdpfl {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double log_normal_density(double z, double mean, double sigma) {
  const double u = (z - mean) / sigma;
  return -0.5 * u * u - std::log(sigma) - 0.5 * std::log(2.0 * M_PI);
}

struct MixtureMoment {
  double q;
  double sigma;
  int lambda;
  DpDirection direction;

  double log_integrand(double z) const {
    const double l0 = log_normal_density(z, 0.0, sigma);
    double l1;
    if (q == 0.0) {
      l1 = l0;
    } else if (q == 1.0) {
      l1 = log_normal_density(z, 1.0, sigma);
    } else {
      const double terms[2] = {std::log1p(-q) + l0,
                               std::log(q) + log_normal_density(z, 1.0, sigma)};
      l1 = log_sum_exp(terms);
    }
    const double lam = static_cast<double>(lambda);
    return direction == DpDirection::kAdd ? (lam + 1.0) * l1 - lam * l0
                                          : (lam + 1.0) * l0 - lam * l1;
  }
};

}  // namespace

double dp_log_moment_direction(const MechanismParams& params, int lambda,
                               DpDirection direction) {
  params.validate();
  if (lambda < 1) throw DomainError("dp_log_moment: lambda must be >= 1");
  const double q = params.sampling_prob;
  const double sigma = params.sigma;
  if (q == 0.0) return 0.0;  // identical distributions

  const MixtureMoment mm{q, sigma, lambda, direction};

  // The integrand concentrates near z = 0 plus a tilted lobe: around
  // z ~ lambda + 1 for the addition direction, z ~ -lambda for the removal
  // direction (the q -> 1 limit). Cover both with margin.
  const double margin = 12.0 * sigma + 2.0;
  const double lo = direction == DpDirection::kAdd
                        ? -margin
                        : -static_cast<double>(lambda) - margin;
  const double hi = direction == DpDirection::kAdd
                        ? static_cast<double>(lambda) + 1.0 + margin
                        : margin;

  // Peak-normalize so the quadrature tolerance is meaningful for moments far
  // above 1 (the raw integrand can reach e^500).
  double log_scale = -kInf;
  const int scan = 4096;
  for (int i = 0; i <= scan; ++i) {
    const double z = lo + (hi - lo) * i / scan;
    log_scale = std::max(log_scale, mm.log_integrand(z));
  }

  auto scaled = [&mm, log_scale](double z) {
    return std::exp(mm.log_integrand(z) - log_scale);
  };

  // Fixed panels keep the adaptive refinement from stepping over the narrow
  // peak inside a wide window.
  const double panel_width = std::max(0.5, sigma * 0.5);
  const int n_panels =
      std::max(1, static_cast<int>(std::ceil((hi - lo) / panel_width)));
  const double tol = 1e-12;
  const double panel_tol = tol / n_panels;
  double total = 0.0;
  for (int p = 0; p < n_panels; ++p) {
    const double a = lo + (hi - lo) * p / n_panels;
    const double b = lo + (hi - lo) * (p + 1) / n_panels;
    total += integrate(scaled, a, b, panel_tol);
  }
  return log_scale + std::log(total);
}

double dp_log_moment(const MechanismParams& params, int lambda) {
  // Data-independent, so simulators call this with the same arguments every
  // round; memoize per (sigma, q, lambda).
  static std::mutex mutex;
  static std::map<std::tuple<double, double, int>, double> cache;
  const auto key = std::make_tuple(params.sigma, params.sampling_prob, lambda);
  {
    std::lock_guard<std::mutex> lock(mutex);
    const auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  const double add = dp_log_moment_direction(params, lambda, DpDirection::kAdd);
  const double remove =
      dp_log_moment_direction(params, lambda, DpDirection::kRemove);
  const double result = std::max(0.0, std::max(add, remove));
  std::lock_guard<std::mutex> lock(mutex);
  cache.emplace(key, result);
  return result;
}

double dp_epsilon(const MechanismParams& params, int rounds, double delta,
                  const LambdaGrid& grid) {
  if (rounds < 0) throw DomainError("dp_epsilon: rounds must be >= 0");
  if (!(delta > 0.0 && delta < 1.0)) {
    throw DomainError("dp_epsilon: delta outside (0, 1)");
  }
  grid.validate();
  double best = kInf;
  for (int lambda : grid.lambdas) {
    const double alpha = rounds > 0 ? dp_log_moment(params, lambda) : 0.0;
    const double eps =
        (rounds * alpha - std::log(delta)) / static_cast<double>(lambda);
    best = std::min(best, eps);
  }
  return best;
}

DpLedger::DpLedger(LambdaGrid grid) : grid_(std::move(grid)) {
  grid_.validate();
  moments_.assign(grid_.size(), 0.0);
}

void DpLedger::drop_lambda(int lambda) {
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
  moments_.erase(moments_.begin() + static_cast<std::ptrdiff_t>(idx));
}

void DpLedger::add_rounds(const MechanismParams& params, int count) {
  if (count < 0) throw DomainError("add_rounds: count must be >= 0");
  if (count == 0) return;
  for (std::size_t i = 0; i < grid_.size(); ++i) {
    moments_[i] += count * dp_log_moment(params, grid_.lambdas[i]);
  }
  rounds_ += count;
}

double DpLedger::epsilon(double delta) const {
  if (!(delta > 0.0 && delta < 1.0)) {
    throw DomainError("epsilon: delta outside (0, 1)");
  }
  double best = kInf;
  for (std::size_t i = 0; i < grid_.size(); ++i) {
    const double eps = (moments_[i] - std::log(delta)) /
                       static_cast<double>(grid_.lambdas[i]);
    best = std::min(best, eps);
  }
  return best;
}

std::string DpLedger::serialize() const {
  std::string out;
  char buf[128];
  for (std::size_t i = 0; i < grid_.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%d,%.17g,%d,%.17g\n", grid_.lambdas[i],
                  moments_[i], rounds_, 0.0);
    out += buf;
  }
  return out;
}

}  // namespace bdpfl
