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
#ifndef BDPFL_NUMERICS_HPP_
#define BDPFL_NUMERICS_HPP_

#include <functional>
#include <span>

namespace bdpfl {

// The natural logarithm of a nonnegative quantity. All probability math in
// the accountants stays in this representation until final reporting.
struct LogValue {
  double value;  // log of the represented quantity; -inf encodes zero

  static LogValue from_linear(double x);
  double linear() const;
};

// log(exp(a.value) + exp(b.value)) without leaving log space.
LogValue log_add(LogValue a, LogValue b);

// Returns log(sum_i exp(values[i])). Stable for inputs up to +-1e6.
// Throws DomainError("empty reduction") on an empty sequence.
double log_sum_exp(std::span<const double> values);

// Returns log[ C(n,k) q^k (1-q)^(n-k) ] with the convention 0^0 = 1, so the
// result is finite at q = 0 and q = 1 whenever the event has mass. Throws
// DomainError when k is outside [0, n] or q outside [0, 1].
double log_binomial_pmf(int k, int n, double q);

// Inverse CDF of Student's t-distribution with `dof` degrees of freedom,
// computed by bisection on the quadrature-evaluated CDF. Results are cached
// per (p, dof) because accounting reuses a single quantile per run.
// Throws DomainError for p outside (0, 1) or dof < 1.
double student_t_quantile(double p, int dof);

// Adaptive Simpson quadrature of f over [lo, hi] with estimated absolute
// error <= tol. Infinite endpoints are handled by the substitutions
//   x = t / (1 - t^2)        for (-inf, inf), t in (-1, 1)
//   x = lo + t / (1 - t)     for [lo, inf),   t in [0, 1)
//   x = hi - t / (1 - t)     for (-inf, hi],  t in [0, 1)
// which require f to decay at infinity faster than the Jacobian grows; the
// transformed integrand is taken as zero at the closed end of the map.
// Refinement is capped at depth kMaxQuadratureDepth; on failure an
// IntegrationError carrying the best estimate is thrown.
double integrate(const std::function<double(double)>& f, double lo, double hi,
                 double tol);

inline constexpr int kMaxQuadratureDepth = 60;

}  // namespace bdpfl

#endif  // BDPFL_NUMERICS_HPP_
