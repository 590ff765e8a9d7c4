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
#include "bdpfl/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <utility>

#include "bdpfl/errors.hpp"

namespace bdpfl {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

LogValue LogValue::from_linear(double x) {
  if (x < 0) throw DomainError("LogValue represents a nonnegative quantity");
  return LogValue{std::log(x)};
}

double LogValue::linear() const { return std::exp(value); }

LogValue log_add(LogValue a, LogValue b) {
  const double hi = std::max(a.value, b.value);
  const double lo = std::min(a.value, b.value);
  if (hi == -kInf) return LogValue{-kInf};
  return LogValue{hi + std::log1p(std::exp(lo - hi))};
}

double log_sum_exp(std::span<const double> values) {
  if (values.empty()) throw DomainError("empty reduction");
  double max_elem = -kInf;
  for (double v : values) max_elem = std::max(max_elem, v);
  if (max_elem == -kInf) return -kInf;  // all terms are zero
  double sum = 0.0;
  for (double v : values) sum += std::exp(v - max_elem);
  return max_elem + std::log(sum);
}

double log_binomial_pmf(int k, int n, double q) {
  if (n < 0 || k < 0 || k > n) throw DomainError("log_binomial_pmf: k out of range");
  if (q < 0.0 || q > 1.0) throw DomainError("log_binomial_pmf: q outside [0, 1]");
  // k log q with 0^0 = 1, i.e. 0 * log 0 := 0.
  double lq = 0.0;
  if (k > 0) {
    if (q == 0.0) return -kInf;
    lq = k * std::log(q);
  }
  double l1q = 0.0;
  if (n - k > 0) {
    if (q == 1.0) return -kInf;
    l1q = (n - k) * std::log1p(-q);
  }
  const double log_choose = std::lgamma(n + 1.0) - std::lgamma(k + 1.0) -
                            std::lgamma(n - k + 1.0);
  return log_choose + lq + l1q;
}

namespace {

// Recursive adaptive Simpson on an already-finite interval.
struct SimpsonState {
  const std::function<double(double)>* f;
  bool failed = false;
  double best = 0.0;  // accumulated estimate including failed panels
};

double simpson(double fa, double fm, double fb, double a, double b) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adapt(SimpsonState& st, double a, double b, double fa, double fm,
             double fb, double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = (*st.f)(lm);
  const double frm = (*st.f)(rm);
  const double left = simpson(fa, flm, fm, a, m);
  const double right = simpson(fm, frm, fb, m, b);
  const double delta = left + right - whole;
  // Once the requested tolerance halves below what doubles can resolve,
  // further splitting only multiplies rounding noise; accept at the machine
  // floor instead of recursing to the cap on every sibling.
  const double floor = std::ldexp(std::abs(left) + std::abs(right), -48);
  if (std::abs(delta) <= std::max(15.0 * tol, floor)) {
    return left + right + delta / 15.0;
  }
  if (depth >= kMaxQuadratureDepth) {
    st.failed = true;
    return left + right + delta / 15.0;
  }
  return adapt(st, a, m, fa, flm, fm, left, 0.5 * tol, depth + 1) +
         adapt(st, m, b, fm, frm, fb, right, 0.5 * tol, depth + 1);
}

double integrate_finite(const std::function<double(double)>& f, double lo,
                        double hi, double tol) {
  SimpsonState st;
  st.f = &f;
  const double fa = f(lo);
  const double fb = f(hi);
  const double fm = f(0.5 * (lo + hi));
  const double whole = simpson(fa, fm, fb, lo, hi);
  const double result = adapt(st, lo, hi, fa, fm, fb, whole, tol, 0);
  if (st.failed) {
    throw IntegrationError("quadrature did not converge within depth cap",
                           result);
  }
  return result;
}

}  // namespace

double integrate(const std::function<double(double)>& f, double lo, double hi,
                 double tol) {
  if (!(tol > 0)) throw DomainError("integrate: tol must be positive");
  if (lo > hi) throw DomainError("integrate: lo > hi");
  const bool lo_inf = std::isinf(lo);
  const bool hi_inf = std::isinf(hi);
  if (!lo_inf && !hi_inf) return integrate_finite(f, lo, hi, tol);
  if (lo_inf && hi_inf) {
    auto g = [&f](double t) {
      if (std::abs(t) >= 1.0) return 0.0;
      const double onemt2 = 1.0 - t * t;
      const double x = t / onemt2;
      const double jac = (1.0 + t * t) / (onemt2 * onemt2);
      return f(x) * jac;
    };
    return integrate_finite(g, -1.0, 1.0, tol);
  }
  if (!lo_inf && hi_inf) {
    auto g = [&f, lo](double t) {
      if (t >= 1.0) return 0.0;
      const double onemt = 1.0 - t;
      const double x = lo + t / onemt;
      return f(x) / (onemt * onemt);
    };
    return integrate_finite(g, 0.0, 1.0, tol);
  }
  auto g = [&f, hi](double t) {
    if (t >= 1.0) return 0.0;
    const double onemt = 1.0 - t;
    const double x = hi - t / onemt;
    return f(x) / (onemt * onemt);
  };
  return integrate_finite(g, 0.0, 1.0, tol);
}

namespace {

double t_log_density(double u, int dof) {
  const double v = static_cast<double>(dof);
  return std::lgamma(0.5 * (v + 1.0)) - std::lgamma(0.5 * v) -
         0.5 * std::log(v * M_PI) -
         0.5 * (v + 1.0) * std::log1p(u * u / v);
}

// CDF of the t-distribution for x >= 0 via quadrature over [0, x].
double t_cdf_upper_half(double x, int dof) {
  if (x == 0.0) return 0.5;
  auto dens = [dof](double u) { return std::exp(t_log_density(u, dof)); };
  return 0.5 + integrate(dens, 0.0, x, 1e-13);
}

std::mutex t_cache_mutex;
std::map<std::pair<double, int>, double>& t_cache() {
  static std::map<std::pair<double, int>, double> cache;
  return cache;
}

}  // namespace

double student_t_quantile(double p, int dof) {
  if (!(p > 0.0 && p < 1.0)) {
    throw DomainError("student_t_quantile: p must lie in (0, 1)");
  }
  if (dof < 1) throw DomainError("student_t_quantile: dof must be >= 1");
  if (p == 0.5) return 0.0;
  if (p < 0.5) return -student_t_quantile(1.0 - p, dof);

  {
    std::lock_guard<std::mutex> lock(t_cache_mutex);
    auto it = t_cache().find({p, dof});
    if (it != t_cache().end()) return it->second;
  }

  // Bracket the quantile, then bisect. The CDF is evaluated by quadrature,
  // so the result satisfies |CDF(x) - p| <= ~1e-12.
  double hi = 1.0;
  while (t_cdf_upper_half(hi, dof) < p) {
    hi *= 2.0;
    if (hi > 1e308) throw DomainError("student_t_quantile: bracket overflow");
  }
  double lo = 0.0;
  for (int iter = 0; iter < 200; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    if (t_cdf_upper_half(mid, dof) < p) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double result = 0.5 * (lo + hi);

  std::lock_guard<std::mutex> lock(t_cache_mutex);
  t_cache().emplace(std::make_pair(p, dof), result);
  return result;
}

}  // namespace bdpfl
