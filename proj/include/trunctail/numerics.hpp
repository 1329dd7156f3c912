// Copyright 2026 The trunctail Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef TRUNCTAIL_NUMERICS_HPP
#define TRUNCTAIL_NUMERICS_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <queue>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "trunctail/error.hpp"

namespace trunctail {

/// Neumaier compensated accumulator.
template <typename Scalar = double>
class CompensatedSum {
 public:
  void add(Scalar x) noexcept {
    const Scalar t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  CompensatedSum& operator+=(Scalar x) noexcept {
    add(x);
    return *this;
  }
  Scalar value() const noexcept { return sum_ + comp_; }

 private:
  Scalar sum_ = 0;
  Scalar comp_ = 0;
};

template <typename Derived>
double compensated_sum(const Eigen::DenseBase<Derived>& values) {
  CompensatedSum<double> acc;
  for (Eigen::Index i = 0; i < values.size(); ++i) acc.add(values.derived().coeff(i));
  return acc.value();
}

double normal_cdf(double x) noexcept;

/// Inverse standard normal df (Wichura's AS 241, ~1e-16 relative).
double normal_quantile(double p);

struct NormalityScreen {
  double statistic;   // modified A*^2
  double p_value;
};

/// Anderson-Darling test for normality with mean and variance estimated
/// from the data (Stephens' case 3, D'Agostino-Stephens p-value).
NormalityScreen anderson_darling_normal(std::span<const double> values);

/// Median with the usual even-length convention (mean of middle pair).
/// Reorders `scratch`.
double median_inplace(std::span<double> scratch);

//---------------------------------------------------------------------------//
// Quadrature
//---------------------------------------------------------------------------//

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  int intervals = 0;
  bool converged = false;
};

namespace detail {

// Gauss-Kronrod 7/15 abscissae and weights on [-1, 1].
inline constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a, b, value, error;
  bool operator<(const Segment& other) const { return error < other.error; }
};

template <typename F>
Segment gauss_kronrod15(F& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double kronrod = fc * kKronrodWeights[7];
  double gauss = fc * kGaussWeights[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kKronrodNodes[j];
    const double pair = f(center - dx) + f(center + dx);
    kronrod += kKronrodWeights[j] * pair;
    if (j % 2 == 1) gauss += kGaussWeights[j / 2] * pair;
  }
  kronrod *= half;
  gauss *= half;
  return {a, b, kronrod, std::abs(kronrod - gauss)};
}

}  // namespace detail

/// Globally adaptive Gauss-Kronrod 7/15 quadrature over the partition given
/// by `breakpoints` (sorted, at least two entries).  Stops when the summed
/// error estimate drops below max(abs_tol, rel_tol * |value|).
template <typename F>
QuadratureResult integrate_adaptive(F&& f, std::span<const double> breakpoints,
                                    double rel_tol, double abs_tol = 0.0,
                                    int max_intervals = 4000) {
  if (breakpoints.size() < 2) throw DomainError("integrate_adaptive: need two breakpoints");
  std::priority_queue<detail::Segment> heap;
  CompensatedSum<double> value;
  double error = 0.0;
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    if (!(breakpoints[i] < breakpoints[i + 1])) continue;
    auto seg = detail::gauss_kronrod15(f, breakpoints[i], breakpoints[i + 1]);
    value.add(seg.value);
    error += seg.error;
    heap.push(seg);
  }
  QuadratureResult result;
  auto done = [&] {
    const double target = std::max(abs_tol, rel_tol * std::abs(value.value()));
    return error <= target || error <= std::numeric_limits<double>::min();
  };
  while (!heap.empty() && !done() && static_cast<int>(heap.size()) < max_intervals) {
    const auto worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(worst.a < mid && mid < worst.b)) {
      heap.push(worst);
      break;
    }
    const auto left = detail::gauss_kronrod15(f, worst.a, mid);
    const auto right = detail::gauss_kronrod15(f, mid, worst.b);
    value.add(-worst.value);
    value.add(left.value);
    value.add(right.value);
    error += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
  }
  // Recompute the error sum from scratch; the running total drifts.
  double total_error = 0.0;
  CompensatedSum<double> total;
  result.intervals = static_cast<int>(heap.size());
  while (!heap.empty()) {
    total.add(heap.top().value);
    total_error += heap.top().error;
    heap.pop();
  }
  result.value = total.value();
  result.error = total_error;
  result.converged =
      total_error <= std::max(abs_tol, rel_tol * std::abs(result.value)) * 1.0000001 ||
      total_error <= std::numeric_limits<double>::min();
  return result;
}

template <typename F>
QuadratureResult integrate_adaptive(F&& f, double a, double b, double rel_tol,
                                    double abs_tol = 0.0, int max_intervals = 4000) {
  const std::array<double, 2> bp = {a, b};
  return integrate_adaptive(std::forward<F>(f), std::span<const double>(bp), rel_tol,
                            abs_tol, max_intervals);
}

/// Integrates a nonnegative-argument function over [lower, inf) on a
/// logarithmic axis (z = e^t).  `lower` may be 0.  The infinite ends are cut
/// where the transformed integrand falls below `cutoff` times its observed
/// peak.  Throws NumericError when the tolerance is not met.
template <typename F>
QuadratureResult integrate_half_line(F&& f, double lower, double rel_tol,
                                     double cutoff = 1e-14) {
  auto g = [&f](double t) {
    const double z = std::exp(t);
    const double v = f(z) * z;
    return std::isfinite(v) ? v : 0.0;
  };
  constexpr double kStep = 1.0;
  constexpr double kMaxLog = 700.0;
  const bool from_zero = lower <= 0.0;
  const double t0 = from_zero ? 0.0 : std::log(lower);
  double peak = std::abs(g(t0));
  std::vector<double> up = {t0};
  int below = 0;
  for (double t = t0 + kStep; t < kMaxLog; t += kStep) {
    const double v = std::abs(g(t));
    peak = std::max(peak, v);
    up.push_back(t);
    below = (peak > 0.0 && v <= cutoff * peak) ? below + 1 : 0;
    if (below >= 2) break;
  }
  std::vector<double> breakpoints;
  if (from_zero) {
    std::vector<double> down;
    below = 0;
    for (double t = t0 - kStep; t > -kMaxLog; t -= kStep) {
      const double v = std::abs(g(t));
      peak = std::max(peak, v);
      down.push_back(t);
      below = (peak > 0.0 && v <= cutoff * peak) ? below + 1 : 0;
      if (below >= 2) break;
    }
    breakpoints.assign(down.rbegin(), down.rend());
  }
  breakpoints.insert(breakpoints.end(), up.begin(), up.end());
  if (peak == 0.0) return {0.0, 0.0, 0, true};
  auto result = integrate_adaptive(g, std::span<const double>(breakpoints), rel_tol);
  if (!result.converged) {
    throw NumericError("half-line quadrature did not converge: value=" +
                       std::to_string(result.value) + " error=" + std::to_string(result.error) +
                       " intervals=" + std::to_string(result.intervals));
  }
  return result;
}

/// Gauss-Legendre nodes and weights on [0, 1].
struct GaussLegendreRule {
  Eigen::ArrayXd nodes;
  Eigen::ArrayXd weights;
};
GaussLegendreRule gauss_legendre_unit(int order);

/// Root of a monotone function by bisection in log-space on (0, inf).
/// `f` must change sign between the bracket ends once they are expanded.
double solve_monotone_positive(const std::function<double(double)>& f, double guess,
                               double rel_tol = 1e-13);

}  // namespace trunctail

#endif  // TRUNCTAIL_NUMERICS_HPP
