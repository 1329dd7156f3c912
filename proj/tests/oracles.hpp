// Copyright 2026 The trunctail Authors.
// SPDX-License-Identifier: Apache-2.0
//
// Reference computations used only by the tests.  Each one is written from
// the defining formula, independently of the library code paths it checks.

#ifndef TRUNCTAIL_TESTS_ORACLES_HPP
#define TRUNCTAIL_TESTS_ORACLES_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

namespace oracle {

// Direct Hill estimator: sort a copy, average log ratios.
inline double hill(std::vector<double> v, long k) {
  std::sort(v.begin(), v.end());
  const long n = static_cast<long>(v.size());
  long double s = 0;
  for (long i = 1; i <= k; ++i) s += std::log(static_cast<long double>(v[n - i]) / v[n - k - 1]);
  return static_cast<double>(s / k);
}

// C_n(z) = (1/n) #{i : x_i <= z <= y_i}.
inline double at_risk(const std::vector<double>& x, const std::vector<double>& y, double z) {
  long c = 0;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x[i] <= z && z <= y[i]) ++c;
  return static_cast<double>(c) / static_cast<double>(x.size());
}

// Product-limit df at t by brute force over the atoms strictly above t.
// lynden_bell selects the factor (1 - h) instead of exp(-h).
inline double pl_df(const std::vector<double>& x, const std::vector<double>& y, double t,
                    bool lynden_bell) {
  const double n = static_cast<double>(x.size());
  long double prod = 1;
  long double hazard = 0;
  for (double a : x) {
    if (!(a > t)) continue;
    const long double h = 1.0L / (n * at_risk(x, y, a));
    if (lynden_bell)
      prod *= 1 - h;
    else
      hazard += h;
  }
  return static_cast<double>(lynden_bell ? prod : std::exp(-hazard));
}

// Weighted tail estimator straight from its definition, with ties broken
// by input order as in the library.
inline double gamma1_hat(const std::vector<double>& x, const std::vector<double>& y, long k,
                         bool lynden_bell) {
  const long n = static_cast<long>(x.size());
  std::vector<long> idx(x.size());
  for (long i = 0; i < n; ++i) idx[i] = i;
  std::stable_sort(idx.begin(), idx.end(), [&](long a, long b) { return x[a] < x[b]; });
  // df including the atom's own factor: product over atoms ranked above it.
  long double num = 0, den = 0;
  const double threshold = x[idx[n - k - 1]];
  for (long r = n - k; r < n; ++r) {
    long double prod = 1, hazard = 0;
    for (long q = r + 1; q < n; ++q) {
      const long double h = 1.0L / (n * at_risk(x, y, x[idx[q]]));
      if (lynden_bell)
        prod *= 1 - h;
      else
        hazard += h;
    }
    const long double df = lynden_bell ? prod : std::exp(-hazard);
    const long double w = df / at_risk(x, y, x[idx[r]]);
    num += w * std::log(static_cast<long double>(x[idx[r]]) / threshold);
    den += w;
  }
  return static_cast<double>(num / den);
}

// Survival of the observed X for a Burr(delta) pair: the observed law is
// again Burr(delta) with tail index gamma = g1 g2 / (g1 + g2).
inline long double burr_observed_x_survival(long double x, long double delta, long double g1,
                                            long double g2) {
  const long double g = g1 * g2 / (g1 + g2);
  return std::pow(1 + std::pow(x, 1 / delta), -delta / g);
}

// Survival of the observed Y for the same pair:
//   (1/p) [u^(1/g2) - (g/g2) u^(1/g)],  u = (1 + y^(1/delta))^(-delta),
// with p = g2 / (g1 + g2).
inline long double burr_observed_y_survival(long double y, long double delta, long double g1,
                                            long double g2) {
  const long double g = g1 * g2 / (g1 + g2);
  const long double p = g2 / (g1 + g2);
  const long double log_u = -delta * std::log1p(std::pow(y, 1 / delta));
  return (std::exp(log_u / g2) - (g / g2) * std::exp(log_u / g)) / p;
}

// Second-order check.  `log_l` is log U(t) - gamma log t, the slowly
// varying part of the tail quantile function U(t) = F^{-1}(1 - 1/t),
// written without cancellation.  Returns the local exponent in t of
// U(tx)/U(t) - x^gamma, measured between t and 100 t.
inline double second_order_slope(const std::function<long double(long double)>& log_l,
                                 long double x, long double t) {
  auto gap = [&](long double s) { return std::expm1(log_l(s * x) - log_l(s)); };
  return static_cast<double>(std::log(std::fabs(gap(100 * t) / gap(t))) / std::log(100.0L));
}

// Burr(delta, gamma): U(t) = t^gamma (1 - t^(-gamma/delta))^delta.
inline long double burr_log_l(long double t, long double delta, long double gamma) {
  return delta * std::log1p(-std::pow(t, -gamma / delta));
}

// Frechet(gamma): U(t) = (-log(1 - 1/t))^(-gamma).
inline long double frechet_log_l(long double t, long double gamma) {
  return -gamma * std::log(-t * std::log1p(-1 / t));
}

}  // namespace oracle

#endif  // TRUNCTAIL_TESTS_ORACLES_HPP
