// Copyright 2026 The trunctail Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef TRUNCTAIL_TAIL_INDEX_HPP
#define TRUNCTAIL_TAIL_INDEX_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "trunctail/product_limit.hpp"

namespace trunctail {

struct ConfidenceInterval {
  double level = 0.95;
  double lower = 0.0;
  double upper = 0.0;
};

struct TailIndexEstimate {
  double gamma1_hat = 0.0;
  Eigen::Index k = 0;
  Variant variant = Variant::Woodroofe;
  Eigen::Index n = 0;
  std::optional<double> gamma2_hat;
  std::optional<Eigen::Index> k2;
  std::optional<double> sigma2_hat;
  std::optional<ConfidenceInterval> ci;
  std::vector<std::string> warnings;
};

//---------------------------------------------------------------------------//
// Classical Hill estimator
//---------------------------------------------------------------------------//

/// Values sorted in decreasing order.
template <typename Derived>
Eigen::ArrayXd sorted_descending(const Eigen::DenseBase<Derived>& values) {
  Eigen::ArrayXd out(values.size());
  for (Eigen::Index i = 0; i < values.size(); ++i)
    out[i] = static_cast<double>(values.derived().coeff(i));
  std::sort(out.data(), out.data() + out.size(), std::greater<>());
  return out;
}

/// (1/k) sum_{i=1}^k log(X_{n-i+1:n} / X_{n-k:n}), for 1 <= k < n.
template <typename Derived>
double hill(const Eigen::DenseBase<Derived>& values, Eigen::Index k) {
  const Eigen::Index n = values.size();
  if (k < 1 || k >= n) throw DomainError("hill: k must satisfy 1 <= k < n");
  const Eigen::ArrayXd top = sorted_descending(values);
  const double threshold = top[k];
  if (!(threshold > 0.0)) throw DomainError("hill: values must be positive");
  double sum = 0.0;
  for (Eigen::Index i = 0; i < k; ++i) sum += std::log(top[i] / threshold);
  return sum / static_cast<double>(k);
}

/// Hill estimates for k = 1..k_max; entry k-1 holds k.
Eigen::ArrayXd hill_path(const Eigen::ArrayXd& values, Eigen::Index k_max);

//---------------------------------------------------------------------------//
// Product-limit based estimator
//---------------------------------------------------------------------------//

/// Weights F_n(X_{n-i+1:n}) / C_n(X_{n-i+1:n}) for i = 1..n (largest first).
Eigen::ArrayXd tail_weights(const ProductLimitFit& fit);

/// gamma1_hat at threshold X_{n-k:n}: the weighted mean of the top-k log
/// excesses with weights from tail_weights.  1 <= k < n.
double gamma1_estimate(const ProductLimitFit& fit, Eigen::Index k);
TailIndexEstimate gamma1_estimate(const TruncatedSample& sample, Eigen::Index k,
                                  Variant variant = Variant::Woodroofe);

/// gamma1_hat for k = 1..k_max via prefix sums; entry k-1 holds k.
Eigen::ArrayXd gamma1_path(const ProductLimitFit& fit, Eigen::Index k_max);

/// sigma^2 = g^2 (1 + r)(1 + r^2) / (1 - r)^3 with r = gamma1/gamma2 and
/// g = gamma1 gamma2 / (gamma1 + gamma2).  Requires gamma1 < gamma2.
double asymptotic_variance(double gamma1, double gamma2);

/// Normal interval gamma1_hat -/+ z sigma_hat / sqrt(k), bias term ignored.
/// Throws ModelViolation when gamma2_hat <= gamma1_hat.
ConfidenceInterval confidence_interval(const TailIndexEstimate& estimate, double gamma2_hat,
                                       double level);

/// Hill estimator on the observed y's (their tail index is gamma2).
double estimate_gamma2(const TruncatedSample& sample, Eigen::Index k2);

//---------------------------------------------------------------------------//
// Threshold selection
//---------------------------------------------------------------------------//

inline constexpr double kDefaultTheta = 0.3;
inline constexpr Eigen::Index kDefaultKMin = 5;

/// min(floor(0.95 n) - 1, n - 2).
Eigen::Index default_k_max(Eigen::Index n);

/// Reiss-Thomas choice on a precomputed estimator path (entry k-1 = k):
///   argmin_{k_min <= k <= k_max} (1/k) sum_{i=2}^k i^theta |est_i - med(est_2..est_k)|
/// Ties resolve to the smaller k.
Eigen::Index select_k_from_path(const Eigen::ArrayXd& path, double theta, Eigen::Index k_min,
                                Eigen::Index k_max);

Eigen::Index select_k_reiss_thomas(const TruncatedSample& sample, Variant variant,
                                   double theta = kDefaultTheta,
                                   Eigen::Index k_min = kDefaultKMin, Eigen::Index k_max = -1);

/// Same criterion applied to the Hill path of the observed y's.
Eigen::Index select_k2_reiss_thomas(const TruncatedSample& sample,
                                    double theta = kDefaultTheta,
                                    Eigen::Index k_min = kDefaultKMin, Eigen::Index k_max = -1);

struct EstimationOptions {
  Variant variant = Variant::Woodroofe;
  std::optional<Eigen::Index> k;   // fixed k instead of selection
  std::optional<Eigen::Index> k2;  // fixed k for the gamma2 plug-in; defaults to k when k is fixed
  double theta = kDefaultTheta;
  Eigen::Index k_min = kDefaultKMin;
  Eigen::Index k_max = -1;         // -1: default_k_max(n)
  double level = 0.95;
};

/// Full pipeline: choose k, estimate gamma1, estimate gamma2 on the y's and
/// attach the plug-in variance and interval when gamma2_hat > gamma1_hat.
/// Otherwise a warning is recorded and no interval is produced.
TailIndexEstimate estimate_tail_index(const TruncatedSample& sample,
                                      const EstimationOptions& options = {});

//---------------------------------------------------------------------------//
// Generalized complete-data statistic
//---------------------------------------------------------------------------//

/// [ (1/k) sum_i g(i/(k+1)) log(X_{n-i+1:n}/X_{n-k:n})^alpha ] / int_0^1 g(x)(-log x)^alpha dx
double generalized_statistic_complete(const Eigen::ArrayXd& values, Eigen::Index k,
                                      const std::function<double(double)>& weight,
                                      double alpha);

}  // namespace trunctail

#endif  // TRUNCTAIL_TAIL_INDEX_HPP
