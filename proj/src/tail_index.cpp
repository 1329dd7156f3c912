// Copyright 2026 The trunctail Authors.
// SPDX-License-Identifier: Apache-2.0

#include "trunctail/tail_index.hpp"

#include <limits>
#include <sstream>

#include "trunctail/numerics.hpp"

namespace trunctail {

Eigen::ArrayXd hill_path(const Eigen::ArrayXd& values, Eigen::Index k_max) {
  const Eigen::Index n = values.size();
  if (k_max < 1 || k_max >= n) throw DomainError("hill_path: k_max must satisfy 1 <= k_max < n");
  const Eigen::ArrayXd top = sorted_descending(values);
  const Eigen::ArrayXd logs = top.head(k_max + 1).log();
  Eigen::ArrayXd path(k_max);
  double prefix = 0.0;
  for (Eigen::Index k = 1; k <= k_max; ++k) {
    prefix += logs[k - 1];
    path[k - 1] = prefix / static_cast<double>(k) - logs[k];
  }
  return path;
}

Eigen::ArrayXd tail_weights(const ProductLimitFit& fit) {
  return (fit.df_at_atoms() / fit.c_n()).reverse();
}

double gamma1_estimate(const ProductLimitFit& fit, Eigen::Index k) {
  const Eigen::Index n = fit.n();
  if (k < 1 || k >= n) throw DomainError("gamma1_estimate: k must satisfy 1 <= k < n");
  const double threshold = fit.upper_order_statistic(k);
  double num = 0.0;
  double den = 0.0;
  for (Eigen::Index i = 0; i < k; ++i) {
    const Eigen::Index j = n - 1 - i;
    const double w = fit.df_at_atoms()[j] / fit.c_n()[j];
    num += w * std::log(fit.atoms()[j] / threshold);
    den += w;
  }
  if (!(den > 0.0)) throw DegenerateData("gamma1_estimate: tail weights sum to zero");
  return num / den;
}

TailIndexEstimate gamma1_estimate(const TruncatedSample& sample, Eigen::Index k,
                                  Variant variant) {
  const ProductLimitFit fit(sample, variant);
  TailIndexEstimate est;
  est.gamma1_hat = gamma1_estimate(fit, k);
  est.k = k;
  est.variant = variant;
  est.n = sample.size();
  return est;
}

Eigen::ArrayXd gamma1_path(const ProductLimitFit& fit, Eigen::Index k_max) {
  const Eigen::Index n = fit.n();
  if (k_max < 1 || k_max >= n) throw DomainError("gamma1_path: k_max must satisfy 1 <= k_max < n");
  const Eigen::ArrayXd w = tail_weights(fit);
  const Eigen::ArrayXd logs = fit.atoms().reverse().head(k_max + 1).log();
  Eigen::ArrayXd path(k_max);
  double sw = 0.0;
  double swl = 0.0;
  for (Eigen::Index k = 1; k <= k_max; ++k) {
    sw += w[k - 1];
    swl += w[k - 1] * logs[k - 1];
    path[k - 1] = swl / sw - logs[k];
  }
  return path;
}

double asymptotic_variance(double gamma1, double gamma2) {
  if (!(gamma1 > 0.0) || !(gamma2 > 0.0))
    throw DomainError("asymptotic_variance: tail indices must be positive");
  if (!(gamma1 < gamma2)) throw DomainError("asymptotic_variance: requires gamma1 < gamma2");
  const double r = gamma1 / gamma2;
  const double g = gamma1 * gamma2 / (gamma1 + gamma2);
  const double one_minus_r = 1.0 - r;
  return g * g * (1.0 + r) * (1.0 + r * r) / (one_minus_r * one_minus_r * one_minus_r);
}

ConfidenceInterval confidence_interval(const TailIndexEstimate& estimate, double gamma2_hat,
                                       double level) {
  if (!(level >= 0.0 && level < 1.0)) throw DomainError("confidence level must lie in [0, 1)");
  if (estimate.k < 1) throw DomainError("confidence_interval: estimate has no k");
  if (!(gamma2_hat > estimate.gamma1_hat)) {
    std::ostringstream os;
    os << "gamma2_hat (" << gamma2_hat << ") <= gamma1_hat (" << estimate.gamma1_hat
       << "): asymptotic variance undefined";
    throw ModelViolation(os.str());
  }
  const double sigma2 = asymptotic_variance(estimate.gamma1_hat, gamma2_hat);
  const double z = normal_quantile(0.5 * (1.0 + level));
  const double half = z * std::sqrt(sigma2 / static_cast<double>(estimate.k));
  return {level, estimate.gamma1_hat - half, estimate.gamma1_hat + half};
}

double estimate_gamma2(const TruncatedSample& sample, Eigen::Index k2) {
  return hill(sample.y(), k2);
}

Eigen::Index default_k_max(Eigen::Index n) {
  const auto by_fraction = static_cast<Eigen::Index>(std::floor(0.95 * static_cast<double>(n))) - 1;
  return std::min(by_fraction, n - 2);
}

Eigen::Index select_k_from_path(const Eigen::ArrayXd& path, double theta, Eigen::Index k_min,
                                Eigen::Index k_max) {
  if (!(theta >= 0.0 && theta <= 0.5)) throw DomainError("theta must lie in [0, 0.5]");
  if (k_min < 2 || k_min >= k_max || k_max > path.size())
    throw DomainError("k range must satisfy 2 <= k_min < k_max <= path length");
  const Eigen::ArrayXd powers =
      Eigen::ArrayXd::LinSpaced(k_max, 1.0, static_cast<double>(k_max)).pow(theta);
  std::vector<double> scratch;
  scratch.reserve(static_cast<std::size_t>(k_max));
  Eigen::Index best_k = k_min;
  double best = std::numeric_limits<double>::infinity();
  for (Eigen::Index k = k_min; k <= k_max; ++k) {
    scratch.assign(path.data() + 1, path.data() + k);  // estimates for i = 2..k
    const double med = median_inplace(scratch);
    double crit = 0.0;
    for (Eigen::Index i = 2; i <= k; ++i) crit += powers[i - 1] * std::abs(path[i - 1] - med);
    crit /= static_cast<double>(k);
    if (crit < best) {
      best = crit;
      best_k = k;
    }
  }
  return best_k;
}

namespace {

Eigen::Index resolve_k_max(Eigen::Index k_max, Eigen::Index n) {
  const Eigen::Index k = k_max < 0 ? default_k_max(n) : k_max;
  if (k >= n) throw DomainError("k_max must be smaller than the sample size");
  return k;
}

}  // namespace

Eigen::Index select_k_reiss_thomas(const TruncatedSample& sample, Variant variant, double theta,
                                   Eigen::Index k_min, Eigen::Index k_max) {
  const Eigen::Index upper = resolve_k_max(k_max, sample.size());
  const ProductLimitFit fit(sample, variant);
  if (upper < 1) throw DomainError("sample too small for threshold selection");
  return select_k_from_path(gamma1_path(fit, upper), theta, k_min, upper);
}

Eigen::Index select_k2_reiss_thomas(const TruncatedSample& sample, double theta,
                                    Eigen::Index k_min, Eigen::Index k_max) {
  const Eigen::Index upper = resolve_k_max(k_max, sample.size());
  if (upper < 1) throw DomainError("sample too small for threshold selection");
  return select_k_from_path(hill_path(sample.y(), upper), theta, k_min, upper);
}

TailIndexEstimate estimate_tail_index(const TruncatedSample& sample,
                                      const EstimationOptions& options) {
  const ProductLimitFit fit(sample, options.variant);
  const Eigen::Index n = sample.size();
  TailIndexEstimate est;
  est.variant = options.variant;
  est.n = n;
  if (options.k) {
    est.k = *options.k;
  } else {
    const Eigen::Index upper = resolve_k_max(options.k_max, n);
    if (upper < 1) throw DegenerateData("sample too small for threshold selection");
    est.k = select_k_from_path(gamma1_path(fit, upper), options.theta, options.k_min, upper);
  }
  est.gamma1_hat = gamma1_estimate(fit, est.k);

  const bool finite_y = sample.y().isFinite().all();
  if (!finite_y) {
    est.warnings.emplace_back("complete data (infinite y): no gamma2 plug-in, no interval");
    return est;
  }
  // A fixed k without a fixed k2 reuses k for the y's.
  if (options.k2)
    est.k2 = *options.k2;
  else if (options.k)
    est.k2 = *options.k;
  else
    est.k2 = select_k2_reiss_thomas(sample, options.theta, options.k_min, options.k_max);
  est.gamma2_hat = estimate_gamma2(sample, *est.k2);
  if (*est.gamma2_hat > est.gamma1_hat) {
    est.sigma2_hat = asymptotic_variance(est.gamma1_hat, *est.gamma2_hat);
    est.ci = confidence_interval(est, *est.gamma2_hat, options.level);
    est.warnings.emplace_back(
        "interval omits the asymptotic bias term lambda/(1 - tau1); it is not estimated");
  } else {
    std::ostringstream os;
    os << "model violation: gamma2_hat (" << *est.gamma2_hat << ") <= gamma1_hat ("
       << est.gamma1_hat << "); no variance or interval reported";
    est.warnings.push_back(os.str());
  }
  return est;
}

double generalized_statistic_complete(const Eigen::ArrayXd& values, Eigen::Index k,
                                      const std::function<double(double)>& weight,
                                      double alpha) {
  const Eigen::Index n = values.size();
  if (k < 1 || k >= n) throw DomainError("generalized_statistic: k must satisfy 1 <= k < n");
  if (!(alpha > 0.0)) throw DomainError("generalized_statistic: alpha must be positive");
  const Eigen::ArrayXd top = sorted_descending(values);
  const double threshold = top[k];
  double num = 0.0;
  for (Eigen::Index i = 1; i <= k; ++i) {
    const double u = static_cast<double>(i) / static_cast<double>(k + 1);
    num += weight(u) * std::pow(std::log(top[i - 1] / threshold), alpha);
  }
  num /= static_cast<double>(k);
  // int_0^1 g(x) (-log x)^alpha dx with x = exp(-t).
  const double den =
      integrate_half_line(
          [&](double t) { return weight(std::exp(-t)) * std::pow(t, alpha) * std::exp(-t); },
          0.0, 1e-10)
          .value;
  if (!(std::abs(den) > 0.0)) throw NumericError("generalized_statistic: vanishing denominator");
  return num / den;
}

}  // namespace trunctail
