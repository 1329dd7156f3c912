// Copyright 2026 The trunctail Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef TRUNCTAIL_TRUNCATION_MODEL_HPP
#define TRUNCTAIL_TRUNCATION_MODEL_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "trunctail/distributions.hpp"

namespace trunctail {

/// Random right truncation: a pair (X, Y) of independent heavy-tailed
/// variables is recorded only when X <= Y.
class TruncationModel {
 public:
  /// `truncated` is the law of X (tail index gamma1), `truncator` the law of
  /// Y (gamma2).  gamma1 >= gamma2 is accepted but recorded as a warning.
  TruncationModel(HeavyTailModel truncated, HeavyTailModel truncator);

  /// Both marginals Burr(delta) with gamma2 chosen so that P(X <= Y) = p.
  static TruncationModel burr_with_observed_fraction(double p, double gamma1, double delta);

  const HeavyTailModel& truncated() const noexcept { return truncated_; }
  const HeavyTailModel& truncator() const noexcept { return truncator_; }
  double gamma1() const noexcept { return truncated_.tail_index; }
  double gamma2() const noexcept { return truncator_.tail_index; }
  /// Tail index of the observed X: gamma1 * gamma2 / (gamma1 + gamma2).
  double gamma() const noexcept { return gamma1() * gamma2() / (gamma1() + gamma2()); }
  const std::vector<std::string>& warnings() const noexcept { return warnings_; }

 private:
  HeavyTailModel truncated_;
  HeavyTailModel truncator_;
  std::vector<std::string> warnings_;
};

struct SampleProvenance {
  std::optional<std::int64_t> requested;  // N, number of pairs drawn
  std::optional<std::uint64_t> seed;
};

/// Observed pairs (x_i, y_i) with 0 < x_i <= y_i.  y may be +inf, which
/// encodes complete (untruncated) data.
class TruncatedSample {
 public:
  /// Throws InputError naming the first offending (1-based) row.
  TruncatedSample(Eigen::ArrayXd x, Eigen::ArrayXd y, SampleProvenance provenance = {});

  /// Complete data: every y is +inf.
  static TruncatedSample complete(const Eigen::ArrayXd& x);

  Eigen::Index size() const noexcept { return x_.size(); }
  const Eigen::ArrayXd& x() const noexcept { return x_; }
  const Eigen::ArrayXd& y() const noexcept { return y_; }
  const SampleProvenance& provenance() const noexcept { return provenance_; }

  /// Same pairs with every coordinate multiplied by `factor` > 0.
  TruncatedSample scaled(double factor) const;

 private:
  Eigen::ArrayXd x_;
  Eigen::ArrayXd y_;
  SampleProvenance provenance_;
};

/// P(X <= Y).  Closed form gamma2 / (gamma1 + gamma2) for a Burr pair with a
/// common delta, otherwise quadrature (relative tolerance 1e-8).
double truncation_probability(const TruncationModel& model);

/// Always-quadrature route of truncation_probability.
double truncation_probability_quadrature(const TruncationModel& model);

/// gamma2 solving p = gamma2 / (gamma1 + gamma2).
double gamma2_for_target_p(double gamma1, double p);

/// Draws `big_n` pairs and keeps those with x <= y.  Throws DegenerateData
/// when none survive.
TruncatedSample sample_truncated(const TruncationModel& model, std::int64_t big_n,
                                 std::uint64_t seed);

/// Distribution functions of the observed X and Y and the at-risk function
/// C = F - G.  The tails are carried separately so that small survival
/// probabilities keep full relative precision.
struct ObservedMarginals {
  double f_df;       // F(x)
  double g_df;       // G(x)
  double c;          // C(x) = F(x) - G(x), clamped to [0, 1]
  double f_tail;     // 1 - F(x)
  double g_tail;     // 1 - G(x)
};

ObservedMarginals observed_marginals(const TruncationModel& model, double x);

/// Tail quantile U_F(t) = F^{-1}(1 - 1/t) of the observed X, t > 1.
double observed_tail_quantile(const TruncationModel& model, double t);

}  // namespace trunctail

#endif  // TRUNCTAIL_TRUNCATION_MODEL_HPP
