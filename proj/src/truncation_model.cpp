// Copyright 2026 The trunctail Authors.
// SPDX-License-Identifier: Apache-2.0

#include "trunctail/truncation_model.hpp"

#include <algorithm>
#include <sstream>

#include "trunctail/numerics.hpp"
#include "trunctail/random.hpp"

namespace trunctail {

namespace {

constexpr double kQuadratureTol = 1e-8;

bool has_closed_form(const TruncationModel& m) {
  return m.truncated().family == Family::Burr && m.truncator().family == Family::Burr &&
         m.truncated().delta == m.truncator().delta;
}

}  // namespace

TruncationModel::TruncationModel(HeavyTailModel truncated, HeavyTailModel truncator)
    : truncated_(truncated), truncator_(truncator) {
  truncated_.validate();
  truncator_.validate();
  if (!(gamma1() < gamma2())) {
    std::ostringstream os;
    os << "gamma1 (" << gamma1() << ") >= gamma2 (" << gamma2()
       << "): the truncated tail is heavier than the truncation tail; "
          "asymptotic guarantees of the estimator do not apply";
    warnings_.push_back(os.str());
  }
}

TruncationModel TruncationModel::burr_with_observed_fraction(double p, double gamma1,
                                                             double delta) {
  return {HeavyTailModel::burr(delta, gamma1),
          HeavyTailModel::burr(delta, gamma2_for_target_p(gamma1, p))};
}

TruncatedSample::TruncatedSample(Eigen::ArrayXd x, Eigen::ArrayXd y,
                                 SampleProvenance provenance)
    : x_(std::move(x)), y_(std::move(y)), provenance_(provenance) {
  if (x_.size() != y_.size()) throw InputError("x and y columns differ in length");
  if (x_.size() < 1) throw DegenerateData("truncated sample is empty");
  for (Eigen::Index i = 0; i < x_.size(); ++i) {
    const auto row = std::to_string(i + 1);
    if (!std::isfinite(x_[i]) || !(x_[i] > 0.0))
      throw InputError("row " + row + ": x must be positive and finite");
    if (std::isnan(y_[i])) throw InputError("row " + row + ": y is NaN");
    if (!(x_[i] <= y_[i])) throw InputError("row " + row + ": x > y violates truncation");
  }
}

TruncatedSample TruncatedSample::complete(const Eigen::ArrayXd& x) {
  return {x, Eigen::ArrayXd::Constant(x.size(), std::numeric_limits<double>::infinity())};
}

TruncatedSample TruncatedSample::scaled(double factor) const {
  if (!(factor > 0.0) || !std::isfinite(factor)) throw DomainError("scale must be positive");
  return {x_ * factor, y_ * factor, provenance_};
}

double truncation_probability_quadrature(const TruncationModel& model) {
  // P(X <= Y) = int F(z) dG(z).
  auto integrand = [&](double z) {
    return df(model.truncated(), z) * density(model.truncator(), z);
  };
  return integrate_half_line(integrand, 0.0, kQuadratureTol).value;
}

double truncation_probability(const TruncationModel& model) {
  if (has_closed_form(model)) return model.gamma2() / (model.gamma1() + model.gamma2());
  return truncation_probability_quadrature(model);
}

double gamma2_for_target_p(double gamma1, double p) {
  if (!(gamma1 > 0.0)) throw DomainError("gamma1 must be positive");
  if (!(p > 0.0 && p < 1.0)) throw DomainError("observed fraction p must lie in (0, 1)");
  return p * gamma1 / (1.0 - p);
}

TruncatedSample sample_truncated(const TruncationModel& model, std::int64_t big_n,
                                 std::uint64_t seed) {
  if (big_n < 1) throw DomainError("sample_truncated: N must be at least 1");
  const Eigen::ArrayXd xs = sample(model.truncated(), big_n, derive_seed(seed, StreamTag::kTruncated));
  const Eigen::ArrayXd ys = sample(model.truncator(), big_n, derive_seed(seed, StreamTag::kTruncator));
  const auto keep = (xs <= ys).count();
  if (keep == 0)
    throw DegenerateData("sample_truncated: all " + std::to_string(big_n) + " pairs truncated");
  Eigen::ArrayXd x(keep), y(keep);
  Eigen::Index j = 0;
  for (Eigen::Index i = 0; i < big_n; ++i) {
    if (xs[i] <= ys[i]) {
      x[j] = xs[i];
      y[j] = ys[i];
      ++j;
    }
  }
  return {std::move(x), std::move(y), SampleProvenance{big_n, seed}};
}

ObservedMarginals observed_marginals(const TruncationModel& model, double x) {
  if (!(x > 0.0) || !std::isfinite(x)) throw DomainError("observed_marginals: x must be positive");
  const double p = truncation_probability(model);
  const auto& f = model.truncated();
  const auto& g = model.truncator();
  // 1 - F(x) = p^-1 int_x^inf Gbar(z) dF(z);  1 - G(x) = p^-1 int_x^inf F(z) dG(z).
  const double f_tail = std::min(
      1.0, integrate_half_line([&](double z) { return survival(g, z) * density(f, z); }, x,
                               kQuadratureTol).value / p);
  const double g_tail = std::min(
      1.0, integrate_half_line([&](double z) { return df(f, z) * density(g, z); }, x,
                               kQuadratureTol).value / p);
  ObservedMarginals out;
  out.f_tail = f_tail;
  out.g_tail = g_tail;
  out.f_df = 1.0 - f_tail;
  out.g_df = 1.0 - g_tail;
  out.c = std::clamp(g_tail - f_tail, 0.0, 1.0);
  return out;
}

double observed_tail_quantile(const TruncationModel& model, double t) {
  if (!(t > 1.0) || !std::isfinite(t)) throw DomainError("observed_tail_quantile: t must exceed 1");
  const double target = std::log(1.0 / t);
  const double guess = std::pow(t, model.gamma());
  return solve_monotone_positive(
      [&](double x) { return std::log(observed_marginals(model, x).f_tail) - target; }, guess,
      1e-10);
}

}  // namespace trunctail
