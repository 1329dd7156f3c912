// Copyright 2026 The trunctail Authors.
// SPDX-License-Identifier: Apache-2.0

#include "trunctail/numerics.hpp"

#include <numbers>
#include <string>

namespace trunctail {

double normal_cdf(double x) noexcept { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    if (p == 0.0) return -std::numeric_limits<double>::infinity();
    if (p == 1.0) return std::numeric_limits<double>::infinity();
    throw DomainError("normal_quantile: p outside [0, 1]");
  }
  const double q = p - 0.5;
  if (std::abs(q) <= 0.425) {
    const double r = 0.180625 - q * q;
    return q *
           (((((((2509.0809287301226727 * r + 33430.575583588128105) * r +
                 67265.770927008700853) * r + 45921.953931549871457) * r +
               13731.693765509461125) * r + 1971.5909503065514427) * r +
             133.14166789178437745) * r + 3.387132872796366608) /
           (((((((5226.495278852545925 * r + 28729.085735721942674) * r +
                 39307.89580009271061) * r + 21213.794301586595867) * r +
               5394.1960214247511077) * r + 687.1870074920579083) * r +
             42.313330701600911252) * r + 1.0);
  }
  double r = q < 0 ? p : 1.0 - p;
  r = std::sqrt(-std::log(r));
  double value;
  if (r <= 5.0) {
    r -= 1.6;
    value = (((((((7.7454501427834140764e-4 * r + 0.0227238449892691845833) * r +
                  0.24178072517745061177) * r + 1.27045825245236838258) * r +
                3.64784832476320460504) * r + 5.7694972214606914055) * r +
              4.6303378461565452959) * r + 1.42343711074968357734) /
            (((((((1.05075007164441684324e-9 * r + 5.475938084995344946e-4) * r +
                  0.0151986665636164571966) * r + 0.14810397642748007459) * r +
                0.68976733498510000455) * r + 1.6763848301838038494) * r +
              2.05319162663775882187) * r + 1.0);
  } else {
    r -= 5.0;
    value = (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
                  0.0012426609473880784386) * r + 0.026532189526576123093) * r +
                0.29656057182850489123) * r + 1.7848265399172913358) * r +
              5.4637849111641143699) * r + 6.6579046435011037772) /
            (((((((2.04426310338993978564e-15 * r + 1.4215117583164458887e-7) * r +
                  1.8463183175100546818e-5) * r + 7.868691311456132591e-4) * r +
                0.0148753612908506148525) * r + 0.13692988092273580531) * r +
              0.59983220655588793769) * r + 1.0);
  }
  return q < 0 ? -value : value;
}

NormalityScreen anderson_darling_normal(std::span<const double> values) {
  const auto n = values.size();
  if (n < 8) throw DomainError("anderson_darling_normal: need at least 8 values");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  CompensatedSum<double> sum;
  for (double v : sorted) sum.add(v);
  const double mean = sum.value() / static_cast<double>(n);
  CompensatedSum<double> ss;
  for (double v : sorted) ss.add((v - mean) * (v - mean));
  const double sd = std::sqrt(ss.value() / static_cast<double>(n - 1));
  if (!(sd > 0.0)) throw DomainError("anderson_darling_normal: zero variance");

  const double dn = static_cast<double>(n);
  CompensatedSum<double> s;
  for (std::size_t i = 0; i < n; ++i) {
    const double lo = normal_cdf((sorted[i] - mean) / sd);
    // log(1 - Phi(z)) for the mirrored order statistic, via the upper tail.
    const double hi_tail = normal_cdf(-(sorted[n - 1 - i] - mean) / sd);
    const double weight = 2.0 * static_cast<double>(i + 1) - 1.0;
    s.add(weight * (std::log(std::max(lo, 1e-300)) + std::log(std::max(hi_tail, 1e-300))));
  }
  const double a2 = -dn - s.value() / dn;
  const double a2_star = a2 * (1.0 + 0.75 / dn + 2.25 / (dn * dn));

  double p;
  if (a2_star >= 0.6)
    p = std::exp(1.2937 - 5.709 * a2_star + 0.0186 * a2_star * a2_star);
  else if (a2_star >= 0.34)
    p = std::exp(0.9177 - 4.279 * a2_star - 1.38 * a2_star * a2_star);
  else if (a2_star >= 0.2)
    p = 1.0 - std::exp(-8.318 + 42.796 * a2_star - 59.938 * a2_star * a2_star);
  else
    p = 1.0 - std::exp(-13.436 + 101.14 * a2_star - 223.73 * a2_star * a2_star);
  return {a2_star, std::clamp(p, 0.0, 1.0)};
}

double median_inplace(std::span<double> scratch) {
  if (scratch.empty()) throw DomainError("median of empty range");
  const auto n = scratch.size();
  const auto mid = scratch.begin() + static_cast<std::ptrdiff_t>(n / 2);
  std::nth_element(scratch.begin(), mid, scratch.end());
  const double upper = *mid;
  if (n % 2 == 1) return upper;
  const double lower = *std::max_element(scratch.begin(), mid);
  return 0.5 * (lower + upper);
}

GaussLegendreRule gauss_legendre_unit(int order) {
  if (order < 1) throw DomainError("gauss_legendre_unit: order must be positive");
  GaussLegendreRule rule{Eigen::ArrayXd(order), Eigen::ArrayXd(order)};
  for (int i = 0; i < order; ++i) {
    // Chebyshev initial guess, then Newton on P_order.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int j = 2; j <= order; ++j) {
        const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      dp = order * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    rule.nodes[i] = 0.5 * (1.0 - x);
    rule.weights[i] = 1.0 / ((1.0 - x * x) * dp * dp);
  }
  return rule;
}

double solve_monotone_positive(const std::function<double(double)>& f, double guess,
                               double rel_tol) {
  if (!(guess > 0.0) || !std::isfinite(guess)) guess = 1.0;
  double lo = guess, hi = guess;
  double flo = f(lo), fhi = flo;
  if (flo == 0.0) return guess;
  for (int i = 0; i < 2000 && (flo > 0) == (fhi > 0); ++i) {
    lo *= 0.5;
    hi *= 2.0;
    flo = f(lo);
    fhi = f(hi);
  }
  if ((flo > 0) == (fhi > 0)) throw NumericError("solve_monotone_positive: no sign change");
  for (int iter = 0; iter < 400 && hi / lo - 1.0 > rel_tol; ++iter) {
    const double mid = std::sqrt(lo * hi);
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm > 0) == (flo > 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return std::sqrt(lo * hi);
}

}  // namespace trunctail
