// Copyright 2026 The trunctail Authors.
// SPDX-License-Identifier: Apache-2.0

#include "trunctail/product_limit.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace trunctail {

std::string to_string(Variant v) {
  return v == Variant::Woodroofe ? "woodroofe" : "lynden-bell";
}

Variant parse_variant(std::string_view text) {
  if (text == "woodroofe") return Variant::Woodroofe;
  if (text == "lynden-bell" || text == "lyndenbell" || text == "lynden_bell")
    return Variant::LyndenBell;
  throw InputError("unknown product-limit variant '" + std::string(text) + "'");
}

double empirical_c(const TruncatedSample& sample, double z) {
  const auto at_risk = ((sample.x() <= z) && (z <= sample.y())).count();
  return static_cast<double>(at_risk) / static_cast<double>(sample.size());
}

ProductLimitFit::ProductLimitFit(const TruncatedSample& sample, Variant variant)
    : variant_(variant) {
  const Eigen::Index n = sample.size();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    return sample.x()[a] < sample.x()[b];
  });
  atoms_.resize(n);
  for (Eigen::Index j = 0; j < n; ++j) atoms_[j] = sample.x()[order[static_cast<std::size_t>(j)]];

  std::vector<double> ys(sample.y().data(), sample.y().data() + n);
  std::sort(ys.begin(), ys.end());

  // C_n(z) = #{x_i <= z} - #{y_i < z}, valid because x_i <= y_i.
  const double dn = static_cast<double>(n);
  c_n_.resize(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const double z = atoms_[j];
    const auto x_le = std::upper_bound(atoms_.data(), atoms_.data() + n, z) - atoms_.data();
    const auto y_lt = std::lower_bound(ys.begin(), ys.end(), z) - ys.begin();
    c_n_[j] = static_cast<double>(x_le - y_lt) / dn;
  }

  hazard_suffix_.resize(n + 1);
  product_suffix_.resize(n + 1);
  hazard_suffix_[n] = 0.0;
  product_suffix_[n] = 1.0;
  for (Eigen::Index j = n - 1; j >= 0; --j) {
    const double h = 1.0 / (dn * c_n_[j]);
    hazard_suffix_[j] = hazard_suffix_[j + 1] + h;
    product_suffix_[j] = product_suffix_[j + 1] * (1.0 - h);
  }

  df_at_.resize(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    df_at_[j] = variant_ == Variant::Woodroofe ? std::exp(-hazard_suffix_[j + 1])
                                               : product_suffix_[j + 1];
  }
}

Eigen::Index ProductLimitFit::count_at_or_below(double x) const {
  return std::upper_bound(atoms_.data(), atoms_.data() + atoms_.size(), x) - atoms_.data();
}

double ProductLimitFit::df(double x) const {
  const auto idx = count_at_or_below(x);
  return variant_ == Variant::Woodroofe ? std::exp(-hazard_suffix_[idx]) : product_suffix_[idx];
}

double ProductLimitFit::survival(double x) const {
  const auto idx = count_at_or_below(x);
  return variant_ == Variant::Woodroofe ? -std::expm1(-hazard_suffix_[idx])
                                        : 1.0 - product_suffix_[idx];
}

double ProductLimitFit::cumulative_hazard(double x) const {
  return hazard_suffix_[count_at_or_below(x)];
}

double ProductLimitFit::upper_order_statistic(Eigen::Index k) const {
  if (k < 0 || k >= n()) throw DomainError("order statistic index out of range");
  return atoms_[n() - 1 - k];
}

ProductLimitFit fit_product_limit(const TruncatedSample& sample, Variant variant) {
  return ProductLimitFit(sample, variant);
}

double survival_pl(const ProductLimitFit& fit, double x) { return fit.survival(x); }

double cumulative_hazard(const ProductLimitFit& fit, double x) {
  return fit.cumulative_hazard(x);
}

std::vector<std::pair<double, double>> tail_process(const ProductLimitFit& fit,
                                                    Eigen::Index k, double gamma1,
                                                    std::span<const double> grid) {
  if (k < 1 || k >= fit.n()) throw DomainError("tail_process: k must satisfy 1 <= k < n");
  if (!(gamma1 > 0.0)) throw DomainError("tail_process: gamma1 must be positive");
  const double threshold = fit.upper_order_statistic(k);
  const double base = fit.survival(threshold);
  if (!(base > 0.0)) throw DegenerateData("tail_process: survival vanishes at the threshold");
  const double root_k = std::sqrt(static_cast<double>(k));
  std::vector<std::pair<double, double>> out;
  out.reserve(grid.size());
  for (double x : grid) {
    if (!(x > 0.0)) throw DomainError("tail_process: grid points must be positive");
    const double ratio = fit.survival(x * threshold) / base;
    out.emplace_back(x, root_k * (ratio - std::pow(x, -1.0 / gamma1)));
  }
  return out;
}

}  // namespace trunctail
