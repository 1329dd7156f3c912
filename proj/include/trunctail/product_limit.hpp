// Copyright 2026 The trunctail Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef TRUNCTAIL_PRODUCT_LIMIT_HPP
#define TRUNCTAIL_PRODUCT_LIMIT_HPP

#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "trunctail/truncation_model.hpp"

namespace trunctail {

/// Woodroofe: df(x) = prod_{X_i > x} exp(-1 / (n C_n(X_i))).
/// LyndenBell: df(x) = prod_{X_i > x} (1 - 1 / (n C_n(X_i))).
enum class Variant { Woodroofe, LyndenBell };

std::string to_string(Variant v);
/// Accepts "woodroofe" and "lynden-bell" (also "lyndenbell", "lynden_bell").
Variant parse_variant(std::string_view text);

/// C_n(z) = n^-1 #{i : x_i <= z <= y_i}.
double empirical_c(const TruncatedSample& sample, double z);

/// Fitted product-limit estimator.  Immutable; evaluation is O(log n).
///
/// Atoms are the observed x's sorted ascending (ties kept in input order).
/// `df_at_atoms()[j]` is the product over atoms with sorted position > j,
/// i.e. the df at atom j including that atom's own jump.
class ProductLimitFit {
 public:
  ProductLimitFit(const TruncatedSample& sample, Variant variant = Variant::Woodroofe);

  Variant variant() const noexcept { return variant_; }
  Eigen::Index n() const noexcept { return atoms_.size(); }
  const Eigen::ArrayXd& atoms() const noexcept { return atoms_; }
  const Eigen::ArrayXd& c_n() const noexcept { return c_n_; }
  const Eigen::ArrayXd& df_at_atoms() const noexcept { return df_at_; }

  /// Right-continuous step function: product over atoms strictly above x.
  double df(double x) const;
  double survival(double x) const;
  /// Lambda_n(x) = sum over atoms > x of 1 / (n C_n(atom)).
  double cumulative_hazard(double x) const;

  /// Order statistic X_{n-k:n} (the (k+1)-th largest atom), 0 <= k < n.
  double upper_order_statistic(Eigen::Index k) const;

 private:
  // Number of atoms <= x; atoms at positions >= this index lie above x.
  Eigen::Index count_at_or_below(double x) const;

  Variant variant_;
  Eigen::ArrayXd atoms_;
  Eigen::ArrayXd c_n_;
  Eigen::ArrayXd df_at_;
  Eigen::ArrayXd hazard_suffix_;   // size n + 1, hazard_suffix_[j] = sum_{i >= j} h_i
  Eigen::ArrayXd product_suffix_;  // size n + 1, Lynden-Bell products
};

ProductLimitFit fit_product_limit(const TruncatedSample& sample,
                                  Variant variant = Variant::Woodroofe);

double survival_pl(const ProductLimitFit& fit, double x);
double cumulative_hazard(const ProductLimitFit& fit, double x);

/// D_n(x) = sqrt(k) (Sbar_n(x X_{n-k:n}) / Sbar_n(X_{n-k:n}) - x^(-1/gamma1))
/// on each grid point.  Requires 1 <= k < n and every grid point > 0.
/// Throws DegenerateData when the survival at the threshold vanishes.
std::vector<std::pair<double, double>> tail_process(const ProductLimitFit& fit,
                                                    Eigen::Index k, double gamma1,
                                                    std::span<const double> grid);

}  // namespace trunctail

#endif  // TRUNCTAIL_PRODUCT_LIMIT_HPP
