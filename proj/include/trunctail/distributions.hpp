// Copyright 2026 The trunctail Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef TRUNCTAIL_DISTRIBUTIONS_HPP
#define TRUNCTAIL_DISTRIBUTIONS_HPP

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <string_view>
#include <type_traits>

#include <Eigen/Core>

#include "trunctail/error.hpp"

namespace trunctail {

enum class Family { Burr, Pareto, Frechet };

/// A heavy-tailed law on the positive half-line.
///
///   Burr:    survival(x) = (1 + x^(1/delta))^(-delta/gamma),  x >= 0
///   Pareto:  survival(x) = x^(-1/gamma),                      x >= 1
///   Frechet: df(x)       = exp(-x^(-1/gamma)),                x >  0
///
/// `tail_index` is gamma; `delta` is only used by Burr.
struct HeavyTailModel {
  Family family = Family::Burr;
  double tail_index = 1.0;
  double delta = 1.0;

  static HeavyTailModel burr(double delta, double gamma);
  static HeavyTailModel pareto(double gamma);
  static HeavyTailModel frechet(double gamma);

  /// Throws DomainError on non-positive parameters.
  void validate() const;

  friend bool operator==(const HeavyTailModel&, const HeavyTailModel&) = default;
};

namespace detail {

inline void require_finite(double x, const char* what) {
  if (!std::isfinite(x)) throw DomainError(std::string(what) + ": argument is not finite");
}

// log(1 + x^a) without overflow for large x.
template <typename Scalar>
  requires std::is_floating_point_v<Scalar>
Scalar log1p_pow(Scalar x, Scalar a) {
  using std::log;
  using std::log1p;
  using std::pow;
  if (x <= Scalar(1)) return log1p(pow(x, a));
  return a * log(x) + log1p(pow(x, -a));
}

}  // namespace detail

/// Survival function 1 - df(x).  Values below the support return 1.
template <typename Scalar>
  requires std::is_floating_point_v<Scalar>
Scalar survival(const HeavyTailModel& m, Scalar x) {
  using std::exp;
  using std::expm1;
  using std::log;
  using std::pow;
  detail::require_finite(static_cast<double>(x), "survival");
  if (x <= Scalar(0)) return Scalar(1);
  const Scalar g = m.tail_index;
  switch (m.family) {
    case Family::Burr:
      return exp(-(Scalar(m.delta) / g) * detail::log1p_pow(x, Scalar(1) / Scalar(m.delta)));
    case Family::Pareto:
      return x < Scalar(1) ? Scalar(1) : exp(-log(x) / g);
    case Family::Frechet:
      return -expm1(-pow(x, Scalar(-1) / g));
  }
  return Scalar(1);
}

/// Distribution function, computed without cancellation near the origin.
template <typename Scalar>
  requires std::is_floating_point_v<Scalar>
Scalar df(const HeavyTailModel& m, Scalar x) {
  using std::exp;
  using std::expm1;
  using std::log;
  using std::pow;
  detail::require_finite(static_cast<double>(x), "df");
  if (x <= Scalar(0)) return Scalar(0);
  const Scalar g = m.tail_index;
  switch (m.family) {
    case Family::Burr:
      return -expm1(-(Scalar(m.delta) / g) * detail::log1p_pow(x, Scalar(1) / Scalar(m.delta)));
    case Family::Pareto:
      return x < Scalar(1) ? Scalar(0) : -expm1(-log(x) / g);
    case Family::Frechet:
      return exp(-pow(x, Scalar(-1) / g));
  }
  return Scalar(0);
}

/// Lebesgue density.  Burr with delta > 1 is unbounded at 0 (returns +inf).
template <typename Scalar>
  requires std::is_floating_point_v<Scalar>
Scalar density(const HeavyTailModel& m, Scalar x) {
  using std::exp;
  using std::log;
  using std::pow;
  detail::require_finite(static_cast<double>(x), "density");
  const Scalar g = m.tail_index;
  switch (m.family) {
    case Family::Burr: {
      const Scalar a = Scalar(1) / Scalar(m.delta);
      if (x < Scalar(0)) return Scalar(0);
      if (x == Scalar(0)) {
        if (a > Scalar(1)) return Scalar(0);
        if (a == Scalar(1)) return Scalar(1) / g;
        return std::numeric_limits<Scalar>::infinity();
      }
      const Scalar l = detail::log1p_pow(x, a);
      return exp(-log(g) - (Scalar(m.delta) / g + Scalar(1)) * l + (a - Scalar(1)) * log(x));
    }
    case Family::Pareto:
      return x < Scalar(1) ? Scalar(0) : exp(-log(g) - (Scalar(1) / g + Scalar(1)) * log(x));
    case Family::Frechet: {
      if (x <= Scalar(0)) return Scalar(0);
      const Scalar t = pow(x, Scalar(-1) / g);
      return exp(-log(g) - t) * t / x;
    }
  }
  return Scalar(0);
}

/// Inverse of df: returns x with df(x) = u.  Requires 0 < u < 1; u = 0
/// returns the infimum of the support.
template <typename Scalar>
  requires std::is_floating_point_v<Scalar>
Scalar quantile(const HeavyTailModel& m, Scalar u) {
  using std::exp;
  using std::expm1;
  using std::log;
  using std::log1p;
  using std::pow;
  if (u == Scalar(0)) return m.family == Family::Pareto ? Scalar(1) : Scalar(0);
  if (!(u > Scalar(0) && u < Scalar(1)))
    throw DomainError("quantile: probability must lie in (0, 1)");
  const Scalar g = m.tail_index;
  switch (m.family) {
    case Family::Burr: {
      const Scalar base = expm1(-(g / Scalar(m.delta)) * log1p(-u));
      return pow(base, Scalar(m.delta));
    }
    case Family::Pareto:
      return exp(-g * log1p(-u));
    case Family::Frechet:
      return pow(-log(u), -g);
  }
  return Scalar(0);
}

/// Element-wise overloads for Eigen array expressions.
template <typename Derived>
auto survival(const HeavyTailModel& m, const Eigen::ArrayBase<Derived>& x) {
  using Scalar = typename Derived::Scalar;
  return x.derived().unaryExpr([m](Scalar v) { return survival(m, v); });
}

template <typename Derived>
auto quantile(const HeavyTailModel& m, const Eigen::ArrayBase<Derived>& u) {
  using Scalar = typename Derived::Scalar;
  return u.derived().unaryExpr([m](Scalar v) { return quantile(m, v); });
}

/// Inverse-transform sample of `count` values; deterministic in `seed`.
Eigen::ArrayXd sample(const HeavyTailModel& m, Eigen::Index count, std::uint64_t seed);

/// Second-order parameter tau of the tail quantile function.  Burr gives
/// -gamma/delta; Pareto has no second-order term and returns -inf; Frechet
/// returns -1.
double second_order_tau(const HeavyTailModel& m);

/// Parses `burr:delta=0.25,gamma=0.6`, `pareto:gamma=0.5`, `frechet:gamma=0.5`.
HeavyTailModel parse_model(std::string_view text);
std::string to_string(const HeavyTailModel& m);

}  // namespace trunctail

#endif  // TRUNCTAIL_DISTRIBUTIONS_HPP
