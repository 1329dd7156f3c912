// Copyright 2026 The trunctail Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef TRUNCTAIL_LIMIT_PROCESS_HPP
#define TRUNCTAIL_LIMIT_PROCESS_HPP

#include <array>
#include <cstdint>
#include <memory>
#include <span>

#include <Eigen/Core>

namespace trunctail {

/// Node positions 0 = s_0 < s_1 < ... < s_m = 1 shared by many paths.
using WienerGrid = std::shared_ptr<const Eigen::ArrayXd>;

/// s_j = j / m.
WienerGrid uniform_grid(Eigen::Index m);

/// s_j = (j / m)^grading.  Concentrates nodes near 0, where the kernels
/// s^(-c-1) of the limit functionals are singular; grading 1 is uniform.
WienerGrid graded_grid(Eigen::Index m, double grading);

/// Default grading for Monte Carlo ensembles.  With m = 2^14 it keeps the
/// discretisation bias of the second moments below 1e-3 relative for
/// rho >= 0.6.
inline constexpr double kDefaultGrading = 6.0;

/// A Wiener trajectory sampled at grid nodes, linearly interpolated between.
class WienerPath {
 public:
  WienerPath(WienerGrid grid, Eigen::VectorXd values);

  static WienerPath zero(WienerGrid grid);

  const WienerGrid& grid() const noexcept { return grid_; }
  const Eigen::ArrayXd& nodes() const noexcept { return *grid_; }
  const Eigen::VectorXd& values() const noexcept { return values_; }
  Eigen::Index m() const noexcept { return values_.size() - 1; }

  /// W(s) for s in [0, 1] by linear interpolation.
  double operator()(double s) const;

  WienerPath operator+(const WienerPath& other) const;
  WienerPath operator*(double factor) const;

 private:
  WienerGrid grid_;
  Eigen::VectorXd values_;
};

/// Random-walk construction on `m` equal steps.
WienerPath simulate_wiener(Eigen::Index m, std::uint64_t seed);
WienerPath simulate_wiener(const WienerGrid& grid, std::uint64_t seed);

/// A linear functional of the path, l(W) = weights . W(s_j).
struct PathFunctional {
  Eigen::VectorXd weights;
  double operator()(const WienerPath& path) const { return weights.dot(path.values()); }
};

/// Weights of int_0^upper s^(-c-1) (log s)^log_power W(s) ds on the
/// interpolated path, for 0 <= c < 1/2 and log_power in {0, 1}.  Each panel
/// is integrated in u = s^(1/q), q = 2/(1 - 2c), which makes the transformed
/// kernel bounded at the origin.
Eigen::VectorXd singular_kernel_weights(const Eigen::ArrayXd& nodes, double c, int log_power,
                                        double upper = 1.0);

/// Evaluates Gamma(x; W) for many x on one path after an O(m) setup.
///
///   Gamma(x; W) = (g/g1) x^(-1/g1) { x^(1/g) W(x^(-1/g)) - W(1) }
///               + (g/(g1+g2)) x^(-1/g1) int_0^1 s^(-g/g2-1) { x^(1/g) W(x^(-1/g) s) - W(s) } ds
///
/// The path covers [0, 1], so x must be at least 1.
class GammaProcess {
 public:
  GammaProcess(const WienerPath& path, double gamma1, double gamma2);

  double operator()(double x) const;

  /// int_0^y s^(-c-1) W(s) ds, c = g/g2, y in [0, 1].
  double kernel_integral(double y) const;

 private:
  const WienerPath* path_;
  double gamma1_, gamma2_, gamma_, c_, q_;
  Eigen::ArrayXd cumulative_;  // kernel integral up to each node
};

double gamma_process(double x, const WienerPath& path, double gamma1, double gamma2);

/// -g W(1) + (g/(g1+g2)) int_0^1 (g2 - g1 - g log s) s^(-g/g2-1) W(s) ds.
PathFunctional limiting_rv_functional(const WienerGrid& grid, double gamma1, double gamma2);
double limiting_rv(const WienerPath& path, double gamma1, double gamma2);

/// Delta1 = int s^(rho-2) W ds, Delta2 = int s^(rho-2) W log s ds, Delta3 = W(1).
std::array<PathFunctional, 3> delta_functionals(const WienerGrid& grid, double rho);

/// Closed-form second moments for 1/2 < rho:
/// (E[D1^2], E[D2^2], E[D3^2], E[D1 D2], E[D1 D3], E[D2 D3]).
std::array<double, 6> delta_moments(double rho);

/// E[(a D1 + b D2 - D3)^2] assembled from delta_moments.
double combined_delta_second_moment(double a, double b, double rho);

/// Exact covariance matrix of the functionals under the discretised path
/// (independent Gaussian increments on the grid).  No sampling involved.
Eigen::MatrixXd discretized_covariance(const Eigen::ArrayXd& nodes,
                                       std::span<const PathFunctional> functionals);

struct EnsembleMoments {
  Eigen::Index n_paths = 0;
  Eigen::VectorXd mean;
  Eigen::MatrixXd second_moment;  // E[l_a l_b], raw
  Eigen::MatrixXd covariance;     // centred, divisor n - 1
  Eigen::VectorXd mean_std_error;
  /// Standard error of the raw second moments, entry-wise.
  Eigen::MatrixXd second_moment_std_error;
};

/// Simulates `n_paths` independent paths (path i seeded from (seed, i)) and
/// accumulates the moments of the functionals.  Per-path values are reduced
/// in path order with compensated sums, so `threads` never changes the
/// result.  threads <= 0 uses the hardware concurrency.
EnsembleMoments mc_moments(const WienerGrid& grid, std::span<const PathFunctional> functionals,
                           Eigen::Index n_paths, std::uint64_t seed, int threads = 1);

struct VarianceCheck {
  double gamma1 = 0.0;
  double gamma2 = 0.0;
  Eigen::Index n_paths = 0;
  Eigen::Index m = 0;
  double mean = 0.0;
  double variance = 0.0;
  double std_error = 0.0;           // of the mean
  double variance_std_error = 0.0;  // of the variance
  double sigma2_closed_form = 0.0;
};

/// Monte Carlo moments of limiting_rv on a graded grid of m steps.
VarianceCheck mc_variance(double gamma1, double gamma2, Eigen::Index n_paths, Eigen::Index m,
                          std::uint64_t seed, int threads = 1,
                          double grading = kDefaultGrading);

}  // namespace trunctail

#endif  // TRUNCTAIL_LIMIT_PROCESS_HPP
