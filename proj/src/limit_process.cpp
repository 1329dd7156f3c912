// Copyright 2026 The trunctail Authors.
// SPDX-License-Identifier: Apache-2.0

#include "trunctail/limit_process.hpp"

#include <algorithm>
#include <cmath>

#include "trunctail/error.hpp"
#include "trunctail/numerics.hpp"
#include "trunctail/parallel.hpp"
#include "trunctail/random.hpp"

namespace trunctail {

namespace {

constexpr int kPanelOrder = 8;

const GaussLegendreRule& panel_rule() {
  static const GaussLegendreRule rule = gauss_legendre_unit(kPanelOrder);
  return rule;
}

void check_grid(const Eigen::ArrayXd& nodes) {
  const Eigen::Index m = nodes.size() - 1;
  if (m < 1 || nodes[0] != 0.0 || nodes[m] != 1.0)
    throw DomainError("Wiener grid must run from 0 to 1");
}

double substitution_power(double c) {
  if (!(c >= 0.0 && c < 0.5)) throw DomainError("kernel exponent c must lie in [0, 1/2)");
  return 2.0 / (1.0 - 2.0 * c);
}

// Visits the quadrature points of int_lo^hi s^(-c-1) (log s)^L (.) ds where
// [lo, hi] lies inside the grid panel [left, right].  The callback receives
// the weighted kernel value and the interpolation fraction of the point
// within the full panel.
template <typename Visit>
void visit_panel(double left, double right, double lo, double hi, double c, double q,
                 int log_power, Visit&& visit) {
  if (!(hi > lo)) return;
  const auto& rule = panel_rule();
  const double inv_q = 1.0 / q;
  const double ua = std::pow(lo, inv_q);
  const double ub = std::pow(hi, inv_q);
  const double du = ub - ua;
  const double width = right - left;
  for (int g = 0; g < kPanelOrder; ++g) {
    const double u = ua + du * rule.nodes[g];
    const double log_u = std::log(u);
    const double s = std::exp(q * log_u);
    // ds = q u^(q-1) du and s^(-c-1) = u^(-q(c+1)), so the product is q u^(-qc-1).
    double kernel = q * std::exp((-q * c - 1.0) * log_u) * rule.weights[g] * du;
    if (log_power == 1) kernel *= q * log_u;
    const double frac = std::clamp((s - left) / width, 0.0, 1.0);
    visit(kernel, frac);
  }
}

}  // namespace

//---------------------------------------------------------------------------//
// Grids and paths
//---------------------------------------------------------------------------//

WienerGrid uniform_grid(Eigen::Index m) { return graded_grid(m, 1.0); }

WienerGrid graded_grid(Eigen::Index m, double grading) {
  if (m < 2) throw DomainError("Wiener grid needs m >= 2 steps");
  if (!(grading >= 1.0)) throw DomainError("grid grading must be >= 1");
  auto nodes = std::make_shared<Eigen::ArrayXd>(m + 1);
  for (Eigen::Index j = 0; j <= m; ++j) {
    const double t = static_cast<double>(j) / static_cast<double>(m);
    (*nodes)[j] = grading == 1.0 ? t : std::pow(t, grading);
  }
  (*nodes)[m] = 1.0;
  return nodes;
}

WienerPath::WienerPath(WienerGrid grid, Eigen::VectorXd values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (!grid_) throw DomainError("WienerPath: null grid");
  check_grid(*grid_);
  if (values_.size() != grid_->size()) throw DomainError("WienerPath: values do not match grid");
}

WienerPath WienerPath::zero(WienerGrid grid) {
  const auto size = grid->size();
  return {std::move(grid), Eigen::VectorXd::Zero(size)};
}

double WienerPath::operator()(double s) const {
  const auto& nodes = *grid_;
  const Eigen::Index m = this->m();
  if (!(s >= 0.0 && s <= 1.0)) throw DomainError("WienerPath: s outside [0, 1]");
  if (s == 1.0) return values_[m];
  const auto j = (std::upper_bound(nodes.data(), nodes.data() + m + 1, s) - nodes.data()) - 1;
  const double frac = (s - nodes[j]) / (nodes[j + 1] - nodes[j]);
  return values_[j] + frac * (values_[j + 1] - values_[j]);
}

WienerPath WienerPath::operator+(const WienerPath& other) const {
  if (grid_ != other.grid_ && !grid_->isApprox(*other.grid_, 0.0))
    throw DomainError("WienerPath: grids differ");
  return {grid_, values_ + other.values_};
}

WienerPath WienerPath::operator*(double factor) const { return {grid_, values_ * factor}; }

namespace {

// Square roots of the grid step lengths.
Eigen::ArrayXd step_scales(const Eigen::ArrayXd& nodes) {
  const Eigen::Index m = nodes.size() - 1;
  return (nodes.tail(m) - nodes.head(m)).sqrt();
}

void fill_path(std::uint64_t seed, const Eigen::ArrayXd& scales, Eigen::ArrayXd& normals,
               Eigen::VectorXd& values) {
  Engine engine(derive_seed(seed, StreamTag::kWiener));
  fill_standard_normal(engine, normals);
  values[0] = 0.0;
  for (Eigen::Index j = 0; j < scales.size(); ++j) values[j + 1] = values[j] + scales[j] * normals[j];
}

}  // namespace

WienerPath simulate_wiener(const WienerGrid& grid, std::uint64_t seed) {
  check_grid(*grid);
  const Eigen::ArrayXd scales = step_scales(*grid);
  Eigen::ArrayXd normals(scales.size());
  Eigen::VectorXd values(grid->size());
  fill_path(seed, scales, normals, values);
  return {grid, std::move(values)};
}

WienerPath simulate_wiener(Eigen::Index m, std::uint64_t seed) {
  return simulate_wiener(uniform_grid(m), seed);
}

//---------------------------------------------------------------------------//
// Singular kernel functionals
//---------------------------------------------------------------------------//

Eigen::VectorXd singular_kernel_weights(const Eigen::ArrayXd& nodes, double c, int log_power,
                                        double upper) {
  check_grid(nodes);
  if (log_power != 0 && log_power != 1) throw DomainError("log_power must be 0 or 1");
  if (!(upper >= 0.0 && upper <= 1.0)) throw DomainError("upper limit must lie in [0, 1]");
  const double q = substitution_power(c);
  const Eigen::Index m = nodes.size() - 1;
  Eigen::VectorXd w = Eigen::VectorXd::Zero(m + 1);
  for (Eigen::Index j = 0; j < m && nodes[j] < upper; ++j) {
    const double hi = std::min(nodes[j + 1], upper);
    visit_panel(nodes[j], nodes[j + 1], nodes[j], hi, c, q, log_power,
                [&](double kernel, double frac) {
                  // W(0) = 0, so the node at the origin never contributes.
                  if (j > 0) w[j] += kernel * (1.0 - frac);
                  w[j + 1] += kernel * frac;
                });
  }
  return w;
}

GammaProcess::GammaProcess(const WienerPath& path, double gamma1, double gamma2)
    : path_(&path), gamma1_(gamma1), gamma2_(gamma2) {
  if (!(gamma1 > 0.0 && gamma2 > 0.0)) throw DomainError("tail indices must be positive");
  if (!(gamma1 < gamma2)) throw DomainError("Gamma process requires gamma1 < gamma2");
  gamma_ = gamma1 * gamma2 / (gamma1 + gamma2);
  c_ = gamma_ / gamma2;
  q_ = substitution_power(c_);
  const auto& nodes = path.nodes();
  const auto& values = path.values();
  const Eigen::Index m = path.m();
  cumulative_.resize(m + 1);
  cumulative_[0] = 0.0;
  for (Eigen::Index j = 0; j < m; ++j) {
    double panel = 0.0;
    visit_panel(nodes[j], nodes[j + 1], nodes[j], nodes[j + 1], c_, q_, 0,
                [&](double kernel, double frac) {
                  panel += kernel * (values[j] + frac * (values[j + 1] - values[j]));
                });
    cumulative_[j + 1] = cumulative_[j] + panel;
  }
}

double GammaProcess::kernel_integral(double y) const {
  const auto& nodes = path_->nodes();
  const auto& values = path_->values();
  const Eigen::Index m = path_->m();
  if (!(y >= 0.0 && y <= 1.0)) throw DomainError("kernel_integral: y outside [0, 1]");
  if (y == 1.0) return cumulative_[m];
  const auto j = (std::upper_bound(nodes.data(), nodes.data() + m + 1, y) - nodes.data()) - 1;
  double partial = 0.0;
  visit_panel(nodes[j], nodes[j + 1], nodes[j], y, c_, q_, 0, [&](double kernel, double frac) {
    partial += kernel * (values[j] + frac * (values[j + 1] - values[j]));
  });
  return cumulative_[j] + partial;
}

double GammaProcess::operator()(double x) const {
  if (!std::isfinite(x) || !(x > 0.0)) throw DomainError("Gamma process: x must be positive");
  if (x < 1.0) throw DomainError("Gamma process: x < 1 needs the path beyond s = 1");
  const double y = std::pow(x, -1.0 / gamma_);  // x^(-1/g) in (0, 1]
  const double scale = std::pow(x, -1.0 / gamma1_);
  const auto& path = *path_;
  const double w1 = path(1.0);
  const double first = (gamma_ / gamma1_) * scale * (path(y) / y - w1);
  const double second = (gamma_ / (gamma1_ + gamma2_)) * scale *
                        (std::pow(y, c_ - 1.0) * kernel_integral(y) - kernel_integral(1.0));
  return first + second;
}

double gamma_process(double x, const WienerPath& path, double gamma1, double gamma2) {
  return GammaProcess(path, gamma1, gamma2)(x);
}

PathFunctional limiting_rv_functional(const WienerGrid& grid, double gamma1, double gamma2) {
  if (!(gamma1 > 0.0 && gamma2 > 0.0)) throw DomainError("tail indices must be positive");
  if (!(gamma1 < gamma2)) throw DomainError("limiting_rv requires gamma1 < gamma2");
  const double g = gamma1 * gamma2 / (gamma1 + gamma2);
  const double c = g / gamma2;
  const auto& nodes = *grid;
  const Eigen::VectorXd plain = singular_kernel_weights(nodes, c, 0);
  const Eigen::VectorXd logged = singular_kernel_weights(nodes, c, 1);
  PathFunctional f{(g / (gamma1 + gamma2)) * ((gamma2 - gamma1) * plain - g * logged)};
  f.weights[f.weights.size() - 1] -= g;
  return f;
}

double limiting_rv(const WienerPath& path, double gamma1, double gamma2) {
  return limiting_rv_functional(path.grid(), gamma1, gamma2)(path);
}

std::array<PathFunctional, 3> delta_functionals(const WienerGrid& grid, double rho) {
  if (!(rho > 0.5 && rho <= 1.0)) throw DomainError("rho must lie in (1/2, 1]");
  const double c = 1.0 - rho;
  Eigen::VectorXd last = Eigen::VectorXd::Zero(grid->size());
  last[last.size() - 1] = 1.0;
  return {PathFunctional{singular_kernel_weights(*grid, c, 0)},
          PathFunctional{singular_kernel_weights(*grid, c, 1)}, PathFunctional{last}};
}

std::array<double, 6> delta_moments(double rho) {
  if (!(rho > 0.5)) throw DomainError("delta_moments: rho must exceed 1/2");
  const double r2 = rho * rho;
  const double d = 2.0 * rho - 1.0;
  return {2.0 / (rho * d),
          2.0 * (4.0 * rho - 1.0) / (r2 * d * d * d),
          1.0,
          (1.0 - 4.0 * rho) / (r2 * d * d),
          1.0 / rho,
          -1.0 / r2};
}

double combined_delta_second_moment(double a, double b, double rho) {
  const auto e = delta_moments(rho);
  return a * a * e[0] + b * b * e[1] + e[2] + 2.0 * a * b * e[3] - 2.0 * a * e[4] -
         2.0 * b * e[5];
}

Eigen::MatrixXd discretized_covariance(const Eigen::ArrayXd& nodes,
                                       std::span<const PathFunctional> functionals) {
  check_grid(nodes);
  const Eigen::Index m = nodes.size() - 1;
  const auto k = static_cast<Eigen::Index>(functionals.size());
  // l(W) = sum_i dW_i T_i with T_i the tail sum of the node weights from i on.
  Eigen::MatrixXd tails(m, k);
  for (Eigen::Index a = 0; a < k; ++a) {
    const auto& w = functionals[static_cast<std::size_t>(a)].weights;
    if (w.size() != m + 1) throw DomainError("functional does not match grid");
    double acc = 0.0;
    for (Eigen::Index i = m; i >= 1; --i) {
      acc += w[i];
      tails(i - 1, a) = acc;
    }
  }
  const Eigen::VectorXd dt = (nodes.tail(m) - nodes.head(m)).matrix();
  return tails.transpose() * dt.asDiagonal() * tails;
}

//---------------------------------------------------------------------------//
// Monte Carlo ensembles
//---------------------------------------------------------------------------//

EnsembleMoments mc_moments(const WienerGrid& grid, std::span<const PathFunctional> functionals,
                           Eigen::Index n_paths, std::uint64_t seed, int threads) {
  check_grid(*grid);
  if (n_paths < 2) throw DomainError("mc_moments: need at least two paths");
  const auto k = static_cast<Eigen::Index>(functionals.size());
  if (k == 0) throw DomainError("mc_moments: no functionals");
  const Eigen::Index m = grid->size() - 1;
  Eigen::MatrixXd weights(k, m + 1);
  for (Eigen::Index a = 0; a < k; ++a) {
    const auto& w = functionals[static_cast<std::size_t>(a)].weights;
    if (w.size() != m + 1) throw DomainError("functional does not match grid");
    weights.row(a) = w.transpose();
  }
  const Eigen::ArrayXd scales = step_scales(*grid);

  // Column i holds the functionals of path i.
  Eigen::MatrixXd per_path(k, n_paths);
  const int workers = resolve_threads(threads);
  const std::int64_t chunks = std::min<std::int64_t>(workers, n_paths);
  const std::int64_t chunk = (n_paths + chunks - 1) / chunks;
  parallel_for(chunks, workers, [&](std::int64_t c) {
    Eigen::ArrayXd normals(m);
    Eigen::VectorXd values(m + 1);
    const std::int64_t end = std::min<std::int64_t>(n_paths, (c + 1) * chunk);
    for (std::int64_t i = c * chunk; i < end; ++i) {
      fill_path(derive_seed(seed, StreamTag::kReplicate, static_cast<std::uint64_t>(i)), scales,
                normals, values);
      per_path.col(i).noalias() = weights * values;
    }
  });

  EnsembleMoments out;
  out.n_paths = n_paths;
  const double n = static_cast<double>(n_paths);
  out.mean.resize(k);
  for (Eigen::Index a = 0; a < k; ++a) out.mean[a] = compensated_sum(per_path.row(a)) / n;
  out.second_moment.resize(k, k);
  out.covariance.resize(k, k);
  out.second_moment_std_error.resize(k, k);
  for (Eigen::Index a = 0; a < k; ++a) {
    for (Eigen::Index b = a; b < k; ++b) {
      CompensatedSum<double> raw, raw_sq, centred;
      for (Eigen::Index i = 0; i < n_paths; ++i) {
        const double prod = per_path(a, i) * per_path(b, i);
        raw.add(prod);
        raw_sq.add(prod * prod);
        centred.add((per_path(a, i) - out.mean[a]) * (per_path(b, i) - out.mean[b]));
      }
      const double m2 = raw.value() / n;
      const double var_prod = std::max(0.0, raw_sq.value() / n - m2 * m2);
      out.second_moment(a, b) = out.second_moment(b, a) = m2;
      out.covariance(a, b) = out.covariance(b, a) = centred.value() / (n - 1.0);
      out.second_moment_std_error(a, b) = out.second_moment_std_error(b, a) =
          std::sqrt(var_prod / n);
    }
  }
  out.mean_std_error = (out.covariance.diagonal().array() / n).sqrt().matrix();
  return out;
}

VarianceCheck mc_variance(double gamma1, double gamma2, Eigen::Index n_paths, Eigen::Index m,
                          std::uint64_t seed, int threads, double grading) {
  const auto grid = graded_grid(m, grading);
  const std::array<PathFunctional, 1> f = {limiting_rv_functional(grid, gamma1, gamma2)};
  const auto moments = mc_moments(grid, f, n_paths, seed, threads);
  VarianceCheck out;
  out.gamma1 = gamma1;
  out.gamma2 = gamma2;
  out.n_paths = n_paths;
  out.m = m;
  out.mean = moments.mean[0];
  out.variance = moments.covariance(0, 0);
  out.std_error = moments.mean_std_error[0];
  out.variance_std_error = moments.second_moment_std_error(0, 0);
  out.sigma2_closed_form = [&] {
    const double r = gamma1 / gamma2;
    const double g = gamma1 * gamma2 / (gamma1 + gamma2);
    return g * g * (1.0 + r) * (1.0 + r * r) / std::pow(1.0 - r, 3);
  }();
  return out;
}

}  // namespace trunctail
