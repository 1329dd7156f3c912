// Copyright 2026 The trunctail Authors.
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <vector>

#include <doctest.h>

#include "trunctail/limit_process.hpp"
#include "trunctail/numerics.hpp"
#include "trunctail/random.hpp"
#include "trunctail/tail_index.hpp"

using namespace trunctail;
using doctest::Approx;

namespace {

WienerPath path_from(const WienerGrid& grid, double (*f)(double)) {
  Eigen::VectorXd v(grid->size());
  for (Eigen::Index j = 0; j < v.size(); ++j) v[j] = f((*grid)[j]);
  return {grid, v};
}

double identity(double s) { return s; }
double root(double s) { return std::sqrt(s); }

double gamma_of(double g1, double g2) { return g1 * g2 / (g1 + g2); }

// Relative agreement with a tolerance that also covers Monte Carlo noise.
bool close(double estimate, double truth, double rel, double std_error) {
  return std::abs(estimate - truth) <= std::max(rel * std::abs(truth), 4.0 * std_error);
}

}  // namespace

TEST_CASE("grids") {
  const auto u = uniform_grid(8);
  CHECK(u->size() == 9);
  CHECK((*u)[0] == 0.0);
  CHECK((*u)[8] == 1.0);
  CHECK((*u)[2] == 0.25);
  const auto g = graded_grid(4, 2.0);
  CHECK((*g)[1] == Approx(1.0 / 16.0).epsilon(1e-15));
  CHECK_THROWS_AS(uniform_grid(1), DomainError);
  CHECK_THROWS_AS(graded_grid(8, 0.5), DomainError);
}

TEST_CASE("simulated paths start at zero and are reproducible") {
  const auto a = simulate_wiener(256, 3);
  const auto b = simulate_wiener(256, 3);
  CHECK(a.values()[0] == 0.0);
  CHECK(a(0.0) == 0.0);
  CHECK(a.values() == b.values());
  CHECK(a.values() != simulate_wiener(256, 4).values());
  CHECK(a(1.0) == a.values()[256]);
  CHECK(a(0.5) == a.values()[128]);
  CHECK(a(0.5 + 1.0 / 1024) == Approx(0.75 * a.values()[128] + 0.25 * a.values()[129]));
  CHECK_THROWS_AS(a(1.5), DomainError);
}

TEST_CASE("endpoint variance of the random walk") {
  const auto grid = uniform_grid(64);
  Eigen::VectorXd last = Eigen::VectorXd::Zero(65);
  last[64] = 1.0;
  const std::array<PathFunctional, 1> f = {PathFunctional{last}};
  const auto mom = mc_moments(grid, f, 100000, 12);
  CHECK(std::abs(mom.covariance(0, 0) - 1.0) < 0.02);
  CHECK(std::abs(mom.mean[0]) < 3.0 * mom.mean_std_error[0]);
}

TEST_CASE("kernel weights integrate a linear path in closed form") {
  const auto grid = graded_grid(512, kDefaultGrading);
  const Eigen::VectorXd s = grid->matrix();
  for (double c : {0.0, 0.2, 0.3, 0.45}) {
    CAPTURE(c);
    // int s^(-c) ds = 1/(1-c), int s^(-c) log s ds = -1/(1-c)^2
    CHECK(singular_kernel_weights(*grid, c, 0).dot(s) == Approx(1.0 / (1.0 - c)).epsilon(1e-10));
    CHECK(singular_kernel_weights(*grid, c, 1).dot(s) ==
          Approx(-1.0 / ((1.0 - c) * (1.0 - c))).epsilon(1e-10));
    // partial range: int_0^0.3 s^(-c) ds
    CHECK(singular_kernel_weights(*grid, c, 0, 0.3).dot(s) ==
          Approx(std::pow(0.3, 1.0 - c) / (1.0 - c)).epsilon(1e-10));
  }
  CHECK_THROWS_AS(singular_kernel_weights(*grid, 0.5, 0), DomainError);
  CHECK_THROWS_AS(singular_kernel_weights(*grid, 0.2, 2), DomainError);
}

TEST_CASE("Gamma process vanishes at x = 1 and on the zero path") {
  const auto grid = graded_grid(1024, kDefaultGrading);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto w = simulate_wiener(grid, seed);
    const GammaProcess g(w, 0.6, 1.4);
    CHECK(g(1.0) == 0.0);
    CHECK(gamma_process(1.0, simulate_wiener(100, seed), 0.8, 7.2) == 0.0);
  }
  const auto zero = WienerPath::zero(grid);
  CHECK(limiting_rv(zero, 0.6, 1.4) == 0.0);
  const GammaProcess gz(zero, 0.6, 1.4);
  for (double x : {1.0, 1.5, 2.0, 10.0, 1e6}) CHECK(gz(x) == 0.0);
}

TEST_CASE("Gamma process and the limit variable are linear in the path") {
  const auto grid = graded_grid(2048, kDefaultGrading);
  const auto a = simulate_wiener(grid, 1);
  const auto b = simulate_wiener(grid, 2);
  const auto sum = a + b * 2.5;
  const GammaProcess ga(a, 0.6, 1.4), gb(b, 0.6, 1.4), gs(sum, 0.6, 1.4);
  for (double x : {1.0, 1.01, 2.0, 3.7, 50.0, 1e4}) {
    CHECK(std::abs(gs(x) - (ga(x) + 2.5 * gb(x))) < 1e-10);
  }
  CHECK(std::abs(limiting_rv(sum, 0.6, 1.4) -
                 (limiting_rv(a, 0.6, 1.4) + 2.5 * limiting_rv(b, 0.6, 1.4))) < 1e-10);
  const auto d = delta_functionals(grid, 0.7);
  for (const auto& f : d) CHECK(std::abs(f(sum) - (f(a) + 2.5 * f(b))) < 1e-10);
}

TEST_CASE("linear path is annihilated by both functionals") {
  // For W(s) = s both braces in the Gamma process vanish identically, and
  // the limit variable reduces to -g + g = 0.
  const auto grid = graded_grid(256, kDefaultGrading);
  const auto w = path_from(grid, identity);
  for (auto [g1, g2] : {std::pair{0.6, 1.4}, std::pair{0.8, 7.2}, std::pair{0.8, 3.2}}) {
    const GammaProcess g(w, g1, g2);
    for (double x : {1.0, 1.3, 4.0, 100.0}) CHECK(std::abs(g(x)) < 1e-10);
    CHECK(std::abs(limiting_rv(w, g1, g2)) < 1e-10);
  }
}

TEST_CASE("Gamma process on the square-root path") {
  // W(s) = sqrt(s): both braces are multiples of x^(1/(2g)) - 1.
  // Interpolating sqrt(s) converges like 1/m, so a fine grid is used.
  const auto grid = graded_grid(16384, kDefaultGrading);
  const auto w = path_from(grid, root);
  const double g1 = 0.6, g2 = 1.4, g = gamma_of(g1, g2), c = g / g2;
  const GammaProcess gp(w, g1, g2);
  for (double x : {1.5, 3.0, 20.0}) {
    const double lift = std::pow(x, 1.0 / (2.0 * g)) - 1.0;
    const double expected = std::pow(x, -1.0 / g1) * lift * (g / g1 + (g / (g1 + g2)) / (0.5 - c));
    CHECK(gp(x) == Approx(expected).epsilon(1e-4));
  }
  const double expected_rv =
      -g + (g / (g1 + g2)) * ((g2 - g1) / (0.5 - c) + g / ((0.5 - c) * (0.5 - c)));
  CHECK(limiting_rv(w, g1, g2) == Approx(expected_rv).epsilon(3e-4));
}

TEST_CASE("limit variable is the log-weighted integral of the Gamma process") {
  // int_1^inf x^(-1) Gamma(x; W) dx = limiting_rv(W) for every path; with
  // x = y^(-g) the left side is g int_0^1 Gamma(y^(-g); W) / y dy.
  const auto grid = graded_grid(64, 3.0);
  for (std::uint64_t seed : {5u, 6u}) {
    const auto w = simulate_wiener(grid, seed);
    const double g1 = 0.6, g2 = 1.4, g = gamma_of(g1, g2);
    const GammaProcess gp(w, g1, g2);
    std::vector<double> breaks(grid->data(), grid->data() + grid->size());
    const auto res = integrate_adaptive(
        [&](double y) { return y > 0.0 ? g * gp(std::pow(y, -g)) / y : 0.0; },
        std::span<const double>(breaks), 1e-11, 1e-13, 20000);
    CHECK(res.value == Approx(limiting_rv(w, g1, g2)).epsilon(1e-7));
  }
}

TEST_CASE("Gamma process is centred") {
  const auto grid = graded_grid(256, kDefaultGrading);
  const int n = 20000;
  CompensatedSum<double> sum, sq;
  for (int i = 0; i < n; ++i) {
    const auto w = simulate_wiener(grid, derive_seed(77, StreamTag::kReplicate, i));
    const double v = GammaProcess(w, 0.6, 1.4)(2.0);
    sum.add(v);
    sq.add(v * v);
  }
  const double mean = sum.value() / n;
  const double sd = std::sqrt(sq.value() / n - mean * mean);
  CHECK(std::abs(mean) < 3.0 * sd / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("domain checks") {
  const auto w = simulate_wiener(64, 1);
  CHECK_THROWS_AS(GammaProcess(w, 1.4, 0.6), DomainError);
  CHECK_THROWS_AS(GammaProcess(w, 0.6, 0.6), DomainError);
  CHECK_THROWS_AS(GammaProcess(w, 0.6, 1.4)(0.5), DomainError);
  CHECK_THROWS_AS(limiting_rv(w, 0.8, 0.5), DomainError);
  CHECK_THROWS_AS(delta_moments(0.5), DomainError);
  CHECK_THROWS_AS(delta_functionals(w.grid(), 0.4), DomainError);
}

TEST_CASE("covariance closed forms") {
  const auto e = delta_moments(0.7);
  CHECK(e[0] == Approx(7.142857).epsilon(1e-6));
  CHECK(e[1] == Approx(114.79592).epsilon(1e-6));
  CHECK(e[2] == 1.0);
  CHECK(e[3] == Approx(-22.959184).epsilon(1e-6));
  CHECK(e[4] == Approx(1.4285714).epsilon(1e-6));
  CHECK(e[5] == Approx(-2.0408163).epsilon(1e-6));
  const double combined = combined_delta_second_moment(0.4, -0.21, 0.7);
  CHECK(combined == Approx(9.0625).epsilon(1e-12));
  CHECK(std::abs(0.1764 * combined - asymptotic_variance(0.6, 1.4)) < 1e-9);
  // the same assembly for other pairs: a = (g2-g1)/(g1+g2), b = -g/(g1+g2),
  // rho = 1 - g/g2
  for (auto [g1, g2] : {std::pair{0.8, 7.2}, std::pair{0.8, 3.2}, std::pair{0.3, 0.5}}) {
    const double g = gamma_of(g1, g2);
    const double m2 = combined_delta_second_moment((g2 - g1) / (g1 + g2), -g / (g1 + g2), 1.0 - g / g2);
    CHECK(g * g * m2 == Approx(asymptotic_variance(g1, g2)).epsilon(1e-12));
  }
}

TEST_CASE("discretised covariances reproduce the closed forms") {
  const auto grid = graded_grid(16384, kDefaultGrading);
  for (double rho : {0.6, 0.7, 0.9}) {
    CAPTURE(rho);
    const auto f = delta_functionals(grid, rho);
    const Eigen::MatrixXd cov = discretized_covariance(*grid, f);
    const auto e = delta_moments(rho);
    CHECK(cov(0, 0) == Approx(e[0]).epsilon(1e-3));
    CHECK(cov(1, 1) == Approx(e[1]).epsilon(1e-3));
    CHECK(cov(2, 2) == Approx(e[2]).epsilon(1e-12));
    CHECK(cov(0, 1) == Approx(e[3]).epsilon(1e-3));
    CHECK(cov(0, 2) == Approx(e[4]).epsilon(1e-6));
    CHECK(cov(1, 2) == Approx(e[5]).epsilon(1e-6));
  }
  for (auto [g1, g2] : {std::pair{0.6, 1.4}, std::pair{0.8, 7.2}, std::pair{0.8, 3.2}}) {
    const std::array<PathFunctional, 1> f = {limiting_rv_functional(grid, g1, g2)};
    CHECK(discretized_covariance(*grid, f)(0, 0) == Approx(asymptotic_variance(g1, g2)).epsilon(1e-3));
  }
}

TEST_CASE("Monte Carlo covariances of the Delta functionals" * doctest::test_suite("slow")) {
  const auto grid = graded_grid(4096, kDefaultGrading);
  for (double rho : {0.6, 0.9}) {
    CAPTURE(rho);
    const auto f = delta_functionals(grid, rho);
    const auto mom = mc_moments(grid, f, 100000, 2024);
    const auto e = delta_moments(rho);
    const int idx[6][2] = {{0, 0}, {1, 1}, {2, 2}, {0, 1}, {0, 2}, {1, 2}};
    for (int q = 0; q < 6; ++q) {
      const int a = idx[q][0], b = idx[q][1];
      CAPTURE(q);
      CHECK(close(mom.second_moment(a, b), e[q], 0.03, mom.second_moment_std_error(a, b)));
    }
  }
}

TEST_CASE("Monte Carlo variance of the limit variable" * doctest::test_suite("slow")) {
  const auto check = mc_variance(0.8, 3.2, 100000, 4096, 31);
  CHECK(std::abs(check.variance / check.sigma2_closed_form - 1.0) < 0.05);
  CHECK(std::abs(check.mean) < 3.0 * check.std_error);
  CHECK(check.sigma2_closed_form == Approx(asymptotic_variance(0.8, 3.2)).epsilon(1e-14));
}

TEST_CASE("ensemble results do not depend on the worker count") {
  const auto one = mc_variance(0.6, 1.4, 3000, 512, 8, 1);
  const auto three = mc_variance(0.6, 1.4, 3000, 512, 8, 3);
  CHECK(one.variance == three.variance);
  CHECK(one.mean == three.mean);
  CHECK(one.variance_std_error == three.variance_std_error);
}
