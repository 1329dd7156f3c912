// Copyright 2026 The trunctail Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef TRUNCTAIL_MONTECARLO_HPP
#define TRUNCTAIL_MONTECARLO_HPP

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "trunctail/product_limit.hpp"
#include "trunctail/tail_index.hpp"

namespace trunctail {

/// One design point of the Burr study; each entry of `sizes` is a sample
/// size N and yields one report row.
struct StudyCell {
  double p = 0.7;  // P(X <= Y)
  double gamma1 = 0.6;
  double delta = 0.25;
  std::vector<std::int64_t> sizes;
};

struct StudyConfig {
  std::vector<StudyCell> cells;
  std::int64_t replicates = 1000;
  Variant variant = Variant::Woodroofe;
  double theta = kDefaultTheta;
  Eigen::Index k_min = kDefaultKMin;
  std::uint64_t master_seed = 0;

  /// Throws InputError describing the first invalid field.
  void validate() const;
};

struct ReportRow {
  double p = 0.0;
  double gamma1 = 0.0;
  double delta = 0.0;
  std::int64_t big_n = 0;
  double mean_n = 0.0;
  double mean_k_star = 0.0;
  double mean_estimate = 0.0;
  double abs_bias = 0.0;  // |mean(gamma1_hat) - gamma1|
  double rmse = 0.0;
  std::int64_t completed = 0;
  std::int64_t dropped = 0;
};

using StudyReport = std::vector<ReportRow>;

/// Replicates with fewer observed pairs than this are dropped.
inline constexpr Eigen::Index kMinObserved = 10;

/// Seed of the cell (p, gamma1, delta, N).  It depends on the cell contents,
/// not on the cell's position in the configuration, so reordering cells
/// leaves every row unchanged.
std::uint64_t cell_seed(std::uint64_t master_seed, double p, double gamma1, double delta,
                        std::int64_t big_n);

/// Runs `replicates` truncated Burr samples of size N.  Replicate r draws
/// from derive_seed(seed, kReplicate, r), chooses k by Reiss-Thomas and
/// records gamma1_hat.  Throws DegenerateData when no replicate completes.
ReportRow run_cell(double p, double gamma1, double delta, std::int64_t big_n,
                   std::int64_t replicates, Variant variant, double theta, std::uint64_t seed,
                   int threads = 1, Eigen::Index k_min = kDefaultKMin);

/// Evaluates every (cell, N) in configuration order.
StudyReport run_study(const StudyConfig& config, int threads = 1);

}  // namespace trunctail

#endif  // TRUNCTAIL_MONTECARLO_HPP
