// Copyright 2026 The trunctail Authors.
// SPDX-License-Identifier: Apache-2.0

#include "trunctail/montecarlo.hpp"

#include <bit>
#include <cmath>
#include <sstream>

#include "trunctail/error.hpp"
#include "trunctail/numerics.hpp"
#include "trunctail/parallel.hpp"
#include "trunctail/random.hpp"
#include "trunctail/truncation_model.hpp"

namespace trunctail {

void StudyConfig::validate() const {
  if (cells.empty()) throw InputError("study has no cells");
  if (replicates < 1) throw InputError("replicates must be >= 1");
  if (!(theta >= 0.0 && theta <= 0.5)) throw InputError("theta must lie in [0, 0.5]");
  if (k_min < 2) throw InputError("k_min must be >= 2");
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const auto& c = cells[i];
    std::ostringstream where;
    where << "cell " << i << ": ";
    if (!(c.p > 0.0 && c.p < 1.0)) throw InputError(where.str() + "p must lie in (0, 1)");
    if (!(c.gamma1 > 0.0 && std::isfinite(c.gamma1)))
      throw InputError(where.str() + "gamma1 must be positive");
    if (!(c.delta > 0.0 && std::isfinite(c.delta)))
      throw InputError(where.str() + "delta must be positive");
    if (c.sizes.empty()) throw InputError(where.str() + "no sample sizes");
    for (auto n : c.sizes)
      if (n < 1) throw InputError(where.str() + "sample sizes must be positive");
  }
}

std::uint64_t cell_seed(std::uint64_t master_seed, double p, double gamma1, double delta,
                        std::int64_t big_n) {
  return derive_seed(master_seed,
                     {static_cast<std::uint64_t>(StreamTag::kCell), std::bit_cast<std::uint64_t>(p),
                      std::bit_cast<std::uint64_t>(gamma1), std::bit_cast<std::uint64_t>(delta),
                      static_cast<std::uint64_t>(big_n)});
}

namespace {

struct Replicate {
  bool completed = false;
  double n = 0.0;
  double k = 0.0;
  double estimate = 0.0;
};

Replicate run_replicate(const TruncationModel& model, std::int64_t big_n, Variant variant,
                        double theta, Eigen::Index k_min, std::uint64_t seed) {
  Replicate out;
  try {
    const auto sample = sample_truncated(model, big_n, seed);
    if (sample.size() < kMinObserved) return out;
    const ProductLimitFit fit(sample, variant);
    const Eigen::Index k_max = default_k_max(sample.size());
    if (k_max <= k_min) return out;
    const Eigen::Index k = select_k_from_path(gamma1_path(fit, k_max), theta, k_min, k_max);
    out.estimate = gamma1_estimate(fit, k);
    out.k = static_cast<double>(k);
    out.n = static_cast<double>(sample.size());
    out.completed = std::isfinite(out.estimate);
  } catch (const DegenerateData&) {
    out.completed = false;
  }
  return out;
}

}  // namespace

ReportRow run_cell(double p, double gamma1, double delta, std::int64_t big_n,
                   std::int64_t replicates, Variant variant, double theta, std::uint64_t seed,
                   int threads, Eigen::Index k_min) {
  if (replicates < 1) throw DomainError("run_cell: replicates must be >= 1");
  const auto model = TruncationModel::burr_with_observed_fraction(p, gamma1, delta);
  std::vector<Replicate> results(static_cast<std::size_t>(replicates));
  parallel_for(replicates, threads, [&](std::int64_t r) {
    results[static_cast<std::size_t>(r)] =
        run_replicate(model, big_n, variant, theta, k_min,
                      derive_seed(seed, StreamTag::kReplicate, static_cast<std::uint64_t>(r)));
  });

  ReportRow row;
  row.p = p;
  row.gamma1 = gamma1;
  row.delta = delta;
  row.big_n = big_n;
  CompensatedSum<double> sum_n, sum_k, sum_est, sum_sq;
  for (const auto& r : results) {
    if (!r.completed) {
      ++row.dropped;
      continue;
    }
    ++row.completed;
    sum_n.add(r.n);
    sum_k.add(r.k);
    sum_est.add(r.estimate);
    sum_sq.add((r.estimate - gamma1) * (r.estimate - gamma1));
  }
  if (row.completed == 0) {
    std::ostringstream os;
    os << "cell (p=" << p << ", gamma1=" << gamma1 << ", N=" << big_n
       << "): every replicate was degenerate";
    throw DegenerateData(os.str());
  }
  const double done = static_cast<double>(row.completed);
  row.mean_n = sum_n.value() / done;
  row.mean_k_star = sum_k.value() / done;
  row.mean_estimate = sum_est.value() / done;
  row.abs_bias = std::abs(row.mean_estimate - gamma1);
  row.rmse = std::sqrt(sum_sq.value() / done);
  return row;
}

StudyReport run_study(const StudyConfig& config, int threads) {
  config.validate();
  StudyReport report;
  for (std::size_t i = 0; i < config.cells.size(); ++i) {
    const auto& c = config.cells[i];
    for (auto big_n : c.sizes) {
      try {
        report.push_back(run_cell(c.p, c.gamma1, c.delta, big_n, config.replicates,
                                  config.variant, config.theta,
                                  cell_seed(config.master_seed, c.p, c.gamma1, c.delta, big_n),
                                  threads, config.k_min));
      } catch (const DegenerateData& e) {
        std::ostringstream os;
        os << "cell " << i << ": " << e.what();
        throw DegenerateData(os.str());
      }
    }
  }
  return report;
}

}  // namespace trunctail
