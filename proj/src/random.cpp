// Copyright 2026 The trunctail Authors.
// SPDX-License-Identifier: Apache-2.0

#include "trunctail/random.hpp"

#include <cmath>

namespace trunctail {

std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t derive_seed(std::uint64_t master,
                          std::initializer_list<std::uint64_t> keys) noexcept {
  std::uint64_t h = mix64(master);
  for (std::uint64_t key : keys) h = mix64(h ^ mix64(key));
  return h;
}

double NormalSampler::operator()(Engine& engine) noexcept {
  if (has_cached_) {
    has_cached_ = false;
    return cached_;
  }
  double u, v, r;
  do {
    // Signed 54-bit integers scaled to [-1, 1).
    u = static_cast<double>(static_cast<std::int64_t>(engine() >> 10)) * 0x1.0p-53 - 1.0;
    v = static_cast<double>(static_cast<std::int64_t>(engine() >> 10)) * 0x1.0p-53 - 1.0;
    r = u * u + v * v;
  } while (r >= 1.0 || r == 0.0);
  const double f = std::sqrt(-2.0 * std::log(r) / r);
  cached_ = v * f;
  has_cached_ = true;
  return u * f;
}

void fill_standard_normal(Engine& engine, Eigen::Ref<Eigen::ArrayXd> out) {
  NormalSampler normal;
  for (Eigen::Index i = 0; i < out.size(); ++i) out[i] = normal(engine);
}

}  // namespace trunctail
