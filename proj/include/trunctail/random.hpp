// Copyright 2026 The trunctail Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef TRUNCTAIL_RANDOM_HPP
#define TRUNCTAIL_RANDOM_HPP

#include <cstdint>
#include <initializer_list>
#include <random>

#include <Eigen/Core>

namespace trunctail {

using Engine = std::mt19937_64;

/// Stream tags used when deriving per-purpose seeds.
enum class StreamTag : std::uint64_t {
  kSample = 0x53414d50,      // "SAMP"
  kTruncated = 0x5452554e,   // "TRUN"
  kTruncator = 0x54524352,   // "TRCR"
  kWiener = 0x5749454e,      // "WIEN"
  kReplicate = 0x5245504c,   // "REPL"
  kCell = 0x43454c4c,        // "CELL"
};

/// SplitMix64 finalizer; a bijection on 64-bit words.
std::uint64_t mix64(std::uint64_t z) noexcept;

/// Counter-based seed derivation: hashes the master seed together with an
/// ordered list of keys.  The result depends only on its arguments, so any
/// work item can reconstruct its stream without touching a shared generator.
std::uint64_t derive_seed(std::uint64_t master,
                          std::initializer_list<std::uint64_t> keys) noexcept;

inline std::uint64_t derive_seed(std::uint64_t master, StreamTag tag,
                                 std::uint64_t index = 0) noexcept {
  return derive_seed(master, {static_cast<std::uint64_t>(tag), index});
}

/// Uniform draw on the open interval (0, 1) with 53 random bits.
inline double uniform_open01(Engine& engine) noexcept {
  return (static_cast<double>(engine() >> 11) + 0.5) * 0x1.0p-53;
}

/// Marsaglia polar method.  Written out instead of std::normal_distribution
/// so streams are identical across standard library implementations.
class NormalSampler {
 public:
  double operator()(Engine& engine) noexcept;

 private:
  double cached_ = 0.0;
  bool has_cached_ = false;
};

/// Fills `out` with independent N(0, 1) draws.
void fill_standard_normal(Engine& engine, Eigen::Ref<Eigen::ArrayXd> out);

}  // namespace trunctail

#endif  // TRUNCTAIL_RANDOM_HPP
