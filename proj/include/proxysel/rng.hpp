/*
 * proxysel - proxy task selection and early performance prediction
 * for large model evaluation.
 *
 * This code is released under the Apache License, Version 2.0.
 * http://www.apache.org/licenses/LICENSE-2.0
 */
#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace proxysel {

// Counter-based splitmix64 generator. Every draw is a pure function of
// (seed, counter), so any stream can be replayed or forked without shared
// state; derived streams make per-round and per-cell reproducibility cheap.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : seed_(seed) {}

  // Finalizing mix; avalanches all input bits.
  static std::uint64_t mix(std::uint64_t z) noexcept;

  std::uint64_t next_u64() noexcept;              // next raw 64-bit word
  double next_double() noexcept;                  // uniform in [0, 1)
  std::uint64_t next_below(std::uint64_t bound);  // unbiased uniform in [0, bound)
  double next_gaussian() noexcept;                // standard normal (Box-Muller)

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t counter() const noexcept { return counter_; }

 private:
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
};

// Deterministically derives an independent child seed for a named stream.
std::uint64_t derive_stream(std::uint64_t seed, std::uint64_t stream) noexcept;

// Draws k distinct indices from [0, population) and returns them in
// ascending order.
std::vector<std::size_t> sample_without_replacement(std::size_t population, std::size_t k,
                                                    SplitMix64& rng);

}  // namespace proxysel
