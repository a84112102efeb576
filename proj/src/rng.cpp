/*
 * proxysel - proxy task selection and early performance prediction
 * for large model evaluation.
 *
 * This code is released under the Apache License, Version 2.0.
 * http://www.apache.org/licenses/LICENSE-2.0
 */
#include "proxysel/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <utility>

#include "proxysel/errors.hpp"

namespace proxysel {

namespace {
constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;
}  // namespace

std::uint64_t SplitMix64::mix(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t SplitMix64::next_u64() noexcept {
  ++counter_;
  return mix(seed_ + counter_ * kGamma);
}

double SplitMix64::next_double() noexcept {
  // The top 53 bits give a uniform dyadic rational in [0, 1).
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

std::uint64_t SplitMix64::next_below(std::uint64_t bound) {
  if (bound == 0) throw ValidationError("next_below: bound must be positive");
  // Rejection sampling removes modulo bias: reject the short remainder zone.
  const std::uint64_t threshold = (0 - bound) % bound;  // (2^64 - bound) mod bound
  for (;;) {
    const std::uint64_t v = next_u64();
    if (v >= threshold) return v % bound;
  }
}

double SplitMix64::next_gaussian() noexcept {
  // Box-Muller; consumes exactly two uniforms per call. u1 < 1 strictly,
  // so log1p(-u1) is always finite.
  const double u1 = next_double();
  const double u2 = next_double();
  const double radius = std::sqrt(-2.0 * std::log1p(-u1));
  return radius * std::cos(2.0 * std::numbers::pi * u2);
}

std::uint64_t derive_stream(std::uint64_t seed, std::uint64_t stream) noexcept {
  return SplitMix64::mix(seed ^ SplitMix64::mix(stream + 1));
}

std::vector<std::size_t> sample_without_replacement(std::size_t population, std::size_t k,
                                                    SplitMix64& rng) {
  if (k > population)
    throw ValidationError("sample_without_replacement: sample size " + std::to_string(k) +
                          " exceeds population " + std::to_string(population));
  // Partial Fisher-Yates over an index vector; the drawn prefix is sorted so
  // callers see subsets in a canonical order.
  std::vector<std::size_t> idx(population);
  for (std::size_t i = 0; i < population; ++i) idx[i] = i;
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.next_below(population - i));
    std::swap(idx[i], idx[j]);
  }
  idx.resize(k);
  std::sort(idx.begin(), idx.end());
  return idx;
}

}  // namespace proxysel
