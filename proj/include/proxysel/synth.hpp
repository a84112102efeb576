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
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "proxysel/score_matrix.hpp"

namespace proxysel {

// Latent-to-score link. linear maps ability u to 50 + 10u;
// logistic_emergence maps u to 100 / (1 + exp(-4 (u - threshold))), which
// stays near zero until the ability crosses the threshold.
enum class Link { linear, logistic_emergence };

std::string to_string(Link l);
Link link_from_string(std::string_view s);

// Configuration for the synthetic benchmark generator. Loadings are given
// row-major (n_tasks x n_factors); leave empty to draw them from the seed.
struct SynthConfig {
  std::size_t n_models = 0;
  std::size_t n_tasks = 0;
  std::size_t n_factors = 1;
  std::vector<double> loadings;  // n_tasks * n_factors values, or empty
  double noise_sd = 0.0;
  Link link = Link::linear;
  double emergence_threshold = 0.0;
  std::uint64_t seed = 0;
  friend bool operator==(const SynthConfig&, const SynthConfig&) = default;
};

// Everything needed to audit a generated matrix against ground truth.
struct SynthTruth {
  std::size_t n_factors = 1;
  std::vector<double> loadings;   // n_tasks x n_factors, row-major
  std::vector<double> abilities;  // n_models x n_factors, row-major
  Link link = Link::linear;
  double emergence_threshold = 0.0;
  double noise_sd = 0.0;
  std::uint64_t seed = 0;
  std::size_t clipped_cells = 0;  // scores clamped into [0, 100]
  friend bool operator==(const SynthTruth&, const SynthTruth&) = default;
};

struct SynthResult {
  ScoreMatrix matrix;
  SynthTruth truth;
};

double apply_link(Link link, double u, double threshold = 0.0);

// Cosine similarity between two loading vectors; errors on a zero vector.
double loading_cosine(std::span<const double> a, std::span<const double> b);

// Draws abilities i.i.d. standard normal per (model, factor), then scores
// every cell through the link plus Gaussian noise, clipping to [0, 100].
// Each ability row, loading row, and noise cell has its own derived stream,
// so adding models leaves existing cells unchanged.
SynthResult generate(const SynthConfig& config);

// Same scoring path with caller-supplied abilities (n_models x n_factors).
SynthResult generate_with_abilities(const SynthConfig& config, std::span<const double> abilities);

}  // namespace proxysel
