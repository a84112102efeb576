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
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "proxysel/correlation.hpp"

namespace proxysel {

// Controls the subset sampling evaluation: `rounds` independent draws of
// `sample_size` models each, compared on top-`top_t` ranking overlap.
struct ConsistencyConfig {
  std::size_t sample_size = 0;  // models per round; at least 3
  std::size_t rounds = 0;       // sampling rounds; at least 2
  std::size_t top_t = 0;        // overlap window; at most n_tasks - 1
  std::vector<Metric> metrics;  // canonicalized to declaration order, no duplicates
  std::uint64_t seed = 0;
  bool resample_per_metric = false;  // false: all metrics score the same subsets
  std::size_t max_retries = 10;      // extra draws per round when a subset is degenerate
  friend bool operator==(const ConsistencyConfig&, const ConsistencyConfig&) = default;
};

struct MetricScore {
  Metric metric = Metric::pearson;
  double baseline_consistency = 0.0;  // s: mean overlap with the full-model ranking
  double sampling_consistency = 0.0;  // r: mean pairwise overlap between rounds
  friend bool operator==(const MetricScore&, const MetricScore&) = default;
};

// Everything observed for one metric across the sampling rounds.
struct MetricConsistency {
  MetricScore score;
  std::vector<std::vector<std::string>> samples;  // model names drawn per round
  std::vector<double> baseline_overlaps;          // one per round
  std::vector<double> pairwise_overlaps;          // one per unordered round pair
  friend bool operator==(const MetricConsistency&, const MetricConsistency&) = default;
};

struct SelectionOutcome {
  std::optional<Metric> selected;      // metric dominating on (s, r), if any
  std::vector<Metric> fallback_order;  // all metrics by s + r, best first
  friend bool operator==(const SelectionOutcome&, const SelectionOutcome&) = default;
};

struct ConsistencyReport {
  ConsistencyConfig config;
  std::string baseline;
  std::vector<MetricConsistency> metrics;  // in canonical metric order
  SelectionOutcome outcome;
  friend bool operator==(const ConsistencyReport&, const ConsistencyReport&) = default;
};

// Scores each metric's ranking stability under model subsampling: baseline
// consistency s (agreement with the full-model ranking) and sampling
// consistency r (agreement between rounds). Deterministic for a given
// config regardless of `threads` (0 means hardware concurrency).
ConsistencyReport sampling_consistency_eval(const ScoreMatrix& scores, const std::string& baseline,
                                            const ConsistencyConfig& config,
                                            std::size_t threads = 1);

// Picks the metric that dominates: s_i >= s_j for all j and r_i > r_j for
// every other j. Returns the fallback ordering either way.
SelectionOutcome select_metric(std::span<const MetricScore> scores);

}  // namespace proxysel
