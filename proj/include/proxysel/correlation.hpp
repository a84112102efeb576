/*
 * proxysel - proxy task selection and early performance prediction
 * for large model evaluation.
 *
 * This code is released under the Apache License, Version 2.0.
 * http://www.apache.org/licenses/LICENSE-2.0
 */
#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "proxysel/normalize.hpp"

namespace proxysel {

enum class Metric { pearson, spearman, kendall };

std::string to_string(Metric m);
Metric metric_from_string(std::string_view s);

// Average (fractional) ranks, 1-based; ties share the mean of their positions.
std::vector<double> average_ranks(std::span<const double> v);

// All kernels require equal lengths of at least 3 and throw
// ComputationError when the coefficient is undefined (zero variance or
// all values tied). Results are clamped to [-1, 1].
double pearson(std::span<const double> x, std::span<const double> y);
double spearman(std::span<const double> x, std::span<const double> y);
double kendall(std::span<const double> x, std::span<const double> y);  // tau-b
double correlate(Metric m, std::span<const double> x, std::span<const double> y);

struct RelevanceEntry {
  std::string task;
  double relevance = 0.0;
  friend bool operator==(const RelevanceEntry&, const RelevanceEntry&) = default;
};

// Candidate tasks ordered by correlation with the baseline task, strongest
// first; ties are broken by task name.
struct RelevanceRanking {
  std::string baseline;
  Metric metric = Metric::pearson;
  std::vector<std::string> model_subset;  // rows that were used, in matrix order
  std::vector<RelevanceEntry> entries;
  friend bool operator==(const RelevanceRanking&, const RelevanceRanking&) = default;
};

// Correlates every non-baseline task column with the baseline column over
// the given model rows (all rows when `models` is empty). The input may be
// at any normalization stage; the pipeline feeds it the fully normalized
// performance matrix.
RelevanceRanking relevance_ranking(const NormalizedMatrix& scores, const std::string& baseline,
                                   Metric metric, std::span<const std::string> models = {});

// Fraction of a's top-t tasks that also appear in b's top-t.
double top_t_overlap(const RelevanceRanking& a, const RelevanceRanking& b, std::size_t top_t);

}  // namespace proxysel
