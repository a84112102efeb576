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

#include "proxysel/score_matrix.hpp"

namespace proxysel {

// How far a matrix has travelled through the two-step normalization.
enum class Stage { raw, feature_normalized, fully_normalized };

std::string to_string(Stage s);
Stage stage_from_string(std::string_view s);

struct Moments {
  double mean = 0.0;
  double stddev = 0.0;
  friend bool operator==(const Moments&, const Moments&) = default;
};

// A score matrix together with its normalization history. task_stats
// hold the per-column moments removed by the feature step; model_stats the
// per-row moments removed by the sample step. Each is empty until the
// corresponding step has run.
struct NormalizedMatrix {
  ScoreMatrix matrix;
  Stage stage = Stage::raw;
  std::vector<Moments> task_stats;   // one per task after the feature step
  std::vector<Moments> model_stats;  // one per model after the sample step
  friend bool operator==(const NormalizedMatrix&, const NormalizedMatrix&) = default;
};

double sample_mean(std::span<const double> v);    // needs at least 1 value
double sample_stddev(std::span<const double> v);  // divisor count-1; needs at least 2

NormalizedMatrix wrap_raw(ScoreMatrix m);

// Feature step: z-scores every task column across models.
NormalizedMatrix feature_normalize(const NormalizedMatrix& raw);

// Sample step: z-scores every model row across the feature-normalized tasks.
NormalizedMatrix sample_normalize(const NormalizedMatrix& feature);

// Both steps in order; the canonical way to build the performance matrix.
NormalizedMatrix normalize_pipeline(const ScoreMatrix& m);

}  // namespace proxysel
