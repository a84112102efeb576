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
#include <vector>

#include "proxysel/score_matrix.hpp"

namespace proxysel {

// Scores one cohort of models achieved on one task.
struct GroupScores {
  Group group = Group::data_variability;
  std::string task;
  std::vector<double> scores;
  friend bool operator==(const GroupScores&, const GroupScores&) = default;
};

struct TaskRobustness {
  std::string task;
  double data_variance = 0.0;   // across the data_variability cohort
  double noise_variance = 0.0;  // across the random_noise cohort
  double ratio = 0.0;           // data_variance / max(noise_variance, floor)
  bool degenerate = false;      // noise variance fell below the floor
  std::size_t data_count = 0;
  std::size_t noise_count = 0;
  friend bool operator==(const TaskRobustness&, const TaskRobustness&) = default;
};

struct RobustnessReport {
  double epsilon_floor = 1e-9;
  std::vector<TaskRobustness> entries;  // ratio descending, ties by task name
  friend bool operator==(const RobustnessReport&, const RobustnessReport&) = default;
};

double sample_variance(std::span<const double> v);  // divisor count-1; needs at least 2

// Ratio of data-variability variance to random-noise variance per task.
// The two spans must cover the same task set; cohort sizes may differ but
// each needs at least two scores. Noise variances below epsilon_floor are
// clamped to it and flagged degenerate.
RobustnessReport robustness_scores(std::span<const GroupScores> data,
                                   std::span<const GroupScores> noise,
                                   double epsilon_floor = 1e-9);

// Convenience wrapper that splits a matrix into cohorts by the models'
// group labels; every model must carry a group label.
RobustnessReport robustness_from_matrix(const ScoreMatrix& m, double epsilon_floor = 1e-9);

}  // namespace proxysel
