/*
 * proxysel - proxy task selection and early performance prediction
 * for large model evaluation.
 *
 * This code is released under the Apache License, Version 2.0.
 * http://www.apache.org/licenses/LICENSE-2.0
 */
#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "proxysel/consistency.hpp"
#include "proxysel/normalize.hpp"
#include "proxysel/robustness.hpp"
#include "proxysel/selection.hpp"

namespace proxysel {

// Externally measured consistency indices for one metric; lets a run reuse
// indices from a larger reference study instead of recomputing them on a
// small candidate matrix.
struct MetricIndices {
  Metric metric = Metric::pearson;
  double baseline_consistency = 0.0;
  double sampling_consistency = 0.0;
  friend bool operator==(const MetricIndices&, const MetricIndices&) = default;
};

// End-to-end run configuration. Relative paths are resolved against
// base_dir (the config file's directory when loaded from disk).
struct PipelineConfig {
  std::filesystem::path base_dir;
  std::filesystem::path candidate_matrix;
  std::optional<std::filesystem::path> candidate_manifest;
  std::string baseline_task;
  ConsistencyConfig consistency;
  bool metric_selection_published = false;  // true: pick the metric from published_indices
  std::vector<MetricIndices> published_indices;
  std::filesystem::path robustness_matrix;
  std::optional<std::filesystem::path> robustness_manifest;
  double epsilon_floor = 1e-9;
  SelectionConfig selection;
  std::filesystem::path checkpoint_scores;
  Aggregation aggregation = Aggregation::weighted_mean;
  std::optional<std::filesystem::path> rank_comparisons;  // ground truth + score series
  std::filesystem::path out_dir = "out";
};

PipelineConfig pipeline_config_from_json(const nlohmann::json& j,
                                         const std::filesystem::path& base_dir);
PipelineConfig load_pipeline_config(const std::filesystem::path& path);

struct PipelineResult {
  NormalizedMatrix normalized;
  ConsistencyReport consistency;
  Metric selected_metric = Metric::pearson;
  std::string metric_note;  // non-empty when the fallback ordering decided
  RelevanceRanking relevance;
  RobustnessReport robustness;
  ProxySet proxies;
  std::vector<Prediction> predictions;
  std::vector<RankComparison> comparisons;
  std::string summary;
  std::vector<std::filesystem::path> written;  // output files, in creation order
};

// Runs every stage in order: load candidates, normalize, score metric
// consistency, pick the metric, rank relevance, measure robustness, select
// proxies, predict checkpoint scores, and (optionally) compare rankings.
// Reports land in config.out_dir; failures carry the stage name.
PipelineResult run_all(const PipelineConfig& config, std::size_t threads = 1);

}  // namespace proxysel
