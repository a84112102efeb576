/*
 * proxysel - proxy task selection and early performance prediction
 * for large model evaluation.
 *
 * This code is released under the Apache License, Version 2.0.
 * http://www.apache.org/licenses/LICENSE-2.0
 */
#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "proxysel/correlation.hpp"
#include "proxysel/normalize.hpp"
#include "proxysel/robustness.hpp"

namespace proxysel {

struct SelectionConfig {
  double relevance_threshold = 0.0;   // keep tasks with relevance strictly above; >= 0
  double robustness_threshold = 1.0;  // keep tasks with ratio strictly above; >= 0
  double sigmoid_steepness = 1.0;     // steepness of the robustness squash; > 0
  bool transform_log_ratio = false;   // squash sigmoid(k * ln R) instead of sigmoid(k * R)
  friend bool operator==(const SelectionConfig&, const SelectionConfig&) = default;
};

struct ProxyTask {
  std::string task;
  double relevance = 0.0;   // correlation with the baseline task
  double robustness = 0.0;  // variance ratio
  double score = 0.0;       // relevance * sigmoid(steepness * robustness)
  double weight = 0.0;      // score / sum of retained scores
  friend bool operator==(const ProxyTask&, const ProxyTask&) = default;
};

struct ProxySet {
  SelectionConfig config;
  std::vector<ProxyTask> entries;             // weight descending, ties by task name
  std::vector<std::string> dropped_tasks;     // candidates that failed a threshold
  std::vector<std::string> missing_robustness;  // candidates without a robustness entry
  std::map<std::string, Moments> task_stats;  // feature moments for normalized aggregation
  friend bool operator==(const ProxySet&, const ProxySet&) = default;
};

// Intersects the relevance ranking with the robustness report, keeps tasks
// strictly above both thresholds, and weights them by the squashed product.
// `stats`, when given, must be past the feature step; its per-task moments
// are embedded so predictions can aggregate in normalized space.
ProxySet select_proxies(const RelevanceRanking& relevance, const RobustnessReport& robustness,
                        const SelectionConfig& config = {},
                        const NormalizedMatrix* stats = nullptr);

enum class Aggregation { weighted_mean, weighted_mean_normalized };
std::string to_string(Aggregation a);
Aggregation aggregation_from_string(std::string_view s);

struct Contribution {
  std::string task;
  double score = 0.0;  // checkpoint's score on the task, in aggregation space
  double weight = 0.0;
  friend bool operator==(const Contribution&, const Contribution&) = default;
};

struct Prediction {
  std::string checkpoint;
  Aggregation aggregation = Aggregation::weighted_mean;
  double predicted_score = 0.0;  // sum of weight * score over contributions
  std::vector<Contribution> contributions;
  friend bool operator==(const Prediction&, const Prediction&) = default;
};

// Weighted aggregate of the checkpoint's proxy-task scores. The normalized
// variant first z-scores each task score with the embedded task moments.
Prediction predict(const ProxySet& proxies, const NamedScores& checkpoint,
                   Aggregation aggregation = Aggregation::weighted_mean);

enum class Orientation { higher_better, lower_better };
std::string to_string(Orientation o);
Orientation orientation_from_string(std::string_view s);

struct ScoredRanking {
  std::string label;
  Orientation orientation = Orientation::higher_better;
  std::vector<std::string> names;
  std::vector<double> values;
  friend bool operator==(const ScoredRanking&, const ScoredRanking&) = default;
};

// Pairs ordered oppositely in a and b count 1, pairs tied in exactly one
// ranking count 0.5, and pairs tied in both count 0.
struct RankComparison {
  ScoredRanking ranking_a;
  ScoredRanking ranking_b;
  double discordant_pairs = 0.0;
  std::size_t total_pairs = 0;
  friend bool operator==(const RankComparison&, const RankComparison&) = default;
};

RankComparison count_discordant_pairs(const ScoredRanking& a, const ScoredRanking& b);

// Which variant's scores drive selection and prediction. base_chat selects
// proxies on chat rows but predicts from base-variant checkpoint scores.
enum class Strategy { chat, base, base_chat };
std::string to_string(Strategy s);
Strategy strategy_from_string(std::string_view s);

// Inputs for one selection-and-prediction strategy run. Candidate rows are
// paired with target rows by row order: row i of a candidate matrix and
// row i of the target matrix describe the same underlying model.
struct StrategyInputs {
  std::optional<ScoreMatrix> target;           // single-column matrix of target-task scores
  std::optional<ScoreMatrix> candidates_chat;  // proxy-task scores of the chat variants
  std::optional<ScoreMatrix> candidates_base;  // proxy-task scores of the base variants
  RobustnessReport robustness;
  Metric metric = Metric::kendall;
  SelectionConfig selection;
  Aggregation aggregation = Aggregation::weighted_mean;
  std::vector<NamedScores> checkpoints_chat;
  std::vector<NamedScores> checkpoints_base;
  std::optional<ScoredRanking> ground_truth;
};

struct StrategyResult {
  Strategy strategy = Strategy::chat;
  RelevanceRanking relevance;
  ProxySet proxies;
  std::vector<Prediction> predictions;
  std::optional<RankComparison> comparison;  // predictions vs ground truth, when both exist
};

StrategyResult strategy_run(Strategy strategy, const StrategyInputs& inputs);

}  // namespace proxysel
