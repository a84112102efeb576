/*
 * proxysel - proxy task selection and early performance prediction
 * for large model evaluation.
 *
 * This code is released under the Apache License, Version 2.0.
 * http://www.apache.org/licenses/LICENSE-2.0
 */
#include "proxysel/selection.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <utility>

#include "proxysel/errors.hpp"

namespace proxysel {

std::string to_string(Aggregation a) {
  switch (a) {
    case Aggregation::weighted_mean: return "weighted_mean";
    case Aggregation::weighted_mean_normalized: return "weighted_mean_normalized";
  }
  throw ValidationError("unknown aggregation value");
}

Aggregation aggregation_from_string(std::string_view s) {
  if (s == "weighted_mean") return Aggregation::weighted_mean;
  if (s == "weighted_mean_normalized") return Aggregation::weighted_mean_normalized;
  throw ValidationError("unknown aggregation \"" + std::string(s) +
                        "\" (expected weighted_mean or weighted_mean_normalized)");
}

std::string to_string(Orientation o) {
  switch (o) {
    case Orientation::higher_better: return "higher_better";
    case Orientation::lower_better: return "lower_better";
  }
  throw ValidationError("unknown orientation value");
}

Orientation orientation_from_string(std::string_view s) {
  if (s == "higher_better" || s == "higher") return Orientation::higher_better;
  if (s == "lower_better" || s == "lower") return Orientation::lower_better;
  throw ValidationError("unknown orientation \"" + std::string(s) +
                        "\" (expected higher_better or lower_better)");
}

std::string to_string(Strategy s) {
  switch (s) {
    case Strategy::chat: return "chat";
    case Strategy::base: return "base";
    case Strategy::base_chat: return "base_chat";
  }
  throw ValidationError("unknown strategy value");
}

Strategy strategy_from_string(std::string_view s) {
  if (s == "chat") return Strategy::chat;
  if (s == "base") return Strategy::base;
  if (s == "base_chat") return Strategy::base_chat;
  throw ValidationError("unknown strategy \"" + std::string(s) +
                        "\" (expected chat, base, or base_chat)");
}

namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

}  // namespace

ProxySet select_proxies(const RelevanceRanking& relevance, const RobustnessReport& robustness,
                        const SelectionConfig& config, const NormalizedMatrix* stats) {
  if (config.relevance_threshold < 0.0)
    throw ValidationError("relevance threshold must be non-negative");
  if (config.robustness_threshold < 0.0)
    throw ValidationError("robustness threshold must be non-negative");
  if (config.sigmoid_steepness <= 0.0)
    throw ValidationError("sigmoid steepness must be positive");
  if (stats && stats->stage == Stage::raw)
    throw ValidationError("statistics matrix must be past the feature step");

  std::map<std::string, const TaskRobustness*> by_task;
  for (const TaskRobustness& t : robustness.entries) by_task.emplace(t.task, &t);

  ProxySet out;
  out.config = config;
  for (const RelevanceEntry& e : relevance.entries) {
    const auto it = by_task.find(e.task);
    if (it == by_task.end()) {
      out.missing_robustness.push_back(e.task);
      continue;
    }
    const double ratio = it->second->ratio;
    if (e.relevance <= config.relevance_threshold || ratio <= config.robustness_threshold) {
      out.dropped_tasks.push_back(e.task);
      continue;
    }
    ProxyTask p;
    p.task = e.task;
    p.relevance = e.relevance;
    p.robustness = ratio;
    const double squashed = config.transform_log_ratio
                                ? sigmoid(config.sigmoid_steepness * std::log(ratio))
                                : sigmoid(config.sigmoid_steepness * ratio);
    p.score = e.relevance * squashed;
    out.entries.push_back(std::move(p));
  }

  if (out.entries.empty())
    throw ComputationError(
        "no tasks retained: relevance threshold " + std::to_string(config.relevance_threshold) +
        " and robustness threshold " + std::to_string(config.robustness_threshold) +
        " exclude every candidate; relax the thresholds");

  double total = 0.0;
  for (const ProxyTask& p : out.entries) total += p.score;
  if (total <= 0.0) throw ComputationError("selection scores sum to zero; cannot weight tasks");
  for (ProxyTask& p : out.entries) p.weight = p.score / total;

  std::sort(out.entries.begin(), out.entries.end(), [](const ProxyTask& a, const ProxyTask& b) {
    if (a.weight != b.weight) return a.weight > b.weight;
    return a.task < b.task;
  });

  if (stats) {
    const ScoreMatrix& m = stats->matrix;
    for (const ProxyTask& p : out.entries)
      out.task_stats.emplace(p.task, stats->task_stats.at(m.task_index(p.task)));
  }
  return out;
}

Prediction predict(const ProxySet& proxies, const NamedScores& checkpoint,
                   Aggregation aggregation) {
  if (proxies.entries.empty()) throw ValidationError("proxy set has no retained tasks");

  Prediction out;
  out.checkpoint = checkpoint.name;
  out.aggregation = aggregation;
  out.contributions.reserve(proxies.entries.size());
  for (const ProxyTask& p : proxies.entries) {
    const auto it = checkpoint.scores.find(p.task);
    if (it == checkpoint.scores.end())
      throw ValidationError("checkpoint \"" + checkpoint.name + "\" has no score for task \"" +
                            p.task + "\"");
    if (!std::isfinite(it->second))
      throw ValidationError("checkpoint \"" + checkpoint.name + "\" has a non-finite score for task \"" +
                            p.task + "\"");
    double value = it->second;
    if (aggregation == Aggregation::weighted_mean_normalized) {
      const auto stat = proxies.task_stats.find(p.task);
      if (stat == proxies.task_stats.end())
        throw ValidationError("proxy set lacks task statistics for \"" + p.task +
                              "\"; normalized aggregation unavailable");
      value = (value - stat->second.mean) / stat->second.stddev;
    }
    out.contributions.push_back({p.task, value, p.weight});
  }
  double sum = 0.0;
  for (const Contribution& c : out.contributions) sum += c.weight * c.score;
  out.predicted_score = sum;
  return out;
}

RankComparison count_discordant_pairs(const ScoredRanking& a, const ScoredRanking& b) {
  if (a.names.size() != a.values.size() || b.names.size() != b.values.size())
    throw ValidationError("ranking names and values differ in length");
  if (a.names.size() < 2)
    throw ValidationError("rank comparison needs at least 2 entries, got " +
                          std::to_string(a.names.size()));
  if (a.names.size() != b.names.size())
    throw ValidationError("rankings differ in size: " + std::to_string(a.names.size()) + " vs " +
                          std::to_string(b.names.size()));

  std::map<std::string, double> b_value;
  for (std::size_t i = 0; i < b.names.size(); ++i)
    if (!b_value.emplace(b.names[i], b.values[i]).second)
      throw ValidationError("duplicate name \"" + b.names[i] + "\" in second ranking");

  const double sign_a = a.orientation == Orientation::lower_better ? -1.0 : 1.0;
  const double sign_b = b.orientation == Orientation::lower_better ? -1.0 : 1.0;

  std::vector<double> va, vb;
  std::set<std::string> seen;
  va.reserve(a.names.size());
  vb.reserve(a.names.size());
  for (std::size_t i = 0; i < a.names.size(); ++i) {
    if (!seen.insert(a.names[i]).second)
      throw ValidationError("duplicate name \"" + a.names[i] + "\" in first ranking");
    const auto it = b_value.find(a.names[i]);
    if (it == b_value.end())
      throw ValidationError("name \"" + a.names[i] + "\" missing from second ranking");
    va.push_back(sign_a * a.values[i]);
    vb.push_back(sign_b * it->second);
  }

  RankComparison out;
  out.ranking_a = a;
  out.ranking_b = b;
  const std::size_t n = va.size();
  out.total_pairs = n * (n - 1) / 2;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double da = va[i] - va[j];
      const double db = vb[i] - vb[j];
      if (da == 0.0 && db == 0.0) continue;
      if (da == 0.0 || db == 0.0)
        out.discordant_pairs += 0.5;  // tied in exactly one ranking
      else if ((da > 0.0) != (db > 0.0))
        out.discordant_pairs += 1.0;
    }
  }
  return out;
}

StrategyResult strategy_run(Strategy strategy, const StrategyInputs& inputs) {
  if (!inputs.target) throw ValidationError("strategy run requires a target matrix");
  const ScoreMatrix& target = *inputs.target;
  if (target.n_tasks() != 1)
    throw ValidationError("target matrix must have exactly one task column, got " +
                          std::to_string(target.n_tasks()));

  const bool selects_on_chat = strategy != Strategy::base;
  const std::optional<ScoreMatrix>& cand_opt =
      selects_on_chat ? inputs.candidates_chat : inputs.candidates_base;
  if (!cand_opt)
    throw ValidationError("strategy " + to_string(strategy) + " requires the " +
                          (selects_on_chat ? std::string("chat") : std::string("base")) +
                          " candidate matrix");
  const ScoreMatrix& cand = *cand_opt;

  if (cand.n_models() != target.n_models())
    throw ValidationError("candidate rows (" + std::to_string(cand.n_models()) +
                          ") must pair one-to-one with target rows (" +
                          std::to_string(target.n_models()) + ")");
  const std::string& target_task = target.tasks()[0].name;
  if (cand.has_task(target_task))
    throw ValidationError("target task \"" + target_task +
                          "\" already present in the candidate matrix");

  // Join the target column onto the candidate rows, pairing by row order.
  std::vector<TaskId> tasks = cand.tasks();
  tasks.push_back({target_task});
  std::vector<double> scores;
  scores.reserve(cand.n_models() * tasks.size());
  for (std::size_t i = 0; i < cand.n_models(); ++i) {
    for (std::size_t j = 0; j < cand.n_tasks(); ++j) scores.push_back(cand.at(i, j));
    scores.push_back(target.at(i, 0));
  }
  const ScoreMatrix joined(cand.models(), std::move(tasks), std::move(scores));

  StrategyResult out;
  out.strategy = strategy;
  const NormalizedMatrix P = normalize_pipeline(joined);
  out.relevance = relevance_ranking(P, target_task, inputs.metric);
  out.proxies = select_proxies(out.relevance, inputs.robustness, inputs.selection, &P);

  const std::vector<NamedScores>& checkpoints =
      strategy == Strategy::chat ? inputs.checkpoints_chat : inputs.checkpoints_base;
  out.predictions.reserve(checkpoints.size());
  for (const NamedScores& c : checkpoints)
    out.predictions.push_back(predict(out.proxies, c, inputs.aggregation));

  if (inputs.ground_truth && !out.predictions.empty()) {
    ScoredRanking predicted;
    predicted.label = "predicted";
    predicted.orientation = Orientation::higher_better;
    for (const Prediction& p : out.predictions) {
      predicted.names.push_back(p.checkpoint);
      predicted.values.push_back(p.predicted_score);
    }
    out.comparison = count_discordant_pairs(predicted, *inputs.ground_truth);
  }
  return out;
}

}  // namespace proxysel
