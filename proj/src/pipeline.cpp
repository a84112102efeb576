/*
 * proxysel - proxy task selection and early performance prediction
 * for large model evaluation.
 *
 * This code is released under the Apache License, Version 2.0.
 * http://www.apache.org/licenses/LICENSE-2.0
 */
#include "proxysel/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iomanip>
#include <sstream>
#include <system_error>
#include <utility>

#include "proxysel/errors.hpp"
#include "proxysel/matrix_io.hpp"
#include "proxysel/serialize.hpp"
#include "proxysel/svg_report.hpp"

namespace proxysel {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kConfigWhat = "run config";

const json& config_field(const json& j, const char* key) {
  if (!j.is_object()) throw ValidationError(std::string(kConfigWhat) + " must be a JSON object");
  if (!j.contains(key))
    throw ValidationError(std::string(kConfigWhat) + " missing key \"" + key + "\"");
  return j.at(key);
}

std::string config_string(const json& j, const char* key) {
  const json& v = config_field(j, key);
  if (!v.is_string())
    throw ValidationError(std::string(kConfigWhat) + " key \"" + key + "\" must be a string");
  return v.get<std::string>();
}

fs::path resolve(const fs::path& base, const fs::path& p) {
  return p.is_absolute() ? p : base / p;
}

// Runs one stage and prefixes any library error with the stage name.
template <typename F>
auto stage(const char* name, F&& body) {
  try {
    return body();
  } catch (const StageError&) {
    throw;
  } catch (const Error& e) {
    throw StageError(name, e);
  }
}

std::string fixed4(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.4f", v);
  return buf;
}

std::string general(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

// Discordant-pair counts are multiples of 0.5; print whole counts as
// integers and halves with one decimal.
std::string count_text(double v) {
  char buf[64];
  if (v == std::floor(v))
    std::snprintf(buf, sizeof(buf), "%.0f", v);
  else
    std::snprintf(buf, sizeof(buf), "%.1f", v);
  return buf;
}

std::size_t name_column(std::span<const std::string> names) {
  std::size_t width = 0;
  for (const std::string& n : names) width = std::max(width, n.size());
  return width + 2;
}

}  // namespace

PipelineConfig pipeline_config_from_json(const json& j, const fs::path& base_dir) {
  PipelineConfig out;
  out.base_dir = base_dir;
  out.candidate_matrix = resolve(base_dir, config_string(j, "candidate_matrix"));
  if (j.contains("candidate_manifest"))
    out.candidate_manifest = resolve(base_dir, config_string(j, "candidate_manifest"));
  out.baseline_task = config_string(j, "baseline_task");
  out.consistency = jsonio::consistency_config_from_json(config_field(j, "consistency"));
  if (j.contains("metric_selection")) {
    const json& ms = config_field(j, "metric_selection");
    const std::string mode = config_string(ms, "mode");
    if (mode == "published") {
      out.metric_selection_published = true;
      const json& rows = config_field(ms, "published_indices");
      if (!rows.is_array())
        throw ValidationError(std::string(kConfigWhat) +
                              " key \"published_indices\" must be an array");
      for (const json& row : rows) {
        MetricIndices mi;
        mi.metric = metric_from_string(config_string(row, "metric"));
        const json& s = config_field(row, "baseline_consistency");
        const json& r = config_field(row, "sampling_consistency");
        if (!s.is_number() || !r.is_number())
          throw ValidationError(std::string(kConfigWhat) +
                                " published consistency indices must be numbers");
        mi.baseline_consistency = s.get<double>();
        mi.sampling_consistency = r.get<double>();
        out.published_indices.push_back(mi);
      }
      if (out.published_indices.size() < 2)
        throw ValidationError(std::string(kConfigWhat) +
                              " needs at least 2 published metric index rows");
    } else if (mode != "computed") {
      throw ValidationError(std::string(kConfigWhat) + " metric_selection mode \"" + mode +
                            "\" is not one of computed, published");
    }
  }
  out.robustness_matrix = resolve(base_dir, config_string(j, "robustness_matrix"));
  if (j.contains("robustness_manifest"))
    out.robustness_manifest = resolve(base_dir, config_string(j, "robustness_manifest"));
  if (j.contains("epsilon_floor")) {
    const json& v = config_field(j, "epsilon_floor");
    if (!v.is_number())
      throw ValidationError(std::string(kConfigWhat) + " key \"epsilon_floor\" must be a number");
    out.epsilon_floor = v.get<double>();
  }
  if (j.contains("selection"))
    out.selection = jsonio::selection_config_from_json(config_field(j, "selection"));
  out.checkpoint_scores = resolve(base_dir, config_string(j, "checkpoint_scores"));
  if (j.contains("aggregation"))
    out.aggregation = aggregation_from_string(config_string(j, "aggregation"));
  if (j.contains("rank_comparisons"))
    out.rank_comparisons = resolve(base_dir, config_string(j, "rank_comparisons"));
  if (j.contains("out_dir")) out.out_dir = resolve(base_dir, config_string(j, "out_dir"));
  return out;
}

PipelineConfig load_pipeline_config(const fs::path& path) {
  return pipeline_config_from_json(read_json_file(path), path.parent_path());
}

PipelineResult run_all(const PipelineConfig& config, std::size_t threads) {
  const fs::path out_dir = config.out_dir.empty() ? fs::path("out") : config.out_dir;

  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec)
    throw IoError("cannot create output directory " + out_dir.string() + ": " + ec.message());

  std::vector<fs::path> written;
  const auto write_json_report = [&](const char* name, const json& doc) {
    const fs::path p = out_dir / name;
    write_text_file(p, jsonio::dump_stable(doc));
    written.push_back(p);
  };
  const auto write_svg_report = [&](const char* name, const std::string& svg) {
    const fs::path p = out_dir / name;
    write_text_file(p, svg);
    written.push_back(p);
  };

  const ScoreMatrix candidates = stage("load-candidates", [&] {
    return config.candidate_manifest
               ? load_matrix_with_manifest(config.candidate_matrix, *config.candidate_manifest)
               : load_matrix(config.candidate_matrix);
  });

  const NormalizedMatrix normalized = stage("normalize", [&] {
    NormalizedMatrix nm = normalize_pipeline(candidates);
    write_json_report("normalized_matrix.json", jsonio::to_json(nm));
    return nm;
  });

  const ConsistencyReport consistency = stage("consistency", [&] {
    ConsistencyReport report =
        sampling_consistency_eval(candidates, config.baseline_task, config.consistency, threads);
    write_json_report("consistency_report.json", jsonio::to_json(report));
    return report;
  });

  std::vector<MetricScore> selection_table;
  std::string selection_source;
  Metric selected_metric = Metric::pearson;
  std::string metric_note;
  stage("metric-selection", [&] {
    SelectionOutcome outcome;
    if (config.metric_selection_published) {
      for (const MetricIndices& mi : config.published_indices)
        selection_table.push_back({mi.metric, mi.baseline_consistency, mi.sampling_consistency});
      outcome = select_metric(selection_table);
      selection_source = "published reference indices";
    } else {
      for (const MetricConsistency& mc : consistency.metrics) selection_table.push_back(mc.score);
      outcome = consistency.outcome;
      selection_source = "computed from sampling rounds";
    }
    if (outcome.selected) {
      selected_metric = *outcome.selected;
    } else {
      selected_metric = outcome.fallback_order.front();
      metric_note = "(fallback: no dominating metric)";
    }
    return 0;
  });

  const RelevanceRanking relevance = stage("relevance", [&] {
    RelevanceRanking ranking =
        relevance_ranking(normalized, config.baseline_task, selected_metric);
    write_json_report("relevance_ranking.json", jsonio::to_json(ranking));
    std::vector<Bar> bars;
    for (const RelevanceEntry& e : ranking.entries) bars.push_back({e.task, e.relevance});
    write_svg_report("relevance_ranking.svg",
                     bar_chart_svg("relevance to " + config.baseline_task + " (" +
                                       to_string(ranking.metric) + ")",
                                   bars, "correlation"));
    return ranking;
  });

  auto [cohorts, robustness] = stage("robustness", [&] {
    ScoreMatrix m = config.robustness_manifest
                        ? load_matrix_with_manifest(config.robustness_matrix,
                                                    *config.robustness_manifest)
                        : load_matrix(config.robustness_matrix);
    RobustnessReport report = robustness_from_matrix(m, config.epsilon_floor);
    write_json_report("robustness_report.json", jsonio::to_json(report));
    return std::pair<ScoreMatrix, RobustnessReport>(std::move(m), std::move(report));
  });

  const ProxySet proxies = stage("selection", [&] {
    ProxySet set = select_proxies(relevance, robustness, config.selection, &normalized);
    write_json_report("proxy_set.json", jsonio::to_json(set));
    std::vector<Bar> bars;
    for (const ProxyTask& t : set.entries) bars.push_back({t.task, t.weight});
    write_svg_report("proxy_weights.svg", bar_chart_svg("proxy task weights", bars, "weight"));
    return set;
  });

  auto [checkpoints, predictions] = stage("prediction", [&] {
    std::vector<NamedScores> rows = load_score_table(config.checkpoint_scores);
    std::vector<Prediction> preds;
    for (const NamedScores& row : rows) preds.push_back(predict(proxies, row, config.aggregation));
    write_json_report("predictions.json",
                      jsonio::to_json(std::span<const Prediction>(preds)));
    return std::pair<std::vector<NamedScores>, std::vector<Prediction>>(std::move(rows),
                                                                        std::move(preds));
  });

  std::optional<ScoredRanking> ground_truth;
  std::vector<RankComparison> comparisons;
  stage("rank-comparison", [&] {
    if (!config.rank_comparisons) return 0;
    const json doc = read_json_file(*config.rank_comparisons);
    ground_truth = jsonio::scored_ranking_from_json(config_field(doc, "ground_truth"));
    const json& series = config_field(doc, "series");
    if (!series.is_array())
      throw ValidationError("rank comparison file key \"series\" must be an array");
    for (const json& s : series) {
      ScoredRanking ranking;
      ranking.label = config_string(s, "label");
      ranking.orientation = orientation_from_string(config_string(s, "orientation"));
      ranking.names = ground_truth->names;
      const json& values = config_field(s, "values");
      if (!values.is_array())
        throw ValidationError("rank comparison series \"" + ranking.label +
                              "\" key \"values\" must be an array");
      for (const json& v : values) {
        if (!v.is_number())
          throw ValidationError("rank comparison series \"" + ranking.label +
                                "\" values must be numbers");
        ranking.values.push_back(v.get<double>());
      }
      if (ranking.values.size() != ranking.names.size())
        throw ValidationError("rank comparison series \"" + ranking.label + "\" has " +
                              std::to_string(ranking.values.size()) + " values for " +
                              std::to_string(ranking.names.size()) + " ground truth names");
      comparisons.push_back(count_discordant_pairs(ranking, *ground_truth));
    }
    ScoredRanking predicted{"predicted", Orientation::higher_better, ground_truth->names, {}};
    for (const std::string& name : ground_truth->names) {
      const auto it = std::find_if(predictions.begin(), predictions.end(),
                                   [&](const Prediction& p) { return p.checkpoint == name; });
      if (it == predictions.end())
        throw ValidationError("ground truth names checkpoint \"" + name +
                              "\" but no prediction covers it");
      predicted.values.push_back(it->predicted_score);
    }
    comparisons.push_back(count_discordant_pairs(predicted, *ground_truth));
    json out;
    out["comparisons"] = json::array();
    for (const RankComparison& c : comparisons) out["comparisons"].push_back(jsonio::to_json(c));
    write_json_report("rank_comparisons.json", out);
    return 0;
  });

  const std::string summary = stage("summary", [&] {
    std::ostringstream text;
    text << "proxysel run summary\n";
    text << "====================\n\n";

    text << "inputs\n";
    text << "  candidate matrix: " << config.candidate_matrix.filename().string() << " ("
         << candidates.n_models() << " models x " << candidates.n_tasks() << " tasks)\n";
    text << "  robustness matrix: " << config.robustness_matrix.filename().string() << " ("
         << cohorts.n_models() << " models x " << cohorts.n_tasks() << " tasks)\n";
    text << "  checkpoint scores: " << config.checkpoint_scores.filename().string() << " ("
         << checkpoints.size() << " checkpoints)\n";
    text << "  baseline task: " << config.baseline_task << "\n\n";

    const ConsistencyConfig& cc = consistency.config;
    text << "metric consistency (sample_size=" << cc.sample_size << ", rounds=" << cc.rounds
         << ", top_t=" << cc.top_t << ", seed=" << cc.seed << ")\n";
    for (const MetricConsistency& mc : consistency.metrics) {
      text << "  " << std::left << std::setw(10) << to_string(mc.score.metric)
           << "s=" << fixed4(mc.score.baseline_consistency)
           << "  r=" << fixed4(mc.score.sampling_consistency) << "\n";
    }
    text << "\n";

    text << "metric selection (" << selection_source << ")\n";
    for (const MetricScore& ms : selection_table) {
      text << "  " << std::left << std::setw(10) << to_string(ms.metric)
           << "s=" << fixed4(ms.baseline_consistency) << "  r=" << fixed4(ms.sampling_consistency)
           << "\n";
    }
    text << "  selected metric: " << to_string(selected_metric);
    if (!metric_note.empty()) text << " " << metric_note;
    text << "\n\n";

    text << "relevance to " << relevance.baseline << " (" << to_string(relevance.metric) << ")\n";
    {
      std::vector<std::string> names;
      for (const RelevanceEntry& e : relevance.entries) names.push_back(e.task);
      const std::size_t width = name_column(names);
      for (const RelevanceEntry& e : relevance.entries)
        text << "  " << std::left << std::setw(static_cast<int>(width)) << e.task
             << fixed4(e.relevance) << "\n";
    }
    text << "\n";

    text << "robustness (noise floor " << general(robustness.epsilon_floor) << ")\n";
    {
      std::vector<std::string> names;
      for (const TaskRobustness& t : robustness.entries) names.push_back(t.task);
      const std::size_t width = name_column(names);
      for (const TaskRobustness& t : robustness.entries) {
        text << "  " << std::left << std::setw(static_cast<int>(width)) << t.task
             << "data_variance=" << fixed4(t.data_variance)
             << "  noise_variance=" << fixed4(t.noise_variance) << "  ratio=" << fixed4(t.ratio);
        if (t.degenerate) text << "  (noise at floor)";
        text << "\n";
      }
    }
    text << "\n";

    text << "proxy tasks (" << proxies.entries.size() << " of " << relevance.entries.size()
         << " candidates retained)\n";
    {
      std::vector<std::string> names;
      for (const ProxyTask& t : proxies.entries) names.push_back(t.task);
      const std::size_t width = name_column(names);
      for (const ProxyTask& t : proxies.entries) {
        text << "  " << std::left << std::setw(static_cast<int>(width)) << t.task
             << "weight=" << fixed4(t.weight) << "  relevance=" << fixed4(t.relevance)
             << "  robustness=" << fixed4(t.robustness) << "\n";
      }
      if (!proxies.dropped_tasks.empty()) {
        text << "  dropped:";
        for (const std::string& name : proxies.dropped_tasks) text << " " << name;
        text << "\n";
      }
      if (!proxies.missing_robustness.empty()) {
        text << "  no robustness entry:";
        for (const std::string& name : proxies.missing_robustness) text << " " << name;
        text << "\n";
      }
    }
    text << "\n";

    text << "predictions (" << to_string(config.aggregation) << ")\n";
    {
      std::vector<std::string> names;
      for (const Prediction& p : predictions) names.push_back(p.checkpoint);
      const std::size_t width = name_column(names);
      for (const Prediction& p : predictions)
        text << "  " << std::left << std::setw(static_cast<int>(width)) << p.checkpoint
             << fixed4(p.predicted_score) << "\n";
    }

    if (ground_truth) {
      text << "\nrank comparisons vs " << ground_truth->label << " (discordant pairs of "
           << (ground_truth->names.size() * (ground_truth->names.size() - 1) / 2) << ")\n";
      std::vector<std::string> names;
      for (const RankComparison& c : comparisons) names.push_back(c.ranking_a.label);
      const std::size_t width = name_column(names);
      for (const RankComparison& c : comparisons)
        text << "  " << std::left << std::setw(static_cast<int>(width)) << c.ranking_a.label
             << count_text(c.discordant_pairs) << "\n";
    }

    std::string rendered = text.str();
    const fs::path p = out_dir / "summary.txt";
    write_text_file(p, rendered);
    written.push_back(p);
    return rendered;
  });

  return PipelineResult{normalized,       consistency, selected_metric, metric_note,
                        relevance,        robustness,  proxies,         predictions,
                        comparisons,      summary,     written};
}

}  // namespace proxysel
