/*
 * proxysel - proxy task selection and early performance prediction
 * for large model evaluation.
 *
 * This code is released under the Apache License, Version 2.0.
 * http://www.apache.org/licenses/LICENSE-2.0
 */
#include "proxysel/serialize.hpp"

#include "proxysel/errors.hpp"
#include "proxysel/matrix_io.hpp"

namespace proxysel::jsonio {

using nlohmann::json;

namespace {

const json& field(const json& j, const char* key, const char* what) {
  if (!j.is_object())
    throw ValidationError(std::string(what) + " must be a JSON object");
  if (!j.contains(key))
    throw ValidationError(std::string(what) + " missing key \"" + key + "\"");
  return j.at(key);
}

std::string get_string(const json& j, const char* key, const char* what) {
  const json& v = field(j, key, what);
  if (!v.is_string())
    throw ValidationError(std::string(what) + " key \"" + key + "\" must be a string");
  return v.get<std::string>();
}

double get_number(const json& j, const char* key, const char* what) {
  const json& v = field(j, key, what);
  if (!v.is_number())
    throw ValidationError(std::string(what) + " key \"" + key + "\" must be a number");
  return v.get<double>();
}

std::uint64_t get_uint(const json& j, const char* key, const char* what) {
  const json& v = field(j, key, what);
  if (!v.is_number_unsigned() && !v.is_number_integer())
    throw ValidationError(std::string(what) + " key \"" + key + "\" must be an integer");
  if (v.is_number_integer() && v.get<std::int64_t>() < 0)
    throw ValidationError(std::string(what) + " key \"" + key + "\" must be non-negative");
  return v.get<std::uint64_t>();
}

bool get_bool(const json& j, const char* key, const char* what) {
  const json& v = field(j, key, what);
  if (!v.is_boolean())
    throw ValidationError(std::string(what) + " key \"" + key + "\" must be a boolean");
  return v.get<bool>();
}

const json& get_array(const json& j, const char* key, const char* what) {
  const json& v = field(j, key, what);
  if (!v.is_array())
    throw ValidationError(std::string(what) + " key \"" + key + "\" must be an array");
  return v;
}

std::vector<double> number_vector(const json& arr, const char* what) {
  std::vector<double> out;
  out.reserve(arr.size());
  for (const auto& v : arr) {
    if (!v.is_number()) throw ValidationError(std::string(what) + " must contain numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

std::vector<std::string> string_vector(const json& arr, const char* what) {
  std::vector<std::string> out;
  out.reserve(arr.size());
  for (const auto& v : arr) {
    if (!v.is_string()) throw ValidationError(std::string(what) + " must contain strings");
    out.push_back(v.get<std::string>());
  }
  return out;
}

json nested_rows(const std::vector<double>& flat, std::size_t row_len) {
  json rows = json::array();
  for (std::size_t i = 0; i < flat.size(); i += row_len) {
    json row = json::array();
    for (std::size_t k = 0; k < row_len; ++k) row.push_back(flat[i + k]);
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

json to_json(const Moments& m) { return json{{"mean", m.mean}, {"stddev", m.stddev}}; }

Moments moments_from_json(const json& j) {
  return Moments{get_number(j, "mean", "moments"), get_number(j, "stddev", "moments")};
}

json to_json(const NormalizedMatrix& m) {
  json j;
  j["matrix"] = matrix_to_json(m.matrix);
  j["stage"] = to_string(m.stage);
  j["task_stats"] = json::array();
  for (const Moments& s : m.task_stats) j["task_stats"].push_back(to_json(s));
  j["model_stats"] = json::array();
  for (const Moments& s : m.model_stats) j["model_stats"].push_back(to_json(s));
  return j;
}

NormalizedMatrix normalized_matrix_from_json(const json& j) {
  NormalizedMatrix out{matrix_from_json(field(j, "matrix", "normalized matrix")),
                       stage_from_string(get_string(j, "stage", "normalized matrix")),
                       {},
                       {}};
  for (const auto& s : get_array(j, "task_stats", "normalized matrix"))
    out.task_stats.push_back(moments_from_json(s));
  for (const auto& s : get_array(j, "model_stats", "normalized matrix"))
    out.model_stats.push_back(moments_from_json(s));
  const std::size_t n_tasks = out.matrix.n_tasks();
  const std::size_t n_models = out.matrix.n_models();
  if (out.stage != Stage::raw && out.task_stats.size() != n_tasks)
    throw ValidationError("normalized matrix task_stats must list one entry per task");
  if (out.stage == Stage::fully_normalized && out.model_stats.size() != n_models)
    throw ValidationError("normalized matrix model_stats must list one entry per model");
  return out;
}

json to_json(const RelevanceRanking& r) {
  json j;
  j["baseline"] = r.baseline;
  j["metric"] = to_string(r.metric);
  j["model_subset"] = r.model_subset;
  j["entries"] = json::array();
  for (const RelevanceEntry& e : r.entries)
    j["entries"].push_back(json{{"task", e.task}, {"relevance", e.relevance}});
  return j;
}

RelevanceRanking relevance_ranking_from_json(const json& j) {
  RelevanceRanking out;
  out.baseline = get_string(j, "baseline", "relevance ranking");
  out.metric = metric_from_string(get_string(j, "metric", "relevance ranking"));
  out.model_subset = string_vector(get_array(j, "model_subset", "relevance ranking"),
                                   "relevance ranking model_subset");
  for (const auto& e : get_array(j, "entries", "relevance ranking"))
    out.entries.push_back(
        {get_string(e, "task", "relevance entry"), get_number(e, "relevance", "relevance entry")});
  return out;
}

json to_json(const ConsistencyConfig& c) {
  json metrics = json::array();
  for (const Metric m : c.metrics) metrics.push_back(to_string(m));
  return json{{"sample_size", c.sample_size},
              {"rounds", c.rounds},
              {"top_t", c.top_t},
              {"metrics", std::move(metrics)},
              {"seed", c.seed},
              {"resample_per_metric", c.resample_per_metric},
              {"max_retries", c.max_retries}};
}

ConsistencyConfig consistency_config_from_json(const json& j) {
  ConsistencyConfig out;
  out.sample_size = static_cast<std::size_t>(get_uint(j, "sample_size", "consistency config"));
  out.rounds = static_cast<std::size_t>(get_uint(j, "rounds", "consistency config"));
  out.top_t = static_cast<std::size_t>(get_uint(j, "top_t", "consistency config"));
  for (const auto& m : get_array(j, "metrics", "consistency config")) {
    if (!m.is_string()) throw ValidationError("consistency config metrics must be strings");
    out.metrics.push_back(metric_from_string(m.get<std::string>()));
  }
  out.seed = get_uint(j, "seed", "consistency config");
  if (j.contains("resample_per_metric"))
    out.resample_per_metric = get_bool(j, "resample_per_metric", "consistency config");
  if (j.contains("max_retries"))
    out.max_retries = static_cast<std::size_t>(get_uint(j, "max_retries", "consistency config"));
  return out;
}

json to_json(const ConsistencyReport& r) {
  json j;
  j["config"] = to_json(r.config);
  j["baseline"] = r.baseline;
  j["metrics"] = json::array();
  for (const MetricConsistency& m : r.metrics) {
    json jm;
    jm["metric"] = to_string(m.score.metric);
    jm["baseline_consistency"] = m.score.baseline_consistency;
    jm["sampling_consistency"] = m.score.sampling_consistency;
    jm["samples"] = m.samples;
    jm["baseline_overlaps"] = m.baseline_overlaps;
    jm["pairwise_overlaps"] = m.pairwise_overlaps;
    j["metrics"].push_back(std::move(jm));
  }
  j["selected"] = r.outcome.selected ? json(to_string(*r.outcome.selected)) : json(nullptr);
  json order = json::array();
  for (const Metric m : r.outcome.fallback_order) order.push_back(to_string(m));
  j["fallback_order"] = std::move(order);
  return j;
}

json to_json(const RobustnessReport& r) {
  json j;
  j["epsilon_floor"] = r.epsilon_floor;
  j["entries"] = json::array();
  for (const TaskRobustness& t : r.entries) {
    j["entries"].push_back(json{{"task", t.task},
                                {"data_variance", t.data_variance},
                                {"noise_variance", t.noise_variance},
                                {"ratio", t.ratio},
                                {"degenerate", t.degenerate},
                                {"data_count", t.data_count},
                                {"noise_count", t.noise_count}});
  }
  return j;
}

RobustnessReport robustness_report_from_json(const json& j) {
  RobustnessReport out;
  out.epsilon_floor = get_number(j, "epsilon_floor", "robustness report");
  for (const auto& e : get_array(j, "entries", "robustness report")) {
    TaskRobustness t;
    t.task = get_string(e, "task", "robustness entry");
    t.data_variance = get_number(e, "data_variance", "robustness entry");
    t.noise_variance = get_number(e, "noise_variance", "robustness entry");
    t.ratio = get_number(e, "ratio", "robustness entry");
    t.degenerate = get_bool(e, "degenerate", "robustness entry");
    t.data_count = static_cast<std::size_t>(get_uint(e, "data_count", "robustness entry"));
    t.noise_count = static_cast<std::size_t>(get_uint(e, "noise_count", "robustness entry"));
    out.entries.push_back(std::move(t));
  }
  return out;
}

json to_json(const SelectionConfig& c) {
  return json{{"relevance_threshold", c.relevance_threshold},
              {"robustness_threshold", c.robustness_threshold},
              {"sigmoid_steepness", c.sigmoid_steepness},
              {"transform_log_ratio", c.transform_log_ratio}};
}

SelectionConfig selection_config_from_json(const json& j) {
  SelectionConfig out;
  if (j.contains("relevance_threshold"))
    out.relevance_threshold = get_number(j, "relevance_threshold", "selection config");
  if (j.contains("robustness_threshold"))
    out.robustness_threshold = get_number(j, "robustness_threshold", "selection config");
  if (j.contains("sigmoid_steepness"))
    out.sigmoid_steepness = get_number(j, "sigmoid_steepness", "selection config");
  if (j.contains("transform_log_ratio"))
    out.transform_log_ratio = get_bool(j, "transform_log_ratio", "selection config");
  return out;
}

json to_json(const ProxySet& p) {
  json j;
  j["config"] = to_json(p.config);
  j["entries"] = json::array();
  for (const ProxyTask& t : p.entries) {
    j["entries"].push_back(json{{"task", t.task},
                                {"relevance", t.relevance},
                                {"robustness", t.robustness},
                                {"score", t.score},
                                {"weight", t.weight}});
  }
  j["dropped_tasks"] = p.dropped_tasks;
  j["missing_robustness"] = p.missing_robustness;
  json stats = json::object();
  for (const auto& [task, m] : p.task_stats) stats[task] = to_json(m);
  j["task_stats"] = std::move(stats);
  return j;
}

ProxySet proxy_set_from_json(const json& j) {
  ProxySet out;
  out.config = selection_config_from_json(field(j, "config", "proxy set"));
  for (const auto& e : get_array(j, "entries", "proxy set")) {
    ProxyTask t;
    t.task = get_string(e, "task", "proxy task");
    t.relevance = get_number(e, "relevance", "proxy task");
    t.robustness = get_number(e, "robustness", "proxy task");
    t.score = get_number(e, "score", "proxy task");
    t.weight = get_number(e, "weight", "proxy task");
    out.entries.push_back(std::move(t));
  }
  out.dropped_tasks =
      string_vector(get_array(j, "dropped_tasks", "proxy set"), "proxy set dropped_tasks");
  out.missing_robustness = string_vector(get_array(j, "missing_robustness", "proxy set"),
                                         "proxy set missing_robustness");
  const json& stats = field(j, "task_stats", "proxy set");
  if (!stats.is_object()) throw ValidationError("proxy set task_stats must be an object");
  for (const auto& [task, m] : stats.items()) out.task_stats.emplace(task, moments_from_json(m));
  return out;
}

json to_json(const Prediction& p) {
  json j;
  j["checkpoint"] = p.checkpoint;
  j["aggregation"] = to_string(p.aggregation);
  j["predicted_score"] = p.predicted_score;
  j["contributions"] = json::array();
  for (const Contribution& c : p.contributions)
    j["contributions"].push_back(
        json{{"task", c.task}, {"score", c.score}, {"weight", c.weight}});
  return j;
}

json to_json(std::span<const Prediction> predictions) {
  json j;
  j["predictions"] = json::array();
  for (const Prediction& p : predictions) j["predictions"].push_back(to_json(p));
  return j;
}

json to_json(const ScoredRanking& r) {
  return json{{"label", r.label},
              {"orientation", to_string(r.orientation)},
              {"names", r.names},
              {"values", r.values}};
}

ScoredRanking scored_ranking_from_json(const json& j) {
  ScoredRanking out;
  out.label = get_string(j, "label", "scored ranking");
  out.orientation = orientation_from_string(get_string(j, "orientation", "scored ranking"));
  out.names = string_vector(get_array(j, "names", "scored ranking"), "scored ranking names");
  out.values = number_vector(get_array(j, "values", "scored ranking"), "scored ranking values");
  if (out.names.size() != out.values.size())
    throw ValidationError("scored ranking names and values differ in length");
  return out;
}

json to_json(const RankComparison& c) {
  return json{{"ranking_a", to_json(c.ranking_a)},
              {"ranking_b", to_json(c.ranking_b)},
              {"discordant_pairs", c.discordant_pairs},
              {"total_pairs", c.total_pairs}};
}

json to_json(const SynthTruth& t) {
  json j;
  j["n_factors"] = t.n_factors;
  j["loadings"] = nested_rows(t.loadings, t.n_factors);
  j["abilities"] = nested_rows(t.abilities, t.n_factors);
  j["link"] = to_string(t.link);
  j["emergence_threshold"] = t.emergence_threshold;
  j["noise_sd"] = t.noise_sd;
  j["seed"] = t.seed;
  j["clipped_cells"] = t.clipped_cells;
  return j;
}

SynthConfig synth_config_from_json(const json& j) {
  SynthConfig out;
  out.n_models = static_cast<std::size_t>(get_uint(j, "n_models", "synth config"));
  out.n_tasks = static_cast<std::size_t>(get_uint(j, "n_tasks", "synth config"));
  if (j.contains("n_factors"))
    out.n_factors = static_cast<std::size_t>(get_uint(j, "n_factors", "synth config"));
  if (j.contains("loadings")) {
    const json& rows = get_array(j, "loadings", "synth config");
    for (const auto& row : rows) {
      if (!row.is_array() || row.size() != out.n_factors)
        throw ValidationError("synth config loadings must be rows of n_factors numbers");
      for (const auto& v : row) {
        if (!v.is_number()) throw ValidationError("synth config loadings must be numbers");
        out.loadings.push_back(v.get<double>());
      }
    }
  }
  if (j.contains("noise_sd")) out.noise_sd = get_number(j, "noise_sd", "synth config");
  if (j.contains("link")) out.link = link_from_string(get_string(j, "link", "synth config"));
  if (j.contains("emergence_threshold"))
    out.emergence_threshold = get_number(j, "emergence_threshold", "synth config");
  if (j.contains("seed")) out.seed = get_uint(j, "seed", "synth config");
  return out;
}

std::string dump_stable(const json& j) { return j.dump(2) + "\n"; }

}  // namespace proxysel::jsonio
