/*
 * proxysel - proxy task selection and early performance prediction
 * for large model evaluation.
 *
 * This code is released under the Apache License, Version 2.0.
 * http://www.apache.org/licenses/LICENSE-2.0
 */
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <system_error>
#include <vector>

#include "CLI11.hpp"
#include "proxysel/consistency.hpp"
#include "proxysel/correlation.hpp"
#include "proxysel/errors.hpp"
#include "proxysel/matrix_io.hpp"
#include "proxysel/normalize.hpp"
#include "proxysel/pipeline.hpp"
#include "proxysel/robustness.hpp"
#include "proxysel/selection.hpp"
#include "proxysel/serialize.hpp"
#include "proxysel/svg_report.hpp"
#include "proxysel/synth.hpp"

namespace fs = std::filesystem;
using namespace proxysel;

namespace {

// Shared state for the global flags; subcommand options fall through to
// the parent, so `proxysel consistency --seed 42 ...` also lands here.
struct GlobalOptions {
  std::uint64_t seed = 0;
  bool seed_set = false;
  fs::path out_dir;
  bool out_dir_set = false;
  std::string format;  // empty, "json", or "csv"
};

// Routes a relative output path into --out-dir when one was given.
fs::path out_path(const GlobalOptions& global, const fs::path& p) {
  if (!global.out_dir_set || p.is_absolute()) return p;
  std::error_code ec;
  fs::create_directories(global.out_dir, ec);
  if (ec)
    throw IoError("cannot create output directory " + global.out_dir.string() + ": " +
                  ec.message());
  return global.out_dir / p;
}

ScoreMatrix load_matrix_opt_manifest(const fs::path& matrix, const std::string& manifest) {
  return manifest.empty() ? load_matrix(matrix) : load_matrix_with_manifest(matrix, manifest);
}

std::vector<Metric> parse_metric_list(const std::string& text) {
  std::vector<Metric> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = text.find(',', start);
    const std::string item =
        text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    if (!item.empty()) out.push_back(metric_from_string(item));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  if (out.empty()) throw ValidationError("metric list is empty");
  return out;
}

std::vector<std::string> read_name_list(const fs::path& p) {
  std::vector<std::string> names;
  std::string text = read_text_file(p);
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string::npos) end = text.size();
    std::string line = text.substr(start, end - start);
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
    while (!line.empty() && line.front() == ' ') line.erase(line.begin());
    if (!line.empty()) names.push_back(line);
    start = end + 1;
  }
  return names;
}

void save_matrix_formatted(const GlobalOptions& global, const ScoreMatrix& m, const fs::path& p) {
  if (global.format.empty())
    save_matrix(m, p);
  else
    save_matrix(m, p, global.format == "csv" ? MatrixFormat::csv : MatrixFormat::json);
}

void note_written(const fs::path& p) { std::cout << "wrote " << p.string() << "\n"; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"proxy task selection and early performance prediction"};
  app.require_subcommand(1);

  GlobalOptions global;
  app.add_option("--seed", global.seed, "override the sampling seed (consistency, synth, run-all)")
      ->each([&](const std::string&) { global.seed_set = true; });
  app.add_option("--out-dir", global.out_dir, "directory that relative output paths are written under")
      ->each([&](const std::string&) { global.out_dir_set = true; });
  app.add_option("--format", global.format, "force the format of matrix files written by synth")
      ->check(CLI::IsMember({"json", "csv"}));

  // normalize
  auto* normalize_cmd = app.add_subcommand("normalize", "two-step normalize a score matrix");
  normalize_cmd->fallthrough();
  struct {
    fs::path in, out;
    std::string manifest;
  } normalize_args;
  normalize_cmd->add_option("--in", normalize_args.in, "score matrix (.csv or .json)")->required();
  normalize_cmd->add_option("--manifest", normalize_args.manifest, "model metadata manifest");
  normalize_cmd->add_option("--out", normalize_args.out, "normalized matrix report")->required();
  normalize_cmd->callback([&] {
    const NormalizedMatrix normalized =
        normalize_pipeline(load_matrix_opt_manifest(normalize_args.in, normalize_args.manifest));
    const fs::path out = out_path(global, normalize_args.out);
    write_text_file(out, jsonio::dump_stable(jsonio::to_json(normalized)));
    note_written(out);
  });

  // relevance
  auto* relevance_cmd =
      app.add_subcommand("relevance", "rank candidate tasks by correlation with a baseline task");
  relevance_cmd->fallthrough();
  struct {
    fs::path matrix, out;
    std::string manifest, baseline, metric = "kendall", models, svg;
    bool raw = false;
  } relevance_args;
  relevance_cmd->add_option("--matrix", relevance_args.matrix, "normalized matrix report")
      ->required();
  relevance_cmd->add_flag("--raw", relevance_args.raw,
                          "treat --matrix as a raw score matrix and normalize it first");
  relevance_cmd->add_option("--manifest", relevance_args.manifest,
                            "model metadata manifest (with --raw)");
  relevance_cmd->add_option("--baseline", relevance_args.baseline, "baseline task name")
      ->required();
  relevance_cmd->add_option("--metric", relevance_args.metric,
                            "correlation metric: pearson, spearman, kendall");
  relevance_cmd->add_option("--models", relevance_args.models,
                            "file listing the model rows to use, one per line");
  relevance_cmd->add_option("--out", relevance_args.out, "relevance ranking report")->required();
  relevance_cmd->add_option("--svg", relevance_args.svg, "also render the ranking as a bar chart");
  relevance_cmd->callback([&] {
    NormalizedMatrix normalized =
        relevance_args.raw
            ? normalize_pipeline(
                  load_matrix_opt_manifest(relevance_args.matrix, relevance_args.manifest))
            : jsonio::normalized_matrix_from_json(read_json_file(relevance_args.matrix));
    std::vector<std::string> models;
    if (!relevance_args.models.empty()) models = read_name_list(relevance_args.models);
    const RelevanceRanking ranking = relevance_ranking(
        normalized, relevance_args.baseline, metric_from_string(relevance_args.metric), models);
    const fs::path out = out_path(global, relevance_args.out);
    write_text_file(out, jsonio::dump_stable(jsonio::to_json(ranking)));
    note_written(out);
    if (!relevance_args.svg.empty()) {
      std::vector<Bar> bars;
      for (const RelevanceEntry& e : ranking.entries) bars.push_back({e.task, e.relevance});
      const fs::path svg = out_path(global, relevance_args.svg);
      write_text_file(svg, bar_chart_svg("relevance to " + ranking.baseline + " (" +
                                             to_string(ranking.metric) + ")",
                                         bars, "correlation"));
      note_written(svg);
    }
  });

  // consistency
  auto* consistency_cmd = app.add_subcommand(
      "consistency", "score ranking stability of correlation metrics under model subsampling");
  consistency_cmd->fallthrough();
  struct {
    fs::path matrix, out;
    std::string manifest, baseline, metrics = "pearson,spearman,kendall";
    std::size_t n = 0, k = 0, t = 0, max_retries = 10, threads = 1;
    bool resample_per_metric = false;
  } consistency_args;
  consistency_cmd->add_option("--matrix", consistency_args.matrix, "raw score matrix")->required();
  consistency_cmd->add_option("--manifest", consistency_args.manifest, "model metadata manifest");
  consistency_cmd->add_option("--baseline", consistency_args.baseline, "baseline task name")
      ->required();
  consistency_cmd->add_option("--n", consistency_args.n, "models sampled per round")->required();
  consistency_cmd->add_option("--k", consistency_args.k, "number of sampling rounds")->required();
  consistency_cmd->add_option("--t", consistency_args.t, "top-t overlap window")->required();
  consistency_cmd->add_option("--metrics", consistency_args.metrics,
                              "comma-separated metrics to score");
  consistency_cmd->add_flag("--resample-per-metric", consistency_args.resample_per_metric,
                            "draw fresh subsets for every metric instead of sharing them");
  consistency_cmd->add_option("--max-retries", consistency_args.max_retries,
                              "extra draws per round when a subset is degenerate");
  consistency_cmd->add_option("--threads", consistency_args.threads,
                              "worker threads (0 = hardware concurrency)");
  consistency_cmd->add_option("--out", consistency_args.out, "consistency report")->required();
  consistency_cmd->callback([&] {
    ConsistencyConfig config;
    config.sample_size = consistency_args.n;
    config.rounds = consistency_args.k;
    config.top_t = consistency_args.t;
    config.metrics = parse_metric_list(consistency_args.metrics);
    config.seed = global.seed;
    config.resample_per_metric = consistency_args.resample_per_metric;
    config.max_retries = consistency_args.max_retries;
    const ScoreMatrix m =
        load_matrix_opt_manifest(consistency_args.matrix, consistency_args.manifest);
    const ConsistencyReport report =
        sampling_consistency_eval(m, consistency_args.baseline, config, consistency_args.threads);
    const fs::path out = out_path(global, consistency_args.out);
    write_text_file(out, jsonio::dump_stable(jsonio::to_json(report)));
    note_written(out);
  });

  // robustness
  auto* robustness_cmd =
      app.add_subcommand("robustness", "variance ratio of data-variability to random-noise cohorts");
  robustness_cmd->fallthrough();
  struct {
    fs::path matrix, out;
    std::string manifest;
    double epsilon_floor = 1e-9;
  } robustness_args;
  robustness_cmd->add_option("--matrix", robustness_args.matrix, "score matrix of cohort models")
      ->required();
  robustness_cmd->add_option("--manifest", robustness_args.manifest,
                             "model metadata manifest assigning groups");
  robustness_cmd->add_option("--epsilon-floor", robustness_args.epsilon_floor,
                             "noise variance floor");
  robustness_cmd->add_option("--out", robustness_args.out, "robustness report")->required();
  robustness_cmd->callback([&] {
    const ScoreMatrix m =
        load_matrix_opt_manifest(robustness_args.matrix, robustness_args.manifest);
    const RobustnessReport report = robustness_from_matrix(m, robustness_args.epsilon_floor);
    const fs::path out = out_path(global, robustness_args.out);
    write_text_file(out, jsonio::dump_stable(jsonio::to_json(report)));
    note_written(out);
  });

  // select
  auto* select_cmd =
      app.add_subcommand("select", "select and weight proxy tasks from relevance and robustness");
  select_cmd->fallthrough();
  struct {
    fs::path relevance, robustness, out;
    std::string stats;
    SelectionConfig config;
  } select_args;
  select_cmd->add_option("--relevance", select_args.relevance, "relevance ranking report")
      ->required();
  select_cmd->add_option("--robustness", select_args.robustness, "robustness report")->required();
  select_cmd->add_option("--eps-c", select_args.config.relevance_threshold,
                         "relevance threshold (keep strictly above)");
  select_cmd->add_option("--eps-r", select_args.config.robustness_threshold,
                         "robustness threshold (keep strictly above)");
  select_cmd->add_option("--sigmoid-k", select_args.config.sigmoid_steepness,
                         "steepness of the robustness squash");
  select_cmd->add_flag("--log-ratio", select_args.config.transform_log_ratio,
                       "squash the log of the robustness ratio");
  select_cmd->add_option("--stats", select_args.stats,
                         "normalized matrix report providing per-task moments");
  select_cmd->add_option("--out", select_args.out, "proxy set report")->required();
  select_cmd->callback([&] {
    const RelevanceRanking relevance =
        jsonio::relevance_ranking_from_json(read_json_file(select_args.relevance));
    const RobustnessReport robustness =
        jsonio::robustness_report_from_json(read_json_file(select_args.robustness));
    std::optional<NormalizedMatrix> stats;
    if (!select_args.stats.empty())
      stats = jsonio::normalized_matrix_from_json(read_json_file(select_args.stats));
    const ProxySet proxies = select_proxies(relevance, robustness, select_args.config,
                                            stats ? &*stats : nullptr);
    const fs::path out = out_path(global, select_args.out);
    write_text_file(out, jsonio::dump_stable(jsonio::to_json(proxies)));
    note_written(out);
  });

  // predict
  auto* predict_cmd =
      app.add_subcommand("predict", "predict checkpoint target scores from proxy-task scores");
  predict_cmd->fallthrough();
  struct {
    fs::path proxyset, scores, out;
    std::string aggregation = "weighted_mean";
  } predict_args;
  predict_cmd->add_option("--proxyset", predict_args.proxyset, "proxy set report")->required();
  predict_cmd->add_option("--scores", predict_args.scores, "checkpoint score table (.csv)")
      ->required();
  predict_cmd->add_option("--aggregation", predict_args.aggregation,
                          "weighted_mean or weighted_mean_normalized");
  predict_cmd->add_option("--out", predict_args.out, "predictions report")->required();
  predict_cmd->callback([&] {
    const ProxySet proxies = jsonio::proxy_set_from_json(read_json_file(predict_args.proxyset));
    const Aggregation aggregation = aggregation_from_string(predict_args.aggregation);
    std::vector<Prediction> predictions;
    for (const NamedScores& row : load_score_table(predict_args.scores))
      predictions.push_back(predict(proxies, row, aggregation));
    const fs::path out = out_path(global, predict_args.out);
    write_text_file(out,
                    jsonio::dump_stable(jsonio::to_json(std::span<const Prediction>(predictions))));
    note_written(out);
  });

  // rank-compare
  auto* rank_cmd =
      app.add_subcommand("rank-compare", "count discordant pairs between two score rankings");
  rank_cmd->fallthrough();
  struct {
    fs::path a, b, out;
    std::string a_orientation = "higher", b_orientation = "higher";
  } rank_args;
  rank_cmd->add_option("--a", rank_args.a, "first ranking (single-task matrix file)")->required();
  rank_cmd->add_option("--b", rank_args.b, "second ranking (single-task matrix file)")->required();
  rank_cmd->add_option("--a-orientation", rank_args.a_orientation, "higher or lower is better");
  rank_cmd->add_option("--b-orientation", rank_args.b_orientation, "higher or lower is better");
  rank_cmd->add_option("--out", rank_args.out, "comparison report")->required();
  rank_cmd->callback([&] {
    const ScoredRanking a =
        load_ranking(rank_args.a, orientation_from_string(rank_args.a_orientation));
    const ScoredRanking b =
        load_ranking(rank_args.b, orientation_from_string(rank_args.b_orientation));
    const RankComparison comparison = count_discordant_pairs(a, b);
    const fs::path out = out_path(global, rank_args.out);
    write_text_file(out, jsonio::dump_stable(jsonio::to_json(comparison)));
    note_written(out);
  });

  // synth
  auto* synth_cmd =
      app.add_subcommand("synth", "generate a synthetic score matrix from a latent factor model");
  synth_cmd->fallthrough();
  struct {
    fs::path config, out;
    std::string truth;
  } synth_args;
  synth_cmd->add_option("--config", synth_args.config, "generator configuration (.json)")
      ->required();
  synth_cmd->add_option("--out", synth_args.out, "generated score matrix (.csv or .json)")
      ->required();
  synth_cmd->add_option("--truth", synth_args.truth, "ground-truth report");
  synth_cmd->callback([&] {
    SynthConfig config = jsonio::synth_config_from_json(read_json_file(synth_args.config));
    if (global.seed_set) config.seed = global.seed;
    const SynthResult result = generate(config);
    const fs::path out = out_path(global, synth_args.out);
    save_matrix_formatted(global, result.matrix, out);
    note_written(out);
    if (!synth_args.truth.empty()) {
      const fs::path truth = out_path(global, synth_args.truth);
      write_text_file(truth, jsonio::dump_stable(jsonio::to_json(result.truth)));
      note_written(truth);
    }
  });

  // run-all
  auto* run_cmd = app.add_subcommand("run-all", "run every stage from one configuration file");
  run_cmd->fallthrough();
  struct {
    fs::path config;
    std::size_t threads = 1;
  } run_args;
  run_cmd->add_option("--config", run_args.config, "run configuration (.json)")->required();
  run_cmd->add_option("--threads", run_args.threads, "worker threads for the sampling rounds");
  run_cmd->callback([&] {
    PipelineConfig config = load_pipeline_config(run_args.config);
    if (global.out_dir_set) config.out_dir = global.out_dir;
    if (global.seed_set) config.consistency.seed = global.seed;
    const PipelineResult result = run_all(config, run_args.threads);
    for (const fs::path& p : result.written) note_written(p);
    std::cout << "\n" << result.summary;
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return static_cast<int>(ExitCode::validation);
  } catch (const Error& e) {
    std::cerr << "proxysel: " << e.what() << "\n";
    return static_cast<int>(e.code());
  } catch (const std::exception& e) {
    std::cerr << "proxysel: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
