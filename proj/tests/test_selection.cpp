/*
 * proxysel - proxy task selection and early performance prediction
 * for large model evaluation.
 *
 * This code is released under the Apache License, Version 2.0.
 * http://www.apache.org/licenses/LICENSE-2.0
 */
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "proxysel/errors.hpp"
#include "proxysel/matrix_io.hpp"
#include "proxysel/selection.hpp"
#include "test_support.hpp"

using namespace proxysel;

namespace {

RelevanceRanking make_relevance(const std::vector<std::pair<std::string, double>>& entries) {
  RelevanceRanking r;
  r.baseline = "target";
  r.metric = Metric::kendall;
  for (const auto& [task, value] : entries) r.entries.push_back({task, value});
  return r;
}

RobustnessReport make_robustness(const std::vector<std::pair<std::string, double>>& ratios) {
  RobustnessReport report;
  for (const auto& [task, ratio] : ratios) {
    TaskRobustness t;
    t.task = task;
    t.data_variance = ratio;
    t.noise_variance = 1.0;
    t.ratio = ratio;
    t.data_count = 5;
    t.noise_count = 3;
    report.entries.push_back(std::move(t));
  }
  return report;
}

double weight_of(const ProxySet& set, const std::string& task) {
  for (const ProxyTask& p : set.entries)
    if (p.task == task) return p.weight;
  throw std::runtime_error("task not retained: " + task);
}

ScoredRanking ranking_from_json(const nlohmann::json& j, const std::vector<std::string>& names) {
  ScoredRanking r;
  r.label = j.at("label").get<std::string>();
  r.orientation = orientation_from_string(j.at("orientation").get<std::string>());
  r.names = names;
  for (const auto& v : j.at("values")) r.values.push_back(v.get<double>());
  return r;
}

}  // namespace

TEST_CASE("a single retained task carries all the weight") {
  const ProxySet set = select_proxies(make_relevance({{"only", 0.5}}),
                                      make_robustness({{"only", 2.0}}));
  REQUIRE(set.entries.size() == 1);
  CHECK(set.entries[0].task == "only");
  CHECK(set.entries[0].weight == 1.0);
  CHECK(set.dropped_tasks.empty());
  CHECK(set.missing_robustness.empty());
}

TEST_CASE("equal relevance and robustness split the weight exactly in half") {
  SelectionConfig cfg;
  cfg.robustness_threshold = 0.5;  // default 1.0 would exclude ratio 1 tasks
  const ProxySet set = select_proxies(make_relevance({{"a", 0.5}, {"b", 0.5}}),
                                      make_robustness({{"a", 1.0}, {"b", 1.0}}), cfg);
  REQUIRE(set.entries.size() == 2);
  CHECK(set.entries[0].weight == 0.5);
  CHECK(set.entries[1].weight == 0.5);
}

TEST_CASE("unequal relevance and robustness weight the stronger task up") {
  const ProxySet set = select_proxies(make_relevance({{"a", 0.6}, {"b", 0.3}}),
                                      make_robustness({{"a", 10.0}, {"b", 2.0}}));
  REQUIRE(set.entries.size() == 2);
  CHECK(set.entries[0].task == "a");
  // Full-precision expectations for w = c*sigmoid(R) / sum.
  CHECK(set.entries[0].weight == doctest::Approx(0.6942426642355083).epsilon(1e-12));
  CHECK(set.entries[1].weight == doctest::Approx(0.30575733576449177).epsilon(1e-12));
  // Coarse bounds independently verifiable by hand.
  CHECK(std::abs(set.entries[0].weight - 0.69424) < 1e-4);
  CHECK(std::abs(set.entries[1].weight - 0.30576) < 1e-4);
  CHECK(set.entries[0].score == doctest::Approx(0.6 * (1.0 / (1.0 + std::exp(-10.0)))));
}

TEST_CASE("a second worked example with moderate ratios") {
  const ProxySet set = select_proxies(make_relevance({{"a", 0.8}, {"b", 0.5}}),
                                      make_robustness({{"a", 5.0}, {"b", 2.0}}));
  CHECK(weight_of(set, "a") == doctest::Approx(0.6434147715377109).epsilon(1e-12));
  CHECK(weight_of(set, "b") == doctest::Approx(0.3565852284622891).epsilon(1e-12));
}

TEST_CASE("log-ratio transform squashes the ratio's logarithm") {
  SelectionConfig cfg;
  cfg.robustness_threshold = 0.5;
  cfg.transform_log_ratio = true;
  // ln(1) = 0, so both ratios squash to exactly 0.5 and the weights reduce
  // to the relevance proportions 1.0 : 0.5.
  const ProxySet set = select_proxies(make_relevance({{"a", 1.0}, {"b", 0.5}}),
                                      make_robustness({{"a", 1.0}, {"b", 1.0}}), cfg);
  CHECK(weight_of(set, "a") == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(weight_of(set, "b") == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(set.config.transform_log_ratio);
}

TEST_CASE("weights are positive and sum to one across random draws") {
  oracle::XorShift rng(20240815);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 1 + rng.below(8);
    std::vector<std::pair<std::string, double>> rel, rob;
    for (std::size_t i = 0; i < n; ++i) {
      const std::string task = "t" + std::to_string(i);
      rel.push_back({task, 0.05 + 0.95 * rng.uniform()});
      rob.push_back({task, 1.01 + 19.0 * rng.uniform()});
    }
    const ProxySet set = select_proxies(make_relevance(rel), make_robustness(rob));
    REQUIRE(set.entries.size() == n);
    double total = 0.0;
    for (const ProxyTask& p : set.entries) {
      CHECK(p.weight > 0.0);
      total += p.weight;
    }
    CHECK(std::abs(total - 1.0) <= 1e-12);
  }
}

TEST_CASE("weights respond monotonically to relevance and robustness") {
  oracle::XorShift rng(777);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<std::pair<std::string, double>> rel, rob;
    for (int i = 0; i < 4; ++i) {
      const std::string task = "t" + std::to_string(i);
      rel.push_back({task, 0.1 + 0.8 * rng.uniform()});
      rob.push_back({task, 1.1 + 5.0 * rng.uniform()});
    }
    const ProxySet before = select_proxies(make_relevance(rel), make_robustness(rob));
    const std::size_t bump = rng.below(4);
    const std::string bumped = "t" + std::to_string(bump);

    // Raising one task's robustness must not lower its weight and must not
    // raise anyone else's.
    auto rob_up = rob;
    rob_up[bump].second += 0.5 + rng.uniform();
    const ProxySet after_r = select_proxies(make_relevance(rel), make_robustness(rob_up));
    CHECK(weight_of(after_r, bumped) >= weight_of(before, bumped) - 1e-15);
    for (int i = 0; i < 4; ++i) {
      if (static_cast<std::size_t>(i) == bump) continue;
      const std::string other = "t" + std::to_string(i);
      CHECK(weight_of(after_r, other) <= weight_of(before, other) + 1e-15);
    }

    // Same for relevance.
    auto rel_up = rel;
    rel_up[bump].second += 0.1;
    const ProxySet after_c = select_proxies(make_relevance(rel_up), make_robustness(rob));
    CHECK(weight_of(after_c, bumped) >= weight_of(before, bumped) - 1e-15);
  }
}

TEST_CASE("thresholds are strict and sort tasks into drop buckets") {
  SelectionConfig cfg;
  cfg.relevance_threshold = 0.5;
  cfg.robustness_threshold = 2.0;
  const ProxySet set = select_proxies(
      make_relevance({{"keep", 0.6}, {"edge_rel", 0.5}, {"edge_rob", 0.9}, {"unmeasured", 0.9}}),
      make_robustness({{"keep", 3.0}, {"edge_rel", 3.0}, {"edge_rob", 2.0}}), cfg);
  REQUIRE(set.entries.size() == 1);
  CHECK(set.entries[0].task == "keep");
  CHECK(set.entries[0].weight == 1.0);
  // Exactly-at-threshold values are excluded on both axes.
  CHECK(set.dropped_tasks == std::vector<std::string>{"edge_rel", "edge_rob"});
  // No robustness measurement is tracked separately from a failed test.
  CHECK(set.missing_robustness == std::vector<std::string>{"unmeasured"});
}

TEST_CASE("entries are ordered by weight, ties by name") {
  SelectionConfig cfg;
  cfg.robustness_threshold = 0.5;
  const ProxySet set = select_proxies(
      make_relevance({{"zeta", 0.4}, {"alpha", 0.4}, {"big", 0.8}}),
      make_robustness({{"zeta", 2.0}, {"alpha", 2.0}, {"big", 2.0}}), cfg);
  REQUIRE(set.entries.size() == 3);
  CHECK(set.entries[0].task == "big");
  CHECK(set.entries[1].task == "alpha");
  CHECK(set.entries[2].task == "zeta");
}

TEST_CASE("an empty retained set is a computation error") {
  try {
    (void)select_proxies(make_relevance({{"a", -0.2}}), make_robustness({{"a", 5.0}}));
    FAIL("expected ComputationError");
  } catch (const ComputationError& e) {
    const std::string what = e.what();
    CHECK(what.find("no tasks retained") != std::string::npos);
    CHECK(what.find("relax the thresholds") != std::string::npos);
  }
}

TEST_CASE("selection config validation") {
  const RelevanceRanking rel = make_relevance({{"a", 0.5}});
  const RobustnessReport rob = make_robustness({{"a", 5.0}});
  SelectionConfig cfg;
  cfg.relevance_threshold = -0.1;
  CHECK_THROWS_WITH_AS((void)select_proxies(rel, rob, cfg),
                       "relevance threshold must be non-negative", ValidationError);
  cfg = {};
  cfg.robustness_threshold = -1.0;
  CHECK_THROWS_WITH_AS((void)select_proxies(rel, rob, cfg),
                       "robustness threshold must be non-negative", ValidationError);
  cfg = {};
  cfg.sigmoid_steepness = 0.0;
  CHECK_THROWS_WITH_AS((void)select_proxies(rel, rob, cfg), "sigmoid steepness must be positive",
                       ValidationError);
}

TEST_CASE("embedded task statistics come from the feature step") {
  const ScoreMatrix m({{"m0"}, {"m1"}, {"m2"}},
                      {{"a"}, {"b"}, {"target"}},
                      {1.0, 9.0, 1.5,  //
                       2.0, 7.0, 2.5,  //
                       3.0, 8.0, 3.5});
  const NormalizedMatrix feat = feature_normalize(wrap_raw(m));
  const ProxySet set = select_proxies(make_relevance({{"a", 0.9}}),
                                      make_robustness({{"a", 5.0}, {"b", 5.0}}),
                                      SelectionConfig{}, &feat);
  REQUIRE(set.task_stats.size() == 1);  // stats only for retained tasks
  CHECK(set.task_stats.at("a").mean == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(set.task_stats.at("a").stddev == doctest::Approx(1.0).epsilon(1e-15));

  const NormalizedMatrix raw = wrap_raw(m);
  CHECK_THROWS_WITH_AS((void)select_proxies(make_relevance({{"a", 0.9}}),
                                            make_robustness({{"a", 5.0}}), SelectionConfig{}, &raw),
                       "statistics matrix must be past the feature step", ValidationError);
}

TEST_CASE("predict aggregates the weighted proxy scores") {
  SelectionConfig cfg;
  cfg.robustness_threshold = 0.5;
  const ProxySet uniform = select_proxies(make_relevance({{"a", 0.5}, {"b", 0.5}}),
                                          make_robustness({{"a", 1.0}, {"b", 1.0}}), cfg);
  NamedScores ckpt;
  ckpt.name = "run-1";
  ckpt.scores = {{"a", 40.0}, {"b", 60.0}, {"ignored", 99.0}};
  const Prediction p = predict(uniform, ckpt);
  CHECK(p.checkpoint == "run-1");
  CHECK(p.aggregation == Aggregation::weighted_mean);
  CHECK(p.predicted_score == doctest::Approx(50.0).epsilon(1e-15));  // plain mean
  REQUIRE(p.contributions.size() == 2);

  const ProxySet solo = select_proxies(make_relevance({{"a", 0.9}}),
                                       make_robustness({{"a", 3.0}}));
  const Prediction exact = predict(solo, ckpt);
  CHECK(exact.predicted_score == 40.0);  // weight 1.0 passes the score through
}

TEST_CASE("predict validates the checkpoint's coverage") {
  const ProxySet set = select_proxies(make_relevance({{"a", 0.5}}), make_robustness({{"a", 2.0}}));
  NamedScores missing;
  missing.name = "run-x";
  missing.scores = {{"other", 1.0}};
  CHECK_THROWS_WITH_AS((void)predict(set, missing),
                       "checkpoint \"run-x\" has no score for task \"a\"", ValidationError);
  NamedScores infinite;
  infinite.name = "run-y";
  infinite.scores = {{"a", std::numeric_limits<double>::infinity()}};
  CHECK_THROWS_WITH_AS((void)predict(set, infinite),
                       "checkpoint \"run-y\" has a non-finite score for task \"a\"",
                       ValidationError);
  const ProxySet empty;
  CHECK_THROWS_WITH_AS((void)predict(empty, missing), "proxy set has no retained tasks",
                       ValidationError);
}

TEST_CASE("normalized aggregation z-scores through the embedded moments") {
  const ScoreMatrix m({{"m0"}, {"m1"}, {"m2"}},
                      {{"a"}, {"target"}},
                      {10.0, 1.0,  //
                       20.0, 2.0,  //
                       30.0, 3.0});
  const NormalizedMatrix feat = feature_normalize(wrap_raw(m));
  const ProxySet set = select_proxies(make_relevance({{"a", 0.9}}),
                                      make_robustness({{"a", 5.0}}), SelectionConfig{}, &feat);
  NamedScores ckpt;
  ckpt.name = "c";
  ckpt.scores = {{"a", 25.0}};
  const Prediction p = predict(set, ckpt, Aggregation::weighted_mean_normalized);
  // Column a has mean 20, sd 10, so 25 normalizes to 0.5.
  CHECK(p.predicted_score == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(p.contributions[0].score == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(p.aggregation == Aggregation::weighted_mean_normalized);

  // Without embedded statistics the normalized mode is unavailable.
  const ProxySet bare = select_proxies(make_relevance({{"a", 0.9}}), make_robustness({{"a", 5.0}}));
  CHECK_THROWS_WITH_AS((void)predict(bare, ckpt, Aggregation::weighted_mean_normalized),
                       "proxy set lacks task statistics for \"a\"; normalized aggregation unavailable",
                       ValidationError);
}

TEST_CASE("predict is linear in the checkpoint scores") {
  const ProxySet set = select_proxies(
      make_relevance({{"a", 0.7}, {"b", 0.4}, {"c", 0.9}}),
      make_robustness({{"a", 4.0}, {"b", 2.5}, {"c", 7.0}}));
  oracle::XorShift rng(55);
  for (int trial = 0; trial < 50; ++trial) {
    NamedScores s{"s", {}}, u{"u", {}}, mix{"mix", {}};
    const double alpha = rng.uniform() * 4.0 - 2.0;
    const double beta = rng.uniform() * 4.0 - 2.0;
    for (const std::string task : {"a", "b", "c"}) {
      const double sv = rng.uniform() * 100.0;
      const double uv = rng.uniform() * 100.0;
      s.scores[task] = sv;
      u.scores[task] = uv;
      mix.scores[task] = alpha * sv + beta * uv;
    }
    const double combined = predict(set, mix).predicted_score;
    const double separate =
        alpha * predict(set, s).predicted_score + beta * predict(set, u).predicted_score;
    CHECK(combined == doctest::Approx(separate).epsilon(1e-9));
  }
}

TEST_CASE("discordant pair counting handles ties and orientations") {
  ScoredRanking truth{"truth", Orientation::higher_better, {"a", "b", "c", "d"},
                      {4.0, 3.0, 2.0, 1.0}};
  // Identical ranking: zero discordance.
  CHECK(count_discordant_pairs(truth, truth).discordant_pairs == 0.0);

  // Full reversal with no ties: every pair discordant.
  ScoredRanking reversed = truth;
  reversed.values = {1.0, 2.0, 3.0, 4.0};
  const RankComparison rev = count_discordant_pairs(truth, reversed);
  CHECK(rev.total_pairs == 6);
  CHECK(rev.discordant_pairs == 6.0);

  // The count is symmetric in its arguments.
  CHECK(count_discordant_pairs(reversed, truth).discordant_pairs == 6.0);

  // lower_better flips the reversal back into agreement.
  ScoredRanking lower = reversed;
  lower.orientation = Orientation::lower_better;
  CHECK(count_discordant_pairs(truth, lower).discordant_pairs == 0.0);

  // A tie on one side only costs half a pair; tied on both costs nothing.
  ScoredRanking tied = truth;
  tied.values = {4.0, 4.0, 2.0, 1.0};
  CHECK(count_discordant_pairs(truth, tied).discordant_pairs == 0.5);
  CHECK(count_discordant_pairs(tied, tied).discordant_pairs == 0.0);
}

TEST_CASE("discordant pair counting matches the reference on random data") {
  oracle::XorShift rng(808);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + rng.below(12);
    ScoredRanking a{"a", Orientation::higher_better, {}, {}};
    ScoredRanking b{"b", Orientation::higher_better, {}, {}};
    std::vector<double> va, vb;
    for (std::size_t i = 0; i < n; ++i) {
      a.names.push_back("m" + std::to_string(i));
      b.names.push_back("m" + std::to_string(i));
      va.push_back(static_cast<double>(rng.below(6)));
      vb.push_back(static_cast<double>(rng.below(6)));
    }
    a.values = va;
    b.values = vb;
    const RankComparison got = count_discordant_pairs(a, b);
    CHECK(got.discordant_pairs == oracle::discordant_pairs(va, vb));
    CHECK(got.total_pairs == n * (n - 1) / 2);
  }
}

TEST_CASE("rankings are matched by name, not position") {
  ScoredRanking a{"a", Orientation::higher_better, {"x", "y", "z"}, {3.0, 2.0, 1.0}};
  ScoredRanking b{"b", Orientation::higher_better, {"z", "x", "y"}, {1.0, 3.0, 2.0}};
  // Same scores under a permuted listing: perfectly concordant.
  CHECK(count_discordant_pairs(a, b).discordant_pairs == 0.0);
}

TEST_CASE("rank comparison validation") {
  ScoredRanking a{"a", Orientation::higher_better, {"x", "y"}, {1.0, 2.0}};
  ScoredRanking short_b{"b", Orientation::higher_better, {"x"}, {1.0}};
  CHECK_THROWS_WITH_AS((void)count_discordant_pairs(a, short_b), "rankings differ in size: 2 vs 1",
                       ValidationError);
  ScoredRanking lone{"b", Orientation::higher_better, {"x"}, {1.0}};
  CHECK_THROWS_WITH_AS((void)count_discordant_pairs(lone, lone),
                       "rank comparison needs at least 2 entries, got 1", ValidationError);
  ScoredRanking ragged{"b", Orientation::higher_better, {"x", "y"}, {1.0}};
  CHECK_THROWS_WITH_AS((void)count_discordant_pairs(a, ragged),
                       "ranking names and values differ in length", ValidationError);
  ScoredRanking dupe{"b", Orientation::higher_better, {"x", "x"}, {1.0, 2.0}};
  CHECK_THROWS_WITH_AS((void)count_discordant_pairs(a, dupe),
                       "duplicate name \"x\" in second ranking", ValidationError);
  ScoredRanking other{"b", Orientation::higher_better, {"x", "q"}, {1.0, 2.0}};
  CHECK_THROWS_WITH_AS((void)count_discordant_pairs(a, other),
                       "name \"y\" missing from second ranking", ValidationError);
}

TEST_CASE("shipped strategy series reproduce the published discordance") {
  const nlohmann::json doc =
      nlohmann::json::parse(testsup::slurp(testsup::fixture_path("strategy_scores.json")));
  std::vector<std::string> names;
  for (const auto& n : doc.at("ground_truth").at("names")) names.push_back(n.get<std::string>());
  const ScoredRanking truth = ranking_from_json(doc.at("ground_truth"), names);

  std::map<std::string, double> expected{{"perplexity", 4.0},
                                         {"proxy-chat", 2.0},
                                         {"proxy-base", 4.0},
                                         {"proxy-base-chat", 1.0}};
  for (const auto& series : doc.at("series")) {
    const ScoredRanking probe = ranking_from_json(series, names);
    const RankComparison cmp = count_discordant_pairs(probe, truth);
    CHECK(cmp.total_pairs == 10);
    CHECK(cmp.discordant_pairs == expected.at(probe.label));
  }
}

TEST_CASE("enum spellings round trip") {
  CHECK(aggregation_from_string("weighted_mean") == Aggregation::weighted_mean);
  CHECK(aggregation_from_string("weighted_mean_normalized") ==
        Aggregation::weighted_mean_normalized);
  CHECK_THROWS_AS((void)aggregation_from_string("mean"), ValidationError);
  CHECK(orientation_from_string("higher") == Orientation::higher_better);
  CHECK(orientation_from_string("lower_better") == Orientation::lower_better);
  CHECK_THROWS_AS((void)orientation_from_string("down"), ValidationError);
  CHECK(strategy_from_string("base_chat") == Strategy::base_chat);
  CHECK(to_string(Strategy::base_chat) == "base_chat");
  CHECK_THROWS_AS((void)strategy_from_string("hybrid"), ValidationError);
}

TEST_CASE("strategy run selects, predicts, and compares end to end") {
  const ScoreMatrix all = load_matrix(testsup::fixture_path("checkpoint_candidates.csv"));
  std::vector<std::string> model_names;
  for (const ModelId& m : all.models()) model_names.push_back(m.name);
  std::vector<std::string> proxy_tasks;
  for (const TaskId& t : all.tasks())
    if (t.name != "T-eval") proxy_tasks.push_back(t.name);
  const std::vector<std::string> target_task{"T-eval"};

  StrategyInputs inputs;
  inputs.target = all.submatrix(model_names, target_task);
  inputs.candidates_chat = all.submatrix(model_names, proxy_tasks);
  inputs.robustness = robustness_from_matrix(
      load_matrix_with_manifest(testsup::fixture_path("small_model_scores.csv"),
                                testsup::fixture_path("small_model_groups.json")));
  inputs.metric = Metric::kendall;
  inputs.checkpoints_chat = load_score_table(testsup::fixture_path("checkpoint_proxy_scores.csv"));
  const nlohmann::json doc =
      nlohmann::json::parse(testsup::slurp(testsup::fixture_path("strategy_scores.json")));
  std::vector<std::string> names;
  for (const auto& n : doc.at("ground_truth").at("names")) names.push_back(n.get<std::string>());
  inputs.ground_truth = ranking_from_json(doc.at("ground_truth"), names);

  const StrategyResult result = strategy_run(Strategy::chat, inputs);
  CHECK(result.strategy == Strategy::chat);
  CHECK(result.relevance.baseline == "T-eval");
  CHECK(result.relevance.entries[0].task == "CHID");
  CHECK(result.relevance.entries[0].relevance == doctest::Approx(0.4).epsilon(1e-12));

  REQUIRE(result.proxies.entries.size() == 4);
  CHECK(result.proxies.entries[0].task == "CHID");
  CHECK(result.proxies.entries[0].weight == doctest::Approx(0.4000016507510663).epsilon(1e-12));
  CHECK(weight_of(result.proxies, "C3") == doctest::Approx(0.20000082537553315).epsilon(1e-12));
  CHECK(weight_of(result.proxies, "OCNLI") == doctest::Approx(0.20000082537552538).epsilon(1e-12));
  CHECK(weight_of(result.proxies, "CMMLU") == doctest::Approx(0.19999669849787516).epsilon(1e-12));
  CHECK(result.proxies.dropped_tasks == std::vector<std::string>{"RTE", "CMNLI"});

  REQUIRE(result.predictions.size() == 5);
  const std::map<std::string, double> expected_predictions{
      {"mix-ppl", 50.256105342679255},   {"mix-filtered", 50.61410426143731},
      {"mix-diversity", 51.41411020414111}, {"anneal", 55.15012388886744},
      {"no-anneal", 54.04211807822369}};
  for (const Prediction& p : result.predictions)
    CHECK(p.predicted_score ==
          doctest::Approx(expected_predictions.at(p.checkpoint)).epsilon(1e-12));

  REQUIRE(result.comparison.has_value());
  CHECK(result.comparison->total_pairs == 10);
  CHECK(result.comparison->discordant_pairs == 1.0);

  // The chat and base strategies coincide when both variants share one
  // score matrix and one checkpoint table.
  StrategyInputs mirrored = inputs;
  mirrored.candidates_base = inputs.candidates_chat;
  mirrored.checkpoints_base = inputs.checkpoints_chat;
  const StrategyResult base_result = strategy_run(Strategy::base, mirrored);
  CHECK(base_result.relevance == result.relevance);
  CHECK(base_result.proxies == result.proxies);
  REQUIRE(base_result.predictions.size() == result.predictions.size());
  for (std::size_t i = 0; i < result.predictions.size(); ++i)
    CHECK(base_result.predictions[i] == result.predictions[i]);

  // base_chat selects on chat rows but predicts from the base checkpoints.
  const StrategyResult bc = strategy_run(Strategy::base_chat, mirrored);
  CHECK(bc.relevance == result.relevance);
  CHECK(bc.predictions[0] == base_result.predictions[0]);
}

TEST_CASE("strategy run with no checkpoints yields no predictions") {
  const ScoreMatrix all = load_matrix(testsup::fixture_path("checkpoint_candidates.csv"));
  std::vector<std::string> model_names;
  for (const ModelId& m : all.models()) model_names.push_back(m.name);
  std::vector<std::string> proxy_tasks;
  for (const TaskId& t : all.tasks())
    if (t.name != "T-eval") proxy_tasks.push_back(t.name);

  StrategyInputs inputs;
  inputs.target = all.submatrix(model_names, std::vector<std::string>{"T-eval"});
  inputs.candidates_chat = all.submatrix(model_names, proxy_tasks);
  inputs.robustness = robustness_from_matrix(
      load_matrix_with_manifest(testsup::fixture_path("small_model_scores.csv"),
                                testsup::fixture_path("small_model_groups.json")));
  inputs.ground_truth = ScoredRanking{"T-eval", Orientation::higher_better,
                                      {"a", "b"}, {1.0, 2.0}};
  const StrategyResult result = strategy_run(Strategy::chat, inputs);
  CHECK(result.predictions.empty());
  CHECK_FALSE(result.comparison.has_value());
  CHECK_FALSE(result.proxies.entries.empty());
}

TEST_CASE("strategy run validation") {
  StrategyInputs inputs;
  CHECK_THROWS_WITH_AS((void)strategy_run(Strategy::chat, inputs),
                       "strategy run requires a target matrix", ValidationError);

  const ScoreMatrix all = load_matrix(testsup::fixture_path("checkpoint_candidates.csv"));
  std::vector<std::string> model_names;
  for (const ModelId& m : all.models()) model_names.push_back(m.name);
  inputs.target = all.submatrix(model_names, std::vector<std::string>{"C3", "T-eval"});
  CHECK_THROWS_WITH_AS((void)strategy_run(Strategy::chat, inputs),
                       "target matrix must have exactly one task column, got 2", ValidationError);

  inputs.target = all.submatrix(model_names, std::vector<std::string>{"T-eval"});
  CHECK_THROWS_WITH_AS((void)strategy_run(Strategy::chat, inputs),
                       "strategy chat requires the chat candidate matrix", ValidationError);
  CHECK_THROWS_WITH_AS((void)strategy_run(Strategy::base, inputs),
                       "strategy base requires the base candidate matrix", ValidationError);

  // A candidate matrix that already contains the target column is refused.
  inputs.candidates_chat = all;
  CHECK_THROWS_WITH_AS((void)strategy_run(Strategy::chat, inputs),
                       "target task \"T-eval\" already present in the candidate matrix",
                       ValidationError);

  // Row counts must pair off exactly.
  std::vector<std::string> proxy_tasks;
  for (const TaskId& t : all.tasks())
    if (t.name != "T-eval") proxy_tasks.push_back(t.name);
  const std::vector<std::string> fewer(model_names.begin(), model_names.end() - 1);
  inputs.candidates_chat = all.submatrix(fewer, proxy_tasks);
  CHECK_THROWS_WITH_AS((void)strategy_run(Strategy::chat, inputs),
                       "candidate rows (4) must pair one-to-one with target rows (5)",
                       ValidationError);
}
