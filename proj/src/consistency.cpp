/*
 * proxysel - proxy task selection and early performance prediction
 * for large model evaluation.
 *
 * This code is released under the Apache License, Version 2.0.
 * http://www.apache.org/licenses/LICENSE-2.0
 */
#include "proxysel/consistency.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <numeric>
#include <set>
#include <thread>

#include "proxysel/errors.hpp"
#include "proxysel/rng.hpp"

namespace proxysel {

namespace {

ConsistencyConfig canonicalize(const ConsistencyConfig& in, const ScoreMatrix& m) {
  ConsistencyConfig cfg = in;
  if (cfg.rounds < 2)
    throw ValidationError("consistency rounds must be at least 2, got " +
                          std::to_string(cfg.rounds));
  if (cfg.sample_size < 3)
    throw ValidationError("consistency sample_size must be at least 3, got " +
                          std::to_string(cfg.sample_size));
  if (cfg.sample_size > m.n_models())
    throw ValidationError("consistency sample_size " + std::to_string(cfg.sample_size) +
                          " exceeds the " + std::to_string(m.n_models()) + " available models");
  if (cfg.top_t < 1) throw ValidationError("consistency top_t must be at least 1");
  if (m.n_tasks() < 2 || cfg.top_t > m.n_tasks() - 1)
    throw ValidationError("consistency top_t " + std::to_string(cfg.top_t) +
                          " exceeds the " + std::to_string(m.n_tasks() ? m.n_tasks() - 1 : 0) +
                          " candidate tasks");
  if (cfg.metrics.empty()) throw ValidationError("consistency needs at least one metric");
  std::set<Metric> seen;
  for (const Metric metric : cfg.metrics)
    if (!seen.insert(metric).second)
      throw ValidationError("duplicate metric " + to_string(metric) + " in consistency config");
  // Canonical enum order keeps the report independent of list order.
  std::sort(cfg.metrics.begin(), cfg.metrics.end(),
            [](Metric a, Metric b) { return static_cast<int>(a) < static_cast<int>(b); });
  return cfg;
}

// Stream label for a per-metric redraw: metric ordinal in the high word,
// 1-based round number in the low word.
std::uint64_t metric_round_stream(Metric metric, std::size_t round) {
  return ((static_cast<std::uint64_t>(metric) + 1) << 32) |
         static_cast<std::uint64_t>(round + 1);
}

struct RoundOutcome {
  // One subset and ranking per metric (identical subsets unless the config
  // asks for per-metric resampling).
  std::vector<std::vector<std::string>> subsets;
  std::vector<RelevanceRanking> rankings;
};

// Draws subsets until every requested metric yields a defined ranking, up
// to 1 + max_retries attempts.
void draw_rankings(const NormalizedMatrix& P, const std::string& baseline,
                   std::span<const Metric> metrics, const ConsistencyConfig& cfg,
                   std::size_t round, SplitMix64& rng, std::vector<std::string>& subset_out,
                   std::vector<RelevanceRanking>& rankings_out) {
  const ScoreMatrix& m = P.matrix;
  std::string last_error;
  for (std::size_t attempt = 0; attempt <= cfg.max_retries; ++attempt) {
    const std::vector<std::size_t> idx =
        sample_without_replacement(m.n_models(), cfg.sample_size, rng);
    std::vector<std::string> names;
    names.reserve(idx.size());
    for (const std::size_t i : idx) names.push_back(m.models()[i].name);

    std::vector<RelevanceRanking> rankings;
    rankings.reserve(metrics.size());
    try {
      for (const Metric metric : metrics)
        rankings.push_back(relevance_ranking(P, baseline, metric, names));
    } catch (const ComputationError& e) {
      last_error = e.what();
      continue;
    }
    subset_out = std::move(names);
    rankings_out = std::move(rankings);
    return;
  }
  throw ComputationError("sampling round " + std::to_string(round + 1) +
                         ": no valid subset after " + std::to_string(cfg.max_retries + 1) +
                         " draws (last: " + last_error + ")");
}

RoundOutcome run_round(const NormalizedMatrix& P, const std::string& baseline,
                       const ConsistencyConfig& cfg, std::size_t round) {
  RoundOutcome out;
  out.subsets.resize(cfg.metrics.size());
  out.rankings.resize(cfg.metrics.size());
  if (!cfg.resample_per_metric) {
    SplitMix64 rng(derive_stream(cfg.seed, round + 1));
    std::vector<std::string> subset;
    std::vector<RelevanceRanking> rankings;
    draw_rankings(P, baseline, cfg.metrics, cfg, round, rng, subset, rankings);
    for (std::size_t mi = 0; mi < cfg.metrics.size(); ++mi) {
      out.subsets[mi] = subset;
      out.rankings[mi] = std::move(rankings[mi]);
    }
  } else {
    for (std::size_t mi = 0; mi < cfg.metrics.size(); ++mi) {
      SplitMix64 rng(derive_stream(cfg.seed, metric_round_stream(cfg.metrics[mi], round)));
      const Metric one[] = {cfg.metrics[mi]};
      std::vector<RelevanceRanking> rankings;
      draw_rankings(P, baseline, one, cfg, round, rng, out.subsets[mi], rankings);
      out.rankings[mi] = std::move(rankings[0]);
    }
  }
  return out;
}

// Runs f(0..count-1), possibly on a thread pool. Results and errors land in
// per-index slots, so the outcome is identical for any thread count; the
// error from the lowest index wins.
template <typename F>
void run_indexed(std::size_t count, std::size_t threads, F&& f) {
  std::vector<std::exception_ptr> errors(count);
  if (threads == 0) threads = std::max<std::size_t>(1, std::thread::hardware_concurrency());
  if (threads <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) {
      try {
        f(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  } else {
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= count) return;
        try {
          f(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    };
    std::vector<std::thread> pool;
    const std::size_t n_threads = std::min(threads, count);
    pool.reserve(n_threads);
    for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }
  for (std::size_t i = 0; i < count; ++i)
    if (errors[i]) std::rethrow_exception(errors[i]);
}

}  // namespace

ConsistencyReport sampling_consistency_eval(const ScoreMatrix& scores, const std::string& baseline,
                                            const ConsistencyConfig& config, std::size_t threads) {
  const ConsistencyConfig cfg = canonicalize(config, scores);
  scores.task_index(baseline);  // fail fast on an unknown baseline

  const NormalizedMatrix P = normalize_pipeline(scores);

  std::vector<RelevanceRanking> full_rankings;
  full_rankings.reserve(cfg.metrics.size());
  for (const Metric metric : cfg.metrics)
    full_rankings.push_back(relevance_ranking(P, baseline, metric));

  std::vector<RoundOutcome> rounds(cfg.rounds);
  run_indexed(cfg.rounds, threads,
              [&](std::size_t j) { rounds[j] = run_round(P, baseline, cfg, j); });

  ConsistencyReport report;
  report.config = cfg;
  report.baseline = baseline;
  report.metrics.reserve(cfg.metrics.size());

  std::vector<MetricScore> metric_scores;
  for (std::size_t mi = 0; mi < cfg.metrics.size(); ++mi) {
    MetricConsistency mc;
    mc.score.metric = cfg.metrics[mi];
    mc.samples.reserve(cfg.rounds);
    mc.baseline_overlaps.reserve(cfg.rounds);
    for (std::size_t j = 0; j < cfg.rounds; ++j) {
      mc.samples.push_back(rounds[j].subsets[mi]);
      mc.baseline_overlaps.push_back(
          top_t_overlap(full_rankings[mi], rounds[j].rankings[mi], cfg.top_t));
    }
    mc.pairwise_overlaps.reserve(cfg.rounds * (cfg.rounds - 1) / 2);
    for (std::size_t j1 = 0; j1 < cfg.rounds; ++j1)
      for (std::size_t j2 = j1 + 1; j2 < cfg.rounds; ++j2)
        mc.pairwise_overlaps.push_back(
            top_t_overlap(rounds[j1].rankings[mi], rounds[j2].rankings[mi], cfg.top_t));

    mc.score.baseline_consistency =
        std::accumulate(mc.baseline_overlaps.begin(), mc.baseline_overlaps.end(), 0.0) /
        static_cast<double>(mc.baseline_overlaps.size());
    mc.score.sampling_consistency =
        std::accumulate(mc.pairwise_overlaps.begin(), mc.pairwise_overlaps.end(), 0.0) /
        static_cast<double>(mc.pairwise_overlaps.size());
    metric_scores.push_back(mc.score);
    report.metrics.push_back(std::move(mc));
  }

  if (metric_scores.size() == 1) {
    // A lone metric dominates vacuously; select_metric itself requires a
    // comparison set of at least two.
    report.outcome.selected = metric_scores.front().metric;
    report.outcome.fallback_order.push_back(metric_scores.front().metric);
  } else {
    report.outcome = select_metric(metric_scores);
  }
  return report;
}

SelectionOutcome select_metric(std::span<const MetricScore> scores) {
  if (scores.size() < 2)
    throw ValidationError("metric selection needs at least 2 metrics, got " +
                          std::to_string(scores.size()));

  SelectionOutcome out;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    bool dominates = true;
    for (std::size_t j = 0; j < scores.size(); ++j) {
      if (j == i) continue;
      if (scores[i].baseline_consistency < scores[j].baseline_consistency ||
          scores[i].sampling_consistency <= scores[j].sampling_consistency) {
        dominates = false;
        break;
      }
    }
    if (dominates) {
      out.selected = scores[i].metric;
      break;
    }
  }

  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const double sa = scores[a].baseline_consistency + scores[a].sampling_consistency;
    const double sb = scores[b].baseline_consistency + scores[b].sampling_consistency;
    if (sa != sb) return sa > sb;
    return static_cast<int>(scores[a].metric) < static_cast<int>(scores[b].metric);
  });
  out.fallback_order.reserve(order.size());
  for (const std::size_t i : order) out.fallback_order.push_back(scores[i].metric);
  return out;
}

}  // namespace proxysel
