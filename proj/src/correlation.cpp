/*
 * proxysel - proxy task selection and early performance prediction
 * for large model evaluation.
 *
 * This code is released under the Apache License, Version 2.0.
 * http://www.apache.org/licenses/LICENSE-2.0
 */
#include "proxysel/correlation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <unordered_set>

#include "proxysel/errors.hpp"

namespace proxysel {

std::string to_string(Metric m) {
  switch (m) {
    case Metric::pearson: return "pearson";
    case Metric::spearman: return "spearman";
    case Metric::kendall: return "kendall";
  }
  throw ValidationError("unknown metric value");
}

Metric metric_from_string(std::string_view s) {
  if (s == "pearson") return Metric::pearson;
  if (s == "spearman") return Metric::spearman;
  if (s == "kendall") return Metric::kendall;
  throw ValidationError("unknown metric \"" + std::string(s) +
                        "\" (expected pearson, spearman, or kendall)");
}

namespace {

void check_pair(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size())
    throw ValidationError("correlation inputs differ in length: " + std::to_string(x.size()) +
                          " vs " + std::to_string(y.size()));
  if (x.size() < 3)
    throw ValidationError("correlation requires at least 3 observations, got " +
                          std::to_string(x.size()));
}

}  // namespace

std::vector<double> average_ranks(std::span<const double> v) {
  const std::size_t n = v.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (v[a] != v[b]) return v[a] < v[b];
    return a < b;  // stable within tie groups
  });

  std::vector<double> ranks(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && v[order[j + 1]] == v[order[i]]) ++j;
    // Positions i..j (0-based) share the average of 1-based positions.
    const double avg = static_cast<double>(i + j + 2) / 2.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = avg;
    i = j + 1;
  }
  return ranks;
}

double pearson(std::span<const double> x, std::span<const double> y) {
  check_pair(x, y);
  const std::size_t n = x.size();
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);

  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (sxx == 0.0) throw ComputationError("zero variance in first argument");
  if (syy == 0.0) throw ComputationError("zero variance in second argument");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

double spearman(std::span<const double> x, std::span<const double> y) {
  check_pair(x, y);
  // Literally Pearson over average ranks, so the identity holds bit for bit.
  return pearson(average_ranks(x), average_ranks(y));
}

double kendall(std::span<const double> x, std::span<const double> y) {
  check_pair(x, y);
  const std::size_t n = x.size();
  double concordant = 0.0, discordant = 0.0, tied_x = 0.0, tied_y = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double dx = x[i] - x[j];
      const double dy = y[i] - y[j];
      if (dx == 0.0) ++tied_x;
      if (dy == 0.0) ++tied_y;
      if (dx != 0.0 && dy != 0.0) {
        if ((dx > 0.0) == (dy > 0.0))
          ++concordant;
        else
          ++discordant;
      }
    }
  }
  const double n0 = 0.5 * static_cast<double>(n) * static_cast<double>(n - 1);
  if (tied_x == n0) throw ComputationError("all values tied in first argument");
  if (tied_y == n0) throw ComputationError("all values tied in second argument");
  // Tau-b: tie-corrected denominator; tied_x counts every pair tied in x,
  // including pairs tied in both inputs.
  const double tau = (concordant - discordant) / std::sqrt((n0 - tied_x) * (n0 - tied_y));
  return std::clamp(tau, -1.0, 1.0);
}

double correlate(Metric m, std::span<const double> x, std::span<const double> y) {
  switch (m) {
    case Metric::pearson: return pearson(x, y);
    case Metric::spearman: return spearman(x, y);
    case Metric::kendall: return kendall(x, y);
  }
  throw ValidationError("unknown metric value");
}

RelevanceRanking relevance_ranking(const NormalizedMatrix& scores, const std::string& baseline,
                                   Metric metric, std::span<const std::string> models) {
  const ScoreMatrix& m = scores.matrix;
  const std::size_t b = m.task_index(baseline);
  if (m.n_tasks() < 2)
    throw ValidationError("relevance requires at least one candidate task besides the baseline");

  std::vector<std::size_t> rows;
  if (models.empty()) {
    rows.resize(m.n_models());
    std::iota(rows.begin(), rows.end(), std::size_t{0});
  } else {
    std::set<std::size_t> row_set;
    for (const auto& name : models)
      if (!row_set.insert(m.model_index(name)).second)
        throw ValidationError("duplicate model \"" + name + "\" in subset");
    rows.assign(row_set.begin(), row_set.end());
  }
  if (rows.size() < 3)
    throw ValidationError("relevance requires at least 3 models, got " +
                          std::to_string(rows.size()));

  RelevanceRanking out;
  out.baseline = baseline;
  out.metric = metric;
  out.model_subset.reserve(rows.size());
  for (const std::size_t i : rows) out.model_subset.push_back(m.models()[i].name);

  const std::vector<double> base_col = m.column(b, rows);
  out.entries.reserve(m.n_tasks() - 1);
  for (std::size_t j = 0; j < m.n_tasks(); ++j) {
    if (j == b) continue;
    const std::vector<double> col = m.column(j, rows);
    double c = 0.0;
    try {
      c = correlate(metric, base_col, col);
    } catch (const ComputationError& e) {
      throw ComputationError("correlating task \"" + m.tasks()[j].name + "\" with baseline \"" +
                             baseline + "\": " + e.what());
    }
    out.entries.push_back({m.tasks()[j].name, c});
  }

  std::sort(out.entries.begin(), out.entries.end(),
            [](const RelevanceEntry& a, const RelevanceEntry& b) {
              if (a.relevance != b.relevance) return a.relevance > b.relevance;
              return a.task < b.task;
            });
  return out;
}

double top_t_overlap(const RelevanceRanking& a, const RelevanceRanking& b, std::size_t top_t) {
  if (top_t < 1) throw ValidationError("top_t must be at least 1");
  if (a.baseline != b.baseline)
    throw ValidationError("rankings compare different baselines: \"" + a.baseline + "\" vs \"" +
                          b.baseline + "\"");
  if (top_t > a.entries.size() || top_t > b.entries.size())
    throw ValidationError("top_t " + std::to_string(top_t) + " exceeds ranking size " +
                          std::to_string(std::min(a.entries.size(), b.entries.size())));

  std::unordered_set<std::string> head;
  head.reserve(top_t);
  for (std::size_t i = 0; i < top_t; ++i) head.insert(a.entries[i].task);
  std::size_t hits = 0;
  for (std::size_t i = 0; i < top_t; ++i) hits += head.count(b.entries[i].task);
  return static_cast<double>(hits) / static_cast<double>(top_t);
}

}  // namespace proxysel
