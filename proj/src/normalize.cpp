/*
 * proxysel - proxy task selection and early performance prediction
 * for large model evaluation.
 *
 * This code is released under the Apache License, Version 2.0.
 * http://www.apache.org/licenses/LICENSE-2.0
 */
#include "proxysel/normalize.hpp"

#include <cmath>
#include <utility>

#include "proxysel/errors.hpp"

namespace proxysel {

std::string to_string(Stage s) {
  switch (s) {
    case Stage::raw: return "raw";
    case Stage::feature_normalized: return "feature_normalized";
    case Stage::fully_normalized: return "fully_normalized";
  }
  throw ValidationError("unknown stage value");
}

Stage stage_from_string(std::string_view s) {
  if (s == "raw") return Stage::raw;
  if (s == "feature_normalized") return Stage::feature_normalized;
  if (s == "fully_normalized") return Stage::fully_normalized;
  throw ValidationError("unknown stage \"" + std::string(s) + "\"");
}

double sample_mean(std::span<const double> v) {
  if (v.empty()) throw ValidationError("sample_mean: need at least 1 value");
  double sum = 0.0;
  for (const double x : v) sum += x;
  return sum / static_cast<double>(v.size());
}

double sample_stddev(std::span<const double> v) {
  if (v.size() < 2) throw ValidationError("sample_stddev: need at least 2 values");
  // Two-pass formulation for numerical stability.
  const double mu = sample_mean(v);
  double ss = 0.0;
  for (const double x : v) {
    const double d = x - mu;
    ss += d * d;
  }
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

namespace {

void require_complete(const ScoreMatrix& m) {
  if (!m.has_missing()) return;
  std::size_t count = 0;
  for (const auto flag : m.missing_mask()) count += flag != 0;
  throw ValidationError("normalization requires a complete matrix; found " +
                        std::to_string(count) + " missing cells");
}

}  // namespace

NormalizedMatrix wrap_raw(ScoreMatrix m) {
  return NormalizedMatrix{std::move(m), Stage::raw, {}, {}};
}

NormalizedMatrix feature_normalize(const NormalizedMatrix& raw) {
  if (raw.stage != Stage::raw)
    throw ValidationError("feature step requires a raw matrix, got stage " + to_string(raw.stage));
  const ScoreMatrix& m = raw.matrix;
  require_complete(m);

  std::vector<Moments> stats(m.n_tasks());
  std::vector<double> out(m.n_models() * m.n_tasks());
  for (std::size_t j = 0; j < m.n_tasks(); ++j) {
    const std::vector<double> col = m.column(j);
    const double mu = sample_mean(col);
    const double sd = sample_stddev(col);
    if (sd == 0.0)
      throw ComputationError("task \"" + m.tasks()[j].name +
                             "\" has zero variance across models");
    stats[j] = {mu, sd};
    for (std::size_t i = 0; i < m.n_models(); ++i)
      out[i * m.n_tasks() + j] = (col[i] - mu) / sd;
  }
  ScoreMatrix scaled(m.models(), m.tasks(), std::move(out));
  return NormalizedMatrix{std::move(scaled), Stage::feature_normalized, std::move(stats), {}};
}

NormalizedMatrix sample_normalize(const NormalizedMatrix& feature) {
  if (feature.stage != Stage::feature_normalized)
    throw ValidationError("sample step requires a feature-normalized matrix, got stage " +
                          to_string(feature.stage));
  const ScoreMatrix& m = feature.matrix;
  if (m.n_tasks() < 2)
    throw ValidationError("sample step requires at least 2 tasks, got " +
                          std::to_string(m.n_tasks()));

  std::vector<Moments> stats(m.n_models());
  std::vector<double> out(m.n_models() * m.n_tasks());
  for (std::size_t i = 0; i < m.n_models(); ++i) {
    const std::vector<double> row = m.row(i);
    const double mu = sample_mean(row);
    const double sd = sample_stddev(row);
    if (sd == 0.0)
      throw ComputationError("model \"" + m.models()[i].name +
                             "\" has zero variance across feature-normalized tasks");
    stats[i] = {mu, sd};
    for (std::size_t j = 0; j < m.n_tasks(); ++j)
      out[i * m.n_tasks() + j] = (row[j] - mu) / sd;
  }
  ScoreMatrix scaled(m.models(), m.tasks(), std::move(out));
  return NormalizedMatrix{std::move(scaled), Stage::fully_normalized, feature.task_stats,
                          std::move(stats)};
}

NormalizedMatrix normalize_pipeline(const ScoreMatrix& m) {
  return sample_normalize(feature_normalize(wrap_raw(m)));
}

}  // namespace proxysel
