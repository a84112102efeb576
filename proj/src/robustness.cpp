/*
 * proxysel - proxy task selection and early performance prediction
 * for large model evaluation.
 *
 * This code is released under the Apache License, Version 2.0.
 * http://www.apache.org/licenses/LICENSE-2.0
 */
#include "proxysel/robustness.hpp"

#include <algorithm>
#include <map>

#include "proxysel/errors.hpp"
#include "proxysel/normalize.hpp"

namespace proxysel {

double sample_variance(std::span<const double> v) {
  if (v.size() < 2) throw ValidationError("sample_variance: need at least 2 values");
  const double mu = sample_mean(v);
  double ss = 0.0;
  for (const double x : v) {
    const double d = x - mu;
    ss += d * d;
  }
  return ss / static_cast<double>(v.size() - 1);
}

namespace {

// Indexes one cohort by task name, checking tags, sizes, and duplicates.
std::map<std::string, const GroupScores*> index_group(std::span<const GroupScores> entries,
                                                      Group expected) {
  std::map<std::string, const GroupScores*> by_task;
  for (const GroupScores& g : entries) {
    if (g.group != expected)
      throw ValidationError("entry for task \"" + g.task + "\" is tagged " + to_string(g.group) +
                            ", expected " + to_string(expected));
    if (g.task.empty()) throw ValidationError("group entry with empty task name");
    if (g.scores.size() < 2)
      throw ValidationError(to_string(expected) + " scores for task \"" + g.task +
                            "\" need at least 2 models, got " + std::to_string(g.scores.size()));
    if (!by_task.emplace(g.task, &g).second)
      throw ValidationError("duplicate task \"" + g.task + "\" in " + to_string(expected) +
                            " group");
  }
  return by_task;
}

}  // namespace

RobustnessReport robustness_scores(std::span<const GroupScores> data,
                                   std::span<const GroupScores> noise, double epsilon_floor) {
  if (epsilon_floor <= 0.0) throw ValidationError("epsilon floor must be positive");
  if (data.empty()) throw ValidationError("data_variability group is empty");

  const auto data_by_task = index_group(data, Group::data_variability);
  const auto noise_by_task = index_group(noise, Group::random_noise);
  for (const auto& [task, unused] : data_by_task)
    if (!noise_by_task.count(task))
      throw ValidationError("task \"" + task + "\" missing from random_noise group");
  for (const auto& [task, unused] : noise_by_task)
    if (!data_by_task.count(task))
      throw ValidationError("task \"" + task + "\" missing from data_variability group");

  RobustnessReport report;
  report.epsilon_floor = epsilon_floor;
  report.entries.reserve(data_by_task.size());
  for (const auto& [task, d] : data_by_task) {
    const GroupScores* r = noise_by_task.at(task);
    TaskRobustness t;
    t.task = task;
    t.data_variance = sample_variance(d->scores);
    t.noise_variance = sample_variance(r->scores);
    t.degenerate = t.noise_variance < epsilon_floor;
    t.ratio = t.data_variance / std::max(t.noise_variance, epsilon_floor);
    t.data_count = d->scores.size();
    t.noise_count = r->scores.size();
    report.entries.push_back(std::move(t));
  }

  std::sort(report.entries.begin(), report.entries.end(),
            [](const TaskRobustness& a, const TaskRobustness& b) {
              if (a.ratio != b.ratio) return a.ratio > b.ratio;
              return a.task < b.task;
            });
  return report;
}

RobustnessReport robustness_from_matrix(const ScoreMatrix& m, double epsilon_floor) {
  for (const ModelId& model : m.models())
    if (!model.group)
      throw ValidationError("model \"" + model.name + "\" has no group label");

  const std::vector<std::size_t> data_rows = m.rows_in_group(Group::data_variability);
  const std::vector<std::size_t> noise_rows = m.rows_in_group(Group::random_noise);
  if (data_rows.size() < 2)
    throw ValidationError("data_variability group needs at least 2 models, found " +
                          std::to_string(data_rows.size()));
  if (noise_rows.size() < 2)
    throw ValidationError("random_noise group needs at least 2 models, found " +
                          std::to_string(noise_rows.size()));

  std::vector<GroupScores> data, noise;
  data.reserve(m.n_tasks());
  noise.reserve(m.n_tasks());
  for (std::size_t j = 0; j < m.n_tasks(); ++j) {
    const std::string& task = m.tasks()[j].name;
    data.push_back({Group::data_variability, task, m.column(j, data_rows)});
    noise.push_back({Group::random_noise, task, m.column(j, noise_rows)});
  }
  return robustness_scores(data, noise, epsilon_floor);
}

}  // namespace proxysel
