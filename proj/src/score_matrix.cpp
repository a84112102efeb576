/*
 * proxysel - proxy task selection and early performance prediction
 * for large model evaluation.
 *
 * This code is released under the Apache License, Version 2.0.
 * http://www.apache.org/licenses/LICENSE-2.0
 */
#include "proxysel/score_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <utility>

#include "proxysel/errors.hpp"

namespace proxysel {

std::string to_string(Variant v) {
  switch (v) {
    case Variant::chat: return "chat";
    case Variant::base: return "base";
    case Variant::unspecified: return "unspecified";
  }
  throw ValidationError("unknown variant value");
}

std::string to_string(Group g) {
  switch (g) {
    case Group::data_variability: return "data_variability";
    case Group::random_noise: return "random_noise";
  }
  throw ValidationError("unknown group value");
}

Variant variant_from_string(std::string_view s) {
  if (s == "chat") return Variant::chat;
  if (s == "base") return Variant::base;
  if (s == "unspecified") return Variant::unspecified;
  throw ValidationError("unknown variant \"" + std::string(s) +
                        "\" (expected chat, base, or unspecified)");
}

Group group_from_string(std::string_view s) {
  if (s == "data_variability") return Group::data_variability;
  if (s == "random_noise") return Group::random_noise;
  throw ValidationError("unknown group \"" + std::string(s) +
                        "\" (expected data_variability or random_noise)");
}

ScoreMatrix::ScoreMatrix(std::vector<ModelId> models, std::vector<TaskId> tasks,
                         std::vector<double> scores, std::vector<std::uint8_t> missing)
    : models_(std::move(models)),
      tasks_(std::move(tasks)),
      scores_(std::move(scores)),
      missing_(std::move(missing)) {
  if (models_.size() < 2)
    throw ValidationError("matrix requires at least 2 model rows, got " +
                          std::to_string(models_.size()));
  if (tasks_.empty()) throw ValidationError("matrix requires at least 1 task column");
  const std::size_t cells = models_.size() * tasks_.size();
  if (scores_.size() != cells)
    throw ValidationError("score buffer has " + std::to_string(scores_.size()) +
                          " entries, expected " + std::to_string(cells));
  if (!missing_.empty() && missing_.size() != cells)
    throw ValidationError("missing mask has " + std::to_string(missing_.size()) +
                          " entries, expected " + std::to_string(cells));

  for (std::size_t i = 0; i < models_.size(); ++i) {
    if (models_[i].name.empty()) throw ValidationError("empty model name at row " + std::to_string(i));
    if (!model_index_.emplace(models_[i].name, i).second)
      throw ValidationError("duplicate model name \"" + models_[i].name + "\"");
  }
  for (std::size_t j = 0; j < tasks_.size(); ++j) {
    if (tasks_[j].name.empty()) throw ValidationError("empty task name at column " + std::to_string(j));
    if (!task_index_.emplace(tasks_[j].name, j).second)
      throw ValidationError("duplicate task name \"" + tasks_[j].name + "\"");
  }

  bool any_missing = false;
  for (std::size_t i = 0; i < models_.size(); ++i) {
    for (std::size_t j = 0; j < tasks_.size(); ++j) {
      const std::size_t c = i * tasks_.size() + j;
      if (!missing_.empty() && missing_[c] != 0) {
        scores_[c] = 0.0;  // canonical placeholder so equality stays meaningful
        any_missing = true;
        continue;
      }
      if (!std::isfinite(scores_[c]))
        throw ValidationError("non-finite score at model \"" + models_[i].name + "\", task \"" +
                              tasks_[j].name + "\"");
    }
  }
  if (!any_missing) missing_.clear();
}

bool ScoreMatrix::is_missing(std::size_t model, std::size_t task) const {
  check_cell(model, task);
  return !missing_.empty() && missing_[model * tasks_.size() + task] != 0;
}

double ScoreMatrix::at(std::size_t model, std::size_t task) const {
  check_cell(model, task);
  if (is_missing(model, task))
    throw ValidationError("score for model \"" + models_[model].name + "\", task \"" +
                          tasks_[task].name + "\" is missing");
  return scores_[model * tasks_.size() + task];
}

void ScoreMatrix::check_cell(std::size_t model, std::size_t task) const {
  if (model >= models_.size())
    throw ValidationError("model row " + std::to_string(model) + " out of range");
  if (task >= tasks_.size())
    throw ValidationError("task column " + std::to_string(task) + " out of range");
}

bool ScoreMatrix::has_model(std::string_view name) const noexcept {
  return model_index_.find(name) != model_index_.end();
}

bool ScoreMatrix::has_task(std::string_view name) const noexcept {
  return task_index_.find(name) != task_index_.end();
}

std::size_t ScoreMatrix::model_index(std::string_view name) const {
  const auto it = model_index_.find(name);
  if (it == model_index_.end())
    throw ValidationError("unknown model \"" + std::string(name) + "\"");
  return it->second;
}

std::size_t ScoreMatrix::task_index(std::string_view name) const {
  const auto it = task_index_.find(name);
  if (it == task_index_.end()) throw ValidationError("unknown task \"" + std::string(name) + "\"");
  return it->second;
}

std::vector<double> ScoreMatrix::row(std::size_t model) const {
  std::vector<double> out(tasks_.size());
  for (std::size_t j = 0; j < tasks_.size(); ++j) out[j] = at(model, j);
  return out;
}

std::vector<double> ScoreMatrix::column(std::size_t task) const {
  std::vector<double> out(models_.size());
  for (std::size_t i = 0; i < models_.size(); ++i) out[i] = at(i, task);
  return out;
}

std::vector<double> ScoreMatrix::column(std::size_t task,
                                        std::span<const std::size_t> model_rows) const {
  std::vector<double> out;
  out.reserve(model_rows.size());
  for (const std::size_t i : model_rows) out.push_back(at(i, task));
  return out;
}

std::vector<std::size_t> ScoreMatrix::rows_in_group(Group g) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < models_.size(); ++i)
    if (models_[i].group && *models_[i].group == g) out.push_back(i);
  return out;
}

ScoreMatrix ScoreMatrix::submatrix(std::span<const std::string> model_names,
                                   std::span<const std::string> task_names) const {
  std::set<std::size_t> row_set;
  for (const auto& name : model_names)
    if (!row_set.insert(model_index(name)).second)
      throw ValidationError("duplicate model \"" + name + "\" in selection");
  std::set<std::size_t> col_set;
  for (const auto& name : task_names)
    if (!col_set.insert(task_index(name)).second)
      throw ValidationError("duplicate task \"" + name + "\" in selection");

  std::vector<ModelId> new_models;
  std::vector<TaskId> new_tasks;
  for (const std::size_t i : row_set) new_models.push_back(models_[i]);
  for (const std::size_t j : col_set) new_tasks.push_back(tasks_[j]);

  std::vector<double> new_scores;
  std::vector<std::uint8_t> new_missing;
  new_scores.reserve(row_set.size() * col_set.size());
  new_missing.reserve(row_set.size() * col_set.size());
  for (const std::size_t i : row_set) {
    for (const std::size_t j : col_set) {
      const std::size_t c = i * tasks_.size() + j;
      new_scores.push_back(scores_[c]);
      new_missing.push_back(missing_.empty() ? 0 : missing_[c]);
    }
  }
  return ScoreMatrix(std::move(new_models), std::move(new_tasks), std::move(new_scores),
                     std::move(new_missing));
}

ScoreMatrix ScoreMatrix::with_model_metadata(std::span<const ModelId> overrides) const {
  std::vector<ModelId> new_models = models_;
  for (const ModelId& o : overrides) new_models[model_index(o.name)] = o;
  return ScoreMatrix(std::move(new_models), tasks_, scores_, missing_);
}

std::vector<EvaluationRecord> ScoreMatrix::to_records(const std::string& source) const {
  std::vector<EvaluationRecord> out;
  out.reserve(models_.size() * tasks_.size());
  for (std::size_t i = 0; i < models_.size(); ++i)
    for (std::size_t j = 0; j < tasks_.size(); ++j)
      if (!is_missing(i, j))
        out.push_back({models_[i].name, tasks_[j].name, at(i, j), source});
  return out;
}

bool operator==(const ScoreMatrix& a, const ScoreMatrix& b) {
  return a.models_ == b.models_ && a.tasks_ == b.tasks_ && a.scores_ == b.scores_ &&
         a.missing_ == b.missing_;
}

}  // namespace proxysel
