/*
 * proxysel - proxy task selection and early performance prediction
 * for large model evaluation.
 *
 * This code is released under the Apache License, Version 2.0.
 * http://www.apache.org/licenses/LICENSE-2.0
 */
#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace proxysel {

// Fine-tuning lineage of an evaluated model.
enum class Variant { chat, base, unspecified };

// Controlled-variability cohorts used by the robustness analysis.
enum class Group { data_variability, random_noise };

std::string to_string(Variant v);
std::string to_string(Group g);
Variant variant_from_string(std::string_view s);
Group group_from_string(std::string_view s);

struct TaskId {
  std::string name;
  friend bool operator==(const TaskId&, const TaskId&) = default;
};

struct ModelId {
  std::string name;
  Variant variant = Variant::unspecified;
  std::optional<Group> group;
  friend bool operator==(const ModelId&, const ModelId&) = default;
};

// One evaluation event in long form; convenient for exports and joins.
struct EvaluationRecord {
  std::string model;
  std::string task;
  double score = 0.0;
  std::string source;
  friend bool operator==(const EvaluationRecord&, const EvaluationRecord&) = default;
};

// Scores for one model keyed by task name; used for checkpoint inputs that
// are too small to satisfy the matrix shape contract.
struct NamedScores {
  std::string name;
  std::map<std::string, double> scores;
  friend bool operator==(const NamedScores&, const NamedScores&) = default;
};

// Immutable dense model x task score matrix with an explicit missing-cell
// mask. Construction validates shape, finiteness, and label uniqueness, so
// downstream code can assume a well-formed matrix.
class ScoreMatrix {
 public:
  // scores is row-major (model rows); missing, when non-empty, must have
  // the same length and marks cells whose score values are ignored.
  ScoreMatrix(std::vector<ModelId> models, std::vector<TaskId> tasks, std::vector<double> scores,
              std::vector<std::uint8_t> missing = {});

  std::size_t n_models() const noexcept { return models_.size(); }
  std::size_t n_tasks() const noexcept { return tasks_.size(); }
  const std::vector<ModelId>& models() const noexcept { return models_; }
  const std::vector<TaskId>& tasks() const noexcept { return tasks_; }
  const std::vector<double>& scores() const noexcept { return scores_; }
  const std::vector<std::uint8_t>& missing_mask() const noexcept { return missing_; }

  bool has_missing() const noexcept { return !missing_.empty(); }
  bool is_missing(std::size_t model, std::size_t task) const;
  double at(std::size_t model, std::size_t task) const;  // throws on a missing cell

  bool has_model(std::string_view name) const noexcept;
  bool has_task(std::string_view name) const noexcept;
  std::size_t model_index(std::string_view name) const;  // throws on unknown name
  std::size_t task_index(std::string_view name) const;

  std::vector<double> row(std::size_t model) const;
  std::vector<double> column(std::size_t task) const;
  std::vector<double> column(std::size_t task, std::span<const std::size_t> model_rows) const;

  std::vector<std::size_t> rows_in_group(Group g) const;

  // Selects the named rows and columns, preserving this matrix's order.
  ScoreMatrix submatrix(std::span<const std::string> model_names,
                        std::span<const std::string> task_names) const;

  // Returns a copy whose model metadata (variant, group) is replaced for
  // each listed override, matched by model name.
  ScoreMatrix with_model_metadata(std::span<const ModelId> overrides) const;

  // Long-form export; missing cells are skipped.
  std::vector<EvaluationRecord> to_records(const std::string& source) const;

  friend bool operator==(const ScoreMatrix&, const ScoreMatrix&);

 private:
  void check_cell(std::size_t model, std::size_t task) const;

  std::vector<ModelId> models_;
  std::vector<TaskId> tasks_;
  std::vector<double> scores_;         // row-major; missing cells stored as 0.0
  std::vector<std::uint8_t> missing_;  // empty means "no missing cells"
  std::map<std::string, std::size_t, std::less<>> model_index_;
  std::map<std::string, std::size_t, std::less<>> task_index_;
};

}  // namespace proxysel
