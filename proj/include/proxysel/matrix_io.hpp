/*
 * proxysel - proxy task selection and early performance prediction
 * for large model evaluation.
 *
 * This code is released under the Apache License, Version 2.0.
 * http://www.apache.org/licenses/LICENSE-2.0
 */
#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "proxysel/score_matrix.hpp"
#include "proxysel/selection.hpp"

namespace proxysel {

enum class MatrixFormat { csv, json };

// Infers the format from the file extension (.csv or .json).
MatrixFormat matrix_format_from_path(const std::filesystem::path& p);

// CSV layout: header "model,<task>,...", one row per model, empty cells
// mark missing scores. Labels must not contain commas; no quoting.
std::string matrix_to_csv(const ScoreMatrix& m);
ScoreMatrix matrix_from_csv(const std::string& text);

// JSON layout: {"tasks": [...], "models": [{"name", "variant", "group"}],
// "scores": [[...]]} with null marking missing scores.
nlohmann::json matrix_to_json(const ScoreMatrix& m);
ScoreMatrix matrix_from_json(const nlohmann::json& j);

ScoreMatrix load_matrix(const std::filesystem::path& p);
ScoreMatrix load_matrix(const std::filesystem::path& p, MatrixFormat f);
void save_matrix(const ScoreMatrix& m, const std::filesystem::path& p);
void save_matrix(const ScoreMatrix& m, const std::filesystem::path& p, MatrixFormat f);

// Sidecar manifest {"models": [{"name", "variant"?, "group"?}, ...]}
// patches model metadata; models not mentioned keep theirs.
ScoreMatrix apply_model_manifest(const ScoreMatrix& m, const nlohmann::json& manifest);
ScoreMatrix load_matrix_with_manifest(const std::filesystem::path& matrix,
                                      const std::filesystem::path& manifest);

// Per-row score tables use the same CSV layout without the minimum row
// count; rows simply omit tasks whose cells are empty.
std::vector<NamedScores> load_score_table(const std::filesystem::path& p);

// A single-task matrix file read as a ranking over its models.
ScoredRanking load_ranking(const std::filesystem::path& p, Orientation orientation);

std::string read_text_file(const std::filesystem::path& p);
void write_text_file(const std::filesystem::path& p, const std::string& text);
nlohmann::json read_json_file(const std::filesystem::path& p);
void write_json_file(const std::filesystem::path& p, const nlohmann::json& j);

}  // namespace proxysel
