/*
 * proxysel - proxy task selection and early performance prediction
 * for large model evaluation.
 *
 * This code is released under the Apache License, Version 2.0.
 * http://www.apache.org/licenses/LICENSE-2.0
 */
#include "proxysel/matrix_io.hpp"

#include <charconv>
#include <fstream>
#include <optional>
#include <sstream>
#include <utility>

#include "proxysel/errors.hpp"

namespace proxysel {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string::size_type start = 0;
  for (;;) {
    const auto comma = line.find(',', start);
    if (comma == std::string::npos) {
      cells.push_back(trim(line.substr(start)));
      break;
    }
    cells.push_back(trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
  return cells;
}

double parse_number(const std::string& cell, std::size_t row, const std::string& task) {
  double value = 0.0;
  const char* first = cell.data();
  const char* last = cell.data() + cell.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last)
    throw ValidationError("row " + std::to_string(row) + ", column \"" + task +
                          "\": cannot parse \"" + cell + "\" as a number");
  return value;
}

// Shortest round-trip decimal representation.
std::string format_number(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc{}) throw IoError("cannot format score value");
  return std::string(buf, ptr);
}

struct CsvTable {
  std::vector<std::string> tasks;
  std::vector<std::string> names;                       // one per data row
  std::vector<std::vector<std::optional<double>>> rows;  // empty cell = nullopt
};

CsvTable parse_csv_table(const std::string& text) {
  std::vector<std::string> lines;
  std::string::size_type start = 0;
  while (start <= text.size()) {
    const auto nl = text.find('\n', start);
    if (nl == std::string::npos) {
      lines.push_back(text.substr(start));
      break;
    }
    lines.push_back(text.substr(start, nl - start));
    start = nl + 1;
  }
  while (!lines.empty() && trim(lines.back()).empty()) lines.pop_back();
  if (lines.empty()) throw ValidationError("csv input is empty");

  CsvTable table;
  const std::vector<std::string> header = split_csv_line(lines[0]);
  if (header.empty() || header[0] != "model")
    throw ValidationError("csv header must start with \"model\"");
  if (header.size() < 2) throw ValidationError("csv header lists no tasks");
  table.tasks.assign(header.begin() + 1, header.end());

  for (std::size_t r = 1; r < lines.size(); ++r) {
    const std::vector<std::string> cells = split_csv_line(lines[r]);
    if (cells.size() != header.size())
      throw ValidationError("row " + std::to_string(r) + " has " + std::to_string(cells.size()) +
                            " cells, expected " + std::to_string(header.size()));
    table.names.push_back(cells[0]);
    std::vector<std::optional<double>> row;
    row.reserve(table.tasks.size());
    for (std::size_t j = 0; j < table.tasks.size(); ++j) {
      const std::string& cell = cells[j + 1];
      if (cell.empty())
        row.push_back(std::nullopt);
      else
        row.push_back(parse_number(cell, r, table.tasks[j]));
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

void check_csv_label(const std::string& label) {
  if (label.find(',') != std::string::npos)
    throw ValidationError("label \"" + label + "\" cannot be written to csv (contains a comma)");
  if (label != trim(label))
    throw ValidationError("label \"" + label +
                          "\" cannot be written to csv (leading or trailing whitespace)");
}

Variant variant_from_json_field(const nlohmann::json& j, Variant fallback) {
  if (!j.contains("variant") || j.at("variant").is_null()) return fallback;
  if (!j.at("variant").is_string()) throw ValidationError("model variant must be a string");
  return variant_from_string(j.at("variant").get<std::string>());
}

std::optional<Group> group_from_json_field(const nlohmann::json& j, std::optional<Group> fallback) {
  if (!j.contains("group")) return fallback;
  if (j.at("group").is_null()) return std::nullopt;
  if (!j.at("group").is_string()) throw ValidationError("model group must be a string or null");
  return group_from_string(j.at("group").get<std::string>());
}

}  // namespace

MatrixFormat matrix_format_from_path(const std::filesystem::path& p) {
  const std::string ext = p.extension().string();
  if (ext == ".csv") return MatrixFormat::csv;
  if (ext == ".json") return MatrixFormat::json;
  throw ValidationError("cannot infer matrix format from extension \"" + ext + "\" (" +
                        p.string() + ")");
}

std::string matrix_to_csv(const ScoreMatrix& m) {
  std::ostringstream out;
  out << "model";
  for (const TaskId& t : m.tasks()) {
    check_csv_label(t.name);
    out << ',' << t.name;
  }
  out << '\n';
  for (std::size_t i = 0; i < m.n_models(); ++i) {
    check_csv_label(m.models()[i].name);
    out << m.models()[i].name;
    for (std::size_t j = 0; j < m.n_tasks(); ++j) {
      out << ',';
      if (!m.is_missing(i, j)) out << format_number(m.at(i, j));
    }
    out << '\n';
  }
  return out.str();
}

ScoreMatrix matrix_from_csv(const std::string& text) {
  const CsvTable table = parse_csv_table(text);
  std::vector<ModelId> models;
  models.reserve(table.names.size());
  for (const std::string& name : table.names)
    models.push_back({name, Variant::unspecified, std::nullopt});
  std::vector<TaskId> tasks;
  tasks.reserve(table.tasks.size());
  for (const std::string& name : table.tasks) tasks.push_back({name});

  std::vector<double> scores;
  std::vector<std::uint8_t> missing;
  scores.reserve(table.rows.size() * table.tasks.size());
  missing.reserve(table.rows.size() * table.tasks.size());
  for (const auto& row : table.rows) {
    for (const auto& cell : row) {
      scores.push_back(cell.value_or(0.0));
      missing.push_back(cell ? 0 : 1);
    }
  }
  return ScoreMatrix(std::move(models), std::move(tasks), std::move(scores), std::move(missing));
}

nlohmann::json matrix_to_json(const ScoreMatrix& m) {
  nlohmann::json j;
  j["tasks"] = nlohmann::json::array();
  for (const TaskId& t : m.tasks()) j["tasks"].push_back(t.name);
  j["models"] = nlohmann::json::array();
  for (const ModelId& model : m.models()) {
    nlohmann::json jm;
    jm["name"] = model.name;
    jm["variant"] = to_string(model.variant);
    jm["group"] = model.group ? nlohmann::json(to_string(*model.group)) : nlohmann::json(nullptr);
    j["models"].push_back(std::move(jm));
  }
  j["scores"] = nlohmann::json::array();
  for (std::size_t i = 0; i < m.n_models(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (std::size_t j2 = 0; j2 < m.n_tasks(); ++j2) {
      if (m.is_missing(i, j2))
        row.push_back(nullptr);
      else
        row.push_back(m.at(i, j2));
    }
    j["scores"].push_back(std::move(row));
  }
  return j;
}

ScoreMatrix matrix_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ValidationError("matrix json must be an object");
  for (const char* key : {"tasks", "models", "scores"})
    if (!j.contains(key))
      throw ValidationError("matrix json missing key \"" + std::string(key) + "\"");
  if (!j.at("tasks").is_array() || !j.at("models").is_array() || !j.at("scores").is_array())
    throw ValidationError("matrix json keys tasks, models, and scores must be arrays");

  std::vector<TaskId> tasks;
  for (const auto& t : j.at("tasks")) {
    if (!t.is_string()) throw ValidationError("matrix json task names must be strings");
    tasks.push_back({t.get<std::string>()});
  }
  std::vector<ModelId> models;
  for (const auto& jm : j.at("models")) {
    if (!jm.is_object() || !jm.contains("name") || !jm.at("name").is_string())
      throw ValidationError("matrix json model entries need a string \"name\"");
    ModelId model;
    model.name = jm.at("name").get<std::string>();
    model.variant = variant_from_json_field(jm, Variant::unspecified);
    model.group = group_from_json_field(jm, std::nullopt);
    models.push_back(std::move(model));
  }

  const auto& rows = j.at("scores");
  if (rows.size() != models.size())
    throw ValidationError("matrix json has " + std::to_string(rows.size()) +
                          " score rows, expected " + std::to_string(models.size()));
  std::vector<double> scores;
  std::vector<std::uint8_t> missing;
  scores.reserve(models.size() * tasks.size());
  missing.reserve(models.size() * tasks.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& row = rows[i];
    if (!row.is_array() || row.size() != tasks.size())
      throw ValidationError("matrix json score row " + std::to_string(i) + " must list " +
                            std::to_string(tasks.size()) + " values");
    for (const auto& cell : row) {
      if (cell.is_null()) {
        scores.push_back(0.0);
        missing.push_back(1);
      } else if (cell.is_number()) {
        scores.push_back(cell.get<double>());
        missing.push_back(0);
      } else {
        throw ValidationError("matrix json scores must be numbers or null");
      }
    }
  }
  return ScoreMatrix(std::move(models), std::move(tasks), std::move(scores), std::move(missing));
}

ScoreMatrix load_matrix(const std::filesystem::path& p) {
  return load_matrix(p, matrix_format_from_path(p));
}

ScoreMatrix load_matrix(const std::filesystem::path& p, MatrixFormat f) {
  try {
    if (f == MatrixFormat::csv) return matrix_from_csv(read_text_file(p));
    return matrix_from_json(read_json_file(p));
  } catch (const ValidationError& e) {
    throw ValidationError(p.string() + ": " + e.what());
  }
}

void save_matrix(const ScoreMatrix& m, const std::filesystem::path& p) {
  save_matrix(m, p, matrix_format_from_path(p));
}

void save_matrix(const ScoreMatrix& m, const std::filesystem::path& p, MatrixFormat f) {
  if (f == MatrixFormat::csv)
    write_text_file(p, matrix_to_csv(m));
  else
    write_json_file(p, matrix_to_json(m));
}

ScoreMatrix apply_model_manifest(const ScoreMatrix& m, const nlohmann::json& manifest) {
  if (!manifest.is_object() || !manifest.contains("models") || !manifest.at("models").is_array())
    throw ValidationError("manifest must be an object with a \"models\" array");
  std::vector<ModelId> overrides;
  for (const auto& jm : manifest.at("models")) {
    if (!jm.is_object() || !jm.contains("name") || !jm.at("name").is_string())
      throw ValidationError("manifest model entries need a string \"name\"");
    const std::string name = jm.at("name").get<std::string>();
    const ModelId& current = m.models()[m.model_index(name)];
    ModelId patched = current;
    patched.variant = variant_from_json_field(jm, current.variant);
    patched.group = group_from_json_field(jm, current.group);
    overrides.push_back(std::move(patched));
  }
  return m.with_model_metadata(overrides);
}

ScoreMatrix load_matrix_with_manifest(const std::filesystem::path& matrix,
                                      const std::filesystem::path& manifest) {
  const ScoreMatrix m = load_matrix(matrix);
  try {
    return apply_model_manifest(m, read_json_file(manifest));
  } catch (const ValidationError& e) {
    throw ValidationError(manifest.string() + ": " + e.what());
  }
}

std::vector<NamedScores> load_score_table(const std::filesystem::path& p) {
  CsvTable table;
  try {
    table = parse_csv_table(read_text_file(p));
  } catch (const ValidationError& e) {
    throw ValidationError(p.string() + ": " + e.what());
  }
  std::vector<NamedScores> out;
  out.reserve(table.names.size());
  for (std::size_t i = 0; i < table.names.size(); ++i) {
    NamedScores row;
    row.name = table.names[i];
    for (std::size_t j = 0; j < table.tasks.size(); ++j)
      if (table.rows[i][j]) row.scores.emplace(table.tasks[j], *table.rows[i][j]);
    out.push_back(std::move(row));
  }
  return out;
}

ScoredRanking load_ranking(const std::filesystem::path& p, Orientation orientation) {
  const ScoreMatrix m = load_matrix(p);
  if (m.n_tasks() != 1)
    throw ValidationError(p.string() + ": a ranking file must have exactly one score column, got " +
                          std::to_string(m.n_tasks()));
  ScoredRanking out;
  out.label = m.tasks()[0].name;
  out.orientation = orientation;
  for (std::size_t i = 0; i < m.n_models(); ++i) {
    out.names.push_back(m.models()[i].name);
    out.values.push_back(m.at(i, 0));
  }
  return out;
}

std::string read_text_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw IoError("cannot read file: " + p.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("error while reading file: " + p.string());
  return buf.str();
}

void write_text_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw IoError("cannot write file: " + p.string());
  out << text;
  out.flush();
  if (!out) throw IoError("error while writing file: " + p.string());
}

nlohmann::json read_json_file(const std::filesystem::path& p) {
  const std::string text = read_text_file(p);
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(p.string() + ": invalid JSON: " + e.what());
  }
}

void write_json_file(const std::filesystem::path& p, const nlohmann::json& j) {
  write_text_file(p, j.dump(2) + "\n");
}

}  // namespace proxysel
