/*
 * proxysel - proxy task selection and early performance prediction
 * for large model evaluation.
 *
 * This code is released under the Apache License, Version 2.0.
 * http://www.apache.org/licenses/LICENSE-2.0
 */
#pragma once

#include <span>
#include <string>

#include "json.hpp"
#include "proxysel/consistency.hpp"
#include "proxysel/normalize.hpp"
#include "proxysel/robustness.hpp"
#include "proxysel/selection.hpp"
#include "proxysel/synth.hpp"

// JSON views of the report types. Serialization is deterministic (sorted
// object keys, shortest round-trip numbers), so identical inputs produce
// byte-identical documents.
namespace proxysel::jsonio {

nlohmann::json to_json(const Moments& m);
Moments moments_from_json(const nlohmann::json& j);

nlohmann::json to_json(const NormalizedMatrix& m);
NormalizedMatrix normalized_matrix_from_json(const nlohmann::json& j);

nlohmann::json to_json(const RelevanceRanking& r);
RelevanceRanking relevance_ranking_from_json(const nlohmann::json& j);

nlohmann::json to_json(const ConsistencyConfig& c);
ConsistencyConfig consistency_config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ConsistencyReport& r);

nlohmann::json to_json(const RobustnessReport& r);
RobustnessReport robustness_report_from_json(const nlohmann::json& j);

nlohmann::json to_json(const SelectionConfig& c);
SelectionConfig selection_config_from_json(const nlohmann::json& j);

nlohmann::json to_json(const ProxySet& p);
ProxySet proxy_set_from_json(const nlohmann::json& j);

nlohmann::json to_json(const Prediction& p);
nlohmann::json to_json(std::span<const Prediction> predictions);

nlohmann::json to_json(const ScoredRanking& r);
ScoredRanking scored_ranking_from_json(const nlohmann::json& j);
nlohmann::json to_json(const RankComparison& c);

nlohmann::json to_json(const SynthTruth& t);
SynthConfig synth_config_from_json(const nlohmann::json& j);

// dump(2) with a trailing newline; the uniform on-disk form of reports.
std::string dump_stable(const nlohmann::json& j);

}  // namespace proxysel::jsonio
