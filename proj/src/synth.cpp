/*
 * proxysel - proxy task selection and early performance prediction
 * for large model evaluation.
 *
 * This code is released under the Apache License, Version 2.0.
 * http://www.apache.org/licenses/LICENSE-2.0
 */
#include "proxysel/synth.hpp"

#include <cmath>
#include <utility>

#include "proxysel/errors.hpp"
#include "proxysel/rng.hpp"

namespace proxysel {

namespace {

constexpr double kEmergenceSteepness = 4.0;

// Stream labels partition the seed space so each ability row, loading row,
// and noise cell replays independently of generation order and model count.
constexpr std::uint64_t kAbilityStream = 0x100000000ULL;
constexpr std::uint64_t kNoiseStream = 0x200000000ULL;
constexpr std::uint64_t kLoadingStream = 0x300000000ULL;

void validate(const SynthConfig& cfg) {
  if (cfg.n_models < 2)
    throw ValidationError("synthetic matrix needs at least 2 models, got " +
                          std::to_string(cfg.n_models));
  if (cfg.n_tasks < 1) throw ValidationError("synthetic matrix needs at least 1 task");
  if (cfg.n_factors < 1) throw ValidationError("synthetic matrix needs at least 1 factor");
  if (!(cfg.noise_sd >= 0.0)) throw ValidationError("noise_sd must be non-negative");
  if (!std::isfinite(cfg.emergence_threshold))
    throw ValidationError("emergence threshold must be finite");
  if (!cfg.loadings.empty() && cfg.loadings.size() != cfg.n_tasks * cfg.n_factors)
    throw ValidationError("loadings must be empty or n_tasks x n_factors (" +
                          std::to_string(cfg.n_tasks * cfg.n_factors) + " values), got " +
                          std::to_string(cfg.loadings.size()));
  for (const double l : cfg.loadings)
    if (!std::isfinite(l)) throw ValidationError("loadings must be finite");
}

std::vector<double> resolve_loadings(const SynthConfig& cfg) {
  if (!cfg.loadings.empty()) return cfg.loadings;
  std::vector<double> out(cfg.n_tasks * cfg.n_factors);
  for (std::size_t j = 0; j < cfg.n_tasks; ++j) {
    SplitMix64 rng(derive_stream(cfg.seed, kLoadingStream + j));
    for (std::size_t f = 0; f < cfg.n_factors; ++f)
      out[j * cfg.n_factors + f] = rng.next_gaussian();
  }
  return out;
}

SynthResult build(const SynthConfig& cfg, std::vector<double> abilities) {
  const std::vector<double> loadings = resolve_loadings(cfg);

  std::vector<ModelId> models(cfg.n_models);
  for (std::size_t i = 0; i < cfg.n_models; ++i)
    models[i] = {"model_" + std::to_string(i), Variant::unspecified, std::nullopt};
  std::vector<TaskId> tasks(cfg.n_tasks);
  for (std::size_t j = 0; j < cfg.n_tasks; ++j) tasks[j] = {"task_" + std::to_string(j)};

  std::size_t clipped = 0;
  std::vector<double> scores(cfg.n_models * cfg.n_tasks);
  for (std::size_t i = 0; i < cfg.n_models; ++i) {
    for (std::size_t j = 0; j < cfg.n_tasks; ++j) {
      double u = 0.0;
      for (std::size_t f = 0; f < cfg.n_factors; ++f)
        u += abilities[i * cfg.n_factors + f] * loadings[j * cfg.n_factors + f];
      double value = apply_link(cfg.link, u, cfg.emergence_threshold);
      if (cfg.noise_sd > 0.0) {
        SplitMix64 noise(derive_stream(cfg.seed, kNoiseStream + i * cfg.n_tasks + j));
        value += cfg.noise_sd * noise.next_gaussian();
      }
      if (value < 0.0) {
        value = 0.0;
        ++clipped;
      } else if (value > 100.0) {
        value = 100.0;
        ++clipped;
      }
      scores[i * cfg.n_tasks + j] = value;
    }
  }

  SynthTruth truth;
  truth.n_factors = cfg.n_factors;
  truth.loadings = loadings;
  truth.abilities = std::move(abilities);
  truth.link = cfg.link;
  truth.emergence_threshold = cfg.emergence_threshold;
  truth.noise_sd = cfg.noise_sd;
  truth.seed = cfg.seed;
  truth.clipped_cells = clipped;
  return SynthResult{ScoreMatrix(std::move(models), std::move(tasks), std::move(scores)),
                     std::move(truth)};
}

}  // namespace

std::string to_string(Link l) {
  switch (l) {
    case Link::linear: return "linear";
    case Link::logistic_emergence: return "logistic_emergence";
  }
  throw ValidationError("unknown link value");
}

Link link_from_string(std::string_view s) {
  if (s == "linear") return Link::linear;
  if (s == "logistic_emergence") return Link::logistic_emergence;
  throw ValidationError("unknown link \"" + std::string(s) +
                        "\" (expected linear or logistic_emergence)");
}

double apply_link(Link link, double u, double threshold) {
  switch (link) {
    case Link::linear: return 50.0 + 10.0 * u;
    case Link::logistic_emergence:
      return 100.0 / (1.0 + std::exp(-kEmergenceSteepness * (u - threshold)));
  }
  throw ValidationError("unknown link value");
}

double loading_cosine(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size())
    throw ValidationError("loading vectors differ in length: " + std::to_string(a.size()) +
                          " vs " + std::to_string(b.size()));
  if (a.empty()) throw ValidationError("loading vectors must be non-empty");
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) throw ComputationError("cosine undefined for a zero loading vector");
  return dot / std::sqrt(na * nb);
}

SynthResult generate(const SynthConfig& cfg) {
  validate(cfg);
  std::vector<double> abilities(cfg.n_models * cfg.n_factors);
  for (std::size_t i = 0; i < cfg.n_models; ++i) {
    SplitMix64 rng(derive_stream(cfg.seed, kAbilityStream + i));
    for (std::size_t f = 0; f < cfg.n_factors; ++f)
      abilities[i * cfg.n_factors + f] = rng.next_gaussian();
  }
  return build(cfg, std::move(abilities));
}

SynthResult generate_with_abilities(const SynthConfig& cfg, std::span<const double> abilities) {
  validate(cfg);
  if (abilities.size() != cfg.n_models * cfg.n_factors)
    throw ValidationError("abilities must be n_models x n_factors (" +
                          std::to_string(cfg.n_models * cfg.n_factors) + " values), got " +
                          std::to_string(abilities.size()));
  for (const double a : abilities)
    if (!std::isfinite(a)) throw ValidationError("abilities must be finite");
  return build(cfg, std::vector<double>(abilities.begin(), abilities.end()));
}

}  // namespace proxysel
