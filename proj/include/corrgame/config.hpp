#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "corrgame/analytic_game.hpp"
#include "corrgame/pipeline.hpp"

namespace corrgame {

/// Closed-form game parameters, available in config for the analysis
/// subcommands. Defaults are the library's running example.
struct AnalyticConfig {
  AnalyticRewards rewards;
  double omega = 0.5;
};

struct OutputConfig {
  std::string dir = "runs";
  bool write_json = false;  // additionally dump the trace as JSON
};

/// Everything a run needs, resolved against defaults. A config file
/// containing only {"seeds": [...]} runs the default toy experiment.
/// Sections: environment, agents, rewards, controller (or controllers for
/// benchmarks), schedule, seeds, output. Unknown keys anywhere are rejected
/// with their full path.
struct ExperimentConfig {
  TaskDistribution tasks;
  LearnerConfig learner;
  std::vector<RewardProfile> profiles = default_profile_library();
  PrincipalValueTable principal;
  ControllerSpec controller;
  std::vector<ControllerSpec> controllers;  // benchmark list; may be empty
  Schedule schedule;
  std::vector<std::uint64_t> seeds = {0};
  OutputConfig output;
  std::optional<AnalyticConfig> analytic;
};

/// Strict parse; throws ConfigError naming the offending path.
ExperimentConfig parse_experiment_config(const nlohmann::json& j);

/// Reads and parses a config file (ConfigError on IO or syntax problems).
ExperimentConfig load_experiment_config(const std::string& path);

/// Fully resolved config as JSON; parse(experiment_to_json(c)) == c.
nlohmann::json experiment_to_json(const ExperimentConfig& cfg);

/// Run manifest: resolved config + run identity + schema versions. Every
/// manifest re-parses into the config that produced it.
nlohmann::json manifest_json(const ExperimentConfig& cfg,
                             const std::string& run_id, std::uint64_t seed);
ExperimentConfig parse_manifest(const nlohmann::json& manifest);

/// Projects the experiment config onto one concrete run.
OuterConfig make_outer_config(const ExperimentConfig& cfg, std::uint64_t seed,
                              std::string run_id);

inline constexpr int kConfigVersion = 1;
inline constexpr const char* kTraceSchema = "run_trace_v1";

}  // namespace corrgame
