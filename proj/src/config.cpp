#include "corrgame/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <initializer_list>

#include "corrgame/errors.hpp"

namespace corrgame {

namespace {

using nlohmann::json;

std::string join_path(const std::string& base, const std::string& key) {
  return base.empty() ? key : base + "." + key;
}

void check_keys(const json& obj, const std::string& path,
                std::initializer_list<const char*> allowed) {
  if (!obj.is_object())
    throw ConfigError(path.empty() ? std::string("config: expected an object")
                                   : path + ": expected an object");
  for (const auto& item : obj.items()) {
    bool known = false;
    for (const char* key : allowed) {
      if (item.key() == key) {
        known = true;
        break;
      }
    }
    if (!known)
      throw ConfigError(join_path(path, item.key()) + ": unknown key");
  }
}

double get_double(const json& obj, const std::string& path, const char* key,
                  double fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number())
    throw ConfigError(join_path(path, key) + ": expected a number");
  return v.get<double>();
}

long get_long(const json& obj, const std::string& path, const char* key,
              long fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number_integer())
    throw ConfigError(join_path(path, key) + ": expected an integer");
  return v.get<long>();
}

std::string get_string(const json& obj, const std::string& path,
                       const char* key, const std::string& fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_string())
    throw ConfigError(join_path(path, key) + ": expected a string");
  return v.get<std::string>();
}

bool get_bool(const json& obj, const std::string& path, const char* key,
              bool fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_boolean())
    throw ConfigError(join_path(path, key) + ": expected a boolean");
  return v.get<bool>();
}

TaskDistribution parse_tasks(const json& j, const std::string& path) {
  TaskDistribution tasks;
  check_keys(j, path, {"levels", "prior", "p_correct", "noise_sigma"});
  if (j.contains("levels")) {
    const json& levels = j.at("levels");
    if (!levels.is_array() || levels.empty())
      throw ConfigError(path + ".levels: expected a non-empty array");
    tasks.levels.clear();
    for (const json& v : levels) {
      if (!v.is_string())
        throw ConfigError(path + ".levels: entries must be strings");
      tasks.levels.push_back(v.get<std::string>());
    }
    // Level overrides invalidate the stock prior and success table.
    if (!j.contains("prior") || !j.contains("p_correct"))
      throw ConfigError(path +
                        ": custom levels need explicit prior and p_correct");
  }
  if (j.contains("prior")) {
    const json& prior = j.at("prior");
    if (!prior.is_array() || prior.size() != tasks.levels.size())
      throw ConfigError(path + ".prior: expected one number per level");
    tasks.prior.clear();
    for (const json& v : prior) {
      if (!v.is_number())
        throw ConfigError(path + ".prior: entries must be numbers");
      tasks.prior.push_back(v.get<double>());
    }
  }
  if (j.contains("p_correct")) {
    const json& table = j.at("p_correct");
    if (!table.is_object())
      throw ConfigError(path + ".p_correct: expected an object");
    tasks.p_correct.assign(tasks.levels.size(), -1.0);
    for (const auto& item : table.items()) {
      const auto it =
          std::find(tasks.levels.begin(), tasks.levels.end(), item.key());
      if (it == tasks.levels.end())
        throw ConfigError(path + ".p_correct." + item.key() +
                          ": unknown level");
      if (!item.value().is_number())
        throw ConfigError(path + ".p_correct." + item.key() +
                          ": expected a number");
      tasks.p_correct[it - tasks.levels.begin()] = item.value().get<double>();
    }
    for (std::size_t i = 0; i < tasks.levels.size(); ++i) {
      if (tasks.p_correct[i] < 0.0)
        throw ConfigError(path + ".p_correct: missing level '" +
                          tasks.levels[i] + "'");
    }
  }
  tasks.noise_sigma = get_double(j, path, "noise_sigma", tasks.noise_sigma);
  tasks.validate();
  return tasks;
}

OmegaSchedule parse_omega(const json& j, const std::string& path) {
  OmegaSchedule omega;
  check_keys(j, path, {"kind", "initial", "final"});
  omega.kind = get_string(j, path, "kind", omega.kind);
  omega.initial = get_double(j, path, "initial", omega.initial);
  omega.final_value = get_double(j, path, "final", omega.final_value);
  omega.validate();
  return omega;
}

LearnerConfig parse_learner(const json& j, const std::string& path) {
  LearnerConfig learner;
  check_keys(j, path,
             {"hidden_width", "learning_rate", "update_window", "omega",
              "solver_snapshot", "auditor_snapshot"});
  learner.hidden = static_cast<int>(
      get_long(j, path, "hidden_width", learner.hidden));
  learner.learning_rate =
      get_double(j, path, "learning_rate", learner.learning_rate);
  learner.update_window = static_cast<int>(
      get_long(j, path, "update_window", learner.update_window));
  if (j.contains("omega"))
    learner.omega = parse_omega(j.at("omega"), path + ".omega");
  learner.solver_snapshot =
      get_string(j, path, "solver_snapshot", learner.solver_snapshot);
  learner.auditor_snapshot =
      get_string(j, path, "auditor_snapshot", learner.auditor_snapshot);
  learner.validate();
  return learner;
}

std::array<double, kOutcomeCount> parse_outcome_map(const json& j,
                                                    const std::string& path,
                                                    bool abstain_optional) {
  check_keys(j, path,
             {"abstain", "aligned", "caught", "false_positive", "silent"});
  std::array<double, kOutcomeCount> values{};
  for (Outcome o : kAllOutcomes) {
    const char* key = outcome_name(o);
    if (!j.contains(key)) {
      if (o == Outcome::Abstain && abstain_optional) {
        values[static_cast<int>(o)] = 0.0;
        continue;
      }
      throw ConfigError(join_path(path, key) + ": missing entry");
    }
    if (!j.at(key).is_number())
      throw ConfigError(join_path(path, key) + ": expected a number");
    values[static_cast<int>(o)] = j.at(key).get<double>();
  }
  return values;
}

std::vector<RewardProfile> parse_profiles(const json& j,
                                          const std::string& path) {
  if (j.is_string()) {
    if (j.get<std::string>() == "default") return default_profile_library();
    throw ConfigError(path + ": the only named library is 'default'");
  }
  if (!j.is_array() || j.empty())
    throw ConfigError(path + ": expected 'default' or a non-empty array");
  std::vector<RewardProfile> profiles;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string ppath = path + "[" + std::to_string(i) + "]";
    const json& pj = j.at(i);
    check_keys(pj, ppath, {"name", "solver", "auditor"});
    RewardProfile p;
    p.name = get_string(pj, ppath, "name", "");
    if (p.name.empty())
      throw ConfigError(ppath + ".name: missing or empty");
    if (!pj.contains("solver") || !pj.contains("auditor"))
      throw ConfigError(ppath + ": needs solver and auditor maps");
    p.solver = parse_outcome_map(pj.at("solver"), ppath + ".solver", false);
    p.auditor = parse_outcome_map(pj.at("auditor"), ppath + ".auditor", true);
    profiles.push_back(std::move(p));
  }
  return profiles;
}

PrincipalValueTable parse_principal(const json& j, const std::string& path) {
  PrincipalValueTable pv;
  pv.value = parse_outcome_map(j, path, false);
  pv.validate();
  return pv;
}

ControllerSpec parse_controller(const json& j, const std::string& path) {
  ControllerSpec spec;
  check_keys(j, path,
             {"name", "sigma", "gamma", "alpha", "eta", "payoff_lo",
              "payoff_hi", "silent_failure_threshold"});
  spec.name = get_string(j, path, "name", spec.name);
  spec.sigma = get_double(j, path, "sigma", spec.sigma);
  spec.gamma = get_double(j, path, "gamma", spec.gamma);
  spec.alpha = get_double(j, path, "alpha", spec.alpha);
  spec.eta = get_double(j, path, "eta", spec.eta);
  spec.payoff_lo = get_double(j, path, "payoff_lo", spec.payoff_lo);
  spec.payoff_hi = get_double(j, path, "payoff_hi", spec.payoff_hi);
  spec.silent_failure_threshold = get_double(
      j, path, "silent_failure_threshold", spec.silent_failure_threshold);
  spec.validate();
  return spec;
}

Schedule parse_schedule(const json& j, const std::string& path) {
  Schedule schedule;
  check_keys(j, path,
             {"outer_rounds", "train_rounds", "eval_rounds",
              "snapshot_interval"});
  schedule.outer_rounds = static_cast<int>(
      get_long(j, path, "outer_rounds", schedule.outer_rounds));
  schedule.train_rounds =
      get_long(j, path, "train_rounds", schedule.train_rounds);
  schedule.eval_rounds = get_long(j, path, "eval_rounds", schedule.eval_rounds);
  schedule.snapshot_interval = static_cast<int>(
      get_long(j, path, "snapshot_interval", schedule.snapshot_interval));
  schedule.validate();
  return schedule;
}

AnalyticConfig parse_analytic(const json& j, const std::string& path) {
  AnalyticConfig a;
  check_keys(j, path, {"r_a", "r_m", "r_catch", "r_fp", "r_audit", "omega"});
  a.rewards.align_reward = get_double(j, path, "r_a", a.rewards.align_reward);
  a.rewards.misalign_reward =
      get_double(j, path, "r_m", a.rewards.misalign_reward);
  a.rewards.catch_reward =
      get_double(j, path, "r_catch", a.rewards.catch_reward);
  a.rewards.false_positive_cost =
      get_double(j, path, "r_fp", a.rewards.false_positive_cost);
  a.rewards.audit_cost = get_double(j, path, "r_audit", a.rewards.audit_cost);
  a.omega = get_double(j, path, "omega", a.omega);
  a.rewards.validate();
  if (!(a.omega >= 0.0))
    throw ConfigError(path + ".omega: must be >= 0");
  return a;
}

OutputConfig parse_output(const json& j, const std::string& path) {
  OutputConfig out;
  check_keys(j, path, {"dir", "write_json"});
  out.dir = get_string(j, path, "dir", out.dir);
  if (out.dir.empty()) throw ConfigError(path + ".dir: must not be empty");
  out.write_json = get_bool(j, path, "write_json", out.write_json);
  return out;
}

json outcome_map_json(const std::array<double, kOutcomeCount>& values) {
  json j = json::object();
  for (Outcome o : kAllOutcomes) {
    j[outcome_name(o)] = values[static_cast<int>(o)];
  }
  return j;
}

json controller_json(const ControllerSpec& spec) {
  return json{{"name", spec.name},
              {"sigma", spec.sigma},
              {"gamma", spec.gamma},
              {"alpha", spec.alpha},
              {"eta", spec.eta},
              {"payoff_lo", spec.payoff_lo},
              {"payoff_hi", spec.payoff_hi},
              {"silent_failure_threshold", spec.silent_failure_threshold}};
}

}  // namespace

ExperimentConfig parse_experiment_config(const nlohmann::json& j) {
  ExperimentConfig cfg;
  check_keys(j, "",
             {"environment", "agents", "rewards", "controller", "controllers",
              "schedule", "seeds", "output"});
  if (j.contains("environment"))
    cfg.tasks = parse_tasks(j.at("environment"), "environment");
  if (j.contains("agents")) cfg.learner = parse_learner(j.at("agents"), "agents");
  if (j.contains("rewards")) {
    const json& rj = j.at("rewards");
    check_keys(rj, "rewards", {"profiles", "principal_values", "analytic"});
    if (rj.contains("profiles"))
      cfg.profiles = parse_profiles(rj.at("profiles"), "rewards.profiles");
    if (rj.contains("principal_values"))
      cfg.principal = parse_principal(rj.at("principal_values"),
                                      "rewards.principal_values");
    if (rj.contains("analytic"))
      cfg.analytic = parse_analytic(rj.at("analytic"), "rewards.analytic");
  }
  if (j.contains("controller"))
    cfg.controller = parse_controller(j.at("controller"), "controller");
  if (j.contains("controllers")) {
    const json& cj = j.at("controllers");
    if (!cj.is_array() || cj.empty())
      throw ConfigError("controllers: expected a non-empty array");
    for (std::size_t i = 0; i < cj.size(); ++i) {
      cfg.controllers.push_back(parse_controller(
          cj.at(i), "controllers[" + std::to_string(i) + "]"));
    }
  }
  if (j.contains("schedule"))
    cfg.schedule = parse_schedule(j.at("schedule"), "schedule");
  if (j.contains("seeds")) {
    const json& sj = j.at("seeds");
    if (!sj.is_array() || sj.empty())
      throw ConfigError("seeds: expected a non-empty array");
    cfg.seeds.clear();
    for (const json& v : sj) {
      if (!v.is_number_unsigned() && !v.is_number_integer())
        throw ConfigError("seeds: entries must be nonnegative integers");
      if (v.is_number_integer() && v.get<long long>() < 0)
        throw ConfigError("seeds: entries must be nonnegative integers");
      cfg.seeds.push_back(v.get<std::uint64_t>());
    }
  }
  if (j.contains("output"))
    cfg.output = parse_output(j.at("output"), "output");

  // Cross-checks that need the whole picture.
  std::vector<std::string> names;
  for (const RewardProfile& p : cfg.profiles) names.push_back(p.name);
  std::sort(names.begin(), names.end());
  if (std::adjacent_find(names.begin(), names.end()) != names.end())
    throw ConfigError("rewards.profiles: duplicate profile names");
  make_outer_config(cfg, cfg.seeds.front(), "validate").validate();
  return cfg;
}

ExperimentConfig load_experiment_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot read '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ConfigError("config: " + path + " is not valid JSON: " + e.what());
  }
  return parse_experiment_config(j);
}

nlohmann::json experiment_to_json(const ExperimentConfig& cfg) {
  json env;
  env["levels"] = cfg.tasks.levels;
  env["prior"] = cfg.tasks.prior;
  json table = json::object();
  for (std::size_t i = 0; i < cfg.tasks.levels.size(); ++i) {
    table[cfg.tasks.levels[i]] = cfg.tasks.p_correct[i];
  }
  env["p_correct"] = table;
  env["noise_sigma"] = cfg.tasks.noise_sigma;

  json agents;
  agents["hidden_width"] = cfg.learner.hidden;
  agents["learning_rate"] = cfg.learner.learning_rate;
  agents["update_window"] = cfg.learner.update_window;
  agents["omega"] = json{{"kind", cfg.learner.omega.kind},
                         {"initial", cfg.learner.omega.initial},
                         {"final", cfg.learner.omega.final_value}};
  agents["solver_snapshot"] = cfg.learner.solver_snapshot;
  agents["auditor_snapshot"] = cfg.learner.auditor_snapshot;

  json profiles = json::array();
  for (const RewardProfile& p : cfg.profiles) {
    profiles.push_back(json{{"name", p.name},
                            {"solver", outcome_map_json(p.solver)},
                            {"auditor", outcome_map_json(p.auditor)}});
  }
  json rewards;
  rewards["profiles"] = profiles;
  rewards["principal_values"] = outcome_map_json(cfg.principal.value);
  if (cfg.analytic.has_value()) {
    rewards["analytic"] =
        json{{"r_a", cfg.analytic->rewards.align_reward},
             {"r_m", cfg.analytic->rewards.misalign_reward},
             {"r_catch", cfg.analytic->rewards.catch_reward},
             {"r_fp", cfg.analytic->rewards.false_positive_cost},
             {"r_audit", cfg.analytic->rewards.audit_cost},
             {"omega", cfg.analytic->omega}};
  }

  json j;
  j["environment"] = env;
  j["agents"] = agents;
  j["rewards"] = rewards;
  j["controller"] = controller_json(cfg.controller);
  if (!cfg.controllers.empty()) {
    json list = json::array();
    for (const ControllerSpec& spec : cfg.controllers) {
      list.push_back(controller_json(spec));
    }
    j["controllers"] = list;
  }
  j["schedule"] = json{{"outer_rounds", cfg.schedule.outer_rounds},
                       {"train_rounds", cfg.schedule.train_rounds},
                       {"eval_rounds", cfg.schedule.eval_rounds},
                       {"snapshot_interval", cfg.schedule.snapshot_interval}};
  j["seeds"] = cfg.seeds;
  j["output"] = json{{"dir", cfg.output.dir},
                     {"write_json", cfg.output.write_json}};
  return j;
}

nlohmann::json manifest_json(const ExperimentConfig& cfg,
                             const std::string& run_id, std::uint64_t seed) {
  return nlohmann::json{
      {"schema",
       {{"config_version", kConfigVersion}, {"trace_csv", kTraceSchema}}},
      {"run_id", run_id},
      {"seed", seed},
      {"config", experiment_to_json(cfg)}};
}

ExperimentConfig parse_manifest(const nlohmann::json& manifest) {
  check_keys(manifest, "manifest", {"schema", "run_id", "seed", "config"});
  if (!manifest.contains("config"))
    throw ConfigError("manifest: missing config section");
  return parse_experiment_config(manifest.at("config"));
}

OuterConfig make_outer_config(const ExperimentConfig& cfg, std::uint64_t seed,
                              std::string run_id) {
  OuterConfig out;
  out.tasks = cfg.tasks;
  out.learner = cfg.learner;
  out.profiles = cfg.profiles;
  out.principal = cfg.principal;
  out.controller = cfg.controller;
  out.schedule = cfg.schedule;
  out.seed = seed;
  out.run_id = std::move(run_id);
  return out;
}

}  // namespace corrgame
