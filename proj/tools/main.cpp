// corrgame: reward-design workbench for two-agent solver/auditor games.
// Subcommands: equilibrium, best-response, simulate, baseline, bandit-bench.
// Exit codes: 0 ok, 2 bad input or config, 3 numeric failure.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "corrgame/analytic_game.hpp"
#include "corrgame/config.hpp"
#include "corrgame/csv.hpp"
#include "corrgame/errors.hpp"
#include "corrgame/noisy_game.hpp"
#include "corrgame/pipeline.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace corrgame;

namespace {

struct GlobalArgs {
  std::string config_path;
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::string out;
  bool out_set = false;
  bool as_json = false;
};

struct GameArgs {
  double r_a = 1.0, r_m = -1.0, r_catch = 1.0, r_fp = 0.3, r_audit = 0.2;
  double omega = 0.5;
  bool noisy = false;
  double epsilon = 0.0, kappa_tp = 1.0, kappa_fp = 0.0;
  double s_catch = 0.0, s_fp = 0.0, s_audit = 0.0;
  CLI::Option* opt_r_a = nullptr;
  CLI::Option* opt_r_m = nullptr;
  CLI::Option* opt_r_catch = nullptr;
  CLI::Option* opt_r_fp = nullptr;
  CLI::Option* opt_r_audit = nullptr;
  CLI::Option* opt_omega = nullptr;
  CLI::Option* opt_s_catch = nullptr;
  CLI::Option* opt_s_fp = nullptr;
  CLI::Option* opt_s_audit = nullptr;
};

void add_game_options(CLI::App* sub, GameArgs& a, bool with_noise) {
  a.opt_r_a = sub->add_option("--r-a", a.r_a, "Solver reward when not flagged");
  a.opt_r_m =
      sub->add_option("--r-m", a.r_m, "Solver reward when flagged (signed)");
  a.opt_r_catch =
      sub->add_option("--r-catch", a.r_catch, "Auditor reward for a catch");
  a.opt_r_fp = sub->add_option("--r-fp", a.r_fp,
                               "Auditor false-positive cost (magnitude)");
  a.opt_r_audit =
      sub->add_option("--r-audit", a.r_audit, "Auditor audit cost (magnitude)");
  a.opt_omega =
      sub->add_option("--omega", a.omega, "Misalignment temptation bonus");
  if (!with_noise) return;
  sub->add_flag("--noisy", a.noisy, "Analyze the noisy-channel variant");
  sub->add_option("--epsilon", a.epsilon,
                  "Intent flip probability, in [0, 1/2)");
  sub->add_option("--kappa-tp", a.kappa_tp,
                  "Verdict true-positive rate under audit");
  sub->add_option("--kappa-fp", a.kappa_fp,
                  "Verdict false-positive rate under audit");
  a.opt_s_catch = sub->add_option(
      "--s-catch", a.s_catch, "Noisy-game auditor catch reward (default --r-catch)");
  a.opt_s_fp = sub->add_option(
      "--s-fp", a.s_fp, "Noisy-game false-positive cost (default --r-fp)");
  a.opt_s_audit = sub->add_option(
      "--s-audit", a.s_audit, "Noisy-game audit cost (default --r-audit)");
}

/// CLI beats config beats built-in defaults.
void resolve_game_args(GameArgs& a, const ExperimentConfig* cfg) {
  if (cfg && cfg->analytic.has_value()) {
    const AnalyticConfig& an = *cfg->analytic;
    if (a.opt_r_a->count() == 0) a.r_a = an.rewards.align_reward;
    if (a.opt_r_m->count() == 0) a.r_m = an.rewards.misalign_reward;
    if (a.opt_r_catch->count() == 0) a.r_catch = an.rewards.catch_reward;
    if (a.opt_r_fp->count() == 0) a.r_fp = an.rewards.false_positive_cost;
    if (a.opt_r_audit->count() == 0) a.r_audit = an.rewards.audit_cost;
    if (a.opt_omega->count() == 0) a.omega = an.omega;
  }
  if (a.opt_s_catch && a.opt_s_catch->count() == 0) a.s_catch = a.r_catch;
  if (a.opt_s_fp && a.opt_s_fp->count() == 0) a.s_fp = a.r_fp;
  if (a.opt_s_audit && a.opt_s_audit->count() == 0) a.s_audit = a.r_audit;
}

std::optional<ExperimentConfig> maybe_load_config(const GlobalArgs& g) {
  if (g.config_path.empty()) return std::nullopt;
  return load_experiment_config(g.config_path);
}

ExperimentConfig effective_config(const GlobalArgs& g) {
  ExperimentConfig cfg;
  if (auto loaded = maybe_load_config(g)) cfg = std::move(*loaded);
  if (g.seed_set) cfg.seeds = {g.seed};
  if (g.out_set) cfg.output.dir = g.out;
  if (g.as_json) cfg.output.write_json = true;
  return cfg;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write '" + path.string() + "'");
  out << content;
}

std::string yes_no(bool b) { return b ? "yes" : "no"; }

// ---- equilibrium ----

json analytic_report(const GameArgs& a) {
  AnalyticRewards rw{a.r_a, a.r_m, a.r_catch, a.r_fp, a.r_audit};
  rw.validate();
  const MixedEquilibrium eq = mixed_equilibrium(rw, a.omega);
  const Margins at_eq = margins(rw, GameState(eq.p_align, eq.p_audit, a.omega));
  const Margins full_audit = margins(rw, GameState(0.0, 1.0, a.omega));
  const Margins full_align = margins(rw, GameState(1.0, 0.0, a.omega));
  json pure = json::object();
  for (bool aligned : {false, true}) {
    for (bool audited : {false, true}) {
      PureProfile p{aligned, audited};
      pure[profile_label(p)] = pure_equilibrium_check(rw, a.omega, p);
    }
  }
  return json{
      {"game", "noise-free"},
      {"rewards",
       {{"r_a", a.r_a},
        {"r_m", a.r_m},
        {"r_catch", a.r_catch},
        {"r_fp", a.r_fp},
        {"r_audit", a.r_audit}}},
      {"omega", a.omega},
      {"mixed_equilibrium",
       {{"p_align", eq.p_align},
        {"p_audit", eq.p_audit},
        {"interior", eq.interior}}},
      {"margins_at_equilibrium",
       {{"deterrence_margin", at_eq.deterrence_margin},
        {"audit_margin", at_eq.audit_margin},
        {"solver_intercept", at_eq.solver_intercept}}},
      {"deterrence_margin_full_audit", full_audit.deterrence_margin},
      {"audit_margin_full_alignment", full_align.audit_margin},
      {"pure_equilibria", pure}};
}

json noisy_report(const GameArgs& a) {
  NoisyRewards rw{a.r_a, a.r_m, a.s_catch, a.s_fp, a.s_audit};
  NoiseParams np{a.epsilon, a.kappa_tp, a.kappa_fp};
  rw.validate();
  np.validate();
  const MixedEquilibrium eq = noisy_mixed_equilibrium(rw, np, a.omega);
  const Margins at_eq =
      noisy_margins(rw, np, GameState(eq.p_align, eq.p_audit, a.omega));
  const Margins full_audit = noisy_margins(rw, np, GameState(0.0, 1.0, a.omega));
  const Margins full_align = noisy_margins(rw, np, GameState(1.0, 0.0, a.omega));
  return json{
      {"game", "noisy"},
      {"rewards",
       {{"r_a", a.r_a},
        {"r_m", a.r_m},
        {"s_catch", a.s_catch},
        {"s_fp", a.s_fp},
        {"s_audit", a.s_audit}}},
      {"noise",
       {{"epsilon", a.epsilon},
        {"kappa_tp", a.kappa_tp},
        {"kappa_fp", a.kappa_fp}}},
      {"omega", a.omega},
      {"mixed_equilibrium",
       {{"p_align", eq.p_align},
        {"p_audit", eq.p_audit},
        {"interior", eq.interior}}},
      {"margins_at_equilibrium",
       {{"deterrence_margin", at_eq.deterrence_margin},
        {"audit_margin", at_eq.audit_margin},
        {"solver_intercept", at_eq.solver_intercept}}},
      {"deterrence_margin_full_audit", full_audit.deterrence_margin},
      {"audit_margin_full_alignment", full_align.audit_margin},
      {"pure_audit_regime", pure_regime_check(rw, np, a.omega)},
      {"pure_regime_omega_bound", pure_regime_omega_bound(rw, np)}};
}

void print_equilibrium_text(const json& r, std::ostream& os) {
  auto num = [](const json& v) { return format_double(v.get<double>()); };
  os << "game: " << r.at("game").get<std::string>() << "\n";
  os << "rewards:";
  for (const auto& item : r.at("rewards").items()) {
    os << ' ' << item.key() << '=' << num(item.value());
  }
  os << "\n";
  if (r.contains("noise")) {
    os << "noise:";
    for (const auto& item : r.at("noise").items()) {
      os << ' ' << item.key() << '=' << num(item.value());
    }
    os << "\n";
  }
  os << "omega: " << num(r.at("omega")) << "\n";
  const json& eq = r.at("mixed_equilibrium");
  os << "mixed equilibrium: p_align=" << num(eq.at("p_align"))
     << " p_audit=" << num(eq.at("p_audit"))
     << (eq.at("interior").get<bool>() ? " (interior)" : " (boundary)")
     << "\n";
  const json& m = r.at("margins_at_equilibrium");
  os << "margins at equilibrium: deterrence=" << num(m.at("deterrence_margin"))
     << " audit=" << num(m.at("audit_margin"))
     << " solver_intercept=" << num(m.at("solver_intercept")) << "\n";
  os << "deterrence margin at full audit: "
     << num(r.at("deterrence_margin_full_audit")) << "\n";
  os << "audit margin at full alignment: "
     << num(r.at("audit_margin_full_alignment")) << "\n";
  if (r.contains("pure_equilibria")) {
    os << "pure equilibria:";
    for (const char* label : {"(0,0)", "(0,1)", "(1,0)", "(1,1)"}) {
      os << ' ' << label << '='
         << yes_no(r.at("pure_equilibria").at(label).get<bool>());
    }
    os << "\n";
  }
  if (r.contains("pure_audit_regime")) {
    os << "pure audit regime (audit pays at full alignment): "
       << yes_no(r.at("pure_audit_regime").get<bool>()) << "\n";
    os << "pure regime omega bound: "
       << num(r.at("pure_regime_omega_bound")) << "\n";
  }
}

int cmd_equilibrium(const GlobalArgs& g, GameArgs& a) {
  auto cfg = maybe_load_config(g);
  resolve_game_args(a, cfg ? &*cfg : nullptr);
  const json report = a.noisy ? noisy_report(a) : analytic_report(a);
  if (g.as_json) {
    std::cout << report.dump(2) << "\n";
  } else {
    print_equilibrium_text(report, std::cout);
  }
  return 0;
}

// ---- best-response ----

int cmd_best_response(const GlobalArgs& g, GameArgs& a) {
  auto cfg = maybe_load_config(g);
  resolve_game_args(a, cfg ? &*cfg : nullptr);
  AnalyticRewards rw{a.r_a, a.r_m, a.r_catch, a.r_fp, a.r_audit};
  rw.validate();
  const auto graph = best_response_graph(rw, a.omega);
  std::ostringstream csv;
  csv << "p_align,p_audit,player,next_p_align,next_p_audit\n";
  for (const BestResponseEdge& e : graph) {
    csv << (e.from.aligned ? 1 : 0) << ',' << (e.from.audited ? 1 : 0) << ','
        << player_name(e.mover) << ',' << (e.to.aligned ? 1 : 0) << ','
        << (e.to.audited ? 1 : 0) << "\n";
  }
  if (g.out_set) {
    write_file(g.out, csv.str());
  } else {
    std::cout << csv.str();
  }
  return 0;
}

// ---- simulate / baseline ----

json record_json(const std::string& run_id, const OuterRecord& rec) {
  json rates = json::object();
  for (Outcome o : kAllOutcomes) {
    rates[outcome_name(o)] = rec.report.outcome_rates[static_cast<int>(o)];
  }
  return json{{"run_id", run_id},
              {"outer_round", rec.round},
              {"profile_name", rec.profile_name},
              {"mean_pv", rec.report.mean_pv},
              {"outcome_rates", rates},
              {"attempt_rate", rec.report.attempt_rate},
              {"attempted_pass_rate", rec.report.attempted_pass_rate},
              {"hallucination_rate", rec.report.hallucination_rate},
              {"silent_failure_rate", rec.report.silent_failure_rate},
              {"arm_index", rec.arm},
              {"arm_estimate", rec.arm_summary.estimate},
              {"arm_weight", rec.arm_summary.weight}};
}

void write_run_outputs(const fs::path& dir, const ExperimentConfig& cfg,
                       const std::string& run_id, std::uint64_t seed,
                       const RunTrace& trace) {
  write_file(dir / "manifest.json", manifest_json(cfg, run_id, seed).dump(2) + "\n");
  write_file(dir / "policy_solver_final.txt",
             serialize_policy(trace.solver_final));
  write_file(dir / "policy_auditor_final.txt",
             serialize_policy(trace.auditor_final));
  for (const PolicySnapshot& snap : trace.snapshots) {
    const std::string tag = "_round_" + std::to_string(snap.round) + ".txt";
    write_file(dir / ("policy_solver" + tag), serialize_policy(snap.solver));
    write_file(dir / ("policy_auditor" + tag), serialize_policy(snap.auditor));
  }
  if (cfg.output.write_json) {
    json rows = json::array();
    for (const OuterRecord& rec : trace.records) {
      rows.push_back(record_json(run_id, rec));
    }
    write_file(dir / "trace.json", rows.dump(2) + "\n");
  }
}

/// Shared driver for simulate and baseline; `run` maps an OuterConfig and a
/// streaming sink to a finished trace.
template <typename RunFn>
int run_per_seed(const ExperimentConfig& cfg, const std::string& run_prefix,
                 const RunFn& run) {
  for (std::uint64_t seed : cfg.seeds) {
    const std::string run_id = run_prefix + std::to_string(seed);
    const fs::path dir = fs::path(cfg.output.dir) / run_id;
    fs::create_directories(dir);
    std::ofstream trace_out(dir / "trace.csv", std::ios::binary);
    if (!trace_out)
      throw ConfigError("cannot write '" + (dir / "trace.csv").string() + "'");
    trace_out << trace_csv_header() << "\n";
    RoundSink sink = [&](const OuterRecord& rec) {
      trace_out << trace_csv_row(run_id, rec) << "\n";
    };
    OuterConfig outer = make_outer_config(cfg, seed, run_id);
    RunTrace trace;
    try {
      trace = run(outer, sink);
    } catch (const OuterLoopNumericError& e) {
      trace_out.flush();
      write_file(dir / "policy_solver_diverged.txt",
                 e.diagnostic.solver_policy);
      write_file(dir / "policy_auditor_diverged.txt",
                 e.diagnostic.auditor_policy);
      std::cerr << "run " << run_id << ": diverged policies written to "
                << dir.string() << "\n";
      throw;
    }
    trace_out.flush();
    write_run_outputs(dir, cfg, run_id, seed, trace);
    const OuterRecord& last = trace.records.back();
    std::cout << "run " << run_id << ": " << trace.records.size()
              << " outer rounds, final mean_pv="
              << format_double(last.report.mean_pv) << ", final profile="
              << last.profile_name << "\n";
    std::cout << "wrote " << dir.string() << "\n";
  }
  return 0;
}

int cmd_simulate(const GlobalArgs& g) {
  const ExperimentConfig cfg = effective_config(g);
  return run_per_seed(cfg, "sim-",
                      [](const OuterConfig& outer, const RoundSink& sink) {
                        return run_outer_loop(outer, sink);
                      });
}

int cmd_baseline(const GlobalArgs& g, const std::string& profile_name) {
  ExperimentConfig cfg = effective_config(g);
  const RewardProfile* chosen = nullptr;
  for (const RewardProfile& p : cfg.profiles) {
    if (p.name == profile_name) chosen = &p;
  }
  if (!chosen) {
    std::string names;
    for (const RewardProfile& p : cfg.profiles) {
      names += (names.empty() ? "" : ", ") + p.name;
    }
    throw ConfigError("baseline: unknown profile '" + profile_name +
                      "' (available: " + names + ")");
  }
  const RewardProfile profile = *chosen;
  // The manifest describes the run actually performed: one profile, no
  // adaptation.
  cfg.profiles = {profile};
  cfg.controller = ControllerSpec{};
  cfg.controller.name = "constant";
  return run_per_seed(cfg, "baseline-" + profile.name + "-",
                      [&](const OuterConfig& outer, const RoundSink& sink) {
                        return fixed_profile_baseline(outer, profile, sink);
                      });
}

// ---- bandit-bench ----

int cmd_bandit_bench(const GlobalArgs& g) {
  if (g.config_path.empty())
    throw ConfigError("bandit-bench: needs --config with a controllers list");
  const ExperimentConfig cfg = effective_config(g);
  if (cfg.controllers.size() < 2)
    throw ConfigError(
        "bandit-bench: config must list at least two controllers");
  const fs::path dir = fs::path(cfg.output.dir) / "bench";
  fs::create_directories(dir);
  const OuterConfig base = make_outer_config(cfg, cfg.seeds.front(), "bench");
  const ControllerComparison cmp =
      compare_controllers(base, cfg.controllers, cfg.seeds);

  std::ostringstream rows;
  rows << comparison_csv_header() << "\n";
  for (const ComparisonRow& row : cmp.rows) {
    rows << comparison_csv_row(row) << "\n";
  }
  write_file(dir / "comparison.csv", rows.str());
  write_file(dir / "comparison_summary.csv", comparison_summary_csv(cmp));
  for (const ControllerSpec& spec : cfg.controllers) {
    std::ostringstream traj;
    traj << trajectory_csv_header() << "\n";
    for (const ComparisonEntry& entry : cmp.entries) {
      if (entry.controller != spec.name) continue;
      write_trajectory_csv(traj, entry, cfg.schedule, cmp.smooth_window);
    }
    write_file(dir / ("trajectory_" + spec.name + ".csv"), traj.str());
  }
  write_file(dir / "manifest.json",
             manifest_json(cfg, "bench", cfg.seeds.front()).dump(2) + "\n");

  std::cout << comparison_summary_csv(cmp);
  std::cout << "wrote " << dir.string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Reward-design workbench for two-agent solver/auditor correction "
      "games: closed-form game analysis plus a simulated training pipeline "
      "with adaptive reward-profile selection."};
  app.require_subcommand(1);

  GlobalArgs g;
  CLI::Option* seed_opt =
      app.add_option("--seed", g.seed, "Override the config seed list");
  CLI::Option* out_opt =
      app.add_option("--out", g.out,
                     "Output directory (best-response: output file)");
  app.add_option("--config", g.config_path, "JSON experiment config file");
  app.add_flag("--json", g.as_json, "JSON output where supported");

  GameArgs eq_args;
  CLI::App* eq = app.add_subcommand(
      "equilibrium", "Closed-form equilibrium and margin report");
  eq->fallthrough();
  add_game_options(eq, eq_args, true);

  GameArgs br_args;
  CLI::App* br = app.add_subcommand(
      "best-response", "Discrete best-response graph over the four pure "
                       "profiles, as CSV");
  br->fallthrough();
  add_game_options(br, br_args, false);

  CLI::App* sim = app.add_subcommand(
      "simulate", "Run the adaptive reward-design loop for every seed");
  sim->fallthrough();

  std::string baseline_profile = "default";
  CLI::App* base = app.add_subcommand(
      "baseline", "Run one fixed reward profile with no adaptation");
  base->fallthrough();
  base->add_option("--profile", baseline_profile,
                   "Profile name from the configured library");

  CLI::App* bench = app.add_subcommand(
      "bandit-bench", "Compare the configured controllers across seeds");
  bench->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  g.seed_set = seed_opt->count() > 0;
  g.out_set = out_opt->count() > 0;

  try {
    if (eq->parsed()) return cmd_equilibrium(g, eq_args);
    if (br->parsed()) return cmd_best_response(g, br_args);
    if (sim->parsed()) return cmd_simulate(g);
    if (base->parsed()) return cmd_baseline(g, baseline_profile);
    if (bench->parsed()) return cmd_bandit_bench(g);
    std::cerr << "error: no subcommand selected\n";
    return 2;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const NumericError& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
