#pragma once

#include <cstdint>
#include <functional>
#include <ostream>
#include <string>
#include <vector>

#include "corrgame/bandits.hpp"
#include "corrgame/environment.hpp"
#include "corrgame/errors.hpp"
#include "corrgame/policy.hpp"

namespace corrgame {

/// What each outcome is worth to the principal, independent of either
/// agent's training rewards. Defaults: a correct unflagged answer is best, a
/// caught mistake is worth half (the error surfaced), an abstention is a
/// small positive, a false flag is mildly negative and an uncaught mistake
/// is the worst case.
struct PrincipalValueTable {
  std::array<double, kOutcomeCount> value = {0.1, 1.0, 0.5, -0.3, -1.0};

  double of(Outcome o) const { return value[static_cast<int>(o)]; }

  /// Expected ordering aligned > caught > abstain > false_positive > silent.
  /// Deliberately warn-only: experiments that invert it are legal.
  bool ordering_ok() const;
  void validate() const;  // finiteness only; throws ConfigError
};

/// Inference-only evaluation summary.
struct EvalReport {
  double mean_pv = 0.0;
  std::array<double, kOutcomeCount> outcome_rates{};
  double attempt_rate = 0.0;
  double attempted_pass_rate = 0.0;   // 0 when nothing was attempted
  double hallucination_rate = 0.0;    // caught + silent as a fraction of all
  double silent_failure_rate = 0.0;
  long sample_count = 0;
};

/// Builds the report from per-outcome counts; exposed separately so the
/// bookkeeping can be checked against hand-computed tables.
EvalReport aggregate_report(const std::array<long, kOutcomeCount>& counts,
                            const PrincipalValueTable& pv);

/// Runs `rounds` rounds with frozen weights and aggregates. Never mutates
/// the policies; the mean principal value is the payoff signal handed to the
/// meta-controller.
EvalReport evaluate_frozen(const PolicyNet& solver, const PolicyNet& auditor,
                           const TaskDistribution& tasks,
                           const PrincipalValueTable& pv, long rounds,
                           StreamBundle& rngs);

/// Temptation bonus paid on silent outcomes during training, either constant
/// or moving linearly from `initial` to `final_value` over the run's
/// training rounds. Off (0) by default.
struct OmegaSchedule {
  std::string kind = "constant";  // "constant" | "linear"
  double initial = 0.0;
  double final_value = 0.0;

  double at(double progress) const;  // progress in [0, 1]
  void validate() const;
};

struct LearnerConfig {
  int hidden = 16;
  double learning_rate = 0.05;
  int update_window = 32;  // rounds per policy-gradient batch
  OmegaSchedule omega;
  std::string solver_snapshot;   // optional warm-start file
  std::string auditor_snapshot;

  void validate() const;
};

struct Schedule {
  int outer_rounds = 60;
  long train_rounds = 512;   // learning rounds per outer round
  long eval_rounds = 2048;   // frozen evaluation rounds per outer round
  int snapshot_interval = 0;  // 0 = final snapshot only

  void validate() const;
};

struct OuterConfig {
  TaskDistribution tasks;
  LearnerConfig learner;
  std::vector<RewardProfile> profiles;
  PrincipalValueTable principal;
  ControllerSpec controller;
  Schedule schedule;
  std::uint64_t seed = 0;
  std::string run_id = "run";

  void validate() const;
};

struct OuterRecord {
  int round = 0;
  int arm = 0;
  std::string profile_name;
  EvalReport report;
  ArmSummary arm_summary;
};

struct PolicySnapshot {
  int round = 0;
  PolicyNet solver;
  PolicyNet auditor;
};

struct RunTrace {
  std::vector<OuterRecord> records;
  PolicyNet solver_final;
  PolicyNet auditor_final;
  std::vector<PolicySnapshot> snapshots;
};

/// State captured when the outer loop aborts on a non-finite payoff, so the
/// diverged policies can be dumped for inspection.
struct OuterLoopDiagnostic {
  int round = 0;
  std::string solver_policy;
  std::string auditor_policy;
};

struct OuterLoopNumericError : NumericError {
  OuterLoopNumericError(const std::string& msg, OuterLoopDiagnostic diag)
      : NumericError(msg), diagnostic(std::move(diag)) {}

  OuterLoopDiagnostic diagnostic;
};

using RoundSink = std::function<void(const OuterRecord&)>;

/// The co-evolution loop. Per outer round: the controller picks a reward
/// profile, both policies train on it for schedule.train_rounds (policies
/// warm-start from the previous round), a frozen evaluation estimates the
/// mean principal value, and the controller is updated with that estimate.
/// The chosen profile is held bitwise-constant within the training block.
/// A non-finite estimate aborts with NumericError after the sink has seen
/// all completed rounds.
RunTrace run_outer_loop(const OuterConfig& cfg, const RoundSink& sink = {});

/// Degenerate loop: one profile, no adaptation. Implemented as
/// run_outer_loop over a one-profile library with the "constant" controller,
/// so it is trace-identical to that configuration by construction.
RunTrace fixed_profile_baseline(const OuterConfig& cfg,
                                const RewardProfile& profile,
                                const RoundSink& sink = {});

/// Trailing-window moving average (window w, shorter at the start).
std::vector<double> smooth_series(const std::vector<double>& series,
                                  int window);

/// First index where `smoothed` reaches `threshold`; falls back to the last
/// index when the run never gets there, so the statistic always points into
/// the trajectory.
int threshold_round(const std::vector<double>& smoothed, double threshold);

struct ComparisonRow {
  std::string controller;
  std::uint64_t seed = 0;
  double final_mean_pv = 0.0;
  double final_smoothed = 0.0;
  int threshold_round = 0;
  long total_inner_rounds = 0;
};

struct ComparisonEntry {
  std::string controller;
  std::uint64_t seed = 0;
  std::vector<OuterRecord> records;
};

struct ControllerComparison {
  std::vector<ComparisonRow> rows;       // one per (controller, seed)
  std::vector<ComparisonEntry> entries;  // full trajectories, same order
  double threshold_fraction = 0.9;
  int smooth_window = 5;
};

/// Runs every controller on every seed over a shared environment, profile
/// library and seed schedule. The convergence threshold for a seed is
/// threshold_fraction times the best final smoothed mean principal value
/// across controllers on that seed. Runs execute in parallel (max_threads
/// 0 picks the hardware count); results are deterministic regardless of
/// scheduling.
ControllerComparison compare_controllers(
    const OuterConfig& base, const std::vector<ControllerSpec>& controllers,
    const std::vector<std::uint64_t>& seeds, double threshold_fraction = 0.9,
    int smooth_window = 5, int max_threads = 0);

// ---- Trace serialization (schema "run_trace_v1") ----

const char* trace_csv_header();
std::string trace_csv_row(const std::string& run_id, const OuterRecord& rec);

const char* comparison_csv_header();
std::string comparison_csv_row(const ComparisonRow& row);

const char* comparison_summary_csv_header();
/// Per-controller medians over seeds, in the order controllers were given.
std::string comparison_summary_csv(const ControllerComparison& cmp);

const char* trajectory_csv_header();
void write_trajectory_csv(std::ostream& os, const ComparisonEntry& entry,
                          const Schedule& schedule, int smooth_window);

double median(std::vector<double> values);

}  // namespace corrgame
