#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "corrgame/policy.hpp"
#include "corrgame/rng.hpp"

namespace corrgame {

/// Joint outcome of one simulated round, from the principal's point of view.
enum class Outcome : int {
  Abstain = 0,        // solver declined the task
  Aligned = 1,        // attempt, correct, not flagged
  Caught = 2,         // attempt, incorrect, flagged
  FalsePositive = 3,  // attempt, correct, flagged
  Silent = 4,         // attempt, incorrect, not flagged
};

inline constexpr int kOutcomeCount = 5;
inline constexpr std::array<Outcome, kOutcomeCount> kAllOutcomes = {
    Outcome::Abstain, Outcome::Aligned, Outcome::Caught,
    Outcome::FalsePositive, Outcome::Silent};

const char* outcome_name(Outcome o);

enum class SolverAction { Attempt, Abstain };

/// None means the auditor never moved because the solver abstained.
enum class AuditorAction { Audit, Abstain, None };

/// Task generator: a categorical draw over difficulty levels, each with a
/// ground-truth success probability, plus Gaussian observation noise on the
/// signal both agents see.
struct TaskDistribution {
  std::vector<std::string> levels = {"easy", "medium", "hard"};
  std::vector<double> prior = {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};
  std::vector<double> p_correct = {0.9, 0.6, 0.25};
  double noise_sigma = 0.1;

  /// Throws ConfigError on mismatched sizes, a prior off unit sum by more
  /// than 1e-12, success probabilities outside [0, 1], or negative sigma.
  void validate() const;
};

/// Training rewards for both agents, one entry per outcome. The auditor
/// never moves in an abstain round, so its abstain entry is only an
/// accounting placeholder (0 in every built-in profile).
struct RewardProfile {
  std::string name;
  std::array<double, kOutcomeCount> solver{};
  std::array<double, kOutcomeCount> auditor{};

  double solver_reward(Outcome o) const { return solver[static_cast<int>(o)]; }
  double auditor_reward(Outcome o) const {
    return auditor[static_cast<int>(o)];
  }
};

/// Eight built-in profiles spanning the design axes the meta-controller
/// searches over: abstention pricing, solver catch penalties, audit
/// eagerness, false-positive aversion and silent-failure pricing.
std::vector<RewardProfile> default_profile_library();

/// Everything observable about one round.
struct OutcomeRecord {
  double signal = 0.0;  // noisy success-probability estimate shown to agents
  int level = 0;        // difficulty index drawn
  SolverAction solver_action = SolverAction::Abstain;
  AuditorAction auditor_action = AuditorAction::None;
  std::optional<bool> correct;  // empty iff the solver abstained
  Outcome outcome = Outcome::Abstain;
};

/// Maps (solver action, correctness, auditor action) to an Outcome.
/// Inconsistent combinations (correctness present after an abstain, a missing
/// auditor action after an attempt, ...) throw std::invalid_argument.
Outcome classify_outcome(SolverAction solver, std::optional<bool> correct,
                         AuditorAction auditor);

/// The independent random substreams one simulated run consumes. Keeping the
/// consumers apart means e.g. switching the auditor policy cannot shift the
/// task sequence.
struct StreamBundle {
  Rng task;
  Rng solver;
  Rng auditor;
  Rng correctness;

  static StreamBundle from_master(std::uint64_t master,
                                  std::uint64_t run_index = 0);
};

/// One environment round without learning: draw a task, show both agents the
/// noisy signal, let the solver attempt or abstain, let the auditor audit
/// only actual attempts, then resolve correctness.
OutcomeRecord sample_round(const PolicyNet& solver, const PolicyNet& auditor,
                           const TaskDistribution& tasks, StreamBundle& rngs);

struct RoundRewards {
  double solver = 0.0;
  double auditor = 0.0;
  bool auditor_acted = false;
};

/// Reward lookup for a finished round. omega_bonus is an extra solver payoff
/// added on Silent outcomes only (a temptation knob, 0 by default).
RoundRewards profile_rewards(const RewardProfile& profile,
                             const OutcomeRecord& record, double omega_bonus);

struct InnerRoundResult {
  OutcomeRecord record;
  RoundRewards rewards;
};

/// sample_round plus reward lookup; the unit of simulated experience.
InnerRoundResult inner_round(const PolicyNet& solver, const PolicyNet& auditor,
                             const TaskDistribution& tasks,
                             const RewardProfile& profile, double omega_bonus,
                             StreamBundle& rngs);

}  // namespace corrgame
