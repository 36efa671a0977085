#include "corrgame/environment.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "corrgame/errors.hpp"

namespace corrgame {

const char* outcome_name(Outcome o) {
  switch (o) {
    case Outcome::Abstain: return "abstain";
    case Outcome::Aligned: return "aligned";
    case Outcome::Caught: return "caught";
    case Outcome::FalsePositive: return "false_positive";
    case Outcome::Silent: return "silent";
  }
  throw std::invalid_argument("outcome_name: bad outcome value");
}

void TaskDistribution::validate() const {
  if (levels.empty()) throw ConfigError("tasks: needs at least one level");
  if (prior.size() != levels.size() || p_correct.size() != levels.size()) {
    throw ConfigError("tasks: prior and p_correct must match levels in size");
  }
  double total = 0.0;
  for (double p : prior) {
    if (!(p >= 0.0) || !std::isfinite(p))
      throw ConfigError("tasks: prior entries must be finite and >= 0");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-12)
    throw ConfigError("tasks: prior must sum to 1 within 1e-12");
  for (double p : p_correct) {
    if (!std::isfinite(p) || p < 0.0 || p > 1.0)
      throw ConfigError("tasks: p_correct entries must lie in [0, 1]");
  }
  if (!std::isfinite(noise_sigma) || noise_sigma < 0.0)
    throw ConfigError("tasks: noise_sigma must be finite and >= 0");
}

Outcome classify_outcome(SolverAction solver, std::optional<bool> correct,
                         AuditorAction auditor) {
  if (solver == SolverAction::Abstain) {
    if (correct.has_value())
      throw std::invalid_argument(
          "classify_outcome: correctness must be empty after an abstain");
    if (auditor != AuditorAction::None)
      throw std::invalid_argument(
          "classify_outcome: auditor must be None after an abstain");
    return Outcome::Abstain;
  }
  if (!correct.has_value())
    throw std::invalid_argument(
        "classify_outcome: attempts must carry a correctness bit");
  if (auditor == AuditorAction::None)
    throw std::invalid_argument(
        "classify_outcome: auditor must act on attempts");
  const bool flagged = auditor == AuditorAction::Audit;
  if (*correct) return flagged ? Outcome::FalsePositive : Outcome::Aligned;
  return flagged ? Outcome::Caught : Outcome::Silent;
}

StreamBundle StreamBundle::from_master(std::uint64_t master,
                                       std::uint64_t run_index) {
  return StreamBundle{make_stream(master, Stream::Task, run_index),
                      make_stream(master, Stream::Solver, run_index),
                      make_stream(master, Stream::Auditor, run_index),
                      make_stream(master, Stream::Correctness, run_index)};
}

OutcomeRecord sample_round(const PolicyNet& solver, const PolicyNet& auditor,
                           const TaskDistribution& tasks, StreamBundle& rngs) {
  tasks.validate();
  OutcomeRecord rec;
  rec.level = rngs.task.categorical(tasks.prior);
  const double truth = tasks.p_correct[rec.level];
  rec.signal =
      std::clamp(truth + rngs.task.normal(0.0, tasks.noise_sigma), 0.0, 1.0);

  const double p_attempt = policy_forward(solver, rec.signal)[0];
  rec.solver_action = rngs.solver.bernoulli(p_attempt) ? SolverAction::Attempt
                                                       : SolverAction::Abstain;
  if (rec.solver_action == SolverAction::Abstain) {
    rec.auditor_action = AuditorAction::None;
    rec.outcome = Outcome::Abstain;
    return rec;
  }

  const double p_audit = policy_forward(auditor, rec.signal)[0];
  rec.auditor_action = rngs.auditor.bernoulli(p_audit) ? AuditorAction::Audit
                                                       : AuditorAction::Abstain;
  rec.correct = rngs.correctness.bernoulli(truth);
  rec.outcome = classify_outcome(rec.solver_action, rec.correct,
                                 rec.auditor_action);
  return rec;
}

RoundRewards profile_rewards(const RewardProfile& profile,
                             const OutcomeRecord& record, double omega_bonus) {
  RoundRewards r;
  r.solver = profile.solver_reward(record.outcome);
  if (record.outcome == Outcome::Silent) r.solver += omega_bonus;
  r.auditor_acted = record.auditor_action != AuditorAction::None;
  r.auditor = r.auditor_acted ? profile.auditor_reward(record.outcome) : 0.0;
  return r;
}

InnerRoundResult inner_round(const PolicyNet& solver, const PolicyNet& auditor,
                             const TaskDistribution& tasks,
                             const RewardProfile& profile, double omega_bonus,
                             StreamBundle& rngs) {
  InnerRoundResult out;
  out.record = sample_round(solver, auditor, tasks, rngs);
  out.rewards = profile_rewards(profile, out.record, omega_bonus);
  return out;
}

}  // namespace corrgame
