#pragma once

#include "corrgame/analytic_game.hpp"

namespace corrgame {

/// Noise channels stacked on top of the base game. The solver's intended
/// action flips with probability flip_rate before execution, and an audit
/// returns a noisy verdict: a truly misaligned action is flagged with
/// probability verdict_tp, an aligned one with probability verdict_fp.
/// Informative auditing requires verdict_fp < verdict_tp and flip_rate < 1/2.
struct NoiseParams {
  double flip_rate = 0.0;    // in [0, 1/2)
  double verdict_tp = 1.0;   // in [0, 1]
  double verdict_fp = 0.0;   // in [0, 1], strictly below verdict_tp

  void validate() const;
};

/// Reward parameters of the noisy game. Solver payoffs key on the verdict
/// (not the truth): align_reward unless an audit flags the action, in which
/// case misalign_reward. Auditor payoffs also key on the verdict:
/// catch_reward when an audit flags, false_positive_cost when it clears,
/// audit_cost always. Temptation omega still accrues on intended
/// misalignment.
struct NoisyRewards {
  double align_reward = 1.0;
  double misalign_reward = -1.0;
  double catch_reward = 1.0;
  double false_positive_cost = 0.3;
  double audit_cost = 0.2;

  void validate() const;
};

/// Probabilities derived from the noise channels at a given intent level.
struct DerivedNoiseQuantities {
  double true_align_prob = 0.0;      // executed action is aligned
  double flag_rate_misaligned = 0.0; // audit flags | intent misaligned
  double flag_rate_aligned = 0.0;    // audit flags | intent aligned
};

DerivedNoiseQuantities derived_noise(const NoiseParams& np, double p_align);

double noisy_solver_utility(const NoisyRewards& rw, const NoiseParams& np,
                            const GameState& st);

double noisy_auditor_utility(const NoisyRewards& rw, const NoiseParams& np,
                             const GameState& st);

/// Same affine decomposition as the noise-free game; both noise channels
/// shrink the deterrence margin by the factor
/// (1 - 2 flip_rate) * (verdict_tp - verdict_fp).
Margins noisy_margins(const NoisyRewards& rw, const NoiseParams& np,
                      const GameState& st);

/// Interior indifference point of the noisy game. Clamps out-of-range
/// coordinates and flags them non-interior, exactly like the noise-free
/// variant. Degenerate denominators (catch_reward + false_positive_cost = 0)
/// are rejected with a domain error.
MixedEquilibrium noisy_mixed_equilibrium(const NoisyRewards& rw,
                                         const NoiseParams& np, double omega);

/// True iff auditing stays profitable even against a fully aligned solver,
///   (1 - lam) * fp_cost / catch + audit_cost / catch < lam,
/// with lam the flag rate given aligned intent. In that regime (and with
/// omega at most the deterrence bound below) the profile (1,1) is a pure
/// Nash equilibrium: noise alone keeps the auditor busy. omega is validated
/// but does not enter the verdict.
bool pure_regime_check(const NoisyRewards& rw, const NoiseParams& np,
                       double omega);

/// Largest omega for which full alignment stays a solver best response under
/// certain audit: (1 - 2 flip_rate) * (verdict_tp - verdict_fp) * gap.
double pure_regime_omega_bound(const NoisyRewards& rw, const NoiseParams& np);

}  // namespace corrgame
