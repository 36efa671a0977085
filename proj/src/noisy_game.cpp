#include "corrgame/noisy_game.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace corrgame {

namespace {

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) {
    throw std::domain_error(std::string(what) + " must be finite");
  }
}

}  // namespace

void NoiseParams::validate() const {
  require_finite(flip_rate, "flip_rate");
  require_finite(verdict_tp, "verdict_tp");
  require_finite(verdict_fp, "verdict_fp");
  if (flip_rate < 0.0 || flip_rate >= 0.5) {
    throw std::domain_error("NoiseParams: requires 0 <= flip_rate < 1/2");
  }
  if (verdict_tp < 0.0 || verdict_tp > 1.0) {
    throw std::domain_error("NoiseParams: requires 0 <= verdict_tp <= 1");
  }
  if (verdict_fp < 0.0 || verdict_fp > 1.0) {
    throw std::domain_error("NoiseParams: requires 0 <= verdict_fp <= 1");
  }
  if (!(verdict_fp < verdict_tp)) {
    throw std::domain_error("NoiseParams: requires verdict_fp < verdict_tp");
  }
}

void NoisyRewards::validate() const {
  require_finite(align_reward, "align_reward");
  require_finite(misalign_reward, "misalign_reward");
  require_finite(catch_reward, "catch_reward");
  require_finite(false_positive_cost, "false_positive_cost");
  require_finite(audit_cost, "audit_cost");
  if (!(align_reward > misalign_reward)) {
    throw std::domain_error(
        "NoisyRewards: requires align_reward > misalign_reward");
  }
  if (!(audit_cost < catch_reward)) {
    throw std::domain_error("NoisyRewards: requires audit_cost < catch_reward");
  }
}

DerivedNoiseQuantities derived_noise(const NoiseParams& np, double p_align) {
  np.validate();
  const double p = std::clamp(p_align, 0.0, 1.0);
  DerivedNoiseQuantities q;
  q.true_align_prob = np.flip_rate + (1.0 - 2.0 * np.flip_rate) * p;
  q.flag_rate_misaligned =
      (1.0 - np.flip_rate) * np.verdict_tp + np.flip_rate * np.verdict_fp;
  q.flag_rate_aligned =
      np.flip_rate * np.verdict_tp + (1.0 - np.flip_rate) * np.verdict_fp;
  return q;
}

Margins noisy_margins(const NoisyRewards& rw, const NoiseParams& np,
                      const GameState& st) {
  rw.validate();
  np.validate();
  const double gap = rw.align_reward - rw.misalign_reward;
  const double shrink =
      (1.0 - 2.0 * np.flip_rate) * (np.verdict_tp - np.verdict_fp);
  const DerivedNoiseQuantities q = derived_noise(np, st.p_align);
  Margins m;
  m.deterrence_margin = st.p_audit * shrink * gap - st.omega;
  m.solver_intercept =
      rw.align_reward + st.omega - st.p_audit * q.flag_rate_misaligned * gap;
  // Flag probability under audit, as a function of the true alignment rate.
  const double flag_prob =
      np.verdict_tp - q.true_align_prob * (np.verdict_tp - np.verdict_fp);
  m.audit_margin = flag_prob * rw.catch_reward -
                   (1.0 - flag_prob) * rw.false_positive_cost - rw.audit_cost;
  return m;
}

double noisy_solver_utility(const NoisyRewards& rw, const NoiseParams& np,
                            const GameState& st) {
  const Margins m = noisy_margins(rw, np, st);
  return st.p_align * m.deterrence_margin + m.solver_intercept;
}

double noisy_auditor_utility(const NoisyRewards& rw, const NoiseParams& np,
                             const GameState& st) {
  const Margins m = noisy_margins(rw, np, st);
  return st.p_audit * m.audit_margin;
}

MixedEquilibrium noisy_mixed_equilibrium(const NoisyRewards& rw,
                                         const NoiseParams& np, double omega) {
  rw.validate();
  np.validate();
  require_finite(omega, "omega");
  if (omega < 0.0) {
    throw std::domain_error("noisy_mixed_equilibrium: requires omega >= 0");
  }
  const double gap = rw.align_reward - rw.misalign_reward;
  const double shrink =
      (1.0 - 2.0 * np.flip_rate) * (np.verdict_tp - np.verdict_fp);
  const double catch_span = rw.catch_reward + rw.false_positive_cost;
  if (catch_span == 0.0) {
    throw std::domain_error(
        "noisy_mixed_equilibrium: requires catch_reward + "
        "false_positive_cost != 0");
  }
  const DerivedNoiseQuantities q = derived_noise(np, 0.0);
  const double p_align =
      (q.flag_rate_misaligned * catch_span - rw.false_positive_cost -
       rw.audit_cost) /
      (shrink * catch_span);
  const double p_audit = omega / (shrink * gap);
  MixedEquilibrium eq;
  eq.p_align = std::clamp(p_align, 0.0, 1.0);
  eq.p_audit = std::clamp(p_audit, 0.0, 1.0);
  eq.interior = p_align > 0.0 && p_align < 1.0 && p_audit > 0.0 && p_audit < 1.0;
  return eq;
}

bool pure_regime_check(const NoisyRewards& rw, const NoiseParams& np,
                       double omega) {
  rw.validate();
  np.validate();
  require_finite(omega, "omega");
  if (omega < 0.0) {
    throw std::domain_error("pure_regime_check: requires omega >= 0");
  }
  if (rw.catch_reward <= 0.0) {
    throw std::domain_error("pure_regime_check: requires catch_reward > 0");
  }
  const double lam = derived_noise(np, 1.0).flag_rate_aligned;
  return (1.0 - lam) * rw.false_positive_cost + rw.audit_cost <
         lam * rw.catch_reward;
}

double pure_regime_omega_bound(const NoisyRewards& rw, const NoiseParams& np) {
  rw.validate();
  np.validate();
  return (1.0 - 2.0 * np.flip_rate) * (np.verdict_tp - np.verdict_fp) *
         (rw.align_reward - rw.misalign_reward);
}

}  // namespace corrgame
