#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "corrgame/noisy_game.hpp"
#include "corrgame/rng.hpp"
#include "support/oracles.hpp"

using namespace corrgame;

namespace {

NoiseParams draw_channel(Rng& rng) {
  NoiseParams np;
  np.flip_rate = rng.uniform(0.0, 0.45);
  np.verdict_fp = rng.uniform(0.0, 0.5);
  np.verdict_tp = np.verdict_fp + rng.uniform(0.05, 1.0 - np.verdict_fp - 0.01);
  return np;
}

NoisyRewards draw_rewards(Rng& rng) {
  NoisyRewards rw;
  rw.align_reward = rng.uniform(0.2, 2.0);
  rw.misalign_reward = rw.align_reward - rng.uniform(0.5, 3.0);
  rw.audit_cost = rng.uniform(0.0, 0.8);
  rw.catch_reward = rw.audit_cost + rng.uniform(0.05, 3.0);
  rw.false_positive_cost = rng.uniform(0.0, 1.5);
  return rw;
}

}  // namespace

TEST_CASE("derived channel quantities on a hand-checked example") {
  const NoiseParams np{0.1, 0.9, 0.2};
  const DerivedNoiseQuantities q = derived_noise(np, 0.7);
  CHECK(q.true_align_prob == doctest::Approx(0.66).epsilon(1e-12));
  CHECK(q.flag_rate_misaligned == doctest::Approx(0.83).epsilon(1e-12));
  CHECK(q.flag_rate_aligned == doctest::Approx(0.27).epsilon(1e-12));
}

TEST_CASE("hand-checked noisy equilibrium") {
  const NoisyRewards rw{1.0, -1.0, 1.0, 0.3, 0.2};
  const NoiseParams np{0.1, 0.9, 0.2};
  const MixedEquilibrium eq = noisy_mixed_equilibrium(rw, np, 0.5);
  CHECK(eq.interior);
  CHECK(eq.p_align == doctest::Approx(0.579 / 0.728).epsilon(1e-12));
  CHECK(eq.p_audit == doctest::Approx(0.5 / 1.12).epsilon(1e-12));
}

TEST_CASE("utilities match the sixteen-branch enumeration oracle") {
  Rng rng(111);
  for (int i = 0; i < 500; ++i) {
    const NoisyRewards rw = draw_rewards(rng);
    const NoiseParams np = draw_channel(rng);
    const GameState st(rng.uniform01(), rng.uniform01(),
                       rng.uniform(0.0, 2.0));
    CHECK(noisy_solver_utility(rw, np, st) ==
          doctest::Approx(oracle::noisy_solver_utility(
                              rw, np, st.p_align, st.p_audit, st.omega))
              .epsilon(1e-12));
    CHECK(noisy_auditor_utility(rw, np, st) ==
          doctest::Approx(oracle::noisy_auditor_utility(
                              rw, np, st.p_align, st.p_audit, st.omega))
              .epsilon(1e-12));
  }
}

TEST_CASE("noise-free channel reduces to the base game") {
  const NoiseParams clean{0.0, 1.0, 0.0};
  Rng rng(222);
  for (int i = 0; i < 300; ++i) {
    const NoisyRewards nrw = draw_rewards(rng);
    AnalyticRewards rw;
    rw.align_reward = nrw.align_reward;
    rw.misalign_reward = nrw.misalign_reward;
    rw.catch_reward = nrw.catch_reward;
    rw.false_positive_cost = nrw.false_positive_cost;
    rw.audit_cost = nrw.audit_cost;
    const GameState st(rng.uniform01(), rng.uniform01(),
                       rng.uniform(0.0, 2.0));
    CHECK(noisy_solver_utility(nrw, clean, st) ==
          doctest::Approx(solver_utility(rw, st)).epsilon(1e-12));
    CHECK(noisy_auditor_utility(nrw, clean, st) ==
          doctest::Approx(auditor_utility(rw, st)).epsilon(1e-12));
    const Margins nm = noisy_margins(nrw, clean, st);
    const Margins m = margins(rw, st);
    CHECK(nm.deterrence_margin ==
          doctest::Approx(m.deterrence_margin).epsilon(1e-12));
    CHECK(nm.audit_margin == doctest::Approx(m.audit_margin).epsilon(1e-12));
  }
}

TEST_CASE("margins are the exact slopes of the noisy utilities") {
  Rng rng(333);
  for (int i = 0; i < 300; ++i) {
    const NoisyRewards rw = draw_rewards(rng);
    const NoiseParams np = draw_channel(rng);
    const GameState st(rng.uniform01(), rng.uniform01(),
                       rng.uniform(0.0, 2.0));
    const Margins m = noisy_margins(rw, np, st);
    const double u1_0 =
        oracle::noisy_solver_utility(rw, np, 0.0, st.p_audit, st.omega);
    const double u1_1 =
        oracle::noisy_solver_utility(rw, np, 1.0, st.p_audit, st.omega);
    CHECK(m.deterrence_margin == doctest::Approx(u1_1 - u1_0).epsilon(1e-9));
    CHECK(m.solver_intercept == doctest::Approx(u1_0).epsilon(1e-9));
    const double u2_1 =
        oracle::noisy_auditor_utility(rw, np, st.p_align, 1.0, st.omega);
    CHECK(m.audit_margin == doctest::Approx(u2_1).epsilon(1e-9));
  }
}

TEST_CASE("interior noisy equilibrium leaves both players indifferent") {
  Rng rng(444);
  int interior_seen = 0;
  for (int i = 0; i < 2000 && interior_seen < 300; ++i) {
    const NoisyRewards rw = draw_rewards(rng);
    const NoiseParams np = draw_channel(rng);
    const double shrink =
        (1.0 - 2.0 * np.flip_rate) * (np.verdict_tp - np.verdict_fp);
    const double omega =
        rng.uniform(0.05, 0.95) * shrink *
        (rw.align_reward - rw.misalign_reward);
    const MixedEquilibrium eq = noisy_mixed_equilibrium(rw, np, omega);
    if (!eq.interior) continue;
    interior_seen += 1;
    // Cross-checked against the oracle: utilities flat in the own
    // probability at the reported point.
    const double u1_0 =
        oracle::noisy_solver_utility(rw, np, 0.0, eq.p_audit, omega);
    const double u1_1 =
        oracle::noisy_solver_utility(rw, np, 1.0, eq.p_audit, omega);
    CHECK(std::abs(u1_1 - u1_0) < 1e-9);
    const double u2_1 =
        oracle::noisy_auditor_utility(rw, np, eq.p_align, 1.0, omega);
    CHECK(std::abs(u2_1) < 1e-9);
  }
  CHECK(interior_seen == 300);
}

TEST_CASE("noise shrinks deterrence") {
  const NoisyRewards rw{1.0, -1.0, 1.0, 0.3, 0.2};
  const GameState st(0.5, 0.8, 0.1);
  double last = noisy_margins(rw, NoiseParams{0.0, 0.9, 0.2}, st)
                    .deterrence_margin;
  for (double eps : {0.1, 0.2, 0.3, 0.4}) {
    const double cur =
        noisy_margins(rw, NoiseParams{eps, 0.9, 0.2}, st).deterrence_margin;
    CHECK(cur < last);
    last = cur;
  }
}

TEST_CASE("pure audit regime check on hand-checked examples") {
  const NoiseParams np{0.1, 0.9, 0.2};  // flag rate given aligned = 0.27
  CHECK(pure_regime_check(NoisyRewards{1.0, -1.0, 10.0, 0.3, 0.2}, np, 0.5));
  CHECK_FALSE(
      pure_regime_check(NoisyRewards{1.0, -1.0, 1.0, 0.3, 0.2}, np, 0.5));
  CHECK(pure_regime_omega_bound(NoisyRewards{1.0, -1.0, 10.0, 0.3, 0.2}, np) ==
        doctest::Approx(1.12).epsilon(1e-12));
}

TEST_CASE("pure audit regime implies a (1,1) equilibrium") {
  Rng rng(555);
  int confirmed = 0;
  for (int i = 0; i < 2000 && confirmed < 200; ++i) {
    const NoiseParams np = draw_channel(rng);
    NoisyRewards rw = draw_rewards(rng);
    const DerivedNoiseQuantities q = derived_noise(np, 1.0);
    const double lam = q.flag_rate_aligned;
    if (lam < 1e-3) continue;
    // Margin of the regime inequality, with enough slack that the verdict
    // is unambiguous either way.
    const double needed =
        ((1.0 - lam) * rw.false_positive_cost + rw.audit_cost) / lam;
    if (needed * lam < 0.01) continue;  // keep the non-regime margin strict
    const bool regime = rng.bernoulli(0.5);
    rw.catch_reward = regime ? needed * 1.2 + 0.1
                             : std::max(rw.audit_cost + 0.05, needed * 0.8);
    if (!regime && rw.catch_reward >= needed * 0.999) continue;
    const double bound = pure_regime_omega_bound(rw, np);
    const double omega = 0.5 * bound;
    CHECK(pure_regime_check(rw, np, omega) == regime);
    if (regime) {
      CHECK(oracle::noisy_is_pure_nash(rw, np, omega, true, true));
      confirmed += 1;
    } else {
      // Below the regime threshold the auditor strictly prefers to stand
      // down against a fully aligned solver.
      CHECK_FALSE(oracle::noisy_is_pure_nash(rw, np, omega, true, true));
    }
  }
  CHECK(confirmed == 200);
}

TEST_CASE("channel and reward validation") {
  NoiseParams np;
  np.flip_rate = 0.5;
  CHECK_THROWS_AS(np.validate(), std::domain_error);
  np = NoiseParams{};
  np.verdict_fp = np.verdict_tp;
  CHECK_THROWS_AS(np.validate(), std::domain_error);
  np = NoiseParams{};
  np.verdict_tp = 1.5;
  CHECK_THROWS_AS(np.validate(), std::domain_error);

  NoisyRewards rw;
  rw.audit_cost = rw.catch_reward;
  CHECK_THROWS_AS(rw.validate(), std::domain_error);
  rw = NoisyRewards{};
  rw.misalign_reward = rw.align_reward + 1.0;
  CHECK_THROWS_AS(rw.validate(), std::domain_error);

  const NoisyRewards ok;
  const NoiseParams ch{0.1, 0.9, 0.2};
  CHECK_THROWS_AS(noisy_mixed_equilibrium(ok, ch, -0.5), std::domain_error);
  CHECK_THROWS_AS(pure_regime_check(ok, ch, -0.5), std::domain_error);
}
