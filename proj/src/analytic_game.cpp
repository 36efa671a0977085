#include "corrgame/analytic_game.hpp"

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

void AnalyticRewards::validate() const {
  require_finite(align_reward, "align_reward");
  require_finite(misalign_reward, "misalign_reward");
  require_finite(catch_reward, "catch_reward");
  require_finite(false_positive_cost, "false_positive_cost");
  require_finite(audit_cost, "audit_cost");
  if (!(align_reward > misalign_reward)) {
    throw std::domain_error(
        "AnalyticRewards: requires align_reward > misalign_reward");
  }
  if (false_positive_cost < 0.0) {
    throw std::domain_error(
        "AnalyticRewards: requires false_positive_cost >= 0");
  }
  if (audit_cost < 0.0) {
    throw std::domain_error("AnalyticRewards: requires audit_cost >= 0");
  }
}

GameState::GameState(double p_align_in, double p_audit_in, double omega_in) {
  require_finite(p_align_in, "p_align");
  require_finite(p_audit_in, "p_audit");
  require_finite(omega_in, "omega");
  if (omega_in < 0.0) {
    throw std::domain_error("GameState: requires omega >= 0");
  }
  p_align = std::clamp(p_align_in, 0.0, 1.0);
  p_audit = std::clamp(p_audit_in, 0.0, 1.0);
  omega = omega_in;
}

const char* player_name(Player p) {
  return p == Player::Solver ? "solver" : "auditor";
}

std::string profile_label(const PureProfile& p) {
  std::ostringstream os;
  os << '(' << (p.aligned ? 1 : 0) << ',' << (p.audited ? 1 : 0) << ')';
  return os.str();
}

double solver_utility(const AnalyticRewards& rw, const GameState& st) {
  rw.validate();
  const double flagged = rw.align_reward * st.p_align +
                         rw.misalign_reward * (1.0 - st.p_align);
  return st.p_audit * flagged + (1.0 - st.p_audit) * rw.align_reward +
         (1.0 - st.p_align) * st.omega;
}

double auditor_utility(const AnalyticRewards& rw, const GameState& st) {
  rw.validate();
  return st.p_audit * ((1.0 - st.p_align) * rw.catch_reward -
                       st.p_align * rw.false_positive_cost - rw.audit_cost);
}

Margins margins(const AnalyticRewards& rw, const GameState& st) {
  rw.validate();
  const double gap = rw.align_reward - rw.misalign_reward;
  Margins m;
  m.deterrence_margin = st.p_audit * gap - st.omega;
  m.solver_intercept = rw.align_reward - st.p_audit * gap + st.omega;
  m.audit_margin = rw.catch_reward - rw.audit_cost -
                   st.p_align * (rw.catch_reward + rw.false_positive_cost);
  return m;
}

MixedEquilibrium mixed_equilibrium(const AnalyticRewards& rw, double omega) {
  rw.validate();
  require_finite(omega, "omega");
  const double gap = rw.align_reward - rw.misalign_reward;
  if (omega < 0.0 || omega > gap) {
    std::ostringstream os;
    os << "mixed_equilibrium: requires 0 <= omega <= align_reward - "
          "misalign_reward (omega="
       << omega << ", gap=" << gap << ")";
    throw std::domain_error(os.str());
  }
  const double denom = rw.catch_reward + rw.false_positive_cost;
  if (denom == 0.0) {
    throw std::domain_error(
        "mixed_equilibrium: requires catch_reward + false_positive_cost != 0");
  }
  const double p_align = (rw.catch_reward - rw.audit_cost) / denom;
  const double p_audit = omega / gap;
  MixedEquilibrium eq;
  eq.p_align = std::clamp(p_align, 0.0, 1.0);
  eq.p_audit = std::clamp(p_audit, 0.0, 1.0);
  eq.interior = p_align > 0.0 && p_align < 1.0 && p_audit > 0.0 && p_audit < 1.0;
  return eq;
}

bool pure_equilibrium_check(const AnalyticRewards& rw, double omega,
                            const PureProfile& profile) {
  rw.validate();
  require_finite(omega, "omega");
  if (omega < 0.0) {
    throw std::domain_error("pure_equilibrium_check: requires omega >= 0");
  }
  const double gap = rw.align_reward - rw.misalign_reward;
  if (!profile.aligned && !profile.audited) {
    return rw.catch_reward <= rw.audit_cost;
  }
  if (!profile.aligned && profile.audited) {
    return omega >= gap && rw.catch_reward >= rw.audit_cost;
  }
  if (profile.aligned && !profile.audited) {
    return omega == 0.0;
  }
  return rw.audit_cost + rw.false_positive_cost <= 0.0 && omega <= gap;
}

PureProfile best_response_step(const AnalyticRewards& rw, double omega,
                               const PureProfile& from, Player mover) {
  rw.validate();
  const GameState here(from.aligned ? 1.0 : 0.0, from.audited ? 1.0 : 0.0,
                       omega);
  PureProfile flipped = from;
  if (mover == Player::Solver) {
    flipped.aligned = !from.aligned;
  } else {
    flipped.audited = !from.audited;
  }
  const GameState there(flipped.aligned ? 1.0 : 0.0,
                        flipped.audited ? 1.0 : 0.0, omega);
  const double gain =
      mover == Player::Solver
          ? solver_utility(rw, there) - solver_utility(rw, here)
          : auditor_utility(rw, there) - auditor_utility(rw, here);
  return gain > 0.0 ? flipped : from;
}

std::array<PureProfile, 4> best_response_cycle(const AnalyticRewards& rw,
                                               double omega) {
  const std::array<PureProfile, 4> cycle = {
      PureProfile{false, false}, PureProfile{false, true},
      PureProfile{true, true}, PureProfile{true, false}};
  // Moving player alternates around the square: auditor, solver, auditor,
  // solver. Each step must land on the next corner.
  const std::array<Player, 4> movers = {Player::Auditor, Player::Solver,
                                        Player::Auditor, Player::Solver};
  for (int i = 0; i < 4; ++i) {
    const PureProfile next =
        best_response_step(rw, omega, cycle[i], movers[i]);
    const PureProfile expected = cycle[(i + 1) % 4];
    if (!(next == expected)) {
      std::ostringstream os;
      os << "best_response_cycle: step " << profile_label(cycle[i]) << " by "
         << player_name(movers[i]) << " reached " << profile_label(next)
         << " instead of " << profile_label(expected)
         << "; parameters are outside the interior regime";
      throw std::domain_error(os.str());
    }
  }
  return cycle;
}

std::array<BestResponseEdge, 8> best_response_graph(const AnalyticRewards& rw,
                                                    double omega) {
  std::array<BestResponseEdge, 8> edges;
  int k = 0;
  for (int aligned = 0; aligned <= 1; ++aligned) {
    for (int audited = 0; audited <= 1; ++audited) {
      const PureProfile from{aligned == 1, audited == 1};
      for (Player mover : {Player::Solver, Player::Auditor}) {
        edges[k++] = {from, mover, best_response_step(rw, omega, from, mover)};
      }
    }
  }
  return edges;
}

}  // namespace corrgame
