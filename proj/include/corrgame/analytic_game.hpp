#pragma once

#include <array>
#include <string>

namespace corrgame {

/// Reward parameters of the two-player correction game. The solver commits
/// to an alignment probability, the auditor to an audit probability; with
/// noise-free auditing a misaligned solution is flagged exactly when it is
/// audited.
///
/// false_positive_cost and audit_cost are stored as nonnegative magnitudes
/// and enter the auditor's utility with a minus sign. misalign_reward is
/// signed (a punishment when negative) and must stay below align_reward,
/// otherwise auditing cannot deter anything.
struct AnalyticRewards {
  double align_reward = 1.0;          // solver payoff when not flagged
  double misalign_reward = -1.0;      // solver payoff when caught
  double catch_reward = 1.0;          // auditor payoff for a true catch
  double false_positive_cost = 0.3;   // auditor cost magnitude, >= 0
  double audit_cost = 0.2;            // auditor cost magnitude, >= 0

  /// Throws std::domain_error naming the violated inequality.
  void validate() const;
};

/// Mixed-strategy state plus the misalignment temptation omega (the bounty
/// the solver collects per misaligned action, audited or not). Probabilities
/// are clamped to [0, 1] on construction; omega must be finite and >= 0.
struct GameState {
  GameState() = default;
  GameState(double p_align_in, double p_audit_in, double omega_in);

  double p_align = 0.0;
  double p_audit = 0.0;
  double omega = 0.0;
};

/// Both utilities are affine in the opponent-facing probability:
///   solver  U1 = p_align * deterrence_margin + solver_intercept
///   auditor U2 = p_audit * audit_margin
/// so each sign decides a best response outright.
struct Margins {
  double deterrence_margin = 0.0;  // d U1 / d p_align
  double solver_intercept = 0.0;   // U1 at p_align = 0
  double audit_margin = 0.0;       // d U2 / d p_audit
};

/// Interior indifference point. When a coordinate had to be clamped into
/// [0, 1] the point is reported with interior = false and is not an
/// equilibrium of the unconstrained game.
struct MixedEquilibrium {
  double p_align = 0.0;
  double p_audit = 0.0;
  bool interior = false;
};

/// Deterministic strategy profile at a corner of the square.
struct PureProfile {
  bool aligned = false;
  bool audited = false;
  friend bool operator==(const PureProfile&, const PureProfile&) = default;
};

enum class Player { Solver, Auditor };

const char* player_name(Player p);
std::string profile_label(const PureProfile& p);  // e.g. "(1,0)"

/// Expected solver payoff
///   U1 = p_audit * (p_align * r_align + (1-p_align) * r_misalign)
///        + (1-p_audit) * r_align + (1-p_align) * omega.
double solver_utility(const AnalyticRewards& rw, const GameState& st);

/// Expected auditor payoff
///   U2 = p_audit * ((1-p_align) * catch - p_align * fp_cost - audit_cost).
double auditor_utility(const AnalyticRewards& rw, const GameState& st);

Margins margins(const AnalyticRewards& rw, const GameState& st);

/// Interior mixed equilibrium
///   p_align* = (catch - audit_cost) / (catch + fp_cost)
///   p_audit* = omega / (align - misalign)
/// Rejects omega outside [0, align - misalign] and catch + fp_cost == 0 with
/// a domain error naming the precondition. Coordinates that land outside
/// [0, 1] (e.g. catch < audit_cost) are clamped and flagged non-interior;
/// boundary omega values produce boundary points, also non-interior.
MixedEquilibrium mixed_equilibrium(const AnalyticRewards& rw, double omega);

/// True iff `profile` is a (weak) Nash equilibrium, via the closed-form
/// corner conditions:
///   (0,0)  catch <= audit_cost
///   (0,1)  omega >= align - misalign  and  catch >= audit_cost
///   (1,0)  omega == 0
///   (1,1)  audit_cost + fp_cost <= 0  and  omega <= align - misalign
bool pure_equilibrium_check(const AnalyticRewards& rw, double omega,
                            const PureProfile& profile);

/// One myopic discrete best-response step for `mover`, holding the other
/// player's bit fixed. The mover flips iff flipping strictly increases its
/// utility; ties stay put.
PureProfile best_response_step(const AnalyticRewards& rw, double omega,
                               const PureProfile& from, Player mover);

/// In the interior regime (0 < omega < align - misalign, catch > audit_cost,
/// audit_cost + fp_cost > 0) alternating best responses chase each other
/// around the four corners:
///   (0,0) -> (0,1) -> (1,1) -> (1,0) -> (0,0)
/// with the auditor moving first. Returns the cycle starting at (0,0);
/// throws std::domain_error if any step contradicts it, which signals a
/// parameter set outside the interior regime.
std::array<PureProfile, 4> best_response_cycle(const AnalyticRewards& rw,
                                               double omega);

/// Full one-step best-response graph: for each corner and each player, the
/// profile that player moves to. 4 states x 2 players = 8 edges; in the
/// interior regime these are the 4 cycle edges plus 4 self-loops.
struct BestResponseEdge {
  PureProfile from;
  Player mover = Player::Solver;
  PureProfile to;
};

std::array<BestResponseEdge, 8> best_response_graph(const AnalyticRewards& rw,
                                                    double omega);

}  // namespace corrgame
