#include "corrgame/environment.hpp"

namespace corrgame {

namespace {

// Outcome order: abstain, aligned, caught, false_positive, silent.
RewardProfile make_profile(std::string name,
                           std::array<double, kOutcomeCount> solver,
                           std::array<double, kOutcomeCount> auditor) {
  RewardProfile p;
  p.name = std::move(name);
  p.solver = solver;
  p.auditor = auditor;
  return p;
}

}  // namespace

// The solver is paid like a test-passing contractor: full reward for any
// attempt that is not flagged (whether or not it is truly correct), a
// penalty only when flagged, and its false-positive entry keeps the full
// reward because the flag was wrong. The variants move one pricing axis at
// a time relative to "default".
//
// Magnitudes are sized so that one outer round of training (16 policy
// updates at the default learning rate) moves behaviour appreciably; the
// policy ramp then resolves within the first quarter of the default
// 60-round schedule instead of dominating the whole run.
std::vector<RewardProfile> default_profile_library() {
  std::vector<RewardProfile> lib;
  lib.push_back(make_profile("default",
                             {0.8, 8.0, -8.0, 8.0, 8.0},
                             {0.0, 0.4, 8.0, -8.0, -1.2}));
  // Sweeter abstention, two strengths. Both stay below the value of a
  // confident attempt, so they tilt marginal tasks only.
  lib.push_back(make_profile("medium_abstain",
                             {3.2, 8.0, -8.0, 8.0, 8.0},
                             {0.0, 0.4, 8.0, -8.0, -1.2}));
  lib.push_back(make_profile("high_abstain",
                             {5.6, 8.0, -8.0, 8.0, 8.0},
                             {0.0, 0.4, 8.0, -8.0, -1.2}));
  // Harsher / softer catch penalty for the solver.
  lib.push_back(make_profile("strict_solver_catch",
                             {0.8, 8.0, -20.0, 1.6, 8.0},
                             {0.0, 0.4, 8.0, -8.0, -1.2}));
  lib.push_back(make_profile("lenient_solver_catch",
                             {0.8, 8.0, -1.6, 8.0, 8.0},
                             {0.0, 0.4, 8.0, -8.0, -1.2}));
  // Auditor pricing variants.
  lib.push_back(make_profile("audit_seeking",
                             {0.8, 8.0, -8.0, 8.0, 8.0},
                             {0.0, 0.0, 11.6, -6.4, -3.36}));
  lib.push_back(make_profile("false_positive_averse",
                             {0.8, 8.0, -8.0, 8.0, 8.0},
                             {0.0, 0.8, 3.2, -24.0, -0.4}));
  // Uncaught mistakes hurt both sides.
  lib.push_back(make_profile("silent_failure_penalty",
                             {0.8, 8.0, -8.0, 8.0, -14.4},
                             {0.0, 0.4, 8.0, -8.0, -14.4}));
  return lib;
}

}  // namespace corrgame
