#pragma once

#include <functional>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "corrgame/rng.hpp"

namespace corrgame {

/// Side information offered to context-aware controllers. Everything is
/// optional: missing telemetry is NaN, missing metadata an empty vector.
/// The outer loop logs this for every controller but only EXP4 consumes it.
struct BanditContext {
  /// Discounted per-arm payoff estimate; NaN marks arms never pulled.
  std::vector<double> recent_mean;
  /// Per-arm solver abstention reward, used to spot abstention-raising arms.
  std::vector<double> abstain_bias;
  double silent_failure_rate = std::numeric_limits<double>::quiet_NaN();
  double attempt_rate = std::numeric_limits<double>::quiet_NaN();
};

/// Advice source for EXP4: maps a context to a probability vector over arms.
struct Expert {
  std::string name;
  std::function<std::vector<double>(const BanditContext&)> advise;
};

// ---- Gaussian Thompson sampling ----

struct GaussianTSState {
  std::vector<long> pulls;
  std::vector<double> mean;
  double sigma = 0.65;

  /// An unpulled arm's empirical mean is undefined, so `mean0` is the
  /// placeholder it samples around until its first observation replaces it.
  /// Optimistic placement (top of the payoff range) makes untried arms win
  /// early score duels instead of lingering unexplored for tens of rounds.
  static GaussianTSState make(int arms, double sigma, double mean0 = 0.0);
};

/// Draws one Gaussian score per arm, N(mean_a, sigma^2 / (pulls_a + 1)),
/// and returns the argmax (ties to the lowest index). Pure posterior
/// sampling; the +1 keeps unpulled arms at the full prior scale, and the
/// make() placeholder mean controls how eagerly they get tried.
int ts_select(const GaussianTSState& st, Rng& rng);

void ts_update(GaussianTSState& st, int arm, double payoff);

// ---- Discounted Thompson sampling ----

/// Exponentially discounted posterior: every update decays all arms'
/// sufficient statistics by gamma and then credits the pulled arm, so the
/// effective window is about 1/(1-gamma) pulls and dormant arms regain
/// variance. Tracks payoff drift that plain Thompson cannot.
struct DiscountedTSState {
  std::vector<double> reward_sum;  // discounted payoff mass per arm
  std::vector<double> count;       // discounted pull mass per arm
  double gamma = 0.9;
  double sigma = 0.65;
  int warm_start_cursor = 0;

  static DiscountedTSState make(int arms, double gamma, double sigma);
};

/// One round-robin pass first (advancing warm_start_cursor), then Gaussian
/// scores N(reward_sum_a / count_a, sigma^2 / (count_a + 1)).
int dts_select(DiscountedTSState& st, Rng& rng);

void dts_update(DiscountedTSState& st, int arm, double payoff);

// ---- UCB1 ----

struct UCB1State {
  std::vector<long> pulls;
  std::vector<double> mean;
  double alpha = 1.0;
  long round = 0;  // total updates so far

  static UCB1State make(int arms, double alpha);
};

/// argmax of mean_a + alpha * sqrt(log(round + 1) / pulls_a); any arm still
/// unpulled is returned first (lowest index), which doubles as the warm
/// start.
int ucb1_select(const UCB1State& st);

void ucb1_update(UCB1State& st, int arm, double payoff);

// ---- EXP3 ----

/// Adversarial-regret weights. Payoffs are affinely rescaled from
/// [payoff_lo, payoff_hi] into [0, 1]; values outside the declared range are
/// clamped and a warning is written to stderr.
struct EXP3State {
  std::vector<double> weight;
  double eta = 0.1;
  double payoff_lo = -1.0;
  double payoff_hi = 1.0;

  static EXP3State make(int arms, double eta, double payoff_lo,
                        double payoff_hi);
};

/// Mixture probabilities (1 - eta) * w_a / sum(w) + eta / arms.
std::vector<double> exp3_probs(const EXP3State& st);

int exp3_step(const EXP3State& st, Rng& rng);

/// Importance-weighted exponential bump of the pulled arm's weight:
/// w_a *= exp(eta * y / (arms * p_a)) with y the rescaled payoff. Must be
/// called with the weights unchanged since the matching exp3_step.
void exp3_update(EXP3State& st, int arm, double payoff);

// ---- EXP4 ----

/// Exponential weights over experts instead of arms. The play distribution
/// is the weight-normalized mixture of the experts' advice; each expert's
/// weight gets an EXP3-style bump proportional to the probability it put on
/// the pulled arm.
struct EXP4State {
  std::vector<Expert> experts;
  std::vector<double> weight;  // one per expert
  double eta = 0.1;
  double payoff_lo = -1.0;
  double payoff_hi = 1.0;
  int arms = 0;
  std::vector<std::vector<double>> last_advice;  // filled by exp4_step
  std::vector<double> last_probs;

  static EXP4State make(int arms, std::vector<Expert> experts, double eta,
                        double payoff_lo, double payoff_hi);
};

/// Queries every expert, validates the advice (right length, nonnegative,
/// unit sum within 1e-9; violations throw std::logic_error naming the
/// expert), stores it for the matching update, and samples the mixture.
int exp4_step(EXP4State& st, const BanditContext& ctx, Rng& rng);

/// Uses the advice recorded by the preceding exp4_step.
void exp4_update(EXP4State& st, int arm, double payoff);

/// Built-in experts: "uniform" spreads evenly; "greedy-recent" plays the arm
/// with the best discounted payoff so far (unseen arms share the mass);
/// "telemetry" shifts mass toward abstention-raising arms once the observed
/// silent-failure rate exceeds the threshold, and is uniform when telemetry
/// is missing.
std::vector<Expert> default_experts(double silent_failure_threshold = 0.2);

// ---- Uniform controller interface ----

struct ArmSummary {
  double estimate = 0.0;  // controller's value estimate for the arm
  double weight = 0.0;    // pulls / discounted mass / selection probability
};

struct ControllerSpec {
  std::string name = "discounted-thompson";
  double sigma = 0.65;   // Thompson variants
  double gamma = 0.9;    // discounted Thompson (and EXP4 recency tracking)
  double alpha = 1.0;    // UCB1
  double eta = 0.1;      // EXP3 / EXP4
  double payoff_lo = -1.0;
  double payoff_hi = 1.0;
  double silent_failure_threshold = 0.2;  // EXP4 telemetry expert

  void validate() const;  // throws ConfigError
};

/// Valid spec names.
const std::vector<std::string>& controller_names();

class Controller {
 public:
  virtual ~Controller() = default;
  virtual const std::string& name() const = 0;
  virtual int arm_count() const = 0;
  /// Telemetry drop-off before select; ignored by context-free controllers.
  virtual void observe_context(const BanditContext&) {}
  virtual int select(Rng& rng) = 0;
  virtual void update(int arm, double payoff) = 0;
  virtual ArmSummary arm_summary(int arm) const = 0;
};

/// Factory over controller_names(); "constant" always plays arm 0 and is the
/// degenerate controller behind fixed-profile baselines.
std::unique_ptr<Controller> make_controller(const ControllerSpec& spec,
                                            int arms);

}  // namespace corrgame
