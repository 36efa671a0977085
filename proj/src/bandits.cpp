#include "corrgame/bandits.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <stdexcept>

#include "corrgame/errors.hpp"

namespace corrgame {

namespace {

int argmax_lowest(const std::vector<double>& v) {
  int best = 0;
  for (int i = 1; i < static_cast<int>(v.size()); ++i) {
    if (v[i] > v[best]) best = i;
  }
  return best;
}

void require_arms(int arms) {
  if (arms <= 0) throw std::invalid_argument("bandit state: arms must be >= 1");
}

double rescale_payoff(double payoff, double lo, double hi, const char* who) {
  double y = (payoff - lo) / (hi - lo);
  if (y < 0.0 || y > 1.0) {
    std::cerr << who << ": payoff " << payoff << " outside declared range ["
              << lo << ", " << hi << "], clamping\n";
    y = std::clamp(y, 0.0, 1.0);
  }
  return y;
}

// Keeps exponential weights inside double range without changing the
// induced probabilities.
void renormalize_weights(std::vector<double>& w) {
  const double peak = *std::max_element(w.begin(), w.end());
  if (peak > 1e100) {
    for (double& x : w) x /= peak;
  }
}

}  // namespace

// ---- Gaussian Thompson sampling ----

GaussianTSState GaussianTSState::make(int arms, double sigma, double mean0) {
  require_arms(arms);
  GaussianTSState st;
  st.pulls.assign(arms, 0);
  st.mean.assign(arms, mean0);
  st.sigma = sigma;
  return st;
}

int ts_select(const GaussianTSState& st, Rng& rng) {
  std::vector<double> score(st.mean.size());
  for (std::size_t a = 0; a < st.mean.size(); ++a) {
    const double sd = st.sigma / std::sqrt(static_cast<double>(st.pulls[a] + 1));
    score[a] = rng.normal(st.mean[a], sd);
  }
  return argmax_lowest(score);
}

void ts_update(GaussianTSState& st, int arm, double payoff) {
  st.pulls[arm] += 1;
  st.mean[arm] += (payoff - st.mean[arm]) / static_cast<double>(st.pulls[arm]);
}

// ---- Discounted Thompson sampling ----

DiscountedTSState DiscountedTSState::make(int arms, double gamma,
                                          double sigma) {
  require_arms(arms);
  DiscountedTSState st;
  st.reward_sum.assign(arms, 0.0);
  st.count.assign(arms, 0.0);
  st.gamma = gamma;
  st.sigma = sigma;
  return st;
}

int dts_select(DiscountedTSState& st, Rng& rng) {
  const int arms = static_cast<int>(st.count.size());
  if (st.warm_start_cursor < arms) return st.warm_start_cursor++;
  std::vector<double> score(arms);
  for (int a = 0; a < arms; ++a) {
    // A long-dormant arm's discounted mass underflows toward zero; treat it
    // as unknown rather than dividing 0 by 0.
    const double mean =
        st.count[a] > 1e-12 ? st.reward_sum[a] / st.count[a] : 0.0;
    const double sd = st.sigma / std::sqrt(st.count[a] + 1.0);
    score[a] = rng.normal(mean, sd);
  }
  return argmax_lowest(score);
}

void dts_update(DiscountedTSState& st, int arm, double payoff) {
  for (std::size_t a = 0; a < st.count.size(); ++a) {
    st.reward_sum[a] *= st.gamma;
    st.count[a] *= st.gamma;
  }
  st.reward_sum[arm] += payoff;
  st.count[arm] += 1.0;
}

// ---- UCB1 ----

UCB1State UCB1State::make(int arms, double alpha) {
  require_arms(arms);
  UCB1State st;
  st.pulls.assign(arms, 0);
  st.mean.assign(arms, 0.0);
  st.alpha = alpha;
  return st;
}

int ucb1_select(const UCB1State& st) {
  for (std::size_t a = 0; a < st.pulls.size(); ++a) {
    if (st.pulls[a] == 0) return static_cast<int>(a);
  }
  std::vector<double> score(st.mean.size());
  const double bonus_num = std::log(static_cast<double>(st.round + 1));
  for (std::size_t a = 0; a < st.mean.size(); ++a) {
    score[a] =
        st.mean[a] +
        st.alpha * std::sqrt(bonus_num / static_cast<double>(st.pulls[a]));
  }
  return argmax_lowest(score);
}

void ucb1_update(UCB1State& st, int arm, double payoff) {
  st.pulls[arm] += 1;
  st.mean[arm] += (payoff - st.mean[arm]) / static_cast<double>(st.pulls[arm]);
  st.round += 1;
}

// ---- EXP3 ----

EXP3State EXP3State::make(int arms, double eta, double payoff_lo,
                          double payoff_hi) {
  require_arms(arms);
  if (!(payoff_lo < payoff_hi))
    throw std::invalid_argument("EXP3State: requires payoff_lo < payoff_hi");
  EXP3State st;
  st.weight.assign(arms, 1.0);
  st.eta = eta;
  st.payoff_lo = payoff_lo;
  st.payoff_hi = payoff_hi;
  return st;
}

std::vector<double> exp3_probs(const EXP3State& st) {
  const int arms = static_cast<int>(st.weight.size());
  double total = 0.0;
  for (double w : st.weight) total += w;
  std::vector<double> p(arms);
  for (int a = 0; a < arms; ++a) {
    p[a] = (1.0 - st.eta) * st.weight[a] / total + st.eta / arms;
  }
  return p;
}

int exp3_step(const EXP3State& st, Rng& rng) {
  const std::vector<double> p = exp3_probs(st);
  return rng.categorical(p);
}

void exp3_update(EXP3State& st, int arm, double payoff) {
  const std::vector<double> p = exp3_probs(st);
  const double y = rescale_payoff(payoff, st.payoff_lo, st.payoff_hi, "exp3");
  const int arms = static_cast<int>(st.weight.size());
  st.weight[arm] *= std::exp(st.eta * y / (arms * p[arm]));
  renormalize_weights(st.weight);
}

// ---- EXP4 ----

EXP4State EXP4State::make(int arms, std::vector<Expert> experts, double eta,
                          double payoff_lo, double payoff_hi) {
  require_arms(arms);
  if (experts.empty())
    throw std::invalid_argument("EXP4State: needs at least one expert");
  if (!(payoff_lo < payoff_hi))
    throw std::invalid_argument("EXP4State: requires payoff_lo < payoff_hi");
  EXP4State st;
  st.experts = std::move(experts);
  st.weight.assign(st.experts.size(), 1.0);
  st.eta = eta;
  st.payoff_lo = payoff_lo;
  st.payoff_hi = payoff_hi;
  st.arms = arms;
  return st;
}

int exp4_step(EXP4State& st, const BanditContext& ctx, Rng& rng) {
  BanditContext seen = ctx;
  if (static_cast<int>(seen.recent_mean.size()) != st.arms) {
    seen.recent_mean.assign(st.arms,
                            std::numeric_limits<double>::quiet_NaN());
  }
  st.last_advice.clear();
  st.last_advice.reserve(st.experts.size());
  for (const Expert& ex : st.experts) {
    std::vector<double> advice = ex.advise(seen);
    if (static_cast<int>(advice.size()) != st.arms) {
      throw std::logic_error("exp4: expert '" + ex.name +
                             "' returned advice of wrong length");
    }
    double total = 0.0;
    for (double p : advice) {
      if (!std::isfinite(p) || p < 0.0) {
        throw std::logic_error("exp4: expert '" + ex.name +
                               "' returned a negative or non-finite mass");
      }
      total += p;
    }
    if (std::abs(total - 1.0) > 1e-9) {
      throw std::logic_error("exp4: expert '" + ex.name +
                             "' advice does not sum to 1");
    }
    st.last_advice.push_back(std::move(advice));
  }
  double wsum = 0.0;
  for (double w : st.weight) wsum += w;
  st.last_probs.assign(st.arms, 0.0);
  for (std::size_t j = 0; j < st.experts.size(); ++j) {
    const double share = st.weight[j] / wsum;
    for (int a = 0; a < st.arms; ++a) {
      st.last_probs[a] += share * st.last_advice[j][a];
    }
  }
  return rng.categorical(st.last_probs);
}

void exp4_update(EXP4State& st, int arm, double payoff) {
  if (st.last_advice.size() != st.experts.size() || st.last_probs.empty()) {
    throw std::logic_error("exp4_update: no stored advice; call exp4_step first");
  }
  const double y = rescale_payoff(payoff, st.payoff_lo, st.payoff_hi, "exp4");
  const double estimate = y / st.last_probs[arm];
  for (std::size_t j = 0; j < st.experts.size(); ++j) {
    st.weight[j] *=
        std::exp(st.eta * st.last_advice[j][arm] * estimate / st.arms);
  }
  renormalize_weights(st.weight);
}

std::vector<Expert> default_experts(double silent_failure_threshold) {
  std::vector<Expert> experts;
  experts.push_back(
      {"uniform", [](const BanditContext& ctx) {
         const std::size_t n = ctx.recent_mean.size();
         return std::vector<double>(n, 1.0 / static_cast<double>(n));
       }});
  experts.push_back(
      {"greedy-recent", [](const BanditContext& ctx) {
         const std::size_t n = ctx.recent_mean.size();
         std::vector<double> advice(n, 0.0);
         // Exploiting a partially observed mean vector just replays
         // first-pull bias, so send the mass to unobserved arms until
         // every arm has reported at least once.
         std::size_t unseen = 0;
         for (std::size_t a = 0; a < n; ++a) {
           if (!std::isfinite(ctx.recent_mean[a])) ++unseen;
         }
         if (unseen > 0) {
           for (std::size_t a = 0; a < n; ++a) {
             if (!std::isfinite(ctx.recent_mean[a])) {
               advice[a] = 1.0 / static_cast<double>(unseen);
             }
           }
           return advice;
         }
         std::size_t best = 0;
         for (std::size_t a = 1; a < n; ++a) {
           if (ctx.recent_mean[a] > ctx.recent_mean[best]) best = a;
         }
         advice[best] = 1.0;
         return advice;
       }});
  experts.push_back(
      {"telemetry", [silent_failure_threshold](const BanditContext& ctx) {
         const std::size_t n = ctx.recent_mean.size();
         std::vector<double> uniform(n, 1.0 / static_cast<double>(n));
         if (!std::isfinite(ctx.silent_failure_rate) ||
             ctx.silent_failure_rate <= silent_failure_threshold ||
             ctx.abstain_bias.size() != n) {
           return uniform;
         }
         const double floor =
             *std::min_element(ctx.abstain_bias.begin(), ctx.abstain_bias.end());
         std::vector<double> advice(n);
         double total = 0.0;
         for (std::size_t a = 0; a < n; ++a) {
           advice[a] = ctx.abstain_bias[a] - floor;
           total += advice[a];
         }
         if (total <= 0.0) return uniform;
         for (double& p : advice) p /= total;
         return advice;
       }});
  return experts;
}

// ---- Controller wrappers ----

void ControllerSpec::validate() const {
  const auto& names = controller_names();
  if (std::find(names.begin(), names.end(), name) == names.end()) {
    throw ConfigError("controller: unknown name '" + name + "'");
  }
  if (!(sigma > 0.0) || !std::isfinite(sigma))
    throw ConfigError("controller: sigma must be > 0");
  if (!(gamma > 0.0) || gamma > 1.0)
    throw ConfigError("controller: gamma must lie in (0, 1]");
  if (!(alpha > 0.0) || !std::isfinite(alpha))
    throw ConfigError("controller: alpha must be > 0");
  if (!(eta > 0.0) || eta > 1.0)
    throw ConfigError("controller: eta must lie in (0, 1]");
  if (!(payoff_lo < payoff_hi))
    throw ConfigError("controller: requires payoff_lo < payoff_hi");
  if (!std::isfinite(silent_failure_threshold) || silent_failure_threshold < 0.0)
    throw ConfigError("controller: silent_failure_threshold must be >= 0");
}

const std::vector<std::string>& controller_names() {
  static const std::vector<std::string> names = {
      "thompson", "discounted-thompson", "ucb1", "exp3", "exp4", "constant"};
  return names;
}

namespace {

class GaussianThompsonController : public Controller {
 public:
  GaussianThompsonController(const ControllerSpec& spec, int arms)
      : name_("thompson"),
        st_(GaussianTSState::make(arms, spec.sigma, spec.payoff_hi)) {}

  const std::string& name() const override { return name_; }
  int arm_count() const override { return static_cast<int>(st_.mean.size()); }

  int select(Rng& rng) override { return ts_select(st_, rng); }

  void update(int arm, double payoff) override { ts_update(st_, arm, payoff); }

  ArmSummary arm_summary(int arm) const override {
    return {st_.mean[arm], static_cast<double>(st_.pulls[arm])};
  }

 private:
  std::string name_;
  GaussianTSState st_;
};

class DiscountedThompsonController : public Controller {
 public:
  DiscountedThompsonController(const ControllerSpec& spec, int arms)
      : name_("discounted-thompson"),
        st_(DiscountedTSState::make(arms, spec.gamma, spec.sigma)) {}

  const std::string& name() const override { return name_; }
  int arm_count() const override { return static_cast<int>(st_.count.size()); }
  int select(Rng& rng) override { return dts_select(st_, rng); }
  void update(int arm, double payoff) override { dts_update(st_, arm, payoff); }

  ArmSummary arm_summary(int arm) const override {
    const double mean =
        st_.count[arm] > 1e-12 ? st_.reward_sum[arm] / st_.count[arm] : 0.0;
    return {mean, st_.count[arm]};
  }

 private:
  std::string name_;
  DiscountedTSState st_;
};

class UCB1Controller : public Controller {
 public:
  UCB1Controller(const ControllerSpec& spec, int arms)
      : name_("ucb1"), st_(UCB1State::make(arms, spec.alpha)) {}

  const std::string& name() const override { return name_; }
  int arm_count() const override { return static_cast<int>(st_.mean.size()); }
  int select(Rng&) override { return ucb1_select(st_); }
  void update(int arm, double payoff) override { ucb1_update(st_, arm, payoff); }

  ArmSummary arm_summary(int arm) const override {
    return {st_.mean[arm], static_cast<double>(st_.pulls[arm])};
  }

 private:
  std::string name_;
  UCB1State st_;
};

class EXP3Controller : public Controller {
 public:
  EXP3Controller(const ControllerSpec& spec, int arms)
      : name_("exp3"),
        st_(EXP3State::make(arms, spec.eta, spec.payoff_lo, spec.payoff_hi)) {}

  const std::string& name() const override { return name_; }
  int arm_count() const override { return static_cast<int>(st_.weight.size()); }
  int select(Rng& rng) override { return exp3_step(st_, rng); }
  void update(int arm, double payoff) override { exp3_update(st_, arm, payoff); }

  ArmSummary arm_summary(int arm) const override {
    double total = 0.0;
    for (double w : st_.weight) total += w;
    return {st_.weight[arm] / total, exp3_probs(st_)[arm]};
  }

 private:
  std::string name_;
  EXP3State st_;
};

class EXP4Controller : public Controller {
 public:
  EXP4Controller(const ControllerSpec& spec, int arms)
      : name_("exp4"),
        st_(EXP4State::make(arms,
                            default_experts(spec.silent_failure_threshold),
                            spec.eta, spec.payoff_lo, spec.payoff_hi)),
        gamma_(spec.gamma),
        recent_sum_(arms, 0.0),
        recent_count_(arms, 0.0) {}

  const std::string& name() const override { return name_; }
  int arm_count() const override { return st_.arms; }

  void observe_context(const BanditContext& ctx) override { telemetry_ = ctx; }

  int select(Rng& rng) override {
    BanditContext ctx = telemetry_;
    ctx.recent_mean.assign(st_.arms,
                           std::numeric_limits<double>::quiet_NaN());
    for (int a = 0; a < st_.arms; ++a) {
      if (recent_count_[a] > 1e-12)
        ctx.recent_mean[a] = recent_sum_[a] / recent_count_[a];
    }
    return exp4_step(st_, ctx, rng);
  }

  void update(int arm, double payoff) override {
    exp4_update(st_, arm, payoff);
    for (int a = 0; a < st_.arms; ++a) {
      recent_sum_[a] *= gamma_;
      recent_count_[a] *= gamma_;
    }
    recent_sum_[arm] += payoff;
    recent_count_[arm] += 1.0;
  }

  ArmSummary arm_summary(int arm) const override {
    const double mean = recent_count_[arm] > 1e-12
                            ? recent_sum_[arm] / recent_count_[arm]
                            : 0.0;
    const double prob = st_.last_probs.empty()
                            ? 1.0 / static_cast<double>(st_.arms)
                            : st_.last_probs[arm];
    return {mean, prob};
  }

 private:
  std::string name_;
  EXP4State st_;
  double gamma_;
  std::vector<double> recent_sum_;
  std::vector<double> recent_count_;
  BanditContext telemetry_;
};

/// Always plays arm 0; keeps the same running-mean summary a one-arm
/// Thompson controller would report so fixed-profile baselines and one-arm
/// adaptive runs emit identical traces.
class ConstantController : public Controller {
 public:
  explicit ConstantController(int arms) : name_("constant") {
    if (arms != 1)
      throw ConfigError("controller: 'constant' requires exactly one arm");
  }

  const std::string& name() const override { return name_; }
  int arm_count() const override { return 1; }
  int select(Rng&) override { return 0; }

  void update(int, double payoff) override {
    pulls_ += 1;
    mean_ += (payoff - mean_) / static_cast<double>(pulls_);
  }

  ArmSummary arm_summary(int) const override {
    return {mean_, static_cast<double>(pulls_)};
  }

 private:
  std::string name_;
  long pulls_ = 0;
  double mean_ = 0.0;
};

}  // namespace

std::unique_ptr<Controller> make_controller(const ControllerSpec& spec,
                                            int arms) {
  spec.validate();
  require_arms(arms);
  if (spec.name == "thompson")
    return std::make_unique<GaussianThompsonController>(spec, arms);
  if (spec.name == "discounted-thompson")
    return std::make_unique<DiscountedThompsonController>(spec, arms);
  if (spec.name == "ucb1") return std::make_unique<UCB1Controller>(spec, arms);
  if (spec.name == "exp3") return std::make_unique<EXP3Controller>(spec, arms);
  if (spec.name == "exp4") return std::make_unique<EXP4Controller>(spec, arms);
  return std::make_unique<ConstantController>(arms);
}

}  // namespace corrgame
