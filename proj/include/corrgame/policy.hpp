#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "corrgame/rng.hpp"

namespace corrgame {

/// Tiny stochastic policy over two actions: one scalar input, one tanh
/// hidden layer, two output logits turned into probabilities by softmax.
/// Action 0 is the "active" choice (attempt / audit), action 1 the passive
/// one (abstain). Both agents in the simulation use this shape.
struct PolicyNet {
  int hidden = 16;
  std::vector<double> w_in;   // hidden
  std::vector<double> b_in;   // hidden
  std::vector<double> w_out;  // 2 * hidden, row-major [action][unit]
  std::vector<double> b_out;  // 2

  bool shape_ok() const;
};

/// Fresh network: weights zero-mean Gaussian scaled by 1/sqrt(fan_in),
/// biases zero. With a scalar input the first layer has fan-in 1.
PolicyNet make_policy_net(int hidden, Rng& rng);

/// Signal-independent policy with the given probability of action 0.
/// Handy for forcing behaviors in tests and diagnostics; p is clamped to
/// [1e-12, 1 - 1e-12] before the logits are derived.
PolicyNet make_constant_policy(double active_prob, int hidden = 16);

/// Action probabilities at `signal`; softmax is computed with max
/// subtraction so the pair always sums to 1 within 1e-12. Throws
/// NumericError if the logits come out non-finite (non-finite weights or
/// input).
std::array<double, 2> policy_forward(const PolicyNet& net, double signal);

/// One (signal, action, reward) sample used for the score-function update.
struct Episode {
  double signal = 0.0;
  int action = 0;
  double reward = 0.0;
};

/// Gradient container mirroring PolicyNet's shapes.
struct PolicyGrad {
  std::vector<double> w_in, b_in, w_out, b_out;
};

/// Gradient of log pi(action | signal) with respect to all weights.
PolicyGrad log_prob_gradient(const PolicyNet& net, double signal, int action);

double mean_reward(std::span<const Episode> episodes);

/// Batch score-function update:
///   theta += lr * mean_i (reward_i - baseline) * grad log pi(a_i | s_i).
/// With baseline = mean_reward a batch of identical rewards leaves the
/// network unchanged. Throws NumericError naming the offending episode index
/// if any per-episode contribution is non-finite.
void reinforce_update(PolicyNet& net, std::span<const Episode> episodes,
                      double learning_rate, double baseline);

/// Flat text snapshot: a header naming the shape, then one number per line
/// in w_in, b_in, w_out, b_out order. Doubles are printed with shortest
/// round-trip precision so parse(serialize(net)) reproduces the weights
/// bit for bit.
std::string serialize_policy(const PolicyNet& net);
PolicyNet parse_policy(const std::string& text);

}  // namespace corrgame
