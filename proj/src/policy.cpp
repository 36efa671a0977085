#include "corrgame/policy.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "corrgame/csv.hpp"
#include "corrgame/errors.hpp"

namespace corrgame {

namespace {

void axpy(double a, const std::vector<double>& x, std::vector<double>& y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += a * x[i];
}

bool all_finite(const std::vector<double>& v) {
  return std::all_of(v.begin(), v.end(),
                     [](double x) { return std::isfinite(x); });
}

}  // namespace

bool PolicyNet::shape_ok() const {
  return hidden > 0 && w_in.size() == static_cast<std::size_t>(hidden) &&
         b_in.size() == static_cast<std::size_t>(hidden) &&
         w_out.size() == static_cast<std::size_t>(2 * hidden) &&
         b_out.size() == 2;
}

PolicyNet make_policy_net(int hidden, Rng& rng) {
  if (hidden <= 0)
    throw std::invalid_argument("make_policy_net: hidden must be >= 1");
  PolicyNet net;
  net.hidden = hidden;
  net.w_in.resize(hidden);
  net.b_in.assign(hidden, 0.0);
  net.w_out.resize(2 * hidden);
  net.b_out.assign(2, 0.0);
  // Fan-in of the first layer is the scalar input, fan-in of the output
  // layer is the hidden width.
  for (double& w : net.w_in) w = rng.normal(0.0, 1.0);
  const double scale = 1.0 / std::sqrt(static_cast<double>(hidden));
  for (double& w : net.w_out) w = rng.normal(0.0, scale);
  return net;
}

PolicyNet make_constant_policy(double active_prob, int hidden) {
  if (hidden <= 0)
    throw std::invalid_argument("make_constant_policy: hidden must be >= 1");
  const double p = std::clamp(active_prob, 1e-12, 1.0 - 1e-12);
  PolicyNet net;
  net.hidden = hidden;
  net.w_in.assign(hidden, 0.0);
  net.b_in.assign(hidden, 0.0);
  net.w_out.assign(2 * hidden, 0.0);
  net.b_out = {std::log(p), std::log(1.0 - p)};
  return net;
}

std::array<double, 2> policy_forward(const PolicyNet& net, double signal) {
  if (!net.shape_ok())
    throw std::invalid_argument("policy_forward: inconsistent network shape");
  double logits[2] = {net.b_out[0], net.b_out[1]};
  for (int j = 0; j < net.hidden; ++j) {
    const double h = std::tanh(net.w_in[j] * signal + net.b_in[j]);
    logits[0] += net.w_out[j] * h;
    logits[1] += net.w_out[net.hidden + j] * h;
  }
  if (!std::isfinite(logits[0]) || !std::isfinite(logits[1])) {
    throw NumericError(
        "policy_forward: non-finite logits (weights or input non-finite)");
  }
  const double peak = std::max(logits[0], logits[1]);
  const double e0 = std::exp(logits[0] - peak);
  const double e1 = std::exp(logits[1] - peak);
  const double z = e0 + e1;
  return {e0 / z, e1 / z};
}

PolicyGrad log_prob_gradient(const PolicyNet& net, double signal, int action) {
  if (action != 0 && action != 1)
    throw std::invalid_argument("log_prob_gradient: action must be 0 or 1");
  const std::array<double, 2> probs = policy_forward(net, signal);
  PolicyGrad g;
  g.w_in.assign(net.hidden, 0.0);
  g.b_in.assign(net.hidden, 0.0);
  g.w_out.assign(2 * net.hidden, 0.0);
  g.b_out.assign(2, 0.0);
  // d log pi(a) / d logit_k = [k == a] - pi_k
  const double glogit[2] = {(action == 0 ? 1.0 : 0.0) - probs[0],
                            (action == 1 ? 1.0 : 0.0) - probs[1]};
  g.b_out[0] = glogit[0];
  g.b_out[1] = glogit[1];
  for (int j = 0; j < net.hidden; ++j) {
    const double h = std::tanh(net.w_in[j] * signal + net.b_in[j]);
    g.w_out[j] = glogit[0] * h;
    g.w_out[net.hidden + j] = glogit[1] * h;
    const double dh =
        net.w_out[j] * glogit[0] + net.w_out[net.hidden + j] * glogit[1];
    const double dpre = dh * (1.0 - h * h);
    g.b_in[j] = dpre;
    g.w_in[j] = dpre * signal;
  }
  return g;
}

double mean_reward(std::span<const Episode> episodes) {
  if (episodes.empty()) return 0.0;
  double sum = 0.0;
  for (const Episode& e : episodes) sum += e.reward;
  return sum / static_cast<double>(episodes.size());
}

void reinforce_update(PolicyNet& net, std::span<const Episode> episodes,
                      double learning_rate, double baseline) {
  if (episodes.empty()) return;
  if (!std::isfinite(learning_rate) || !std::isfinite(baseline))
    throw NumericError("reinforce_update: non-finite learning rate or baseline");
  PolicyGrad acc;
  acc.w_in.assign(net.hidden, 0.0);
  acc.b_in.assign(net.hidden, 0.0);
  acc.w_out.assign(2 * net.hidden, 0.0);
  acc.b_out.assign(2, 0.0);
  for (std::size_t i = 0; i < episodes.size(); ++i) {
    const Episode& e = episodes[i];
    const double advantage = e.reward - baseline;
    if (!std::isfinite(advantage) || !std::isfinite(e.signal)) {
      throw NumericError("reinforce_update: non-finite episode " +
                         std::to_string(i));
    }
    const PolicyGrad g = log_prob_gradient(net, e.signal, e.action);
    if (!all_finite(g.w_in) || !all_finite(g.b_in) || !all_finite(g.w_out) ||
        !all_finite(g.b_out)) {
      throw NumericError("reinforce_update: non-finite gradient at episode " +
                         std::to_string(i));
    }
    axpy(advantage, g.w_in, acc.w_in);
    axpy(advantage, g.b_in, acc.b_in);
    axpy(advantage, g.w_out, acc.w_out);
    axpy(advantage, g.b_out, acc.b_out);
  }
  const double step = learning_rate / static_cast<double>(episodes.size());
  axpy(step, acc.w_in, net.w_in);
  axpy(step, acc.b_in, net.b_in);
  axpy(step, acc.w_out, net.w_out);
  axpy(step, acc.b_out, net.b_out);
}

std::string serialize_policy(const PolicyNet& net) {
  if (!net.shape_ok())
    throw std::invalid_argument("serialize_policy: inconsistent network shape");
  std::ostringstream os;
  os << "policy-net v1\n";
  os << "hidden " << net.hidden << "\n";
  for (const auto* block : {&net.w_in, &net.b_in, &net.w_out, &net.b_out}) {
    for (double v : *block) os << format_double(v) << "\n";
  }
  return os.str();
}

PolicyNet parse_policy(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  if (!std::getline(is, line) || line != "policy-net v1")
    throw ConfigError("parse_policy: missing 'policy-net v1' header");
  std::string tag;
  int hidden = 0;
  if (!(is >> tag >> hidden) || tag != "hidden" || hidden <= 0)
    throw ConfigError("parse_policy: malformed shape line");
  PolicyNet net;
  net.hidden = hidden;
  net.w_in.resize(hidden);
  net.b_in.resize(hidden);
  net.w_out.resize(2 * hidden);
  net.b_out.resize(2);
  for (auto* block : {&net.w_in, &net.b_in, &net.w_out, &net.b_out}) {
    for (double& v : *block) {
      std::string word;
      if (!(is >> word)) throw ConfigError("parse_policy: truncated snapshot");
      const char* begin = word.data();
      const char* end = begin + word.size();
      auto [ptr, ec] = std::from_chars(begin, end, v);
      if (ec != std::errc() || ptr != end)
        throw ConfigError("parse_policy: bad number '" + word + "'");
    }
  }
  std::string extra;
  if (is >> extra)
    throw ConfigError("parse_policy: trailing content '" + extra + "'");
  return net;
}

}  // namespace corrgame
