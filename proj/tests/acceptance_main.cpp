// End-to-end acceptance harness. Each criterion exercises one advertised
// guarantee of the library (and, for the reproducibility criterion, the CLI
// binary) and prints a single [PASS]/[FAIL] line with its runtime. The
// process exit code is the number of failed criteria. Tolerances and time
// budgets are pinned next to each check.
#include <sys/wait.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "corrgame/analytic_game.hpp"
#include "corrgame/bandits.hpp"
#include "corrgame/config.hpp"
#include "corrgame/noisy_game.hpp"
#include "corrgame/pipeline.hpp"
#include "corrgame/policy.hpp"
#include "corrgame/rng.hpp"
#include "support/oracles.hpp"

using namespace corrgame;
namespace fs = std::filesystem;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

Verdict ok() { return {true, ""}; }
Verdict fail(const std::string& why) { return {false, why}; }

// ---- shared draw helpers ----

AnalyticRewards draw_interior_rewards(Rng& rng) {
  AnalyticRewards rw;
  rw.align_reward = rng.uniform(0.2, 3.0);
  rw.misalign_reward = rw.align_reward - rng.uniform(0.5, 4.0);
  rw.audit_cost = rng.uniform(0.01, 1.0);
  rw.catch_reward = rw.audit_cost + rng.uniform(0.05, 3.0);
  rw.false_positive_cost = rng.uniform(0.0, 2.0);
  return rw;
}

double draw_interior_omega(Rng& rng, const AnalyticRewards& rw) {
  return rng.uniform(0.05, 0.95) *
         (rw.align_reward - rw.misalign_reward);
}

// Corner-classification draw covering all branches of the closed-form
// conditions. Every compared gap is either exactly zero or at least 1e-4,
// so a 1e-12 brute-force tolerance can never disagree with the weak
// inequalities.
struct CornerDraw {
  AnalyticRewards rw;
  double omega = 0.0;
};

CornerDraw draw_corner_case(Rng& rng) {
  CornerDraw d;
  d.rw.align_reward = rng.uniform(-1.0, 2.0);
  const double gap = rng.uniform(0.5, 3.0);
  d.rw.misalign_reward = d.rw.align_reward - gap;
  if (rng.uniform_int(4) == 0) {
    d.rw.audit_cost = 0.0;
    d.rw.false_positive_cost = 0.0;
  } else {
    d.rw.audit_cost = rng.uniform(0.5, 1.5);
    d.rw.false_positive_cost = rng.uniform(1e-4, 2.0);
  }
  switch (rng.uniform_int(3)) {
    case 0:
      d.rw.catch_reward = d.rw.audit_cost;
      break;
    case 1:
      d.rw.catch_reward = d.rw.audit_cost + rng.uniform(1e-4, 2.0);
      break;
    default:
      d.rw.catch_reward = d.rw.audit_cost <= 0.0
                              ? 0.0
                              : d.rw.audit_cost - rng.uniform(1e-4, 0.45);
      break;
  }
  // The boundary case must sit exactly on the gap as the library recomputes
  // it (align - misalign), which can differ from the drawn gap by an ulp.
  const double stored_gap = d.rw.align_reward - d.rw.misalign_reward;
  switch (rng.uniform_int(4)) {
    case 0:
      d.omega = 0.0;
      break;
    case 1:
      d.omega = stored_gap;
      break;
    case 2:
      d.omega = rng.uniform(1e-4, gap - 1e-4);
      break;
    default:
      d.omega = stored_gap + rng.uniform(1e-4, 1.0);
      break;
  }
  return d;
}

NoiseParams draw_channel(Rng& rng) {
  NoiseParams np;
  np.flip_rate = rng.uniform(0.0, 0.45);
  np.verdict_fp = rng.uniform(0.0, 0.5);
  np.verdict_tp = np.verdict_fp + rng.uniform(0.05, 0.99 - np.verdict_fp);
  return np;
}

NoisyRewards draw_noisy_rewards(Rng& rng) {
  NoisyRewards rw;
  rw.align_reward = rng.uniform(0.2, 2.0);
  rw.misalign_reward = rw.align_reward - rng.uniform(0.5, 3.0);
  rw.audit_cost = rng.uniform(0.0, 1.0);
  rw.catch_reward = rw.audit_cost + rng.uniform(0.05, 2.0);
  rw.false_positive_cost = rng.uniform(0.0, 1.5);
  return rw;
}

bool close(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max(1.0, std::abs(b));
}

// ---- criterion 1: noise-free equilibrium and corner classification ----

Verdict criterion_equilibrium() {
  Rng rng(101);
  for (int i = 0; i < 1000; ++i) {
    const AnalyticRewards rw = draw_interior_rewards(rng);
    const double omega = draw_interior_omega(rng, rw);
    const MixedEquilibrium eq = mixed_equilibrium(rw, omega);
    if (!eq.interior) return fail("interior draw produced a boundary point");
    const Margins m = margins(rw, GameState(eq.p_align, eq.p_audit, omega));
    if (std::abs(m.deterrence_margin) >= 1e-9 ||
        std::abs(m.audit_margin) >= 1e-9) {
      return fail("players are not indifferent at the mixed point");
    }
    for (bool aligned : {false, true}) {
      for (bool audited : {false, true}) {
        if (oracle::is_pure_nash(rw, omega, aligned, audited))
          return fail("interior draw admits a pure equilibrium");
      }
    }
  }
  Rng corner_rng(102);
  for (int i = 0; i < 1000; ++i) {
    const CornerDraw d = draw_corner_case(corner_rng);
    for (bool aligned : {false, true}) {
      for (bool audited : {false, true}) {
        const bool closed_form =
            pure_equilibrium_check(d.rw, d.omega, {aligned, audited});
        const bool brute = oracle::is_pure_nash(d.rw, d.omega, aligned, audited);
        if (closed_form != brute) {
          return fail("closed-form corner verdict disagrees with brute force at " +
                      profile_label({aligned, audited}));
        }
      }
    }
  }
  return ok();
}

// ---- criterion 2: noisy utilities, clean-channel reduction, regime ----

Verdict criterion_noisy() {
  Rng rng(201);
  for (int i = 0; i < 1000; ++i) {
    const NoisyRewards rw = draw_noisy_rewards(rng);
    const NoiseParams np = draw_channel(rng);
    const GameState st(rng.uniform01(), rng.uniform01(), rng.uniform(0.0, 2.0));
    const double u1 = noisy_solver_utility(rw, np, st);
    const double u2 = noisy_auditor_utility(rw, np, st);
    const double o1 =
        oracle::noisy_solver_utility(rw, np, st.p_align, st.p_audit, st.omega);
    const double o2 =
        oracle::noisy_auditor_utility(rw, np, st.p_align, st.p_audit, st.omega);
    if (!close(u1, o1, 1e-12) || !close(u2, o2, 1e-12))
      return fail("noisy utilities disagree with branch enumeration");
  }

  // A clean channel reproduces the base game.
  Rng clean_rng(202);
  const NoiseParams clean{0.0, 1.0, 0.0};
  for (int i = 0; i < 1000; ++i) {
    const AnalyticRewards arw = draw_interior_rewards(clean_rng);
    NoisyRewards nrw;
    nrw.align_reward = arw.align_reward;
    nrw.misalign_reward = arw.misalign_reward;
    nrw.catch_reward = arw.catch_reward;
    nrw.false_positive_cost = arw.false_positive_cost;
    nrw.audit_cost = arw.audit_cost;
    const GameState st(clean_rng.uniform01(), clean_rng.uniform01(),
                       draw_interior_omega(clean_rng, arw));
    if (!close(noisy_solver_utility(nrw, clean, st), solver_utility(arw, st),
               1e-12) ||
        !close(noisy_auditor_utility(nrw, clean, st), auditor_utility(arw, st),
               1e-12))
      return fail("clean channel does not reduce to the base game");
    const Margins nm = noisy_margins(nrw, clean, st);
    const Margins am = margins(arw, st);
    if (!close(nm.deterrence_margin, am.deterrence_margin, 1e-12) ||
        !close(nm.audit_margin, am.audit_margin, 1e-12))
      return fail("clean-channel margins do not reduce to the base game");
  }

  // The regime verdict matches the sign of the audit margin against a fully
  // aligned solver, and in the regime (with omega strictly inside the bound)
  // the always-align/always-audit corner is a Nash equilibrium.
  Rng regime_rng(203);
  int confirmed_regime = 0;
  int confirmed_off = 0;
  for (int i = 0; i < 4000 && (confirmed_regime < 100 || confirmed_off < 100);
       ++i) {
    NoisyRewards rw = draw_noisy_rewards(regime_rng);
    const NoiseParams np = draw_channel(regime_rng);
    const double lam = derived_noise(np, 1.0).flag_rate_aligned;
    if (lam < 0.02) continue;
    const double needed =
        ((1.0 - lam) * rw.false_positive_cost + rw.audit_cost) / lam;
    rw.catch_reward = needed + (i % 2 == 0 ? 0.1 : -0.1);
    if (rw.catch_reward <= rw.audit_cost) continue;
    const double bound = pure_regime_omega_bound(rw, np);
    const double omega = 0.5 * bound;
    const bool regime = pure_regime_check(rw, np, omega);
    const double margin =
        noisy_margins(rw, np, GameState(1.0, 0.0, omega)).audit_margin;
    if (std::abs(margin) < 1e-9) continue;
    if (regime != (margin > 0.0))
      return fail("regime verdict disagrees with the audit margin sign");
    const bool corner_nash = oracle::noisy_is_pure_nash(rw, np, omega, true, true);
    if (regime) {
      if (!corner_nash)
        return fail("regime holds but always-align/always-audit is not Nash");
      ++confirmed_regime;
    } else if (margin < -0.01) {
      if (corner_nash)
        return fail("auditing strictly unprofitable yet the corner is Nash");
      ++confirmed_off;
    }
  }
  if (confirmed_regime < 100 || confirmed_off < 100)
    return fail("regime sampling starved");
  return ok();
}

// ---- criterion 3: best-response dynamics ----

Verdict criterion_cycle() {
  Rng rng(301);
  const PureProfile c00{false, false}, c01{false, true}, c10{true, false},
      c11{true, true};
  for (int i = 0; i < 100; ++i) {
    const AnalyticRewards rw = draw_interior_rewards(rng);
    const double omega = draw_interior_omega(rng, rw);

    const auto cycle = best_response_cycle(rw, omega);
    const std::array<PureProfile, 4> want = {c00, c01, c11, c10};
    for (int k = 0; k < 4; ++k) {
      if (!(cycle[k] == want[k])) return fail("cycle visits a wrong corner");
    }

    std::map<std::pair<std::string, Player>, PureProfile> got;
    for (const BestResponseEdge& e : best_response_graph(rw, omega)) {
      got[{profile_label(e.from), e.mover}] = e.to;
    }
    if (got.size() != 8) return fail("graph does not have 8 distinct edges");
    const auto expect = [&](const PureProfile& from, Player mover,
                            const PureProfile& to) {
      return got.at({profile_label(from), mover}) == to;
    };
    const bool shape_ok =
        expect(c00, Player::Auditor, c01) && expect(c01, Player::Solver, c11) &&
        expect(c11, Player::Auditor, c10) && expect(c10, Player::Solver, c00) &&
        expect(c00, Player::Solver, c00) && expect(c01, Player::Auditor, c01) &&
        expect(c11, Player::Solver, c11) && expect(c10, Player::Auditor, c10);
    if (!shape_ok)
      return fail("graph is not the four-step cycle plus self-loops");
  }
  return ok();
}

// ---- criterion 4: policy gradient vs finite differences ----

Verdict criterion_gradient() {
  Rng rng(401);
  for (int i = 0; i < 100; ++i) {
    const PolicyNet net = make_policy_net(16, rng);
    const double signal = rng.uniform(-3.0, 3.0);
    const int action = rng.uniform_int(2);
    const PolicyGrad lib = log_prob_gradient(net, signal, action);
    const oracle::FlatGrad fd = oracle::fd_log_prob_gradient(net, signal, action);
    double num = 0.0, den = 0.0;
    const auto fold = [&](const std::vector<double>& a,
                          const std::vector<double>& b) {
      for (std::size_t k = 0; k < a.size(); ++k) {
        num = std::max(num, std::abs(a[k] - b[k]));
        den = std::max(den, std::abs(b[k]));
      }
    };
    fold(lib.w_in, fd.w_in);
    fold(lib.b_in, fd.b_in);
    fold(lib.w_out, fd.w_out);
    fold(lib.b_out, fd.b_out);
    if (num / std::max(den, 1e-8) >= 1e-4)
      return fail("analytic gradient deviates from finite differences");
  }
  return ok();
}

// ---- criterion 5: bandit convergence, stationary and drifting ----

Verdict criterion_bandits() {
  // Frequency of pulling the currently-best arm inside [w0, w1).
  const auto window_freq = [](const std::string& name, std::uint64_t seed,
                              bool swap, int w0, int w1) {
    ControllerSpec spec;
    spec.name = name;
    if (name == "exp3" || name == "exp4") {
      spec.payoff_lo = 0.0;
      spec.payoff_hi = 1.0;
    }
    const auto ctrl = make_controller(spec, 2);
    Rng rng(seed);
    int hits = 0;
    for (int t = 0; t < 1000; ++t) {
      const int best = (swap && t >= 500) ? 1 : 0;
      const int arm = ctrl->select(rng);
      ctrl->update(arm, rng.bernoulli(arm == best ? 0.9 : 0.1) ? 1.0 : 0.0);
      if (t >= w0 && t < w1 && arm == best) ++hits;
    }
    return hits / static_cast<double>(w1 - w0);
  };

  const auto median_freq = [&](const std::string& name, std::uint64_t base,
                               bool swap, int w0, int w1) {
    std::vector<double> freqs;
    for (std::uint64_t s = 0; s < 50; ++s)
      freqs.push_back(window_freq(name, base + s, swap, w0, w1));
    return oracle::median_of(freqs);
  };

  for (const char* name :
       {"thompson", "discounted-thompson", "ucb1", "exp3", "exp4"}) {
    const bool adversarial =
        std::string(name) == "exp3" || std::string(name) == "exp4";
    const double med = median_freq(name, 5000, false, 900, 1000);
    const double want = adversarial ? 0.55 : 0.85;
    if (med < want)
      return fail(std::string(name) + " median final-arm frequency " +
                  std::to_string(med) + " < " + std::to_string(want));
  }

  // After the swap the discounted posterior must have recovered by the
  // final hundred rounds, while right after the swap the undiscounted one
  // is still dominated by 500 stale observations.
  const double dts = median_freq("discounted-thompson", 6000, true, 900, 1000);
  const double ts = median_freq("thompson", 6000, true, 500, 600);
  if (dts < 0.7)
    return fail("discounted Thompson does not recover after the swap: " +
                std::to_string(dts));
  if (ts > 0.2)
    return fail("undiscounted Thompson adapts implausibly fast after the swap: " +
                std::to_string(ts));
  return ok();
}

// ---- criterion 6: controller comparison on the toy pipeline ----

Verdict criterion_controller_bench() {
  const ExperimentConfig toy = parse_experiment_config(nlohmann::json::object());
  const OuterConfig base = make_outer_config(toy, 0, "bench");
  std::vector<ControllerSpec> specs;
  for (const char* name :
       {"thompson", "discounted-thompson", "ucb1", "exp3", "exp4"}) {
    ControllerSpec spec;
    spec.name = name;
    specs.push_back(spec);
  }
  std::vector<std::uint64_t> seeds;
  for (std::uint64_t s = 0; s < 20; ++s) seeds.push_back(s);

  const ControllerComparison cmp =
      compare_controllers(base, specs, seeds, 0.9, 5, 0);

  std::vector<double> med_final(specs.size());
  std::vector<double> med_threshold(specs.size());
  for (std::size_t c = 0; c < specs.size(); ++c) {
    std::vector<double> finals, thresholds;
    for (const ComparisonRow& row : cmp.rows) {
      if (row.controller != specs[c].name) continue;
      finals.push_back(row.final_smoothed);
      thresholds.push_back(static_cast<double>(row.threshold_round));
    }
    med_final[c] = oracle::median_of(finals);
    med_threshold[c] = oracle::median_of(thresholds);
  }

  const double best = *std::max_element(med_final.begin(), med_final.end());
  std::string report;
  for (std::size_t c = 0; c < specs.size(); ++c) {
    report += specs[c].name + " final=" + std::to_string(med_final[c]) +
              " threshold=" + std::to_string(med_threshold[c]) + "; ";
    if (med_final[c] < best - 0.1)
      return fail(specs[c].name + " median final smoothed value " +
                  std::to_string(med_final[c]) + " trails the best " +
                  std::to_string(best) + " by more than 0.1");
  }
  for (std::size_t c = 1; c < specs.size(); ++c) {
    if (med_threshold[0] > med_threshold[c])
      return fail("posterior sampling is not earliest to threshold: " + report);
  }
  return ok();
}

// ---- criterion 7: adaptive selection vs the worst fixed profile ----

Verdict criterion_vs_fixed() {
  const ExperimentConfig toy = parse_experiment_config(nlohmann::json::object());
  const std::vector<RewardProfile> profiles = toy.profiles;
  const int kSeeds = 20;
  const int baseline_jobs = static_cast<int>(profiles.size()) * kSeeds;
  const int total_jobs = baseline_jobs + kSeeds;

  std::vector<double> finals(total_jobs,
                             std::numeric_limits<double>::quiet_NaN());
  std::vector<std::string> errors(total_jobs);
  std::atomic<int> next{0};
  const auto worker = [&] {
    for (;;) {
      const int job = next.fetch_add(1);
      if (job >= total_jobs) return;
      try {
        if (job < baseline_jobs) {
          const int p = job / kSeeds;
          const std::uint64_t seed = static_cast<std::uint64_t>(job % kSeeds);
          const OuterConfig cfg =
              make_outer_config(toy, seed, "fixed-" + std::to_string(job));
          const RunTrace trace = fixed_profile_baseline(cfg, profiles[p]);
          finals[job] = trace.records.back().report.mean_pv;
        } else {
          const std::uint64_t seed =
              static_cast<std::uint64_t>(job - baseline_jobs);
          const OuterConfig cfg =
              make_outer_config(toy, seed, "adaptive-" + std::to_string(job));
          const RunTrace trace = run_outer_loop(cfg);
          finals[job] = trace.records.back().report.mean_pv;
        }
      } catch (const std::exception& e) {
        errors[job] = e.what();
      }
    }
  };
  const unsigned n_threads = std::max(1u, std::thread::hardware_concurrency());
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  for (std::thread& t : pool) t.join();
  for (int j = 0; j < total_jobs; ++j) {
    if (!errors[j].empty()) return fail("run failed: " + errors[j]);
  }

  double worst_median = std::numeric_limits<double>::infinity();
  std::string worst_name;
  for (std::size_t p = 0; p < profiles.size(); ++p) {
    std::vector<double> vals(finals.begin() + p * kSeeds,
                             finals.begin() + (p + 1) * kSeeds);
    const double med = oracle::median_of(vals);
    if (med < worst_median) {
      worst_median = med;
      worst_name = profiles[p].name;
    }
  }
  const std::vector<double> adaptive(finals.begin() + baseline_jobs,
                                     finals.end());
  const double adaptive_median = oracle::median_of(adaptive);
  if (adaptive_median < worst_median + 0.1)
    return fail("adaptive median " + std::to_string(adaptive_median) +
                " does not clear worst fixed profile '" + worst_name + "' (" +
                std::to_string(worst_median) + ") by 0.1");
  return ok();
}

// ---- criterion 8: byte-identical reruns of every subcommand ----

std::string read_file_or_empty(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) return "";
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::map<std::string, std::string> dir_snapshot(const fs::path& root) {
  std::map<std::string, std::string> snap;
  if (!fs::exists(root)) return snap;
  for (const auto& entry : fs::recursive_directory_iterator(root)) {
    if (!entry.is_regular_file()) continue;
    snap[fs::relative(entry.path(), root).string()] =
        read_file_or_empty(entry.path());
  }
  return snap;
}

struct CliRun {
  int code = -1;
  std::string out;
};

Verdict criterion_reproducible(const std::string& cli) {
  const fs::path scratch = fs::temp_directory_path() / "corrgame_acceptance";
  fs::remove_all(scratch);
  fs::create_directories(scratch);
  int counter = 0;
  const auto run = [&](const std::string& args) {
    const fs::path out_path =
        scratch / ("stdout_" + std::to_string(counter++) + ".txt");
    const std::string cmd = "\"" + cli + "\" " + args + " > \"" +
                            out_path.string() + "\" 2> /dev/null";
    CliRun r;
    const int status = std::system(cmd.c_str());
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = read_file_or_empty(out_path);
    return r;
  };
  const auto write_config = [&](const std::string& name,
                                const nlohmann::json& j) {
    const fs::path p = scratch / name;
    std::ofstream out(p, std::ios::binary);
    out << j.dump();
    return p.string();
  };

  nlohmann::json sim_cfg;
  sim_cfg["seeds"] = {1};
  sim_cfg["schedule"] = {{"outer_rounds", 4}, {"train_rounds", 64},
                         {"eval_rounds", 128}, {"snapshot_interval", 2}};
  sim_cfg["output"] = {{"dir", (scratch / "sim").string()},
                       {"write_json", true}};
  nlohmann::json bench_cfg;
  bench_cfg["seeds"] = {1, 2};
  bench_cfg["controllers"] =
      nlohmann::json::array({{{"name", "thompson"}}, {{"name", "ucb1"}}});
  bench_cfg["schedule"] = {{"outer_rounds", 4}, {"train_rounds", 64},
                           {"eval_rounds", 128}, {"snapshot_interval", 0}};
  bench_cfg["output"] = {{"dir", (scratch / "bench_out").string()},
                         {"write_json", false}};
  const std::string sim_path = write_config("sim.json", sim_cfg);
  const std::string bench_path = write_config("bench.json", bench_cfg);
  const std::string br_out = (scratch / "best_response.csv").string();

  struct Scenario {
    std::string name;
    std::string args;
    fs::path artifacts;  // empty: compare stdout only
  };
  const std::vector<Scenario> scenarios = {
      {"equilibrium", "equilibrium --noisy --epsilon 0.05 --json", {}},
      {"best-response", "best-response --out \"" + br_out + "\"",
       scratch / "best_response.csv"},
      {"simulate", "simulate --config \"" + sim_path + "\"", scratch / "sim"},
      {"baseline",
       "baseline --config \"" + sim_path + "\" --profile default",
       scratch / "sim"},
      {"bandit-bench", "bandit-bench --config \"" + bench_path + "\"",
       scratch / "bench_out"},
  };

  for (const Scenario& sc : scenarios) {
    const CliRun first = run(sc.args);
    if (first.code != 0)
      return fail(sc.name + " exited with code " + std::to_string(first.code));
    std::map<std::string, std::string> snap1;
    if (!sc.artifacts.empty()) {
      snap1 = fs::is_directory(sc.artifacts)
                  ? dir_snapshot(sc.artifacts)
                  : std::map<std::string, std::string>{
                        {"file", read_file_or_empty(sc.artifacts)}};
      if (snap1.empty()) return fail(sc.name + " produced no artifacts");
    }
    const CliRun second = run(sc.args);
    if (second.code != 0)
      return fail(sc.name + " rerun exited with code " +
                  std::to_string(second.code));
    if (second.out != first.out)
      return fail(sc.name + " stdout differs between identical runs");
    if (!sc.artifacts.empty()) {
      const auto snap2 =
          fs::is_directory(sc.artifacts)
              ? dir_snapshot(sc.artifacts)
              : std::map<std::string, std::string>{
                    {"file", read_file_or_empty(sc.artifacts)}};
      if (snap1 != snap2)
        return fail(sc.name + " artifacts differ between identical runs");
    }
  }
  return ok();
}

}  // namespace

int main(int argc, char** argv) {
  std::string cli;
  for (int i = 1; i < argc; ++i) {
    if (std::string(argv[i]) == "--cli" && i + 1 < argc) cli = argv[++i];
  }
  if (cli.empty()) {
    std::cerr << "usage: acceptance --cli <path-to-cli-binary>\n";
    return 64;
  }

  struct Criterion {
    const char* name;
    const char* description;
    double budget_seconds;
    std::function<Verdict()> fn;
  };
  const std::vector<Criterion> criteria = {
      {"criterion-1",
       "closed-form equilibrium is an indifference point and corner verdicts "
       "match brute force",
       10.0, criterion_equilibrium},
      {"criterion-2",
       "noisy utilities match branch enumeration, reduce cleanly, and the "
       "audit regime is classified correctly",
       10.0, criterion_noisy},
      {"criterion-3",
       "discrete best responses form the four-state cycle with self-loops",
       1.0, criterion_cycle},
      {"criterion-4", "policy log-probability gradient matches finite differences",
       5.0, criterion_gradient},
      {"criterion-5",
       "controllers find the better arm and discounting tracks a mid-run swap",
       30.0, criterion_bandits},
      {"criterion-6",
       "all controllers reach comparable final quality and posterior sampling "
       "converges earliest",
       600.0, criterion_controller_bench},
      {"criterion-7",
       "adaptive profile selection beats the worst fixed profile by 0.1",
       600.0, criterion_vs_fixed},
      {"criterion-8", "every subcommand is byte-identical across reruns", 120.0,
       [&] { return criterion_reproducible(cli); }},
  };

  int failures = 0;
  for (const Criterion& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.fn();
    } catch (const std::exception& e) {
      v = fail(std::string("exception: ") + e.what());
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    if (v.pass && secs > c.budget_seconds) {
      v = fail("exceeded time budget of " + std::to_string(c.budget_seconds) +
               "s");
    }
    std::printf("[%s] %s %s (%.2fs)%s%s\n", v.pass ? "PASS" : "FAIL", c.name,
                c.description, secs, v.detail.empty() ? "" : " -- ",
                v.detail.c_str());
    std::fflush(stdout);
    if (!v.pass) ++failures;
  }
  std::printf("%d/%d criteria passed\n",
              static_cast<int>(criteria.size()) - failures,
              static_cast<int>(criteria.size()));
  return failures;
}
