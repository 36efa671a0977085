#include "corrgame/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include "corrgame/csv.hpp"
#include "corrgame/errors.hpp"

namespace corrgame {

bool PrincipalValueTable::ordering_ok() const {
  return of(Outcome::Aligned) > of(Outcome::Caught) &&
         of(Outcome::Caught) > of(Outcome::Abstain) &&
         of(Outcome::Abstain) > of(Outcome::FalsePositive) &&
         of(Outcome::FalsePositive) > of(Outcome::Silent);
}

void PrincipalValueTable::validate() const {
  for (double v : value) {
    if (!std::isfinite(v))
      throw ConfigError("principal_values: entries must be finite");
  }
}

EvalReport aggregate_report(const std::array<long, kOutcomeCount>& counts,
                            const PrincipalValueTable& pv) {
  pv.validate();
  EvalReport rep;
  long total = 0;
  for (long c : counts) {
    if (c < 0) throw std::invalid_argument("aggregate_report: negative count");
    total += c;
  }
  rep.sample_count = total;
  if (total == 0) return rep;
  const double n = static_cast<double>(total);
  double value_sum = 0.0;
  for (int o = 0; o < kOutcomeCount; ++o) {
    rep.outcome_rates[o] = static_cast<double>(counts[o]) / n;
    value_sum += static_cast<double>(counts[o]) * pv.value[o];
  }
  rep.mean_pv = value_sum / n;
  const long attempts = total - counts[static_cast<int>(Outcome::Abstain)];
  rep.attempt_rate = static_cast<double>(attempts) / n;
  const long correct_attempts =
      counts[static_cast<int>(Outcome::Aligned)] +
      counts[static_cast<int>(Outcome::FalsePositive)];
  rep.attempted_pass_rate =
      attempts > 0
          ? static_cast<double>(correct_attempts) / static_cast<double>(attempts)
          : 0.0;
  const long wrong_attempts = counts[static_cast<int>(Outcome::Caught)] +
                              counts[static_cast<int>(Outcome::Silent)];
  rep.hallucination_rate = static_cast<double>(wrong_attempts) / n;
  rep.silent_failure_rate =
      static_cast<double>(counts[static_cast<int>(Outcome::Silent)]) / n;
  return rep;
}

EvalReport evaluate_frozen(const PolicyNet& solver, const PolicyNet& auditor,
                           const TaskDistribution& tasks,
                           const PrincipalValueTable& pv, long rounds,
                           StreamBundle& rngs) {
  if (rounds <= 0)
    throw ConfigError("evaluate_frozen: rounds must be >= 1");
  std::array<long, kOutcomeCount> counts{};
  for (long i = 0; i < rounds; ++i) {
    const OutcomeRecord rec = sample_round(solver, auditor, tasks, rngs);
    counts[static_cast<int>(rec.outcome)] += 1;
  }
  return aggregate_report(counts, pv);
}

double OmegaSchedule::at(double progress) const {
  if (kind == "constant") return initial;
  const double t = std::clamp(progress, 0.0, 1.0);
  return initial + (final_value - initial) * t;
}

void OmegaSchedule::validate() const {
  if (kind != "constant" && kind != "linear")
    throw ConfigError("omega: kind must be 'constant' or 'linear'");
  if (!std::isfinite(initial) || !std::isfinite(final_value))
    throw ConfigError("omega: values must be finite");
  if (initial < 0.0 || final_value < 0.0)
    throw ConfigError("omega: values must be >= 0");
}

void LearnerConfig::validate() const {
  if (hidden <= 0) throw ConfigError("agents: hidden_width must be >= 1");
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate))
    throw ConfigError("agents: learning_rate must be > 0");
  if (update_window <= 0)
    throw ConfigError("agents: update_window must be >= 1");
  omega.validate();
}

void Schedule::validate() const {
  if (outer_rounds <= 0)
    throw ConfigError("schedule: outer_rounds must be >= 1");
  if (train_rounds <= 0)
    throw ConfigError("schedule: train_rounds must be >= 1");
  if (eval_rounds <= 0)
    throw ConfigError("schedule: eval_rounds must be >= 1");
  if (snapshot_interval < 0)
    throw ConfigError("schedule: snapshot_interval must be >= 0");
}

void OuterConfig::validate() const {
  tasks.validate();
  learner.validate();
  principal.validate();
  controller.validate();
  schedule.validate();
  if (profiles.empty())
    throw ConfigError("rewards: profile library must not be empty");
  for (const RewardProfile& p : profiles) {
    if (p.name.empty())
      throw ConfigError("rewards: every profile needs a name");
    for (double v : p.solver) {
      if (!std::isfinite(v))
        throw ConfigError("rewards: profile '" + p.name +
                          "' has a non-finite solver entry");
    }
    for (double v : p.auditor) {
      if (!std::isfinite(v))
        throw ConfigError("rewards: profile '" + p.name +
                          "' has a non-finite auditor entry");
    }
  }
}

namespace {

PolicyNet load_or_init_policy(const std::string& snapshot_path, int hidden,
                              Rng& init_rng) {
  if (snapshot_path.empty()) return make_policy_net(hidden, init_rng);
  std::ifstream in(snapshot_path);
  if (!in)
    throw ConfigError("agents: cannot read policy snapshot '" + snapshot_path +
                      "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_policy(buf.str());
}

struct EpisodeBuffers {
  std::vector<Episode> solver;
  std::vector<Episode> auditor;
};

void flush_updates(PolicyNet& solver, PolicyNet& auditor, EpisodeBuffers& eps,
                   double learning_rate) {
  if (!eps.solver.empty()) {
    reinforce_update(solver, eps.solver, learning_rate,
                     mean_reward(eps.solver));
    eps.solver.clear();
  }
  if (!eps.auditor.empty()) {
    reinforce_update(auditor, eps.auditor, learning_rate,
                     mean_reward(eps.auditor));
    eps.auditor.clear();
  }
}

void train_block(PolicyNet& solver, PolicyNet& auditor,
                 const TaskDistribution& tasks, const RewardProfile& profile,
                 const LearnerConfig& learner, long rounds,
                 long& global_train_round, long total_train_rounds,
                 StreamBundle& rngs) {
  EpisodeBuffers eps;
  eps.solver.reserve(learner.update_window);
  eps.auditor.reserve(learner.update_window);
  for (long r = 0; r < rounds; ++r) {
    const double progress =
        total_train_rounds > 0
            ? static_cast<double>(global_train_round) /
                  static_cast<double>(total_train_rounds)
            : 0.0;
    const double omega_bonus = learner.omega.at(progress);
    const InnerRoundResult res =
        inner_round(solver, auditor, tasks, profile, omega_bonus, rngs);
    global_train_round += 1;
    eps.solver.push_back(
        {res.record.signal,
         res.record.solver_action == SolverAction::Attempt ? 0 : 1,
         res.rewards.solver});
    if (res.rewards.auditor_acted) {
      eps.auditor.push_back(
          {res.record.signal,
           res.record.auditor_action == AuditorAction::Audit ? 0 : 1,
           res.rewards.auditor});
    }
    if ((r + 1) % learner.update_window == 0) {
      flush_updates(solver, auditor, eps, learner.learning_rate);
    }
  }
  flush_updates(solver, auditor, eps, learner.learning_rate);
}

bool profiles_equal(const RewardProfile& a, const RewardProfile& b) {
  return a.name == b.name && a.solver == b.solver && a.auditor == b.auditor;
}

BanditContext make_context(const std::vector<RewardProfile>& profiles,
                           const EvalReport* last_report) {
  BanditContext ctx;
  ctx.abstain_bias.reserve(profiles.size());
  for (const RewardProfile& p : profiles) {
    ctx.abstain_bias.push_back(p.solver_reward(Outcome::Abstain));
  }
  if (last_report != nullptr) {
    ctx.silent_failure_rate = last_report->silent_failure_rate;
    ctx.attempt_rate = last_report->attempt_rate;
  }
  return ctx;
}

}  // namespace

RunTrace run_outer_loop(const OuterConfig& cfg, const RoundSink& sink) {
  cfg.validate();
  if (!cfg.principal.ordering_ok()) {
    std::cerr << "principal_values: ordering aligned > caught > abstain > "
                 "false_positive > silent does not hold; continuing\n";
  }
  Rng init_rng = make_stream(cfg.seed, Stream::Init);
  RunTrace trace;
  PolicyNet solver =
      load_or_init_policy(cfg.learner.solver_snapshot, cfg.learner.hidden,
                          init_rng);
  PolicyNet auditor =
      load_or_init_policy(cfg.learner.auditor_snapshot, cfg.learner.hidden,
                          init_rng);
  StreamBundle env_rngs = StreamBundle::from_master(cfg.seed);
  Rng controller_rng = make_stream(cfg.seed, Stream::Controller);
  std::unique_ptr<Controller> controller = make_controller(
      cfg.controller, static_cast<int>(cfg.profiles.size()));

  const long total_train_rounds =
      static_cast<long>(cfg.schedule.outer_rounds) * cfg.schedule.train_rounds;
  long global_train_round = 0;
  const EvalReport* last_report = nullptr;

  for (int round = 0; round < cfg.schedule.outer_rounds; ++round) {
    controller->observe_context(make_context(cfg.profiles, last_report));
    const int arm = controller->select(controller_rng);
    if (arm < 0 || arm >= static_cast<int>(cfg.profiles.size())) {
      throw std::logic_error("run_outer_loop: controller picked arm " +
                             std::to_string(arm) + " outside the library");
    }
    // The profile must stay bitwise-constant for the whole training block;
    // train against a private copy and verify the library entry afterwards.
    const RewardProfile profile = cfg.profiles[arm];
    train_block(solver, auditor, cfg.tasks, profile, cfg.learner,
                cfg.schedule.train_rounds, global_train_round,
                total_train_rounds, env_rngs);
    if (!profiles_equal(profile, cfg.profiles[arm])) {
      throw std::logic_error(
          "run_outer_loop: reward profile mutated during a training block");
    }
    const EvalReport report =
        evaluate_frozen(solver, auditor, cfg.tasks, cfg.principal,
                        cfg.schedule.eval_rounds, env_rngs);
    if (!std::isfinite(report.mean_pv)) {
      OuterLoopDiagnostic diag;
      diag.round = round;
      diag.solver_policy = serialize_policy(solver);
      diag.auditor_policy = serialize_policy(auditor);
      throw OuterLoopNumericError(
          "run_outer_loop: non-finite mean principal value at outer round " +
              std::to_string(round),
          std::move(diag));
    }
    controller->update(arm, report.mean_pv);

    OuterRecord rec;
    rec.round = round;
    rec.arm = arm;
    rec.profile_name = profile.name;
    rec.report = report;
    rec.arm_summary = controller->arm_summary(arm);
    if (sink) sink(rec);
    trace.records.push_back(std::move(rec));
    last_report = &trace.records.back().report;

    if (cfg.schedule.snapshot_interval > 0 &&
        (round + 1) % cfg.schedule.snapshot_interval == 0) {
      trace.snapshots.push_back({round, solver, auditor});
    }
  }
  trace.solver_final = std::move(solver);
  trace.auditor_final = std::move(auditor);
  return trace;
}

RunTrace fixed_profile_baseline(const OuterConfig& cfg,
                                const RewardProfile& profile,
                                const RoundSink& sink) {
  OuterConfig fixed = cfg;
  fixed.profiles = {profile};
  fixed.controller = ControllerSpec{};
  fixed.controller.name = "constant";
  return run_outer_loop(fixed, sink);
}

std::vector<double> smooth_series(const std::vector<double>& series,
                                  int window) {
  if (window <= 0) throw std::invalid_argument("smooth_series: window >= 1");
  std::vector<double> out(series.size());
  double running = 0.0;
  for (std::size_t i = 0; i < series.size(); ++i) {
    running += series[i];
    if (i >= static_cast<std::size_t>(window)) running -= series[i - window];
    const double width =
        static_cast<double>(std::min<std::size_t>(i + 1, window));
    out[i] = running / width;
  }
  return out;
}

int threshold_round(const std::vector<double>& smoothed, double threshold) {
  if (smoothed.empty())
    throw std::invalid_argument("threshold_round: empty series");
  for (std::size_t i = 0; i < smoothed.size(); ++i) {
    if (smoothed[i] >= threshold) return static_cast<int>(i);
  }
  return static_cast<int>(smoothed.size()) - 1;
}

double median(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("median: empty input");
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  if (n % 2 == 1) return values[n / 2];
  return 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

ControllerComparison compare_controllers(
    const OuterConfig& base, const std::vector<ControllerSpec>& controllers,
    const std::vector<std::uint64_t>& seeds, double threshold_fraction,
    int smooth_window, int max_threads) {
  if (controllers.empty())
    throw ConfigError("compare_controllers: needs at least one controller");
  if (seeds.empty())
    throw ConfigError("compare_controllers: needs at least one seed");
  if (!(threshold_fraction > 0.0) || threshold_fraction > 1.0)
    throw ConfigError(
        "compare_controllers: threshold_fraction must lie in (0, 1]");

  ControllerComparison cmp;
  cmp.threshold_fraction = threshold_fraction;
  cmp.smooth_window = smooth_window;
  const std::size_t jobs = controllers.size() * seeds.size();
  cmp.entries.resize(jobs);

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&]() {
    for (;;) {
      const std::size_t job = next.fetch_add(1);
      if (job >= jobs) return;
      try {
        const std::size_t ci = job / seeds.size();
        const std::size_t si = job % seeds.size();
        OuterConfig cfg = base;
        cfg.controller = controllers[ci];
        cfg.seed = seeds[si];
        cfg.run_id =
            controllers[ci].name + "-seed" + std::to_string(seeds[si]);
        RunTrace trace = run_outer_loop(cfg);
        cmp.entries[job] = {controllers[ci].name, seeds[si],
                            std::move(trace.records)};
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        return;
      }
    }
  };

  unsigned n_threads = max_threads > 0
                           ? static_cast<unsigned>(max_threads)
                           : std::max(1u, std::thread::hardware_concurrency());
  n_threads = std::min<unsigned>(n_threads, jobs);
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  for (std::thread& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);

  // Per-seed convergence target: the best final smoothed value any
  // controller reaches on that seed.
  std::vector<double> best_final(seeds.size(),
                                 -std::numeric_limits<double>::infinity());
  std::vector<std::vector<double>> smoothed(jobs);
  for (std::size_t job = 0; job < jobs; ++job) {
    std::vector<double> series;
    series.reserve(cmp.entries[job].records.size());
    for (const OuterRecord& rec : cmp.entries[job].records) {
      series.push_back(rec.report.mean_pv);
    }
    smoothed[job] = smooth_series(series, smooth_window);
    const std::size_t si = job % seeds.size();
    best_final[si] = std::max(best_final[si], smoothed[job].back());
  }
  cmp.rows.reserve(jobs);
  for (std::size_t job = 0; job < jobs; ++job) {
    const std::size_t si = job % seeds.size();
    ComparisonRow row;
    row.controller = cmp.entries[job].controller;
    row.seed = cmp.entries[job].seed;
    row.final_mean_pv = cmp.entries[job].records.back().report.mean_pv;
    row.final_smoothed = smoothed[job].back();
    row.threshold_round = threshold_round(
        smoothed[job], threshold_fraction * best_final[si]);
    row.total_inner_rounds =
        static_cast<long>(base.schedule.outer_rounds) *
        (base.schedule.train_rounds + base.schedule.eval_rounds);
    cmp.rows.push_back(std::move(row));
  }
  return cmp;
}

// ---- Trace serialization ----

const char* trace_csv_header() {
  return "run_id,outer_round,profile_name,mean_pv,rate_abstain,rate_aligned,"
         "rate_caught,rate_false_positive,rate_silent,attempt_rate,"
         "attempted_pass_rate,hallucination_rate,silent_failure_rate,"
         "arm_index,arm_estimate,arm_weight";
}

std::string trace_csv_row(const std::string& run_id, const OuterRecord& rec) {
  std::ostringstream os;
  os << run_id << ',' << rec.round << ',' << rec.profile_name << ','
     << format_double(rec.report.mean_pv);
  for (int o = 0; o < kOutcomeCount; ++o) {
    os << ',' << format_double(rec.report.outcome_rates[o]);
  }
  os << ',' << format_double(rec.report.attempt_rate) << ','
     << format_double(rec.report.attempted_pass_rate) << ','
     << format_double(rec.report.hallucination_rate) << ','
     << format_double(rec.report.silent_failure_rate) << ',' << rec.arm << ','
     << format_double(rec.arm_summary.estimate) << ','
     << format_double(rec.arm_summary.weight);
  return os.str();
}

const char* comparison_csv_header() {
  return "controller,seed,final_mean_pv,final_smoothed_mean_pv,"
         "threshold_round,total_inner_rounds";
}

std::string comparison_csv_row(const ComparisonRow& row) {
  std::ostringstream os;
  os << row.controller << ',' << row.seed << ','
     << format_double(row.final_mean_pv) << ','
     << format_double(row.final_smoothed) << ',' << row.threshold_round << ','
     << row.total_inner_rounds;
  return os.str();
}

const char* comparison_summary_csv_header() {
  return "controller,median_final_mean_pv,median_final_smoothed_mean_pv,"
         "median_threshold_round";
}

std::string comparison_summary_csv(const ControllerComparison& cmp) {
  std::vector<std::string> order;
  for (const ComparisonRow& row : cmp.rows) {
    if (std::find(order.begin(), order.end(), row.controller) == order.end()) {
      order.push_back(row.controller);
    }
  }
  std::ostringstream os;
  os << comparison_summary_csv_header() << '\n';
  for (const std::string& name : order) {
    std::vector<double> finals, smootheds, rounds;
    for (const ComparisonRow& row : cmp.rows) {
      if (row.controller != name) continue;
      finals.push_back(row.final_mean_pv);
      smootheds.push_back(row.final_smoothed);
      rounds.push_back(static_cast<double>(row.threshold_round));
    }
    os << name << ',' << format_double(median(finals)) << ','
       << format_double(median(smootheds)) << ','
       << format_double(median(rounds)) << '\n';
  }
  return os.str();
}

const char* trajectory_csv_header() {
  return "controller,seed,outer_round,inner_rounds_cum,profile_name,mean_pv,"
         "smoothed_mean_pv";
}

void write_trajectory_csv(std::ostream& os, const ComparisonEntry& entry,
                          const Schedule& schedule, int smooth_window) {
  std::vector<double> series;
  series.reserve(entry.records.size());
  for (const OuterRecord& rec : entry.records) {
    series.push_back(rec.report.mean_pv);
  }
  const std::vector<double> smoothed = smooth_series(series, smooth_window);
  const long per_round = schedule.train_rounds + schedule.eval_rounds;
  for (std::size_t i = 0; i < entry.records.size(); ++i) {
    const OuterRecord& rec = entry.records[i];
    os << entry.controller << ',' << entry.seed << ',' << rec.round << ','
       << per_round * (rec.round + 1) << ',' << rec.profile_name << ','
       << format_double(rec.report.mean_pv) << ','
       << format_double(smoothed[i]) << '\n';
  }
}

}  // namespace corrgame
