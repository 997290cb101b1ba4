// Command-line front end: solve, simulate, sweep, calibrate.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "relaysel/calibrate.hpp"
#include "relaysel/config.hpp"
#include "relaysel/episode.hpp"
#include "relaysel/experiment.hpp"
#include "relaysel/outputs.hpp"
#include "relaysel/policy.hpp"

namespace {

using namespace relaysel;

struct CommonOptions {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> runs;
  std::string out_dir;
  std::string policy;
  std::size_t threads = 0;
};

void add_common(CLI::App& app, CommonOptions& o, bool with_policy) {
  app.add_option("--config", o.config_path, "Scenario config (JSON)")->check(CLI::ExistingFile);
  app.add_option("--seed", o.seed, "Base seed");
  app.add_option("--runs", o.runs, "Monte Carlo runs")->check(CLI::PositiveNumber);
  app.add_option("--out", o.out_dir, "Output directory");
  if (with_policy) app.add_option("--policy", o.policy, "pomdp, rss or both");
  app.add_option("--threads", o.threads, "Worker threads (0 = all cores)");
}

ScenarioConfig scenario(const CommonOptions& o) {
  ScenarioConfig c = o.config_path.empty() ? ScenarioConfig{} : load_config(o.config_path);
  if (o.seed) c.seed = *o.seed;
  if (o.runs) c.runs = *o.runs;
  c.validate();
  return c;
}

std::vector<PolicyKind> policies(const std::string& text, PolicyKind fallback, bool allow_both) {
  if (text.empty()) {
    if (allow_both) return {PolicyKind::Pomdp, PolicyKind::Rss};
    return {fallback};
  }
  if (text == "both") {
    if (!allow_both) throw std::invalid_argument("--policy both is only valid for sweep");
    return {PolicyKind::Pomdp, PolicyKind::Rss};
  }
  return {parse_policy_kind(text)};
}

std::string count_text(const std::optional<std::size_t>& n) {
  return n ? std::to_string(*n) : std::string("none");
}

int run_solve(const CommonOptions& o, std::optional<std::size_t> horizon) {
  const ScenarioConfig c = scenario(o);
  const std::size_t m = horizon.value_or(c.timing.exploration_cap);
  const HorizonPolicy h = solve_horizon(c.channel, c.cost, m);
  ScenarioConfig capped = c;
  capped.timing.exploration_cap = m;
  const StationaryPolicy s = scenario_policy(capped);
  if (!s.converged) {
    std::cerr << "warning: thresholds did not converge within " << s.iterations
              << " backups\n";
  }
  std::cout << "rho " << format_number(h.rho) << '\n';
  for (std::size_t i = 0; i < h.thresholds.size(); ++i) {
    std::cout << "stage " << i << "  alpha " << format_number(h.thresholds[i].alpha) << "  beta "
              << format_number(h.thresholds[i].beta) << '\n';
  }
  std::cout << "alpha_bar " << format_number(s.alpha_bar) << "  beta_bar "
            << format_number(s.beta_bar) << "  after " << s.iterations << " backups\n"
            << "reject after " << count_text(s.reject_after) << " failures, accept after "
            << count_text(s.accept_after) << " successes (prior " << format_number(s.prior)
            << ")\n";
  if (!o.out_dir.empty()) {
    write_text_file(std::filesystem::path(o.out_dir) / "policy.json",
                    policy_document(c.channel, c.cost, h, s));
  }
  return 0;
}

int run_simulate(const CommonOptions& o, const std::string& trace_path) {
  ScenarioConfig c = scenario(o);
  c.policy = policies(o.policy, c.policy, false).front();
  const MonteCarloResult r = monte_carlo(c, o.threads);
  std::cout << simulation_summary(c, r);
  if (!o.out_dir.empty()) emit_simulation(o.out_dir, c, r);
  if (!trace_path.empty()) {
    // Episodes are pure functions of their seed, so replaying them
    // sequentially reproduces the simulated runs exactly.
    std::vector<TraceRecord> records;
    const StationaryPolicy* policy = c.policy == PolicyKind::Pomdp ? &r.policy : nullptr;
    for (std::size_t i = 0; i < c.runs; ++i) {
      run_episode(c, policy, episode_seed(c.seed, i), &records, i);
    }
    std::ostringstream os;
    write_trace(os, records);
    write_text_file(trace_path, os.str());
  }
  return 0;
}

std::vector<std::size_t> parse_values(const std::vector<std::string>& raw) {
  std::vector<std::size_t> out;
  for (const std::string& item : raw) {
    std::stringstream ss(item);
    std::string token;
    while (std::getline(ss, token, ',')) {
      if (token.empty()) continue;
      std::size_t used = 0;
      unsigned long long v = 0;
      try {
        v = std::stoull(token, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != token.size() || token.front() == '-') {
        throw std::invalid_argument("sweep value is not a non-negative integer: '" + token + "'");
      }
      out.push_back(static_cast<std::size_t>(v));
    }
  }
  if (out.empty()) throw std::invalid_argument("--values needs at least one value");
  return out;
}

int run_sweep(const CommonOptions& o, const std::string& axis_text,
              const std::vector<std::string>& raw_values) {
  const ScenarioConfig c = scenario(o);
  const SweepAxis axis = parse_sweep_axis(axis_text);
  const std::vector<std::size_t> values = parse_values(raw_values);
  const std::vector<PolicyKind> kinds = policies(o.policy, c.policy, true);
  const std::vector<SweepPoint> points = sweep(c, axis, values, kinds, o.threads);
  std::cout << sweep_table(axis, points);
  if (!o.out_dir.empty()) emit_sweep(o.out_dir, c, axis, points);
  return 0;
}

int run_calibrate(const CommonOptions& o, const std::string& trace_path, std::size_t min_samples) {
  std::ifstream in(trace_path);
  if (!in) throw std::runtime_error("cannot open trace file " + trace_path);
  const std::vector<TraceRecord> records = read_trace(in);
  const CalibrationPairs pairs = pairs_from_trace(records);
  const ChannelModel m = calibrate(pairs.transitions, pairs.observations, min_samples);
  std::ostringstream doc;
  doc << "{\n  \"channel\": {\n    \"q\": " << format_number(m.q()) << ",\n    \"s\": "
      << format_number(m.s()) << ",\n    \"k\": " << format_number(m.k()) << ",\n    \"g\": "
      << format_number(m.g()) << "\n  }\n}\n";
  std::cout << "transitions " << pairs.transitions.size() << ", observations "
            << pairs.observations.size() << '\n'
            << doc.str();
  if (!o.out_dir.empty()) {
    write_text_file(std::filesystem::path(o.out_dir) / "calibration.json", doc.str());
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Relay selection under blockage: policy solver and simulator"};
  app.require_subcommand(1);

  CommonOptions solve_opts, sim_opts, sweep_opts, cal_opts;
  std::optional<std::size_t> horizon;
  std::string trace_out, axis, trace_in;
  std::vector<std::string> values;
  std::size_t min_samples = 100;

  CLI::App* solve = app.add_subcommand("solve", "Thresholds, counts and policy document");
  add_common(*solve, solve_opts, false);
  solve->add_option("--horizon", horizon, "Horizon M (defaults to the config's cap)")
      ->check(CLI::PositiveNumber);

  CLI::App* simulate = app.add_subcommand("simulate", "Monte Carlo runs of one scenario");
  add_common(*simulate, sim_opts, true);
  simulate->add_option("--trace", trace_out, "Write per-probe trace CSV to this file");

  CLI::App* sweep_cmd = app.add_subcommand("sweep", "Monte Carlo over an axis of values");
  add_common(*sweep_cmd, sweep_opts, true);
  sweep_cmd->add_option("--axis", axis, "M or D")->required();
  sweep_cmd->add_option("--values", values, "Axis values, space or comma separated")
      ->required()
      ->expected(1, -1);

  CLI::App* cal = app.add_subcommand("calibrate", "Estimate q, s, k, g from a probe trace");
  add_common(*cal, cal_opts, false);
  cal->add_option("--traces", trace_in, "Trace CSV written by simulate --trace")->required();
  cal->add_option("--min-samples", min_samples, "Minimum samples per conditional");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*solve) return run_solve(solve_opts, horizon);
    if (*simulate) return run_simulate(sim_opts, trace_out);
    if (*sweep_cmd) return run_sweep(sweep_opts, axis, values);
    if (*cal) return run_calibrate(cal_opts, trace_in, min_samples);
  } catch (const std::exception& e) {
    std::cerr << "relaysel: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
