#include "relaysel/outputs.hpp"

#include <cstdio>
#include <fstream>
#include "json.hpp"
#include <sstream>
#include <stdexcept>
#include <system_error>

namespace relaysel {
namespace {

using Json = nlohmann::ordered_json;

Json optional_count(const std::optional<std::size_t>& n) {
  return n ? Json(*n) : Json(nullptr);
}

std::string count_text(const std::optional<std::size_t>& n) {
  return n ? std::to_string(*n) : std::string("none");
}

constexpr std::string_view kAggregateColumns =
    "runs,completed_runs,"
    "e2e_delay_mean_s,e2e_delay_sd_s,"
    "exploration_time_mean_s,exploration_time_sd_s,"
    "exploration_episodes_mean,candidates_explored_mean,"
    "no_decision_episodes_mean,relay_switches_mean,relay_switches_sd,"
    "no_decision_pct,switch_pct,exploration_pct,exploration_per_episode_s";

void append_aggregate(std::ostringstream& os, const AggregateStats& s) {
  os << s.runs << ',' << s.completed_runs << ',' << format_number(s.e2e_delay_s.mean) << ','
     << format_number(s.e2e_delay_s.sd) << ',' << format_number(s.exploration_time_s.mean) << ','
     << format_number(s.exploration_time_s.sd) << ','
     << format_number(s.exploration_episodes.mean) << ','
     << format_number(s.candidates_explored.mean) << ','
     << format_number(s.no_decision_episodes.mean) << ','
     << format_number(s.relay_switches.mean) << ',' << format_number(s.relay_switches.sd) << ','
     << format_number(s.no_decision_pct) << ',' << format_number(s.switch_pct) << ','
     << format_number(s.exploration_pct) << ',' << format_number(s.exploration_per_episode_s);
}

void append_summary_stats(std::ostringstream& os, const AggregateStats& s) {
  os << "  runs completed       " << s.completed_runs << " / " << s.runs << '\n'
     << "  e2e delay (s)        " << format_number(s.e2e_delay_s.mean) << " +- "
     << format_number(s.e2e_delay_s.sd) << '\n'
     << "  exploration (s)      " << format_number(s.exploration_time_s.mean) << " +- "
     << format_number(s.exploration_time_s.sd) << '\n'
     << "  exploration phases   " << format_number(s.exploration_episodes.mean) << '\n'
     << "  relay switches       " << format_number(s.relay_switches.mean) << " +- "
     << format_number(s.relay_switches.sd) << '\n'
     << "  no-decision (%)      " << format_number(s.no_decision_pct) << '\n';
}

}  // namespace

std::string format_number(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", value);
  return buf;
}

std::string policy_document(const ChannelModel& model, const CostModel& cost,
                            const HorizonPolicy& horizon, const StationaryPolicy& stationary) {
  Json doc;
  doc["channel"] = {{"q", model.q()}, {"s", model.s()}, {"k", model.k()}, {"g", model.g()}};
  doc["cost"] = {{"reject_cost", cost.reject_cost()},
                 {"accept_cost", cost.accept_cost()},
                 {"probe_cost", cost.probe_cost()}};
  doc["horizon"] = horizon.horizon;
  doc["rho"] = horizon.rho;
  Json stages = Json::array();
  for (std::size_t m = 0; m < horizon.thresholds.size(); ++m) {
    stages.push_back(
        {{"stage", m}, {"alpha", horizon.thresholds[m].alpha}, {"beta", horizon.thresholds[m].beta}});
  }
  doc["stages"] = std::move(stages);
  doc["stationary"] = {{"alpha_bar", stationary.alpha_bar},
                       {"beta_bar", stationary.beta_bar},
                       {"prior", stationary.prior},
                       {"reject_after", optional_count(stationary.reject_after)},
                       {"accept_after", optional_count(stationary.accept_after)},
                       {"cap", stationary.cap},
                       {"iterations", stationary.iterations},
                       {"converged", stationary.converged}};
  return doc.dump(2) + "\n";
}

std::string runs_table(std::span<const RunMetrics> runs) {
  std::ostringstream os;
  os << "run,e2e_delay_s,exploration_time_s,exploration_episodes,candidates_explored,"
        "no_decision_episodes,relay_switches,packets_delivered,packet_slots,probes,completed\n";
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const RunMetrics& r = runs[i];
    os << i << ',' << format_number(r.e2e_delay_s) << ',' << format_number(r.exploration_time_s)
       << ',' << r.exploration_episodes << ',' << r.candidates_explored << ','
       << r.no_decision_episodes << ',' << r.relay_switches << ',' << r.packets_delivered << ','
       << r.packet_slots << ',' << r.probes << ',' << (r.completed ? 1 : 0) << '\n';
  }
  return os.str();
}

std::string metrics_table(PolicyKind policy, const AggregateStats& stats) {
  std::ostringstream os;
  os << "policy," << kAggregateColumns << '\n' << to_string(policy) << ',';
  append_aggregate(os, stats);
  os << '\n';
  return os.str();
}

std::string sweep_table(SweepAxis axis, std::span<const SweepPoint> points) {
  std::ostringstream os;
  os << "axis,value,policy," << kAggregateColumns << '\n';
  for (const SweepPoint& p : points) {
    os << to_string(axis) << ',' << p.value << ',' << to_string(p.policy) << ',';
    append_aggregate(os, p.result.stats);
    os << '\n';
  }
  return os.str();
}

std::string simulation_summary(const ScenarioConfig& config, const MonteCarloResult& result) {
  std::ostringstream os;
  os << "policy " << to_string(config.policy) << ", runs " << config.runs << ", seed "
     << config.seed << ", M " << config.timing.exploration_cap << ", dynamic obstacles "
     << config.world.dynamic_obstacles << '\n';
  if (config.policy == PolicyKind::Pomdp) {
    os << "  thresholds           alpha_bar " << format_number(result.policy.alpha_bar)
       << ", beta_bar " << format_number(result.policy.beta_bar) << '\n'
       << "  counts               reject after " << count_text(result.policy.reject_after)
       << ", accept after " << count_text(result.policy.accept_after) << '\n';
  }
  append_summary_stats(os, result.stats);
  return os.str();
}

std::string sweep_summary(const ScenarioConfig& config, SweepAxis axis,
                          std::span<const SweepPoint> points) {
  std::ostringstream os;
  os << "sweep over " << to_string(axis) << ", runs " << config.runs << ", seed " << config.seed
     << '\n';
  for (const SweepPoint& p : points) {
    os << to_string(axis) << " = " << p.value << ", policy " << to_string(p.policy) << '\n';
    append_summary_stats(os, p.result.stats);
  }
  return os.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view content) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) {
      throw std::runtime_error("cannot create directory " + path.parent_path().string() + ": " +
                               ec.message());
    }
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  out.close();
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

void emit_simulation(const std::filesystem::path& dir, const ScenarioConfig& config,
                     const MonteCarloResult& result) {
  write_text_file(dir / "config.json", dump_config(config));
  write_text_file(dir / "runs.csv", runs_table(result.runs));
  write_text_file(dir / "metrics.csv", metrics_table(config.policy, result.stats));
  write_text_file(dir / "summary.txt", simulation_summary(config, result));
}

void emit_sweep(const std::filesystem::path& dir, const ScenarioConfig& config, SweepAxis axis,
                std::span<const SweepPoint> points) {
  if (points.empty()) throw std::invalid_argument("refusing to emit an empty sweep");
  write_text_file(dir / "config.json", dump_config(config));
  write_text_file(dir / "sweep.csv", sweep_table(axis, points));
  write_text_file(dir / "summary.txt", sweep_summary(config, axis, points));
}

}  // namespace relaysel
