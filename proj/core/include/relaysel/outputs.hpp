#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>

#include "relaysel/config.hpp"
#include "relaysel/experiment.hpp"
#include "relaysel/policy.hpp"

namespace relaysel {

/// Fixed-format number rendering used by every table (printf %.10g).
std::string format_number(double value);

/// JSON document with the model, cost, per-stage thresholds of the horizon
/// policy and the stationary count policy.
std::string policy_document(const ChannelModel& model, const CostModel& cost,
                            const HorizonPolicy& horizon, const StationaryPolicy& stationary);

/// Comma-separated tables. Column schemas are listed in the README.
std::string runs_table(std::span<const RunMetrics> runs);
std::string metrics_table(PolicyKind policy, const AggregateStats& stats);
std::string sweep_table(SweepAxis axis, std::span<const SweepPoint> points);

std::string simulation_summary(const ScenarioConfig& config, const MonteCarloResult& result);
std::string sweep_summary(const ScenarioConfig& config, SweepAxis axis,
                          std::span<const SweepPoint> points);

/// Creates parent directories as needed; failures raise std::runtime_error
/// naming the path.
void write_text_file(const std::filesystem::path& path, std::string_view content);

/// Writes config.json, runs.csv, metrics.csv and summary.txt under `dir`.
void emit_simulation(const std::filesystem::path& dir, const ScenarioConfig& config,
                     const MonteCarloResult& result);

/// Writes config.json, sweep.csv and summary.txt under `dir`. Throws
/// std::invalid_argument before touching the filesystem when `points` is empty.
void emit_sweep(const std::filesystem::path& dir, const ScenarioConfig& config, SweepAxis axis,
                std::span<const SweepPoint> points);

}  // namespace relaysel
