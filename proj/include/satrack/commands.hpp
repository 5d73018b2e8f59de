#pragma once

#include <optional>
#include <string>
#include <vector>

#include "satrack/config.hpp"

namespace satrack {

inline constexpr const char* kToolVersion = "1.0.0";

// Orchestration commands behind the CLI. All of them write their outputs
// atomically (write-then-rename) plus a manifest.json sufficient to reproduce
// every output byte-for-byte. They throw on error.

// training_curve.csv, one weights file per run, manifest.json.
void cmd_train(const ExperimentConfig& cfg, const std::string& out_dir);

// summary.csv (+ per-episode trace files for the first trace_episodes
// episodes of each run), manifest.json. The configuration defaults to the one
// embedded in the first weights file.
void cmd_eval(const std::vector<std::string>& weights_paths,
              const std::optional<ExperimentConfig>& cfg_opt, int n_episodes,
              const std::string& out_dir, int trace_episodes);

// oracle.csv, oracle_episodes.csv, manifest.json; runs the prior-knowledge
// planner on the same seed streams evaluation uses.
void cmd_oracle(const ExperimentConfig& cfg, int n_episodes, int n_runs,
                const std::string& out_dir);

// Visit-count grid from greedy rollouts of the given weights.
void cmd_heatmap_from_weights(const std::vector<std::string>& weights_paths,
                              const std::optional<ExperimentConfig>& cfg_opt, int episodes_per_run,
                              const std::string& out_file);

// Visit-count grid accumulated from trace files in a directory.
void cmd_heatmap_from_traces(const std::string& trace_dir, const std::string& out_file);

// Re-simulates the episode a trace was recorded from (manifest config +
// seeds + weights) and compares every record. Returns true when identical.
bool cmd_trace_replay(const std::string& trace_path, const std::string& manifest_path,
                      const std::optional<std::string>& weights_path);

void write_file_atomic(const std::string& path, const std::string& content);

std::string weights_file_name(int run);
std::string trace_file_name(int run, long episode);

}  // namespace satrack
