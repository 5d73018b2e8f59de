#pragma once

#include <string>
#include <vector>

#include "satrack/config.hpp"
#include "satrack/learner.hpp"

namespace satrack {

// Binary weight file: "STQW" magic, format version, a JSON header with the
// full configuration snapshot and final schedule state, then per (agent,
// action) the sparse nonzero weights as (tile index, value) pairs.
// Little-endian throughout.
void save_weights(const std::string& path, const ExperimentConfig& cfg, int run,
                  const std::vector<QFunction>& qfs, const LearnerSchedule& final_schedule);

struct LoadedWeights {
    ExperimentConfig cfg;
    int run = 0;
    std::vector<QFunction> qfs;
    LearnerSchedule final_schedule;
};

LoadedWeights load_weights(const std::string& path);

// Throws ConfigError naming the first field on which the weights were
// trained under different settings than `cfg`.
void check_weights_compatible(const ExperimentConfig& weights_cfg, const ExperimentConfig& cfg);

}  // namespace satrack
