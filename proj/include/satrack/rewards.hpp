#pragma once

#include <span>

#include "satrack/environment.hpp"

namespace satrack {

enum class RewardMode { Global, Difference };

const char* reward_mode_name(RewardMode mode);

// 1 iff at least one agent detects target i (the indicator N^i_t).
int target_detected(const DetectionMatrix& d, int target);

// Number of distinct targets detected at this timestep (G_t), in [0, M].
int global_reward(const DetectionMatrix& d);

// G_t recomputed as if agent j detected nothing (column j zeroed).
int counterfactual_reward(const DetectionMatrix& d, int agent);

// D_t^j = G_t - G_t^(-j); agent j's marginal contribution.
int difference_reward(const DetectionMatrix& d, int agent);

// Team utility F over an episode: sum of global rewards over all timesteps.
int episode_utility(std::span<const DetectionMatrix> detection_history);

}  // namespace satrack
