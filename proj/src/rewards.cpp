#include "satrack/rewards.hpp"

namespace satrack {

const char* reward_mode_name(RewardMode mode) {
    return mode == RewardMode::Global ? "global" : "difference";
}

int target_detected(const DetectionMatrix& d, int target) {
    for (int j = 0; j < d.agents; ++j)
        if (d.at(target, j)) return 1;
    return 0;
}

int global_reward(const DetectionMatrix& d) {
    int g = 0;
    for (int i = 0; i < d.targets; ++i) g += target_detected(d, i);
    return g;
}

int counterfactual_reward(const DetectionMatrix& d, int agent) {
    int g = 0;
    for (int i = 0; i < d.targets; ++i) {
        for (int j = 0; j < d.agents; ++j) {
            if (j != agent && d.at(i, j)) {
                ++g;
                break;
            }
        }
    }
    return g;
}

int difference_reward(const DetectionMatrix& d, int agent) {
    return global_reward(d) - counterfactual_reward(d, agent);
}

int episode_utility(std::span<const DetectionMatrix> detection_history) {
    int f = 0;
    for (const DetectionMatrix& d : detection_history) f += global_reward(d);
    return f;
}

}  // namespace satrack
