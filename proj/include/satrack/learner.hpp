#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "satrack/rng.hpp"

namespace satrack {

struct LearnerSchedule {
    double alpha = 0.2;
    double epsilon = 0.3;
    double alpha_decay_rate = 0.99997;
    double epsilon_decay_rate = 0.99997;
    double gamma = 0.9;
};

// Applied once per episode, after it completes.
inline LearnerSchedule decay(LearnerSchedule s) {
    s.alpha *= s.alpha_decay_rate;
    s.epsilon *= s.epsilon_decay_rate;
    return s;
}

// Tile-coded linear action-value function for one agent. Weights are stored
// [tile][action] so evaluating all actions of a state touches contiguous
// memory per active tile. Zero-initialized: Q(s,a) = 0 before any update.
class QFunction {
public:
    QFunction(std::uint32_t table_size, int num_actions);

    std::uint32_t table_size() const { return table_; }
    int num_actions() const { return actions_; }

    // Sum of the weights for `action` at the active tile indices.
    double value(std::span<const std::uint32_t> tiles, int action) const;

    // Q(s, a) for every action at once; `out` must hold num_actions() values.
    void values(std::span<const std::uint32_t> tiles, double* out) const;

    double max_value(std::span<const std::uint32_t> tiles, std::span<const int> admissible) const;

    // One-step Q-learning update. Each active weight moves by
    // (alpha / num_active_tiles) * delta so the aggregate Q(s,a) moves by
    // alpha * delta.
    void td_update(std::span<const std::uint32_t> tiles_s, int action, double reward,
                   std::span<const std::uint32_t> tiles_next, std::span<const int> admissible_next,
                   double alpha, double gamma);

    double weight(std::uint32_t tile, int action) const {
        return w_[static_cast<std::size_t>(tile) * actions_ + action];
    }
    void set_weight(std::uint32_t tile, int action, double v) {
        w_[static_cast<std::size_t>(tile) * actions_ + action] = v;
    }
    std::span<const double> raw() const { return w_; }
    std::span<double> raw() { return w_; }

    friend bool operator==(const QFunction& a, const QFunction& b) {
        return a.table_ == b.table_ && a.actions_ == b.actions_ && a.w_ == b.w_;
    }

private:
    std::uint32_t table_;
    int actions_;
    std::vector<double> w_;
};

// Epsilon-greedy over the admissible actions: with probability epsilon a
// uniform random admissible action, otherwise the argmax of Q with ties
// broken uniformly at random. Returns an index into the global action set;
// inadmissible actions are never returned.
int select_action(const QFunction& qf, std::span<const std::uint32_t> tiles,
                  std::span<const int> admissible, double epsilon, Rng& rng);

}  // namespace satrack
