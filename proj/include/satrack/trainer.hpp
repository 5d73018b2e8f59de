#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "satrack/environment.hpp"
#include "satrack/featurizer.hpp"
#include "satrack/learner.hpp"
#include "satrack/rewards.hpp"

namespace satrack {

struct CoderParams {
    int num_tilings = 64;
    std::uint32_t hash_table_size = 1u << 20;
    double position_tile_width = 25.0;  // own position, p and q dimensions
    double count_tile_width = 1.0;      // m and n dimensions
};

struct ExperimentConfig {
    WorldConfig world;
    LearnerSchedule schedule;
    RewardMode reward_mode = RewardMode::Difference;
    long num_episodes = 100000;
    int num_runs = 20;
    int eval_episodes = 1000;
    std::uint64_t base_seed = 1;
    CoderParams coder;
    double oracle_mean_f = 0.0;  // <= 0: computed on matched seeds when needed
    int threads = 0;             // 0: hardware concurrency

    void validate() const;  // throws std::invalid_argument naming the field
};

// One timestep of a logged episode. Positions and detections are the
// post-move snapshot the rewards were computed on; observations are the
// pre-move snapshot each agent acted on.
struct StepRecord {
    std::vector<Vec2> agent_pos;
    std::vector<Vec2> target_pos;
    DetectionMatrix detections;
    std::vector<double> rewards;
    std::vector<int> actions;
    std::vector<Observation> observations;
};

struct EpisodeLog {
    int utility = 0;               // F, always present
    std::vector<StepRecord> steps; // filled only when detail logging is on
};

enum class EpisodeMode { Train, Eval };

// Seed stream layout. Training and evaluation draw from disjoint streams;
// evaluation worlds depend only on (base, run, episode) so oracle runs on the
// same seeds see identical worlds.
std::uint64_t train_env_seed(std::uint64_t base, int run, long episode);
std::uint64_t train_agent_seed(std::uint64_t base, int run, long episode, int agent);
std::uint64_t eval_env_seed(std::uint64_t base, int run, long episode);
std::uint64_t eval_agent_seed(std::uint64_t base, int run, long episode, int agent);

// Per-run training/evaluation context: action set, tile coder, one QFunction
// per agent, and the decaying schedule.
class EpisodeRunner {
public:
    explicit EpisodeRunner(const ExperimentConfig& cfg);

    const ExperimentConfig& config() const { return cfg_; }
    const ActionSet& actions() const { return actions_; }
    const TileCoder& coder() const { return coder_; }
    std::vector<QFunction>& qfunctions() { return q_; }
    const std::vector<QFunction>& qfunctions() const { return q_; }
    LearnerSchedule& schedule() { return sched_; }

    // Runs one episode on the given world. Within a timestep every agent
    // observes the pre-move world, actions apply simultaneously, targets
    // step, and detections/rewards are computed on the post-move state.
    // epsilon_override < 0 means the mode default (schedule epsilon when
    // training, 0 when evaluating).
    EpisodeLog run(WorldState world, std::span<Rng> agent_rngs, EpisodeMode mode,
                   double epsilon_override = -1.0, bool detail = false);

    EpisodeLog run_training_episode(int run, long episode, bool detail = false);
    EpisodeLog run_eval_episode(int run, long episode, bool detail = false,
                                double epsilon_override = -1.0);

    // Schedule decay; call once after each training episode.
    void finish_episode() { sched_ = decay(sched_); }

private:
    ExperimentConfig cfg_;
    ActionSet actions_;
    TileCoder coder_;
    std::vector<QFunction> q_;
    LearnerSchedule sched_;

    // per-episode scratch, reused across calls
    DetectionMatrix det_;
    std::vector<Observation> obs_, obs_next_;
    std::vector<std::vector<std::uint32_t>> tiles_, tiles_next_;
    std::vector<std::vector<int>> adm_, adm_next_;
    std::vector<int> act_;
    std::vector<double> rew_;
};

struct TrainingCurve {
    long num_episodes = 0;
    std::vector<std::vector<int>> utility;  // [run][episode]
};

struct TrainOptions {
    bool keep_weights = false;
    // Called as each run finishes (any order under parallel execution).
    std::function<void(int run, std::vector<QFunction>& qfs, const LearnerSchedule& final_schedule,
                       std::span<const int> utilities, double seconds)>
        on_run_complete;
    bool progress = true;
};

struct TrainResult {
    TrainingCurve curve;
    std::vector<std::vector<QFunction>> weights;  // per run, when keep_weights
    std::vector<LearnerSchedule> final_schedules;
    std::vector<double> run_seconds;
};

// Algorithm: per run, fresh zero-initialized learners train for num_episodes
// randomly initialized episodes with per-episode schedule decay.
// Deterministic given base_seed regardless of thread count.
TrainResult train(const ExperimentConfig& cfg, const TrainOptions& opts = {});

using EpisodeSink = std::function<void(int run, long episode, const EpisodeLog&)>;

struct EvalSummary {
    double mean_f = 0.0;
    double std_f = 0.0;      // sample std across runs
    double normalized = 0.0; // mean_f / oracle mean on the same seeds
    double oracle_mean_f = 0.0;
    std::vector<double> per_run_mean_f;
};

// Greedy (epsilon = 0) rollouts of each run's weights over n_episodes fresh
// worlds. Does not modify the weights. A sink, when given, receives every
// episode's detailed log.
EvalSummary evaluate(const ExperimentConfig& cfg, std::vector<std::vector<QFunction>>& weights_per_run,
                     int n_episodes, const EpisodeSink& sink = {}, double epsilon_override = -1.0);

int effective_threads(int requested, int jobs);

}  // namespace satrack
