#include "satrack/trainer.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "satrack/oracle.hpp"

namespace satrack {

namespace {
// stream tags for seed derivation
constexpr std::uint64_t kTagTrainEnv = 0x111;
constexpr std::uint64_t kTagTrainAgent = 0x222;
constexpr std::uint64_t kTagEvalEnv = 0x333;
constexpr std::uint64_t kTagEvalAgent = 0x444;
}  // namespace

std::uint64_t train_env_seed(std::uint64_t base, int run, long episode) {
    return seed_stream(base, {kTagTrainEnv, static_cast<std::uint64_t>(run),
                              static_cast<std::uint64_t>(episode)});
}
std::uint64_t train_agent_seed(std::uint64_t base, int run, long episode, int agent) {
    return seed_stream(base, {kTagTrainAgent, static_cast<std::uint64_t>(run),
                              static_cast<std::uint64_t>(episode), static_cast<std::uint64_t>(agent)});
}
std::uint64_t eval_env_seed(std::uint64_t base, int run, long episode) {
    return seed_stream(base, {kTagEvalEnv, static_cast<std::uint64_t>(run),
                              static_cast<std::uint64_t>(episode)});
}
std::uint64_t eval_agent_seed(std::uint64_t base, int run, long episode, int agent) {
    return seed_stream(base, {kTagEvalAgent, static_cast<std::uint64_t>(run),
                              static_cast<std::uint64_t>(episode), static_cast<std::uint64_t>(agent)});
}

void ExperimentConfig::validate() const {
    world.validate();
    auto in_unit = [](double v, const char* name, bool allow_one) {
        if (!(v > 0.0) || v > 1.0 || (!allow_one && v == 1.0))
            throw std::invalid_argument(std::string(name) + " out of range");
    };
    in_unit(schedule.alpha, "alpha", true);
    in_unit(schedule.epsilon, "epsilon", true);
    in_unit(schedule.alpha_decay_rate, "alpha_decay_rate", true);
    in_unit(schedule.epsilon_decay_rate, "epsilon_decay_rate", true);
    if (schedule.gamma < 0.0 || schedule.gamma >= 1.0)
        throw std::invalid_argument("gamma out of range [0,1)");
    if (num_episodes < 1) throw std::invalid_argument("num_episodes must be >= 1");
    if (num_runs < 1) throw std::invalid_argument("num_runs must be >= 1");
    if (eval_episodes < 1) throw std::invalid_argument("eval_episodes must be >= 1");
    if (coder.num_tilings < 1) throw std::invalid_argument("num_tilings must be >= 1");
    if (coder.hash_table_size < 1) throw std::invalid_argument("hash_table_size must be >= 1");
    if (!(coder.position_tile_width > 0.0))
        throw std::invalid_argument("position_tile_width must be > 0");
    if (!(coder.count_tile_width > 0.0))
        throw std::invalid_argument("count_tile_width must be > 0");
    if (threads < 0) throw std::invalid_argument("threads must be >= 0");
    if (oracle_mean_f < 0.0) throw std::invalid_argument("oracle_mean_f must be >= 0");
}

int effective_threads(int requested, int jobs) {
    int n = requested > 0 ? requested : static_cast<int>(std::thread::hardware_concurrency());
    if (n < 1) n = 1;
    if (n > jobs) n = jobs;
    return n;
}

EpisodeRunner::EpisodeRunner(const ExperimentConfig& cfg)
    : cfg_(cfg),
      actions_(enumerate_action_set(cfg.world.radial_steps, cfg.world.num_angles)),
      coder_(cfg.coder.num_tilings, cfg.coder.hash_table_size,
             TileCoder::default_widths(cfg.coder.position_tile_width, cfg.coder.count_tile_width)),
      sched_(cfg.schedule) {
    const int n = cfg_.world.num_agents;
    q_.reserve(n);
    for (int j = 0; j < n; ++j)
        q_.emplace_back(cfg_.coder.hash_table_size, static_cast<int>(actions_.size()));
    obs_.resize(n);
    obs_next_.resize(n);
    tiles_.resize(n);
    tiles_next_.resize(n);
    adm_.resize(n);
    adm_next_.resize(n);
    act_.resize(n);
    rew_.resize(n);
}

EpisodeLog EpisodeRunner::run(WorldState world, std::span<Rng> agent_rngs, EpisodeMode mode,
                              double epsilon_override, bool detail) {
    const int n = cfg_.world.num_agents;
    const int horizon = cfg_.world.episode_length;
    const double r0 = cfg_.world.detection_radius;
    if (static_cast<int>(world.agents.size()) != n)
        throw std::invalid_argument("world does not match configured agent count");

    double eps;
    if (epsilon_override >= 0.0)
        eps = epsilon_override;
    else
        eps = mode == EpisodeMode::Train ? sched_.epsilon : 0.0;

    EpisodeLog log;
    if (detail) log.steps.reserve(horizon);

    // pre-move snapshot every agent acts on
    detection_matrix(world.agents, world.targets, r0, det_);
    for (int j = 0; j < n; ++j) {
        obs_[j] = build_observation(j, world.agents, world.targets, det_, cfg_.world);
        coder_.active_tiles(obs_[j], tiles_[j]);
        admissible_action_indices(world.agents[j], actions_, cfg_.world, adm_[j]);
    }

    for (int t = 1; t <= horizon; ++t) {
        for (int j = 0; j < n; ++j)
            act_[j] = select_action(q_[j], tiles_[j], adm_[j], eps, agent_rngs[j]);
        // simultaneous move; admissibility was enforced at selection
        for (int j = 0; j < n; ++j)
            world.agents[j].pos = world.agents[j].pos + actions_[act_[j]].displacement;
        for (auto& target : world.targets) target = step_target(target, cfg_.world.dt);

        detection_matrix(world.agents, world.targets, r0, det_);
        const int g = global_reward(det_);
        log.utility += g;
        for (int j = 0; j < n; ++j)
            rew_[j] = cfg_.reward_mode == RewardMode::Global
                          ? static_cast<double>(g)
                          : static_cast<double>(difference_reward(det_, j));

        for (int j = 0; j < n; ++j) {
            obs_next_[j] = build_observation(j, world.agents, world.targets, det_, cfg_.world);
            coder_.active_tiles(obs_next_[j], tiles_next_[j]);
            admissible_action_indices(world.agents[j], actions_, cfg_.world, adm_next_[j]);
        }

        if (mode == EpisodeMode::Train) {
            for (int j = 0; j < n; ++j)
                q_[j].td_update(tiles_[j], act_[j], rew_[j], tiles_next_[j], adm_next_[j],
                                sched_.alpha, sched_.gamma);
        }

        if (detail) {
            StepRecord rec;
            rec.agent_pos.reserve(n);
            for (const auto& a : world.agents) rec.agent_pos.push_back(a.pos);
            for (const auto& tgt : world.targets) rec.target_pos.push_back(tgt.pos);
            rec.detections = det_;
            rec.rewards = rew_;
            rec.actions = act_;
            rec.observations = obs_;
            log.steps.push_back(std::move(rec));
        }

        std::swap(obs_, obs_next_);
        std::swap(tiles_, tiles_next_);
        std::swap(adm_, adm_next_);
    }
    return log;
}

EpisodeLog EpisodeRunner::run_training_episode(int run, long episode, bool detail) {
    Rng env_rng(train_env_seed(cfg_.base_seed, run, episode));
    WorldState world = spawn_episode(cfg_.world, env_rng);
    std::vector<Rng> rngs;
    rngs.reserve(cfg_.world.num_agents);
    for (int j = 0; j < cfg_.world.num_agents; ++j)
        rngs.emplace_back(train_agent_seed(cfg_.base_seed, run, episode, j));
    return this->run(std::move(world), rngs, EpisodeMode::Train, -1.0, detail);
}

EpisodeLog EpisodeRunner::run_eval_episode(int run, long episode, bool detail,
                                           double epsilon_override) {
    Rng env_rng(eval_env_seed(cfg_.base_seed, run, episode));
    WorldState world = spawn_episode(cfg_.world, env_rng);
    std::vector<Rng> rngs;
    rngs.reserve(cfg_.world.num_agents);
    for (int j = 0; j < cfg_.world.num_agents; ++j)
        rngs.emplace_back(eval_agent_seed(cfg_.base_seed, run, episode, j));
    return this->run(std::move(world), rngs, EpisodeMode::Eval, epsilon_override, detail);
}

TrainResult train(const ExperimentConfig& cfg, const TrainOptions& opts) {
    cfg.validate();
    TrainResult res;
    res.curve.num_episodes = cfg.num_episodes;
    res.curve.utility.assign(cfg.num_runs, {});
    res.final_schedules.assign(cfg.num_runs, cfg.schedule);
    res.run_seconds.assign(cfg.num_runs, 0.0);
    if (opts.keep_weights) res.weights.resize(cfg.num_runs);

    std::atomic<int> next_run{0};
    std::mutex mu;

    auto worker = [&]() {
        for (;;) {
            const int run = next_run.fetch_add(1);
            if (run >= cfg.num_runs) return;
            const auto t0 = std::chrono::steady_clock::now();
            EpisodeRunner runner(cfg);
            std::vector<int>& curve = res.curve.utility[run];
            curve.resize(cfg.num_episodes);
            const long report = std::max<long>(1, cfg.num_episodes / 5);
            for (long ep = 0; ep < cfg.num_episodes; ++ep) {
                curve[ep] = runner.run_training_episode(run, ep).utility;
                runner.finish_episode();
                if (opts.progress && (ep + 1) % report == 0) {
                    std::lock_guard<std::mutex> lk(mu);
                    std::fprintf(stderr, "[train] run %d: episode %ld/%ld (eps=%.4f)\n", run,
                                 ep + 1, cfg.num_episodes, runner.schedule().epsilon);
                }
            }
            const double secs =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            res.final_schedules[run] = runner.schedule();
            res.run_seconds[run] = secs;
            if (opts.on_run_complete) {
                std::lock_guard<std::mutex> lk(mu);
                opts.on_run_complete(run, runner.qfunctions(), runner.schedule(), curve, secs);
            }
            if (opts.keep_weights) res.weights[run] = std::move(runner.qfunctions());
        }
    };

    const int nthreads = effective_threads(cfg.threads, cfg.num_runs);
    if (nthreads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(nthreads);
        for (int i = 0; i < nthreads; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    return res;
}

EvalSummary evaluate(const ExperimentConfig& cfg, std::vector<std::vector<QFunction>>& weights_per_run,
                     int n_episodes, const EpisodeSink& sink, double epsilon_override) {
    cfg.validate();
    if (n_episodes < 1) throw std::invalid_argument("eval episode count must be >= 1");
    const int runs = static_cast<int>(weights_per_run.size());
    if (runs < 1) throw std::invalid_argument("no weights to evaluate");

    EvalSummary summary;
    summary.per_run_mean_f.assign(runs, 0.0);

    std::atomic<int> next_run{0};
    std::mutex mu;
    auto worker = [&]() {
        for (;;) {
            const int run = next_run.fetch_add(1);
            if (run >= runs) return;
            EpisodeRunner runner(cfg);
            runner.qfunctions() = weights_per_run[run];
            double sum = 0.0;
            for (long ep = 0; ep < n_episodes; ++ep) {
                EpisodeLog log =
                    runner.run_eval_episode(run, ep, static_cast<bool>(sink), epsilon_override);
                sum += log.utility;
                if (sink) {
                    std::lock_guard<std::mutex> lk(mu);
                    sink(run, ep, log);
                }
            }
            summary.per_run_mean_f[run] = sum / n_episodes;
        }
    };
    const int nthreads = effective_threads(cfg.threads, runs);
    if (nthreads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int i = 0; i < nthreads; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    double mean = 0.0;
    for (double m : summary.per_run_mean_f) mean += m;
    mean /= runs;
    double var = 0.0;
    for (double m : summary.per_run_mean_f) var += (m - mean) * (m - mean);
    summary.mean_f = mean;
    summary.std_f = runs > 1 ? std::sqrt(var / (runs - 1)) : 0.0;

    if (cfg.oracle_mean_f > 0.0) {
        summary.oracle_mean_f = cfg.oracle_mean_f;
    } else {
        // oracle baseline on the identical evaluation worlds
        std::vector<std::uint64_t> seeds;
        seeds.reserve(static_cast<std::size_t>(runs) * n_episodes);
        for (int r = 0; r < runs; ++r)
            for (long ep = 0; ep < n_episodes; ++ep)
                seeds.push_back(eval_env_seed(cfg.base_seed, r, ep));
        const OracleStats stats =
            oracle_f(cfg.world, seeds, effective_threads(cfg.threads, 1 << 10));
        summary.oracle_mean_f = stats.mean;
    }
    summary.normalized = summary.oracle_mean_f > 0.0 ? summary.mean_f / summary.oracle_mean_f : 0.0;
    return summary;
}

}  // namespace satrack
