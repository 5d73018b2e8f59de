#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "satrack/commands.hpp"

namespace {

struct CommonFlags {
    std::string config_path;
    std::string reward;
    std::uint64_t seed = 0;
    int runs = 0;
    long episodes = 0;
    int agents = 0;
    int threads = -1;
    double oracle_mean = -1.0;

    bool seed_set = false, runs_set = false, episodes_set = false, agents_set = false;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
    cmd->add_option("--config", f.config_path, "configuration file (key=value lines)");
    cmd->add_option("--seed", f.seed, "base seed override")->each([&](const std::string&) {
        f.seed_set = true;
    });
    cmd->add_option("--runs", f.runs, "number of independent runs")->each([&](const std::string&) {
        f.runs_set = true;
    });
    cmd->add_option("--episodes", f.episodes, "episode count override")
        ->each([&](const std::string&) { f.episodes_set = true; });
    cmd->add_option("--agents", f.agents, "number of agents")->each([&](const std::string&) {
        f.agents_set = true;
    });
    cmd->add_option("--reward", f.reward, "reward mode: global or difference")
        ->check(CLI::IsMember({"global", "difference"}));
    cmd->add_option("--threads", f.threads, "worker threads (0 = auto)");
    cmd->add_option("--oracle-mean", f.oracle_mean,
                    "precomputed oracle mean F used for normalization");
}

// flags > config file > defaults
satrack::ExperimentConfig resolve_config(const CommonFlags& f, bool episodes_are_training) {
    satrack::ExperimentConfig cfg =
        f.config_path.empty() ? satrack::default_config() : satrack::load_config(f.config_path);
    if (f.seed_set) cfg.base_seed = f.seed;
    if (f.runs_set) cfg.num_runs = f.runs;
    if (f.episodes_set) {
        if (episodes_are_training)
            cfg.num_episodes = f.episodes;
        else
            cfg.eval_episodes = static_cast<int>(f.episodes);
    }
    if (f.agents_set) cfg.world.num_agents = f.agents;
    if (!f.reward.empty())
        cfg.reward_mode =
            f.reward == "global" ? satrack::RewardMode::Global : satrack::RewardMode::Difference;
    if (f.threads >= 0) cfg.threads = f.threads;
    if (f.oracle_mean >= 0.0) cfg.oracle_mean_f = f.oracle_mean;
    cfg.validate();
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"satrack: cooperative multi-agent search-and-track learning harness"};
    app.require_subcommand(1);

    // train
    auto* train = app.add_subcommand("train", "train Q-learning agents and write curves/weights");
    CommonFlags train_flags;
    std::string train_out;
    add_common(train, train_flags);
    train->add_option("--out", train_out, "output directory")->required();

    // eval
    auto* eval = app.add_subcommand("eval", "evaluate trained weights under the greedy policy");
    CommonFlags eval_flags;
    std::string eval_out;
    std::vector<std::string> eval_weights;
    int eval_trace = 0;
    add_common(eval, eval_flags);
    eval->add_option("--weights", eval_weights, "weight files, one per run")->required();
    eval->add_option("--out", eval_out, "output directory")->required();
    eval->add_option("--trace", eval_trace, "write trace files for the first N episodes per run");

    // oracle
    auto* oracle = app.add_subcommand("oracle", "prior-knowledge planner baseline statistics");
    CommonFlags oracle_flags;
    std::string oracle_out;
    add_common(oracle, oracle_flags);
    oracle->add_option("--out", oracle_out, "output directory")->required();

    // heatmap
    auto* heatmap = app.add_subcommand("heatmap", "visit-count grid from weights or traces");
    CommonFlags heatmap_flags;
    std::string heatmap_out, heatmap_traces;
    std::vector<std::string> heatmap_weights;
    add_common(heatmap, heatmap_flags);
    heatmap->add_option("--weights", heatmap_weights, "weight files, one per run");
    heatmap->add_option("--traces", heatmap_traces, "directory of trace .jsonl files");
    heatmap->add_option("--out", heatmap_out, "output CSV file")->required();

    // trace-replay
    auto* replay = app.add_subcommand("trace-replay",
                                      "re-simulate a trace from its manifest and compare");
    std::string replay_trace, replay_manifest;
    std::string replay_weights;
    replay->add_option("--trace", replay_trace, "trace .jsonl file")->required();
    replay->add_option("--manifest", replay_manifest, "manifest.json of the eval run")->required();
    replay->add_option("--weights", replay_weights, "weights file override");

    CLI11_PARSE(app, argc, argv);

    try {
        if (train->parsed()) {
            satrack::cmd_train(resolve_config(train_flags, true), train_out);
        } else if (eval->parsed()) {
            std::optional<satrack::ExperimentConfig> cfg;
            if (!eval_flags.config_path.empty() || eval_flags.seed_set || eval_flags.agents_set ||
                !eval_flags.reward.empty() || eval_flags.threads >= 0 ||
                eval_flags.oracle_mean >= 0.0)
                cfg = resolve_config(eval_flags, false);
            const int n = eval_flags.episodes_set ? static_cast<int>(eval_flags.episodes)
                                                  : (cfg ? cfg->eval_episodes : 1000);
            satrack::cmd_eval(eval_weights, cfg, n, eval_out, eval_trace);
        } else if (oracle->parsed()) {
            satrack::ExperimentConfig cfg = resolve_config(oracle_flags, false);
            satrack::cmd_oracle(cfg, cfg.eval_episodes, cfg.num_runs, oracle_out);
        } else if (heatmap->parsed()) {
            if (!heatmap_traces.empty()) {
                satrack::cmd_heatmap_from_traces(heatmap_traces, heatmap_out);
            } else if (!heatmap_weights.empty()) {
                std::optional<satrack::ExperimentConfig> cfg;
                if (!heatmap_flags.config_path.empty() || heatmap_flags.seed_set ||
                    heatmap_flags.threads >= 0)
                    cfg = resolve_config(heatmap_flags, false);
                const int n = heatmap_flags.episodes_set ? static_cast<int>(heatmap_flags.episodes)
                                                         : (cfg ? cfg->eval_episodes : 1000);
                satrack::cmd_heatmap_from_weights(heatmap_weights, cfg, n, heatmap_out);
            } else {
                std::fprintf(stderr, "heatmap: provide --weights or --traces\n");
                return 2;
            }
        } else if (replay->parsed()) {
            std::optional<std::string> w;
            if (!replay_weights.empty()) w = replay_weights;
            return satrack::cmd_trace_replay(replay_trace, replay_manifest, w) ? 0 : 1;
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
