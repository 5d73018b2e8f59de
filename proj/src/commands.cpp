#include "satrack/commands.hpp"

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "satrack/metrics.hpp"
#include "satrack/oracle.hpp"
#include "satrack/weights_io.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace satrack {

namespace {

constexpr int kTraceVersion = 1;

std::string csv_header(const char* kind) {
    return std::string("# satrack-csv v1 ") + kind + "\n";
}

std::string fmt(const char* f, ...) {
    char buf[256];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof(buf), f, ap);
    va_end(ap);
    return buf;
}

json vec2_json(Vec2 v) { return json::array({v.x, v.y}); }

json step_to_json(int t, const StepRecord& rec) {
    json j;
    j["type"] = "step";
    j["t"] = t;
    json agents = json::array();
    for (Vec2 p : rec.agent_pos) agents.push_back(vec2_json(p));
    j["agents"] = std::move(agents);
    json targets = json::array();
    for (Vec2 p : rec.target_pos) targets.push_back(vec2_json(p));
    j["targets"] = std::move(targets);
    json det = json::array();
    for (int i = 0; i < rec.detections.targets; ++i) {
        json row = json::array();
        for (int a = 0; a < rec.detections.agents; ++a) row.push_back(rec.detections.at(i, a) ? 1 : 0);
        det.push_back(std::move(row));
    }
    j["det"] = std::move(det);
    j["rewards"] = rec.rewards;
    j["actions"] = rec.actions;
    return j;
}

std::string trace_text(const ExperimentConfig& cfg, int run, long episode,
                       const std::string& weights_name, const EpisodeLog& log) {
    std::ostringstream out;
    json header;
    header["type"] = "header";
    header["kind"] = "trace";
    header["version"] = kTraceVersion;
    header["run"] = run;
    header["episode"] = episode;
    header["env_seed"] = eval_env_seed(cfg.base_seed, run, episode);
    header["weights"] = weights_name;
    header["agents"] = cfg.world.num_agents;
    header["targets"] = cfg.world.num_targets;
    header["area_width"] = cfg.world.area_width;
    header["area_height"] = cfg.world.area_height;
    header["F"] = log.utility;
    out << header.dump() << "\n";
    for (std::size_t t = 0; t < log.steps.size(); ++t)
        out << step_to_json(static_cast<int>(t) + 1, log.steps[t]).dump() << "\n";
    return out.str();
}

void write_manifest(const std::string& out_dir, const std::string& command,
                    const ExperimentConfig& cfg, const std::vector<std::string>& artifacts,
                    json extra = json::object()) {
    json m;
    m["tool"] = "satrack";
    m["version"] = kToolVersion;
    m["command"] = command;
    m["config"] = config_to_text(cfg);
    m["base_seed"] = cfg.base_seed;
    m["artifacts"] = artifacts;
    for (auto& [k, v] : extra.items()) m[k] = v;
    write_file_atomic((fs::path(out_dir) / "manifest.json").string(), m.dump(2) + "\n");
}

double matched_oracle_mean(const ExperimentConfig& cfg, int runs, int episodes) {
    std::vector<std::uint64_t> seeds;
    seeds.reserve(static_cast<std::size_t>(runs) * episodes);
    for (int r = 0; r < runs; ++r)
        for (long ep = 0; ep < episodes; ++ep) seeds.push_back(eval_env_seed(cfg.base_seed, r, ep));
    return oracle_f(cfg.world, seeds, effective_threads(cfg.threads, 1 << 10)).mean;
}

struct LoadedRuns {
    ExperimentConfig cfg;
    std::vector<std::vector<QFunction>> weights;
    std::vector<std::string> names;  // file names, by run position
};

LoadedRuns load_runs(const std::vector<std::string>& weights_paths,
                     const std::optional<ExperimentConfig>& cfg_opt) {
    if (weights_paths.empty()) throw ConfigError("at least one weights file is required");
    LoadedRuns lr;
    for (std::size_t i = 0; i < weights_paths.size(); ++i) {
        LoadedWeights lw = load_weights(weights_paths[i]);
        if (i == 0) lr.cfg = cfg_opt ? *cfg_opt : lw.cfg;
        check_weights_compatible(lw.cfg, lr.cfg);
        lr.weights.push_back(std::move(lw.qfs));
        lr.names.push_back(fs::path(weights_paths[i]).filename().string());
    }
    return lr;
}

std::string heatmap_csv(const Heatmap& hm) {
    std::ostringstream out;
    out << csv_header("heatmap");
    for (int iy = 0; iy < hm.ny; ++iy) {
        for (int ix = 0; ix < hm.nx; ++ix) out << (ix ? "," : "") << hm.at(ix, iy);
        out << "\n";
    }
    return out.str();
}

}  // namespace

void write_file_atomic(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write '" + tmp + "'");
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw std::runtime_error("write failed for '" + tmp + "'");
    }
    fs::rename(tmp, path);
}

std::string weights_file_name(int run) { return fmt("weights_run%04d.bin", run); }

std::string trace_file_name(int run, long episode) {
    return fmt("trace_run%04d_ep%06ld.jsonl", run, episode);
}

void cmd_train(const ExperimentConfig& cfg_in, const std::string& out_dir) {
    ExperimentConfig cfg = cfg_in;
    cfg.validate();
    fs::create_directories(out_dir);

    if (cfg.oracle_mean_f <= 0.0) {
        cfg.oracle_mean_f = matched_oracle_mean(cfg, cfg.num_runs, cfg.eval_episodes);
        std::fprintf(stderr, "[train] oracle mean F on matched evaluation seeds: %.4f\n",
                     cfg.oracle_mean_f);
    }

    std::vector<std::string> weight_files(cfg.num_runs);
    TrainOptions opts;
    opts.on_run_complete = [&](int run, std::vector<QFunction>& qfs, const LearnerSchedule& sched,
                               std::span<const int>, double secs) {
        const std::string name = weights_file_name(run);
        save_weights((fs::path(out_dir) / name).string(), cfg, run, qfs, sched);
        weight_files[run] = name;
        std::fprintf(stderr, "[train] run %d finished in %.1f s\n", run, secs);
    };
    const TrainResult res = train(cfg, opts);

    std::ostringstream curve;
    curve << csv_header("training_curve") << "run,episode,F,F_normalized\n";
    for (int r = 0; r < cfg.num_runs; ++r)
        for (long ep = 0; ep < cfg.num_episodes; ++ep) {
            const int f = res.curve.utility[r][ep];
            curve << r << ',' << ep << ',' << f << ','
                  << fmt("%.6f", static_cast<double>(f) / cfg.oracle_mean_f) << "\n";
        }
    write_file_atomic((fs::path(out_dir) / "training_curve.csv").string(), curve.str());

    std::vector<std::string> artifacts = {"training_curve.csv"};
    artifacts.insert(artifacts.end(), weight_files.begin(), weight_files.end());
    json extra;
    json run_seeds = json::array();
    for (int r = 0; r < cfg.num_runs; ++r)
        run_seeds.push_back(
            {{"run", r}, {"first_episode_env_seed", train_env_seed(cfg.base_seed, r, 0)}});
    extra["per_run_seeds"] = std::move(run_seeds);
    write_manifest(out_dir, "train", cfg, artifacts, std::move(extra));
}

void cmd_eval(const std::vector<std::string>& weights_paths,
              const std::optional<ExperimentConfig>& cfg_opt, int n_episodes,
              const std::string& out_dir, int trace_episodes) {
    if (n_episodes < 1) throw ConfigError("eval episode count must be >= 1");
    LoadedRuns lr = load_runs(weights_paths, cfg_opt);
    ExperimentConfig& cfg = lr.cfg;
    cfg.validate();
    fs::create_directories(out_dir);

    std::vector<std::string> artifacts;
    EpisodeSink sink;
    if (trace_episodes > 0) {
        sink = [&](int run, long episode, const EpisodeLog& log) {
            if (episode >= trace_episodes) return;
            const std::string name = trace_file_name(run, episode);
            write_file_atomic((fs::path(out_dir) / name).string(),
                              trace_text(cfg, run, episode, lr.names[run], log));
            artifacts.push_back(name);
        };
    }

    const EvalSummary summary = evaluate(cfg, lr.weights, n_episodes, sink);

    std::ostringstream csv;
    csv << csv_header("summary") << "agents,reward_mode,mean_F,std_F,normalized\n";
    csv << cfg.world.num_agents << ',' << reward_mode_name(cfg.reward_mode) << ','
        << fmt("%.6f,%.6f,%.6f", summary.mean_f, summary.std_f, summary.normalized) << "\n";
    write_file_atomic((fs::path(out_dir) / "summary.csv").string(), csv.str());
    artifacts.push_back("summary.csv");
    std::sort(artifacts.begin(), artifacts.end());

    json extra;
    extra["weights"] = lr.names;
    extra["eval_episodes_requested"] = n_episodes;
    extra["oracle_mean_f_used"] = summary.oracle_mean_f;
    write_manifest(out_dir, "eval", cfg, artifacts, std::move(extra));

    std::printf("eval: agents=%d mode=%s mean F=%.4f std=%.4f normalized=%.4f\n",
                cfg.world.num_agents, reward_mode_name(cfg.reward_mode), summary.mean_f,
                summary.std_f, summary.normalized);
}

void cmd_oracle(const ExperimentConfig& cfg_in, int n_episodes, int n_runs,
                const std::string& out_dir) {
    ExperimentConfig cfg = cfg_in;
    if (n_episodes < 1) throw ConfigError("oracle episode count must be >= 1");
    if (n_runs < 1) throw ConfigError("oracle run count must be >= 1");
    cfg.validate();
    fs::create_directories(out_dir);

    std::vector<std::uint64_t> seeds;
    seeds.reserve(static_cast<std::size_t>(n_runs) * n_episodes);
    for (int r = 0; r < n_runs; ++r)
        for (long ep = 0; ep < n_episodes; ++ep) seeds.push_back(eval_env_seed(cfg.base_seed, r, ep));
    const OracleStats stats =
        oracle_f(cfg.world, seeds, effective_threads(cfg.threads, 1 << 10));

    // run-level statistics, matching how evaluation aggregates
    std::vector<double> run_means(n_runs, 0.0);
    for (int r = 0; r < n_runs; ++r) {
        double sum = 0.0;
        for (int ep = 0; ep < n_episodes; ++ep)
            sum += stats.per_episode[static_cast<std::size_t>(r) * n_episodes + ep];
        run_means[r] = sum / n_episodes;
    }
    double mean = 0.0;
    for (double m : run_means) mean += m;
    mean /= n_runs;
    double var = 0.0;
    for (double m : run_means) var += (m - mean) * (m - mean);
    const double stddev = n_runs > 1 ? std::sqrt(var / (n_runs - 1)) : 0.0;

    std::ostringstream csv;
    csv << csv_header("oracle") << "agents,mean_F,std_F\n";
    csv << cfg.world.num_agents << ',' << fmt("%.6f,%.6f", mean, stddev) << "\n";
    write_file_atomic((fs::path(out_dir) / "oracle.csv").string(), csv.str());

    std::ostringstream eps_csv;
    eps_csv << csv_header("oracle_episodes") << "episode,F\n";
    for (std::size_t i = 0; i < stats.per_episode.size(); ++i)
        eps_csv << i << ',' << stats.per_episode[i] << "\n";
    write_file_atomic((fs::path(out_dir) / "oracle_episodes.csv").string(), eps_csv.str());

    json extra;
    extra["episodes_per_run"] = n_episodes;
    extra["runs"] = n_runs;
    write_manifest(out_dir, "oracle", cfg, {"oracle.csv", "oracle_episodes.csv"},
                   std::move(extra));

    std::printf("oracle: agents=%d mean F=%.4f std=%.4f (%d runs x %d episodes)\n",
                cfg.world.num_agents, mean, stddev, n_runs, n_episodes);
}

void cmd_heatmap_from_weights(const std::vector<std::string>& weights_paths,
                              const std::optional<ExperimentConfig>& cfg_opt, int episodes_per_run,
                              const std::string& out_file) {
    if (episodes_per_run < 1) throw ConfigError("heatmap episode count must be >= 1");
    LoadedRuns lr = load_runs(weights_paths, cfg_opt);
    lr.cfg.validate();

    Heatmap hm = make_heatmap(lr.cfg.world);
    EpisodeSink sink = [&](int, long, const EpisodeLog& log) {
        for (const StepRecord& step : log.steps)
            for (Vec2 pos : step.agent_pos) hm.add_position(pos);
    };
    evaluate(lr.cfg, lr.weights, episodes_per_run, sink);
    write_file_atomic(out_file, heatmap_csv(hm));

    json extra;
    extra["weights"] = lr.names;
    extra["episodes_per_run"] = episodes_per_run;
    const fs::path out(out_file);
    json m;
    m["tool"] = "satrack";
    m["version"] = kToolVersion;
    m["command"] = "heatmap";
    m["config"] = config_to_text(lr.cfg);
    m["base_seed"] = lr.cfg.base_seed;
    m["artifacts"] = json::array({out.filename().string()});
    for (auto& [k, v] : extra.items()) m[k] = v;
    write_file_atomic(out.string() + ".manifest.json", m.dump(2) + "\n");
}

void cmd_heatmap_from_traces(const std::string& trace_dir, const std::string& out_file) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(trace_dir))
        if (entry.path().extension() == ".jsonl") files.push_back(entry.path());
    if (files.empty()) throw ConfigError("no .jsonl trace files in '" + trace_dir + "'");
    std::sort(files.begin(), files.end());

    Heatmap hm;
    for (const fs::path& f : files) {
        std::ifstream in(f);
        if (!in) throw std::runtime_error("cannot open '" + f.string() + "'");
        std::string line;
        if (!std::getline(in, line)) throw std::runtime_error("empty trace '" + f.string() + "'");
        const json header = json::parse(line);
        if (header.value("kind", "") != "trace" || header.value("version", 0) != kTraceVersion)
            throw std::runtime_error("'" + f.string() + "' is not a v" +
                                     std::to_string(kTraceVersion) + " trace file");
        if (hm.nx == 0)
            hm = Heatmap(static_cast<int>(std::ceil(header.at("area_width").get<double>())),
                         static_cast<int>(std::ceil(header.at("area_height").get<double>())));
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            const json rec = json::parse(line);
            if (rec.value("type", "") != "step") continue;
            for (const auto& p : rec.at("agents"))
                hm.add_position({p.at(0).get<double>(), p.at(1).get<double>()});
        }
    }
    write_file_atomic(out_file, heatmap_csv(hm));
}

bool cmd_trace_replay(const std::string& trace_path, const std::string& manifest_path,
                      const std::optional<std::string>& weights_path) {
    std::ifstream mf(manifest_path);
    if (!mf) throw std::runtime_error("cannot open manifest '" + manifest_path + "'");
    const json manifest = json::parse(mf);
    const ExperimentConfig cfg = parse_config_text(manifest.at("config").get<std::string>());

    std::ifstream tf(trace_path);
    if (!tf) throw std::runtime_error("cannot open trace '" + trace_path + "'");
    std::string line;
    if (!std::getline(tf, line)) throw std::runtime_error("empty trace file");
    const json header = json::parse(line);
    if (header.value("kind", "") != "trace" || header.value("version", 0) != kTraceVersion)
        throw std::runtime_error("'" + trace_path + "' is not a supported trace file");
    const int run = header.at("run").get<int>();
    const long episode = header.at("episode").get<long>();

    std::string wpath;
    if (weights_path) {
        wpath = *weights_path;
    } else {
        wpath = (fs::path(manifest_path).parent_path() / header.at("weights").get<std::string>())
                    .string();
    }
    LoadedWeights lw = load_weights(wpath);
    check_weights_compatible(lw.cfg, cfg);

    EpisodeRunner runner(cfg);
    runner.qfunctions() = std::move(lw.qfs);
    const EpisodeLog log = runner.run_eval_episode(run, episode, /*detail=*/true);

    bool ok = true;
    if (header.at("F").get<int>() != log.utility) {
        std::printf("replay mismatch: F %d (trace) vs %d (replay)\n", header.at("F").get<int>(),
                    log.utility);
        ok = false;
    }
    std::size_t t = 0;
    while (std::getline(tf, line)) {
        if (line.empty()) continue;
        const json rec = json::parse(line);
        if (rec.value("type", "") != "step") continue;
        if (t >= log.steps.size()) {
            std::printf("replay mismatch: trace has more steps than the replayed episode\n");
            ok = false;
            break;
        }
        const json expect = step_to_json(static_cast<int>(t) + 1, log.steps[t]);
        if (rec != expect) {
            std::printf("replay mismatch at t=%zu\n", t + 1);
            ok = false;
        }
        ++t;
    }
    if (ok && t != log.steps.size()) {
        std::printf("replay mismatch: trace has %zu steps, replay has %zu\n", t, log.steps.size());
        ok = false;
    }
    if (ok) std::printf("replay OK: run %d episode %ld, %zu steps, F=%d\n", run, episode, t,
                        log.utility);
    return ok;
}

}  // namespace satrack
