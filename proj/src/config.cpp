#include "satrack/config.hpp"

#include <charconv>
#include <cstdint>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <vector>

namespace satrack {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& v) {
    double out = 0.0;
    const char* first = v.data();
    const char* last = v.data() + v.size();
    const auto [ptr, ec] = std::from_chars(first, last, out);
    if (ec != std::errc{} || ptr != last) throw std::invalid_argument("invalid number '" + v + "'");
    return out;
}

long long parse_int(const std::string& v) {
    long long out = 0;
    const char* first = v.data();
    const char* last = v.data() + v.size();
    const auto [ptr, ec] = std::from_chars(first, last, out);
    if (ec != std::errc{} || ptr != last) throw std::invalid_argument("invalid integer '" + v + "'");
    return out;
}

std::uint64_t parse_u64(const std::string& v) {
    std::uint64_t out = 0;
    const char* first = v.data();
    const char* last = v.data() + v.size();
    const auto [ptr, ec] = std::from_chars(first, last, out);
    if (ec != std::errc{} || ptr != last)
        throw std::invalid_argument("invalid unsigned integer '" + v + "'");
    return out;
}

std::vector<std::string> split_list(const std::string& v) {
    std::vector<std::string> parts;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) parts.push_back(trim(item));
    return parts;
}

Edge parse_edge(const std::string& v) {
    if (v == "left") return Edge::Left;
    if (v == "right") return Edge::Right;
    if (v == "bottom") return Edge::Bottom;
    if (v == "top") return Edge::Top;
    throw std::invalid_argument("invalid edge '" + v + "' (left|right|bottom|top)");
}

const char* edge_name(Edge e) {
    switch (e) {
        case Edge::Left: return "left";
        case Edge::Right: return "right";
        case Edge::Bottom: return "bottom";
        case Edge::Top: return "top";
    }
    return "left";
}

RewardMode parse_reward_mode(const std::string& v) {
    if (v == "global") return RewardMode::Global;
    if (v == "difference") return RewardMode::Difference;
    throw std::invalid_argument("invalid reward_mode '" + v + "' (global|difference)");
}

std::string fmt_double(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, ptr);
}

using Setter = std::function<void(ExperimentConfig&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
    static const std::map<std::string, Setter> table = {
        {"area_width", [](ExperimentConfig& c, const std::string& v) { c.world.area_width = parse_double(v); }},
        {"area_height", [](ExperimentConfig& c, const std::string& v) { c.world.area_height = parse_double(v); }},
        {"num_targets", [](ExperimentConfig& c, const std::string& v) { c.world.num_targets = static_cast<int>(parse_int(v)); }},
        {"num_agents", [](ExperimentConfig& c, const std::string& v) { c.world.num_agents = static_cast<int>(parse_int(v)); }},
        {"detection_radius", [](ExperimentConfig& c, const std::string& v) { c.world.detection_radius = parse_double(v); }},
        {"radial_steps",
         [](ExperimentConfig& c, const std::string& v) {
             c.world.radial_steps.clear();
             for (const auto& p : split_list(v)) c.world.radial_steps.push_back(parse_double(p));
         }},
        {"num_angles", [](ExperimentConfig& c, const std::string& v) { c.world.num_angles = static_cast<int>(parse_int(v)); }},
        {"episode_length", [](ExperimentConfig& c, const std::string& v) { c.world.episode_length = static_cast<int>(parse_int(v)); }},
        {"dt", [](ExperimentConfig& c, const std::string& v) { c.world.dt = parse_double(v); }},
        {"target_speed", [](ExperimentConfig& c, const std::string& v) { c.world.target_speed = parse_double(v); }},
        {"poi_box_size", [](ExperimentConfig& c, const std::string& v) { c.world.poi_box_size = parse_double(v); }},
        {"target_spawn_edges",
         [](ExperimentConfig& c, const std::string& v) {
             c.world.spawn_edges.clear();
             for (const auto& p : split_list(v)) c.world.spawn_edges.push_back(parse_edge(p));
         }},
        {"alpha", [](ExperimentConfig& c, const std::string& v) { c.schedule.alpha = parse_double(v); }},
        {"epsilon", [](ExperimentConfig& c, const std::string& v) { c.schedule.epsilon = parse_double(v); }},
        {"alpha_decay_rate", [](ExperimentConfig& c, const std::string& v) { c.schedule.alpha_decay_rate = parse_double(v); }},
        {"epsilon_decay_rate", [](ExperimentConfig& c, const std::string& v) { c.schedule.epsilon_decay_rate = parse_double(v); }},
        {"gamma", [](ExperimentConfig& c, const std::string& v) { c.schedule.gamma = parse_double(v); }},
        {"reward_mode", [](ExperimentConfig& c, const std::string& v) { c.reward_mode = parse_reward_mode(v); }},
        {"num_episodes", [](ExperimentConfig& c, const std::string& v) { c.num_episodes = parse_int(v); }},
        {"num_runs", [](ExperimentConfig& c, const std::string& v) { c.num_runs = static_cast<int>(parse_int(v)); }},
        {"eval_episodes", [](ExperimentConfig& c, const std::string& v) { c.eval_episodes = static_cast<int>(parse_int(v)); }},
        {"base_seed", [](ExperimentConfig& c, const std::string& v) { c.base_seed = parse_u64(v); }},
        {"num_tilings", [](ExperimentConfig& c, const std::string& v) { c.coder.num_tilings = static_cast<int>(parse_int(v)); }},
        {"hash_table_size", [](ExperimentConfig& c, const std::string& v) { c.coder.hash_table_size = static_cast<std::uint32_t>(parse_u64(v)); }},
        {"position_tile_width", [](ExperimentConfig& c, const std::string& v) { c.coder.position_tile_width = parse_double(v); }},
        {"count_tile_width", [](ExperimentConfig& c, const std::string& v) { c.coder.count_tile_width = parse_double(v); }},
        {"oracle_mean_f", [](ExperimentConfig& c, const std::string& v) { c.oracle_mean_f = parse_double(v); }},
        {"threads", [](ExperimentConfig& c, const std::string& v) { c.threads = static_cast<int>(parse_int(v)); }},
    };
    return table;
}

}  // namespace

ExperimentConfig default_config() { return ExperimentConfig{}; }

ExperimentConfig parse_config_text(const std::string& text) {
    ExperimentConfig cfg = default_config();
    std::stringstream ss(text);
    std::string line;
    int line_no = 0;
    while (std::getline(ss, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(line_no) + ": expected key=value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        const auto it = setters().find(key);
        if (it == setters().end())
            throw ConfigError("line " + std::to_string(line_no) + ": unknown key '" + key + "'");
        try {
            it->second(cfg, value);
        } catch (const std::exception& e) {
            throw ConfigError("line " + std::to_string(line_no) + ": " + key + ": " + e.what());
        }
    }
    try {
        cfg.validate();
    } catch (const std::exception& e) {
        throw ConfigError(std::string("invalid configuration: ") + e.what());
    }
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

std::string config_to_text(const ExperimentConfig& cfg) {
    std::ostringstream out;
    out << "area_width=" << fmt_double(cfg.world.area_width) << "\n";
    out << "area_height=" << fmt_double(cfg.world.area_height) << "\n";
    out << "num_targets=" << cfg.world.num_targets << "\n";
    out << "num_agents=" << cfg.world.num_agents << "\n";
    out << "detection_radius=" << fmt_double(cfg.world.detection_radius) << "\n";
    out << "radial_steps=";
    for (std::size_t i = 0; i < cfg.world.radial_steps.size(); ++i)
        out << (i ? "," : "") << fmt_double(cfg.world.radial_steps[i]);
    out << "\n";
    out << "num_angles=" << cfg.world.num_angles << "\n";
    out << "episode_length=" << cfg.world.episode_length << "\n";
    out << "dt=" << fmt_double(cfg.world.dt) << "\n";
    out << "target_speed=" << fmt_double(cfg.world.target_speed) << "\n";
    out << "poi_box_size=" << fmt_double(cfg.world.poi_box_size) << "\n";
    out << "target_spawn_edges=";
    for (std::size_t i = 0; i < cfg.world.spawn_edges.size(); ++i)
        out << (i ? "," : "") << edge_name(cfg.world.spawn_edges[i]);
    out << "\n";
    out << "alpha=" << fmt_double(cfg.schedule.alpha) << "\n";
    out << "epsilon=" << fmt_double(cfg.schedule.epsilon) << "\n";
    out << "alpha_decay_rate=" << fmt_double(cfg.schedule.alpha_decay_rate) << "\n";
    out << "epsilon_decay_rate=" << fmt_double(cfg.schedule.epsilon_decay_rate) << "\n";
    out << "gamma=" << fmt_double(cfg.schedule.gamma) << "\n";
    out << "reward_mode=" << reward_mode_name(cfg.reward_mode) << "\n";
    out << "num_episodes=" << cfg.num_episodes << "\n";
    out << "num_runs=" << cfg.num_runs << "\n";
    out << "eval_episodes=" << cfg.eval_episodes << "\n";
    out << "base_seed=" << cfg.base_seed << "\n";
    out << "num_tilings=" << cfg.coder.num_tilings << "\n";
    out << "hash_table_size=" << cfg.coder.hash_table_size << "\n";
    out << "position_tile_width=" << fmt_double(cfg.coder.position_tile_width) << "\n";
    out << "count_tile_width=" << fmt_double(cfg.coder.count_tile_width) << "\n";
    out << "oracle_mean_f=" << fmt_double(cfg.oracle_mean_f) << "\n";
    out << "threads=" << cfg.threads << "\n";
    return out.str();
}

}  // namespace satrack
