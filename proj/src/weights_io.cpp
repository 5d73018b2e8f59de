#include "satrack/weights_io.hpp"

#include <cstring>
#include <filesystem>
#include <fstream>

#include <json.hpp>

namespace satrack {

namespace {

constexpr char kMagic[4] = {'S', 'T', 'Q', 'W'};
constexpr std::uint32_t kVersion = 1;

void put_u32(std::ostream& out, std::uint32_t v) {
    char b[4];
    for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
    out.write(b, 4);
}

void put_u64(std::ostream& out, std::uint64_t v) {
    char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
    out.write(b, 8);
}

void put_f64(std::ostream& out, double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, 8);
    put_u64(out, bits);
}

std::uint32_t get_u32(std::istream& in) {
    unsigned char b[4];
    in.read(reinterpret_cast<char*>(b), 4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
    return v;
}

std::uint64_t get_u64(std::istream& in) {
    unsigned char b[8];
    in.read(reinterpret_cast<char*>(b), 8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    return v;
}

double get_f64(std::istream& in) {
    const std::uint64_t bits = get_u64(in);
    double v;
    std::memcpy(&v, &bits, 8);
    return v;
}

}  // namespace

void save_weights(const std::string& path, const ExperimentConfig& cfg, int run,
                  const std::vector<QFunction>& qfs, const LearnerSchedule& final_schedule) {
    nlohmann::json header;
    header["format"] = "satrack-weights";
    header["version"] = kVersion;
    header["run"] = run;
    header["config"] = config_to_text(cfg);
    header["final_alpha"] = final_schedule.alpha;
    header["final_epsilon"] = final_schedule.epsilon;

    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write '" + tmp + "'");
        out.write(kMagic, 4);
        put_u32(out, kVersion);
        const std::string h = header.dump();
        put_u64(out, h.size());
        out.write(h.data(), static_cast<std::streamsize>(h.size()));

        for (const QFunction& qf : qfs) {
            for (int a = 0; a < qf.num_actions(); ++a) {
                std::uint64_t nnz = 0;
                for (std::uint32_t t = 0; t < qf.table_size(); ++t)
                    if (qf.weight(t, a) != 0.0) ++nnz;
                put_u64(out, nnz);
                for (std::uint32_t t = 0; t < qf.table_size(); ++t) {
                    const double w = qf.weight(t, a);
                    if (w != 0.0) {
                        put_u32(out, t);
                        put_f64(out, w);
                    }
                }
            }
        }
        if (!out) throw std::runtime_error("write failed for '" + tmp + "'");
    }
    std::filesystem::rename(tmp, path);
}

LoadedWeights load_weights(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open weights file '" + path + "'");
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, kMagic, 4) != 0)
        throw std::runtime_error("'" + path + "' is not a weights file");
    const std::uint32_t version = get_u32(in);
    if (version != kVersion)
        throw std::runtime_error("unsupported weights version " + std::to_string(version));
    const std::uint64_t hlen = get_u64(in);
    std::string htext(hlen, '\0');
    in.read(htext.data(), static_cast<std::streamsize>(hlen));
    if (!in) throw std::runtime_error("truncated weights header in '" + path + "'");

    const nlohmann::json header = nlohmann::json::parse(htext);
    LoadedWeights lw;
    lw.cfg = parse_config_text(header.at("config").get<std::string>());
    lw.run = header.at("run").get<int>();
    lw.final_schedule = lw.cfg.schedule;
    lw.final_schedule.alpha = header.at("final_alpha").get<double>();
    lw.final_schedule.epsilon = header.at("final_epsilon").get<double>();

    const ActionSet actions =
        enumerate_action_set(lw.cfg.world.radial_steps, lw.cfg.world.num_angles);
    for (int j = 0; j < lw.cfg.world.num_agents; ++j) {
        QFunction qf(lw.cfg.coder.hash_table_size, static_cast<int>(actions.size()));
        for (int a = 0; a < qf.num_actions(); ++a) {
            const std::uint64_t nnz = get_u64(in);
            for (std::uint64_t k = 0; k < nnz; ++k) {
                const std::uint32_t t = get_u32(in);
                const double w = get_f64(in);
                if (t >= qf.table_size())
                    throw std::runtime_error("corrupt weights file '" + path + "'");
                qf.set_weight(t, a, w);
            }
        }
        lw.qfs.push_back(std::move(qf));
    }
    if (!in) throw std::runtime_error("truncated weights data in '" + path + "'");
    return lw;
}

void check_weights_compatible(const ExperimentConfig& weights_cfg, const ExperimentConfig& cfg) {
    auto fail = [](const std::string& field) {
        throw ConfigError("weights are incompatible with the configuration: field '" + field +
                          "' differs");
    };
    if (weights_cfg.world.num_agents != cfg.world.num_agents) fail("num_agents");
    if (weights_cfg.world.radial_steps != cfg.world.radial_steps) fail("radial_steps");
    if (weights_cfg.world.num_angles != cfg.world.num_angles) fail("num_angles");
    if (weights_cfg.coder.num_tilings != cfg.coder.num_tilings) fail("num_tilings");
    if (weights_cfg.coder.hash_table_size != cfg.coder.hash_table_size) fail("hash_table_size");
    if (weights_cfg.coder.position_tile_width != cfg.coder.position_tile_width)
        fail("position_tile_width");
    if (weights_cfg.coder.count_tile_width != cfg.coder.count_tile_width) fail("count_tile_width");
}

}  // namespace satrack
