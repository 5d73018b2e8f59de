#include "satrack/featurizer.hpp"

#include <cmath>
#include <stdexcept>

namespace satrack {

int quadrant_of(double dx, double dy) {
    if (dx > 0 && dy >= 0) return 0;  // [0, 90)
    if (dx <= 0 && dy > 0) return 1;  // [90, 180)
    if (dx < 0 && dy <= 0) return 2;  // [180, 270)
    if (dx >= 0 && dy < 0) return 3;  // [270, 360)
    return 0;                         // co-located point, undefined angle
}

Observation build_observation(int agent_index, const std::vector<AgentState>& agents,
                              const std::vector<TargetState>& targets,
                              const DetectionMatrix& detections, const WorldConfig& cfg) {
    (void)cfg;
    Observation obs;
    const Vec2 own = agents[agent_index].pos;
    obs.own_pos = own;

    std::array<double, 4> target_dist_sum{};
    std::array<double, 4> agent_dist_sum{};

    for (int i = 0; i < static_cast<int>(targets.size()); ++i) {
        if (!detections.at(i, agent_index)) continue;  // outside this agent's FOV
        const Vec2 rel = targets[i].pos - own;
        const int l = quadrant_of(rel.x, rel.y);
        obs.target_count[l] += 1.0;
        target_dist_sum[l] += norm(rel);
    }
    for (int j = 0; j < static_cast<int>(agents.size()); ++j) {
        if (j == agent_index) continue;
        const Vec2 rel = agents[j].pos - own;
        const int l = quadrant_of(rel.x, rel.y);
        obs.agent_count[l] += 1.0;
        agent_dist_sum[l] += norm(rel);
    }
    for (int l = 0; l < 4; ++l) {
        if (obs.target_count[l] > 0) obs.target_avg_dist[l] = target_dist_sum[l] / obs.target_count[l];
        if (obs.agent_count[l] > 0) obs.agent_avg_dist[l] = agent_dist_sum[l] / obs.agent_count[l];
    }
    return obs;
}

TileCoder::TileCoder(int num_tilings, std::uint32_t table_size,
                     std::array<double, Observation::kDims> widths)
    : tilings_(num_tilings), table_(table_size), widths_(widths) {
    if (num_tilings < 1) throw std::invalid_argument("num_tilings must be >= 1");
    if (table_size < 1) throw std::invalid_argument("hash_table_size must be >= 1");
    for (int d = 0; d < Observation::kDims; ++d) {
        if (!(widths_[d] > 0.0)) throw std::invalid_argument("tile widths must be > 0");
        inv_widths_[d] = 1.0 / widths_[d];
    }
    // Asymmetric offsets: tiling k shifted by k/num_tilings tile widths times
    // the odd displacement (2d+1) in dimension d.
    offsets_.resize(static_cast<std::size_t>(tilings_) * Observation::kDims);
    for (int k = 0; k < tilings_; ++k)
        for (int d = 0; d < Observation::kDims; ++d)
            offsets_[static_cast<std::size_t>(k) * Observation::kDims + d] =
                static_cast<double>(k) * (2 * d + 1) / tilings_;
}

std::array<double, Observation::kDims> TileCoder::default_widths(double position_width,
                                                                 double count_width) {
    std::array<double, Observation::kDims> w{};
    w[0] = w[1] = position_width;                      // own position
    for (int l = 0; l < 4; ++l) {
        w[2 + l] = count_width;      // m
        w[6 + l] = position_width;   // p
        w[10 + l] = count_width;     // n
        w[14 + l] = position_width;  // q
    }
    return w;
}

namespace {

inline std::uint64_t hash_coords(const std::int32_t* coords, int n, int tiling) {
    std::uint64_t h = 1469598103934665603ULL;  // FNV-1a over coords and tiling index
    auto step = [&h](std::uint64_t v) {
        h ^= v;
        h *= 1099511628211ULL;
    };
    step(static_cast<std::uint64_t>(tiling));
    for (int i = 0; i < n; ++i) step(static_cast<std::uint64_t>(static_cast<std::uint32_t>(coords[i])));
    return mix64(h);
}

}  // namespace

void TileCoder::active_tiles(const Observation& obs, std::vector<std::uint32_t>& out) const {
    out.clear();
    out.reserve(tilings_);
    const std::array<double, Observation::kDims> v = obs.flatten();
    std::array<double, Observation::kDims> scaled;
    for (int d = 0; d < Observation::kDims; ++d) scaled[d] = v[d] * inv_widths_[d];

    std::array<std::int32_t, Observation::kDims> coords;
    for (int k = 0; k < tilings_; ++k) {
        const double* off = &offsets_[static_cast<std::size_t>(k) * Observation::kDims];
        for (int d = 0; d < Observation::kDims; ++d)
            coords[d] = static_cast<std::int32_t>(std::floor(scaled[d] + off[d]));
        out.push_back(static_cast<std::uint32_t>(hash_coords(coords.data(), Observation::kDims, k) % table_));
    }
}

std::vector<std::uint32_t> TileCoder::active_tiles(const Observation& obs) const {
    std::vector<std::uint32_t> out;
    active_tiles(obs, out);
    return out;
}

std::array<std::int32_t, Observation::kDims> TileCoder::tile_coords(const Observation& obs,
                                                                    int tiling) const {
    const std::array<double, Observation::kDims> v = obs.flatten();
    std::array<std::int32_t, Observation::kDims> coords;
    const double* off = &offsets_[static_cast<std::size_t>(tiling) * Observation::kDims];
    for (int d = 0; d < Observation::kDims; ++d)
        coords[d] = static_cast<std::int32_t>(std::floor(v[d] * inv_widths_[d] + off[d]));
    return coords;
}

}  // namespace satrack
