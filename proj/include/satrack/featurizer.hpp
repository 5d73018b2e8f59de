#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "satrack/environment.hpp"

namespace satrack {

// Per-agent quadrant state vector: own position plus, for each of the four
// Cartesian quadrants centered on the agent, the count and mean distance of
// detected targets and of the other agents. 18 scalars regardless of the
// number of agents and targets.
struct Observation {
    static constexpr int kDims = 18;

    Vec2 own_pos;
    std::array<double, 4> target_count{};    // m[l], FOV-limited
    std::array<double, 4> target_avg_dist{}; // p[l], 0 when the quadrant is empty
    std::array<double, 4> agent_count{};     // n[l], all other agents
    std::array<double, 4> agent_avg_dist{};  // q[l], 0 when the quadrant is empty

    std::array<double, kDims> flatten() const {
        std::array<double, kDims> v{};
        v[0] = own_pos.x;
        v[1] = own_pos.y;
        for (int l = 0; l < 4; ++l) {
            v[2 + l] = target_count[l];
            v[6 + l] = target_avg_dist[l];
            v[10 + l] = agent_count[l];
            v[14 + l] = agent_avg_dist[l];
        }
        return v;
    }
};

// Quadrant index in 0..3 for a point displaced (dx, dy) from the agent.
// Quadrant l covers angles [l*90deg, (l+1)*90deg); a point exactly on an axis
// belongs to the quadrant whose interval starts there, and the origin itself
// maps to quadrant 0.
int quadrant_of(double dx, double dy);

Observation build_observation(int agent_index, const std::vector<AgentState>& agents,
                              const std::vector<TargetState>& targets,
                              const DetectionMatrix& detections, const WorldConfig& cfg);

// Hashing tile coder over the 18-dim observation. Each of the num_tilings
// grid tilings is shifted by k/num_tilings of a tile width times an odd
// displacement per dimension; a tiling's integer tile coordinates plus its
// index hash into [0, table_size).
class TileCoder {
public:
    TileCoder(int num_tilings, std::uint32_t table_size, std::array<double, Observation::kDims> widths);

    static std::array<double, Observation::kDims> default_widths(double position_width = 25.0,
                                                                 double count_width = 1.0);

    int num_tilings() const { return tilings_; }
    std::uint32_t table_size() const { return table_; }
    const std::array<double, Observation::kDims>& widths() const { return widths_; }

    // Appends exactly num_tilings indices to `out` (cleared first).
    void active_tiles(const Observation& obs, std::vector<std::uint32_t>& out) const;
    std::vector<std::uint32_t> active_tiles(const Observation& obs) const;

    // Tile coordinates of one tiling; exposed for diagnostics and tests.
    std::array<std::int32_t, Observation::kDims> tile_coords(const Observation& obs, int tiling) const;

private:
    int tilings_;
    std::uint32_t table_;
    std::array<double, Observation::kDims> widths_;
    std::array<double, Observation::kDims> inv_widths_;
    std::vector<double> offsets_;  // [tiling * kDims + dim], in tile units
};

}  // namespace satrack
