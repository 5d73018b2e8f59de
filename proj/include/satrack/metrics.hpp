#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "satrack/trainer.hpp"

namespace satrack {

// Visit counts per 1m x 1m tile, accumulated over agents, episodes, and runs.
struct Heatmap {
    int nx = 0, ny = 0;
    std::vector<std::int64_t> counts;

    Heatmap() = default;
    Heatmap(int nx_, int ny_) : nx(nx_), ny(ny_), counts(static_cast<std::size_t>(nx_) * ny_, 0) {}

    std::int64_t& at(int ix, int iy) { return counts[static_cast<std::size_t>(iy) * nx + ix]; }
    std::int64_t at(int ix, int iy) const { return counts[static_cast<std::size_t>(iy) * nx + ix]; }

    std::int64_t total() const;

    // Bins are half-open [k, k+1); positions on the top edges clamp to the
    // last tile so every in-bounds position maps to exactly one tile.
    void add_position(Vec2 pos);

    void merge(const Heatmap& other);
};

Heatmap make_heatmap(const WorldConfig& cfg);

// mean F divided by the oracle's mean F on the same episodes.
double normalized_score(double f_mean, double f_oracle_mean);

// Median filter with truncated windows at the edges; the median of an even
// number of values is the mean of the two middle ones. Window must be odd.
std::vector<double> median_filter(std::span<const double> series, int window);

Heatmap accumulate_heatmap(std::span<const EpisodeLog> logs, const WorldConfig& cfg);

struct EvalInput {
    int agents = 0;
    RewardMode mode = RewardMode::Global;
    double mean_f = 0.0;
    double std_f = 0.0;
};

struct OracleInput {
    int agents = 0;
    double mean_f = 0.0;
    double std_f = 0.0;
};

struct SummaryRow {
    int agents = 0;
    std::string reward_mode;  // "global", "difference", or "oracle"
    double mean_f = 0.0;
    double std_f = 0.0;
    double normalized = 0.0;
};

// One row per evaluation result, normalized by the oracle mean for the same
// agent count, followed by the oracle rows themselves.
std::vector<SummaryRow> summarize(std::span<const EvalInput> evals,
                                  std::span<const OracleInput> oracles);

}  // namespace satrack
