#include "satrack/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace satrack {

std::int64_t Heatmap::total() const {
    std::int64_t t = 0;
    for (std::int64_t c : counts) t += c;
    return t;
}

void Heatmap::add_position(Vec2 pos) {
    int ix = static_cast<int>(std::floor(pos.x));
    int iy = static_cast<int>(std::floor(pos.y));
    if (ix >= nx) ix = nx - 1;
    if (iy >= ny) iy = ny - 1;
    if (ix < 0) ix = 0;
    if (iy < 0) iy = 0;
    ++at(ix, iy);
}

void Heatmap::merge(const Heatmap& other) {
    if (other.nx != nx || other.ny != ny) throw std::invalid_argument("heatmap size mismatch");
    for (std::size_t i = 0; i < counts.size(); ++i) counts[i] += other.counts[i];
}

Heatmap make_heatmap(const WorldConfig& cfg) {
    return Heatmap(static_cast<int>(std::ceil(cfg.area_width)),
                   static_cast<int>(std::ceil(cfg.area_height)));
}

double normalized_score(double f_mean, double f_oracle_mean) {
    if (!(f_oracle_mean > 0.0)) throw std::invalid_argument("oracle mean must be > 0");
    return f_mean / f_oracle_mean;
}

std::vector<double> median_filter(std::span<const double> series, int window) {
    if (window < 1 || window % 2 == 0)
        throw std::invalid_argument("median filter window must be odd and >= 1");
    const int n = static_cast<int>(series.size());
    const int half = window / 2;
    std::vector<double> out(n);
    std::vector<double> buf;
    for (int k = 0; k < n; ++k) {
        const int lo = std::max(0, k - half);
        const int hi = std::min(n - 1, k + half);
        buf.assign(series.begin() + lo, series.begin() + hi + 1);
        const int m = static_cast<int>(buf.size());
        std::nth_element(buf.begin(), buf.begin() + m / 2, buf.end());
        double med = buf[m / 2];
        if (m % 2 == 0) {
            std::nth_element(buf.begin(), buf.begin() + m / 2 - 1, buf.begin() + m / 2);
            med = (med + buf[m / 2 - 1]) / 2.0;
        }
        out[k] = med;
    }
    return out;
}

Heatmap accumulate_heatmap(std::span<const EpisodeLog> logs, const WorldConfig& cfg) {
    Heatmap hm = make_heatmap(cfg);
    for (const EpisodeLog& log : logs)
        for (const StepRecord& step : log.steps)
            for (Vec2 pos : step.agent_pos) hm.add_position(pos);
    return hm;
}

std::vector<SummaryRow> summarize(std::span<const EvalInput> evals,
                                  std::span<const OracleInput> oracles) {
    std::vector<SummaryRow> rows;
    for (const EvalInput& e : evals) {
        SummaryRow row;
        row.agents = e.agents;
        row.reward_mode = reward_mode_name(e.mode);
        row.mean_f = e.mean_f;
        row.std_f = e.std_f;
        row.normalized = 0.0;
        for (const OracleInput& o : oracles)
            if (o.agents == e.agents && o.mean_f > 0.0) row.normalized = e.mean_f / o.mean_f;
        rows.push_back(std::move(row));
    }
    for (const OracleInput& o : oracles) {
        SummaryRow row;
        row.agents = o.agents;
        row.reward_mode = "oracle";
        row.mean_f = o.mean_f;
        row.std_f = o.std_f;
        row.normalized = o.mean_f > 0.0 ? 1.0 : 0.0;
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace satrack
