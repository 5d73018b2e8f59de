#include "satrack/environment.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace satrack {

namespace {

// Components an epsilon away from an integer (cos/sin residue) snap to it so
// wraparound duplicates compare exactly equal.
double snap_component(double v) {
    const double n = std::round(v);
    return std::abs(v - n) <= 1e-9 ? n : v;
}

}  // namespace

void WorldConfig::validate() const {
    auto positive = [](double v, const char* name) {
        if (!(v > 0.0)) throw std::invalid_argument(std::string(name) + " must be > 0");
    };
    positive(area_width, "area_width");
    positive(area_height, "area_height");
    positive(detection_radius, "detection_radius");
    positive(dt, "dt");
    positive(target_speed, "target_speed");
    if (num_targets < 0) throw std::invalid_argument("num_targets must be >= 0");
    if (num_agents < 1) throw std::invalid_argument("num_agents must be >= 1");
    if (episode_length < 1) throw std::invalid_argument("episode_length must be >= 1");
    if (num_angles < 1) throw std::invalid_argument("num_angles must be >= 1");
    if (radial_steps.empty()) throw std::invalid_argument("radial_steps must be non-empty");
    if (!std::is_sorted(radial_steps.begin(), radial_steps.end()))
        throw std::invalid_argument("radial_steps must be sorted ascending");
    if (std::count(radial_steps.begin(), radial_steps.end(), 0.0) > 1)
        throw std::invalid_argument("radial_steps may contain 0 at most once");
    if (radial_steps.front() < 0.0)
        throw std::invalid_argument("radial_steps must be non-negative");
    if (poi_box_size <= 0.0 || poi_box_size > area_width || poi_box_size > area_height)
        throw std::invalid_argument("poi_box_size must fit inside the area");
    if (spawn_edges.empty()) throw std::invalid_argument("target_spawn_edges must be non-empty");
}

ActionSet enumerate_action_set(const std::vector<double>& radial_steps, int num_angles) {
    if (radial_steps.empty()) throw std::invalid_argument("radial_steps must be non-empty");
    if (num_angles < 1) throw std::invalid_argument("num_angles must be >= 1");

    const double dtheta = 2.0 * std::numbers::pi / num_angles;
    ActionSet out;
    for (double r : radial_steps) {
        for (int l2 = 0; l2 <= num_angles; ++l2) {
            Action a{{snap_component(r * std::cos(l2 * dtheta)),
                      snap_component(r * std::sin(l2 * dtheta))}};
            if (std::find(out.begin(), out.end(), a) == out.end()) out.push_back(a);
        }
    }
    return out;
}

bool in_bounds(Vec2 p, const WorldConfig& cfg) {
    return p.x >= 0.0 && p.x <= cfg.area_width && p.y >= 0.0 && p.y <= cfg.area_height;
}

std::vector<int> admissible_action_indices(const AgentState& agent, const ActionSet& actions,
                                           const WorldConfig& cfg) {
    std::vector<int> idx;
    admissible_action_indices(agent, actions, cfg, idx);
    return idx;
}

void admissible_action_indices(const AgentState& agent, const ActionSet& actions,
                               const WorldConfig& cfg, std::vector<int>& out) {
    out.clear();
    for (int i = 0; i < static_cast<int>(actions.size()); ++i) {
        if (in_bounds(agent.pos + actions[i].displacement, cfg)) out.push_back(i);
    }
}

ActionSet admissible_actions(const AgentState& agent, const ActionSet& actions,
                             const WorldConfig& cfg) {
    ActionSet out;
    for (int i : admissible_action_indices(agent, actions, cfg)) out.push_back(actions[i]);
    return out;
}

AgentState apply_action(const AgentState& agent, const Action& a, const WorldConfig& cfg) {
    AgentState next{agent.pos + a.displacement};
    if (!in_bounds(next.pos, cfg))
        throw std::logic_error("apply_action: resulting position out of bounds");
    return next;
}

TargetState make_target(Vec2 spawn, Vec2 poi, double speed) {
    TargetState t;
    t.pos = spawn;
    t.poi = poi;
    const double d = dist(spawn, poi);
    if (d == 0.0) {
        t.vel = {0.0, 0.0};
        t.arrived = true;
    } else {
        t.vel = (poi - spawn) * (speed / d);
    }
    return t;
}

WorldState spawn_episode(const WorldConfig& cfg, Rng& rng) {
    WorldState w;
    w.agents.assign(static_cast<std::size_t>(cfg.num_agents), AgentState{cfg.center()});

    const Vec2 c = cfg.center();
    const double half = cfg.poi_box_size / 2.0;
    for (int i = 0; i < cfg.num_targets; ++i) {
        const Edge edge = cfg.spawn_edges[i % cfg.spawn_edges.size()];
        Vec2 spawn;
        switch (edge) {
            case Edge::Left: spawn = {0.0, rng.uniform(0.0, cfg.area_height)}; break;
            case Edge::Right: spawn = {cfg.area_width, rng.uniform(0.0, cfg.area_height)}; break;
            case Edge::Bottom: spawn = {rng.uniform(0.0, cfg.area_width), 0.0}; break;
            case Edge::Top: spawn = {rng.uniform(0.0, cfg.area_width), cfg.area_height}; break;
        }
        Vec2 poi;
        do {
            poi = {rng.uniform(c.x - half, c.x + half), rng.uniform(c.y - half, c.y + half)};
        } while (poi == spawn);  // degenerate direction
        w.targets.push_back(make_target(spawn, poi, cfg.target_speed));
    }
    return w;
}

TargetState step_target(const TargetState& t, double dt) {
    if (t.arrived) return t;
    TargetState next = t;
    const double speed = norm(t.vel);
    if (dist(t.pos, t.poi) <= speed * dt) {
        next.pos = t.poi;
        next.vel = {0.0, 0.0};
        next.arrived = true;
    } else {
        next.pos = t.pos + t.vel * dt;
    }
    return next;
}

bool detect(const AgentState& agent, const TargetState& target, double r0) {
    return dist_sq(agent.pos, target.pos) <= r0 * r0;
}

DetectionMatrix detection_matrix(const std::vector<AgentState>& agents,
                                 const std::vector<TargetState>& targets, double r0) {
    DetectionMatrix m;
    detection_matrix(agents, targets, r0, m);
    return m;
}

void detection_matrix(const std::vector<AgentState>& agents,
                      const std::vector<TargetState>& targets, double r0, DetectionMatrix& out) {
    out.targets = static_cast<int>(targets.size());
    out.agents = static_cast<int>(agents.size());
    out.d.assign(static_cast<std::size_t>(out.targets) * out.agents, 0);
    for (int i = 0; i < out.targets; ++i)
        for (int j = 0; j < out.agents; ++j)
            out.set(i, j, detect(agents[j], targets[i], r0));
}

}  // namespace satrack
