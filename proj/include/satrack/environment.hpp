#pragma once

#include <cstdint>
#include <vector>

#include "satrack/geom.hpp"
#include "satrack/rng.hpp"

namespace satrack {

enum class Edge { Left, Right, Bottom, Top };

// World geometry, dynamics parameters, and episode layout.
struct WorldConfig {
    double area_width = 50.0;   // m
    double area_height = 50.0;  // m
    int num_targets = 2;
    int num_agents = 2;
    double detection_radius = 5.0;              // m
    std::vector<double> radial_steps = {0, 1, 3};  // m, ascending
    int num_angles = 4;
    int episode_length = 30;  // timesteps
    double dt = 1.0;          // s
    double target_speed = 1.0;  // m/s
    double poi_box_size = 10.0;  // side of the POI square centered in the area, m
    std::vector<Edge> spawn_edges = {Edge::Left, Edge::Right};  // cycled over targets

    Vec2 center() const { return {area_width / 2.0, area_height / 2.0}; }
    // Throws std::invalid_argument naming the offending field.
    void validate() const;
};

struct TargetState {
    Vec2 pos;
    Vec2 vel;
    Vec2 poi;
    bool arrived = false;
};

struct AgentState {
    Vec2 pos;
};

struct Action {
    Vec2 displacement;
    friend bool operator==(const Action& a, const Action& b) {
        return a.displacement == b.displacement;
    }
};

using ActionSet = std::vector<Action>;

// detected[target][agent] at one timestep.
struct DetectionMatrix {
    int targets = 0;
    int agents = 0;
    std::vector<std::uint8_t> d;

    DetectionMatrix() = default;
    DetectionMatrix(int num_targets, int num_agents)
        : targets(num_targets), agents(num_agents),
          d(static_cast<std::size_t>(num_targets) * num_agents, 0) {}

    bool at(int target, int agent) const {
        return d[static_cast<std::size_t>(target) * agents + agent] != 0;
    }
    void set(int target, int agent, bool v) {
        d[static_cast<std::size_t>(target) * agents + agent] = v ? 1 : 0;
    }
};

struct WorldState {
    std::vector<AgentState> agents;
    std::vector<TargetState> targets;
};

// All distinct displacements (r cos(l2*2pi/n), r sin(l2*2pi/n)) for r over
// radial_steps and l2 = 0..num_angles; components within 1e-9 of an integer
// snap to it, and exact duplicates (wraparound, zero radius) collapse.
ActionSet enumerate_action_set(const std::vector<double>& radial_steps, int num_angles);

bool in_bounds(Vec2 p, const WorldConfig& cfg);

// Indices into `actions` whose application keeps the agent inside the area.
std::vector<int> admissible_action_indices(const AgentState& agent, const ActionSet& actions,
                                           const WorldConfig& cfg);
void admissible_action_indices(const AgentState& agent, const ActionSet& actions,
                               const WorldConfig& cfg, std::vector<int>& out);
ActionSet admissible_actions(const AgentState& agent, const ActionSet& actions,
                             const WorldConfig& cfg);

// Precondition: the action is admissible. Throws std::logic_error otherwise.
AgentState apply_action(const AgentState& agent, const Action& a, const WorldConfig& cfg);

// Target moving at cfg.target_speed from `spawn` toward `poi`.
TargetState make_target(Vec2 spawn, Vec2 poi, double speed);

// Agents at the area center; target i placed uniformly along its spawn edge
// with an own POI uniform in the POI box. Deterministic given the Rng state.
WorldState spawn_episode(const WorldConfig& cfg, Rng& rng);

// Linear motion; snaps to the POI (and stays there) once within one step of it.
TargetState step_target(const TargetState& t, double dt);

bool detect(const AgentState& agent, const TargetState& target, double r0);

DetectionMatrix detection_matrix(const std::vector<AgentState>& agents,
                                 const std::vector<TargetState>& targets, double r0);
void detection_matrix(const std::vector<AgentState>& agents,
                      const std::vector<TargetState>& targets, double r0, DetectionMatrix& out);

}  // namespace satrack
