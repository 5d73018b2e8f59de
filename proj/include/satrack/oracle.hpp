#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "satrack/environment.hpp"

namespace satrack {

// Exact future positions of one target under the environment dynamics,
// including the snap-and-stop at its POI. positions[t] is the target after t
// steps; positions[0] is the spawn point.
struct KnownTrajectory {
    std::vector<Vec2> positions;
};

std::vector<KnownTrajectory> precompute_trajectories(const std::vector<TargetState>& targets,
                                                     int episode_length, double dt);

// Minimum-time intercept found by breadth-first search over the reachable
// position lattice crossed with time. Exact on the integer lattice (all
// default displacements are integral); non-integer action sets fall back to a
// half-meter quantized grid, which is an approximation.
struct InterceptPlan {
    int time = 0;                     // episode_length + 1 when unreachable
    std::vector<int> action_indices;  // one action per step, length min(time, T)
};

InterceptPlan intercept_search(Vec2 agent_start, const KnownTrajectory& traj,
                               const ActionSet& actions, double r0, const WorldConfig& cfg);

// Smallest t with a feasible action sequence ending within r0 of
// traj.positions[t]; episode_length + 1 if no such t exists.
int earliest_intercept(Vec2 agent_start, const KnownTrajectory& traj, const ActionSet& actions,
                       double r0, const WorldConfig& cfg);

// One admissible action greedily minimizing the next-step distance to where
// the target will be.
int greedy_tracking_action(Vec2 agent_pos, Vec2 target_next, const ActionSet& actions,
                           const WorldConfig& cfg);

struct JointPlan {
    std::vector<std::vector<int>> agent_actions;  // [agent][t], episode_length entries each
    std::vector<int> assignment;                  // [target] -> agent index or -1
    int planned_utility = 0;
};

// Brute-forces target-to-agent assignments (at most one target per agent);
// assigned agents run min-time intercept then greedy tracking, unassigned
// agents hold position. Returns the assignment maximizing the simulated
// episode utility.
JointPlan assign_and_plan(const WorldState& world, const std::vector<KnownTrajectory>& trajectories,
                          const ActionSet& actions, const WorldConfig& cfg);

// Exact environment replay of a joint plan; returns the utility F.
int simulate_plan(const WorldState& world, const JointPlan& plan, const ActionSet& actions,
                  const WorldConfig& cfg);

struct OracleStats {
    double mean = 0.0;
    double stddev = 0.0;  // sample std over episodes
    std::vector<int> per_episode;
};

// Plans and scores one episode per seed (seed -> spawn_episode world).
OracleStats oracle_f(const WorldConfig& cfg, std::span<const std::uint64_t> seeds, int threads = 1);

}  // namespace satrack
