#include "satrack/oracle.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>
#include <thread>

#include "satrack/rewards.hpp"
#include "satrack/rng.hpp"

namespace satrack {

std::vector<KnownTrajectory> precompute_trajectories(const std::vector<TargetState>& targets,
                                                     int episode_length, double dt) {
    std::vector<KnownTrajectory> out;
    out.reserve(targets.size());
    for (const TargetState& t0 : targets) {
        KnownTrajectory traj;
        traj.positions.reserve(episode_length + 1);
        TargetState t = t0;
        traj.positions.push_back(t.pos);
        for (int t_step = 1; t_step <= episode_length; ++t_step) {
            t = step_target(t, dt);
            traj.positions.push_back(t.pos);
        }
        out.push_back(std::move(traj));
    }
    return out;
}

namespace {

bool is_integral(double v) { return v == std::floor(v); }

// Lattice for the time-expanded search. scale 1 when everything lives on the
// integer grid, otherwise a half-meter grid (approximate for action sets that
// do not land on it).
struct Lattice {
    int scale = 1;
    int nx = 0, ny = 0;
    std::vector<int> dx, dy;  // per action, in lattice units

    int index(int ix, int iy) const { return iy * nx + ix; }
};

Lattice make_lattice(Vec2 start, const ActionSet& actions, const WorldConfig& cfg) {
    bool integral = is_integral(start.x) && is_integral(start.y);
    for (const Action& a : actions)
        integral = integral && is_integral(a.displacement.x) && is_integral(a.displacement.y);

    Lattice lat;
    lat.scale = integral ? 1 : 2;
    lat.nx = static_cast<int>(std::floor(cfg.area_width * lat.scale)) + 1;
    lat.ny = static_cast<int>(std::floor(cfg.area_height * lat.scale)) + 1;
    lat.dx.reserve(actions.size());
    lat.dy.reserve(actions.size());
    for (const Action& a : actions) {
        lat.dx.push_back(static_cast<int>(std::lround(a.displacement.x * lat.scale)));
        lat.dy.push_back(static_cast<int>(std::lround(a.displacement.y * lat.scale)));
    }
    return lat;
}

}  // namespace

InterceptPlan intercept_search(Vec2 agent_start, const KnownTrajectory& traj,
                               const ActionSet& actions, double r0, const WorldConfig& cfg) {
    const int horizon = static_cast<int>(traj.positions.size()) - 1;
    const Lattice lat = make_lattice(agent_start, actions, cfg);
    const int cells = lat.nx * lat.ny;
    const double r0_sq = r0 * r0;

    const int start_x = static_cast<int>(std::lround(agent_start.x * lat.scale));
    const int start_y = static_cast<int>(std::lround(agent_start.y * lat.scale));

    // parent[t][cell] = action index that first reached the cell at time t, -1 unreached
    std::vector<std::vector<std::int8_t>> parent(horizon + 1,
                                                 std::vector<std::int8_t>(cells, -1));
    std::vector<int> frontier, next_frontier;
    parent[0][lat.index(start_x, start_y)] = -2;  // root marker
    frontier.push_back(lat.index(start_x, start_y));

    auto cell_pos = [&](int cell) {
        return Vec2{static_cast<double>(cell % lat.nx) / lat.scale,
                    static_cast<double>(cell / lat.nx) / lat.scale};
    };

    for (int t = 0; t <= horizon; ++t) {
        // earliest layer containing a cell within r0 of the target wins
        int best_cell = -1;
        double best_d = std::numeric_limits<double>::infinity();
        for (int cell : frontier) {
            const double d = dist_sq(cell_pos(cell), traj.positions[t]);
            if (d <= r0_sq && (d < best_d || (d == best_d && cell < best_cell))) {
                best_d = d;
                best_cell = cell;
            }
        }
        if (best_cell >= 0) {
            InterceptPlan plan;
            plan.time = t;
            plan.action_indices.resize(t);
            int cell = best_cell;
            for (int back = t; back > 0; --back) {
                const int a = parent[back][cell];
                plan.action_indices[back - 1] = a;
                cell = lat.index(cell % lat.nx - lat.dx[a], cell / lat.nx - lat.dy[a]);
            }
            return plan;
        }
        if (t == horizon) break;
        next_frontier.clear();
        for (int cell : frontier) {
            const int ix = cell % lat.nx, iy = cell / lat.nx;
            for (int a = 0; a < static_cast<int>(actions.size()); ++a) {
                const int jx = ix + lat.dx[a], jy = iy + lat.dy[a];
                if (jx < 0 || jy < 0 || jx >= lat.nx || jy >= lat.ny) continue;
                const int nidx = lat.index(jx, jy);
                if (parent[t + 1][nidx] != -1) continue;
                parent[t + 1][nidx] = static_cast<std::int8_t>(a);
                next_frontier.push_back(nidx);
            }
        }
        std::swap(frontier, next_frontier);
    }

    InterceptPlan unreachable;
    unreachable.time = horizon + 1;
    return unreachable;
}

int earliest_intercept(Vec2 agent_start, const KnownTrajectory& traj, const ActionSet& actions,
                       double r0, const WorldConfig& cfg) {
    return intercept_search(agent_start, traj, actions, r0, cfg).time;
}

int greedy_tracking_action(Vec2 agent_pos, Vec2 target_next, const ActionSet& actions,
                           const WorldConfig& cfg) {
    int best = -1;
    double best_d = std::numeric_limits<double>::infinity();
    for (int a = 0; a < static_cast<int>(actions.size()); ++a) {
        const Vec2 next = agent_pos + actions[a].displacement;
        if (!in_bounds(next, cfg)) continue;
        const double d = dist_sq(next, target_next);
        if (d < best_d) {
            best_d = d;
            best = a;
        }
    }
    if (best < 0) throw std::logic_error("no admissible action");
    return best;
}

namespace {

// Smallest-displacement admissible action; the hold action when the set has one.
int hold_action(Vec2 pos, const ActionSet& actions, const WorldConfig& cfg) {
    int best = -1;
    double best_len = std::numeric_limits<double>::infinity();
    for (int a = 0; a < static_cast<int>(actions.size()); ++a) {
        if (!in_bounds(pos + actions[a].displacement, cfg)) continue;
        const double len = dist_sq({0, 0}, actions[a].displacement);
        if (len < best_len) {
            best_len = len;
            best = a;
        }
    }
    if (best < 0) throw std::logic_error("no admissible action");
    return best;
}

// Full per-agent action sequence: BFS path to the intercept, then greedy
// tracking of the known trajectory.
std::vector<int> pursue_actions(Vec2 start, const KnownTrajectory& traj,
                                const InterceptPlan& intercept, const ActionSet& actions,
                                const WorldConfig& cfg) {
    const int horizon = static_cast<int>(traj.positions.size()) - 1;
    std::vector<int> seq;
    seq.reserve(horizon);
    Vec2 pos = start;
    const int path_len = std::min<int>(intercept.time, horizon);
    for (int t = 1; t <= horizon; ++t) {
        int a;
        if (intercept.time > horizon) {
            a = greedy_tracking_action(pos, traj.positions[t], actions, cfg);  // chase anyway
        } else if (t <= path_len) {
            a = intercept.action_indices[t - 1];
        } else {
            a = greedy_tracking_action(pos, traj.positions[t], actions, cfg);
        }
        seq.push_back(a);
        pos = pos + actions[a].displacement;
    }
    return seq;
}

}  // namespace

int simulate_plan(const WorldState& world, const JointPlan& plan, const ActionSet& actions,
                  const WorldConfig& cfg) {
    WorldState w = world;
    DetectionMatrix det;
    int f = 0;
    for (int t = 1; t <= cfg.episode_length; ++t) {
        for (std::size_t j = 0; j < w.agents.size(); ++j)
            w.agents[j] = apply_action(w.agents[j], actions[plan.agent_actions[j][t - 1]], cfg);
        for (auto& target : w.targets) target = step_target(target, cfg.dt);
        detection_matrix(w.agents, w.targets, cfg.detection_radius, det);
        f += global_reward(det);
    }
    return f;
}

JointPlan assign_and_plan(const WorldState& world, const std::vector<KnownTrajectory>& trajectories,
                          const ActionSet& actions, const WorldConfig& cfg) {
    const int num_agents = static_cast<int>(world.agents.size());
    const int num_targets = static_cast<int>(trajectories.size());
    if (num_agents < num_targets)
        std::fprintf(stderr, "[oracle] warning: %d agents for %d targets; baseline is weaker\n",
                     num_agents, num_targets);

    // hold plan for every agent
    std::vector<std::vector<int>> hold(num_agents);
    for (int j = 0; j < num_agents; ++j) {
        Vec2 pos = world.agents[j].pos;
        for (int t = 1; t <= cfg.episode_length; ++t) {
            const int a = hold_action(pos, actions, cfg);
            hold[j].push_back(a);
            pos = pos + actions[a].displacement;
        }
    }

    // intercept plans, cached per target (agents share start positions often)
    std::vector<std::vector<std::pair<Vec2, InterceptPlan>>> cache(num_targets);
    auto intercept_for = [&](int target, Vec2 start) -> const InterceptPlan& {
        for (const auto& [pos, plan] : cache[target])
            if (pos == start) return plan;
        cache[target].emplace_back(
            start, intercept_search(start, trajectories[target], actions,
                                    cfg.detection_radius, cfg));
        return cache[target].back().second;
    };

    JointPlan best;
    best.agent_actions = hold;
    best.assignment.assign(num_targets, -1);
    best.planned_utility = simulate_plan(world, best, actions, cfg);

    // enumerate injective partial assignments target -> agent
    std::vector<int> assignment(num_targets, -1);
    std::vector<bool> used(num_agents, false);
    auto consider = [&]() {
        JointPlan plan;
        plan.agent_actions = hold;
        plan.assignment = assignment;
        for (int i = 0; i < num_targets; ++i) {
            const int j = assignment[i];
            if (j < 0) continue;
            const Vec2 start = world.agents[j].pos;
            plan.agent_actions[j] =
                pursue_actions(start, trajectories[i], intercept_for(i, start), actions, cfg);
        }
        plan.planned_utility = simulate_plan(world, plan, actions, cfg);
        if (plan.planned_utility > best.planned_utility) best = std::move(plan);
    };
    auto enumerate = [&](auto&& self, int target) -> void {
        if (target == num_targets) {
            consider();
            return;
        }
        self(self, target + 1);  // target unassigned
        for (int j = 0; j < num_agents; ++j) {
            if (used[j]) continue;
            used[j] = true;
            assignment[target] = j;
            self(self, target + 1);
            assignment[target] = -1;
            used[j] = false;
        }
    };
    enumerate(enumerate, 0);
    return best;
}

OracleStats oracle_f(const WorldConfig& cfg, std::span<const std::uint64_t> seeds, int threads) {
    OracleStats stats;
    stats.per_episode.assign(seeds.size(), 0);
    if (seeds.empty()) return stats;

    const ActionSet actions = enumerate_action_set(cfg.radial_steps, cfg.num_angles);
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= seeds.size()) return;
            Rng rng(seeds[i]);
            const WorldState world = spawn_episode(cfg, rng);
            const auto trajs = precompute_trajectories(world.targets, cfg.episode_length, cfg.dt);
            stats.per_episode[i] = assign_and_plan(world, trajs, actions, cfg).planned_utility;
        }
    };
    const int nthreads = std::max(1, std::min<int>(threads, static_cast<int>(seeds.size())));
    if (nthreads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int i = 0; i < nthreads; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    double mean = 0.0;
    for (int f : stats.per_episode) mean += f;
    mean /= static_cast<double>(stats.per_episode.size());
    double var = 0.0;
    for (int f : stats.per_episode) var += (f - mean) * (f - mean);
    stats.mean = mean;
    stats.stddev = stats.per_episode.size() > 1
                       ? std::sqrt(var / (static_cast<double>(stats.per_episode.size()) - 1))
                       : 0.0;
    return stats;
}

}  // namespace satrack
