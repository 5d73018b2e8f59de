#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <functional>
#include <vector>

#include "satrack/oracle.hpp"
#include "satrack/rewards.hpp"
#include "satrack/trainer.hpp"

using namespace satrack;

namespace {

KnownTrajectory trajectory_of(const TargetState& t, int horizon, double dt) {
    return precompute_trajectories({t}, horizon, dt)[0];
}

// exhaustive search over every action sequence up to the horizon; the
// independent small-instance oracle for the BFS
int exhaustive_intercept(Vec2 start, const KnownTrajectory& traj, const ActionSet& actions,
                         double r0, const WorldConfig& cfg) {
    const int horizon = static_cast<int>(traj.positions.size()) - 1;
    int best = horizon + 1;
    std::function<void(Vec2, int)> walk = [&](Vec2 pos, int t) {
        if (dist(pos, traj.positions[t]) <= r0) {
            best = std::min(best, t);
            return;
        }
        if (t >= horizon || t + 1 >= best) return;
        for (const Action& a : actions) {
            const Vec2 next = pos + a.displacement;
            if (in_bounds(next, cfg)) walk(next, t + 1);
        }
    };
    walk(start, 0);
    return best;
}

}  // namespace

TEST_CASE("precomputed trajectories follow the dynamics and absorb at the POI") {
    const TargetState t = make_target({0, 25}, {25, 25}, 1.0);
    const KnownTrajectory traj = trajectory_of(t, 30, 1.0);
    REQUIRE(traj.positions.size() == 31);
    for (int step = 0; step <= 25; ++step) {
        CHECK(traj.positions[step].x == doctest::Approx(std::min(step, 25) * 1.0).epsilon(1e-12));
        CHECK(traj.positions[step].y == 25.0);
    }
    for (int step = 25; step <= 30; ++step) CHECK(traj.positions[step] == Vec2{25, 25});
}

TEST_CASE("an arrived target yields a constant trajectory") {
    TargetState t;
    t.pos = {21, 25};
    t.poi = {21, 25};
    t.arrived = true;
    const KnownTrajectory traj = trajectory_of(t, 10, 1.0);
    for (const Vec2& p : traj.positions) CHECK(p == Vec2{21, 25});
}

TEST_CASE("published scenario: target 1 position after ten steps") {
    const TargetState t = make_target({0, 47}, {21, 25}, 1.0);
    const KnownTrajectory traj = trajectory_of(t, 30, 1.0);
    CHECK(std::abs(traj.positions[10].x - 6.90) < 0.01);
    CHECK(std::abs(traj.positions[10].y - 39.77) < 0.01);
}

TEST_CASE("earliest intercept closes a 25 m head-on gap in five steps") {
    const WorldConfig cfg;
    const ActionSet actions = enumerate_action_set(cfg.radial_steps, cfg.num_angles);
    const TargetState t = make_target({0, 25}, {25, 25}, 1.0);
    const KnownTrajectory traj = trajectory_of(t, 30, 1.0);
    CHECK(earliest_intercept({25, 25}, traj, actions, cfg.detection_radius, cfg) == 5);
}

TEST_CASE("intercept time is zero when already inside the radius") {
    const WorldConfig cfg;
    const ActionSet actions = enumerate_action_set(cfg.radial_steps, cfg.num_angles);
    TargetState t;
    t.pos = {25, 27};
    t.poi = {25, 27};
    t.arrived = true;
    const KnownTrajectory traj = trajectory_of(t, 30, 1.0);
    const InterceptPlan plan = intercept_search({25, 25}, traj, actions, cfg.detection_radius, cfg);
    CHECK(plan.time == 0);
    CHECK(plan.action_indices.empty());
}

TEST_CASE("a stationary target at distance 8 is reached in one 3 m step") {
    const WorldConfig cfg;
    const ActionSet actions = enumerate_action_set(cfg.radial_steps, cfg.num_angles);
    TargetState t;
    t.pos = {33, 25};
    t.poi = {33, 25};
    t.arrived = true;
    const KnownTrajectory traj = trajectory_of(t, 30, 1.0);
    CHECK(earliest_intercept({25, 25}, traj, actions, cfg.detection_radius, cfg) == 1);
}

TEST_CASE("BFS agrees with exhaustive sequence search on small horizons") {
    WorldConfig cfg;
    cfg.area_width = 20;
    cfg.area_height = 20;
    cfg.episode_length = 6;
    cfg.poi_box_size = 6;
    const ActionSet actions = enumerate_action_set(cfg.radial_steps, cfg.num_angles);
    Rng rng(61);
    for (int trial = 0; trial < 25; ++trial) {
        const Vec2 spawn{rng.uniform_int(2) ? 0.0 : 20.0, rng.uniform(0, 20)};
        const Vec2 poi{rng.uniform(7, 13), rng.uniform(7, 13)};
        const TargetState t = make_target(spawn, poi, 1.0);
        const KnownTrajectory traj = trajectory_of(t, cfg.episode_length, cfg.dt);
        const Vec2 start{static_cast<double>(rng.uniform_int(21)),
                         static_cast<double>(rng.uniform_int(21))};
        const int bfs = earliest_intercept(start, traj, actions, cfg.detection_radius, cfg);
        const int brute = exhaustive_intercept(start, traj, actions, cfg.detection_radius, cfg);
        CHECK(bfs == brute);
    }
}

TEST_CASE("the BFS path is admissible and ends within the radius at the intercept step") {
    const WorldConfig cfg;
    const ActionSet actions = enumerate_action_set(cfg.radial_steps, cfg.num_angles);
    Rng rng(62);
    for (int trial = 0; trial < 30; ++trial) {
        Rng env(seed_stream(1000, {static_cast<std::uint64_t>(trial)}));
        const WorldState w = spawn_episode(cfg, env);
        const auto trajs = precompute_trajectories(w.targets, cfg.episode_length, cfg.dt);
        const InterceptPlan plan =
            intercept_search({25, 25}, trajs[0], actions, cfg.detection_radius, cfg);
        REQUIRE(plan.time <= cfg.episode_length);
        AgentState agent{{25, 25}};
        for (int t = 1; t <= plan.time; ++t)
            agent = apply_action(agent, actions[plan.action_indices[t - 1]], cfg);
        CHECK(dist(agent.pos, trajs[0].positions[plan.time]) <= cfg.detection_radius);
    }
}

TEST_CASE("greedy tracking holds a slower target for the rest of the episode") {
    WorldConfig cfg;
    cfg.area_width = 200;  // open field, walls out of play
    cfg.area_height = 200;
    cfg.poi_box_size = 10;
    const ActionSet actions = enumerate_action_set(cfg.radial_steps, cfg.num_angles);
    const Vec2 center{100, 100};
    for (int angle_idx = 0; angle_idx < 16; ++angle_idx) {
        const double theta = angle_idx * 2.0 * 3.14159265358979 / 16.0;
        const Vec2 poi{center.x + 60 * std::cos(theta), center.y + 60 * std::sin(theta)};
        const TargetState target = make_target(center, poi, 1.0);
        const KnownTrajectory traj = trajectory_of(target, 30, 1.0);
        for (double dx = -5.0; dx <= 5.0; dx += 0.5) {
            for (double dy = -5.0; dy <= 5.0; dy += 0.5) {
                if (dx * dx + dy * dy > 25.0) continue;  // only offsets within R0
                Vec2 pos{center.x + dx, center.y + dy};
                for (int t = 1; t <= 30; ++t) {
                    const int a = greedy_tracking_action(pos, traj.positions[t], actions, cfg);
                    pos = pos + actions[a].displacement;
                    REQUIRE(dist(pos, traj.positions[t]) <= 5.0);
                }
            }
        }
    }
}

TEST_CASE("assignment planning matches the per-target intercept bound") {
    WorldConfig cfg;
    cfg.num_agents = 4;
    const ActionSet actions = enumerate_action_set(cfg.radial_steps, cfg.num_angles);
    Rng env(2718);
    const WorldState w = spawn_episode(cfg, env);
    const auto trajs = precompute_trajectories(w.targets, cfg.episode_length, cfg.dt);

    int bound = 0;
    for (const auto& traj : trajs) {
        const int t0 = earliest_intercept({25, 25}, traj, actions, cfg.detection_radius, cfg);
        bound += cfg.episode_length - t0 + 1;
    }
    const JointPlan plan = assign_and_plan(w, trajs, actions, cfg);
    CHECK(plan.planned_utility == bound);
    CHECK(simulate_plan(w, plan, actions, cfg) == plan.planned_utility);
}

TEST_CASE("a single agent pins a slower target that starts inside its radius") {
    WorldConfig cfg;
    cfg.num_agents = 1;
    cfg.num_targets = 1;
    const ActionSet actions = enumerate_action_set(cfg.radial_steps, cfg.num_angles);
    WorldState w;
    w.agents = {{{25, 25}}};
    w.targets = {make_target({27, 25}, {23, 27}, 1.0)};
    const auto trajs = precompute_trajectories(w.targets, cfg.episode_length, cfg.dt);
    const JointPlan plan = assign_and_plan(w, trajs, actions, cfg);
    CHECK(plan.planned_utility == cfg.episode_length);
}

TEST_CASE("no targets means an empty plan with zero utility") {
    WorldConfig cfg;
    cfg.num_targets = 0;
    const ActionSet actions = enumerate_action_set(cfg.radial_steps, cfg.num_angles);
    WorldState w;
    w.agents = {{{25, 25}}, {{25, 25}}};
    const JointPlan plan = assign_and_plan(w, {}, actions, cfg);
    CHECK(plan.planned_utility == 0);
    CHECK(plan.assignment.empty());
}

TEST_CASE("degenerate world with both targets inside the radius scores the maximum") {
    WorldConfig cfg;
    cfg.num_agents = 2;
    const ActionSet actions = enumerate_action_set(cfg.radial_steps, cfg.num_angles);
    WorldState w;
    w.agents = {{{25, 25}}, {{25, 25}}};
    w.targets = {make_target({21, 25}, {24, 26}, 1.0), make_target({29, 25}, {26, 24}, 1.0)};
    const auto trajs = precompute_trajectories(w.targets, cfg.episode_length, cfg.dt);
    const JointPlan plan = assign_and_plan(w, trajs, actions, cfg);
    CHECK(plan.planned_utility == 2 * cfg.episode_length);
}

TEST_CASE("oracle statistics sit in the expected band at small scale") {
    const WorldConfig cfg;
    std::vector<std::uint64_t> seeds;
    for (int i = 0; i < 100; ++i) seeds.push_back(eval_env_seed(1, 0, i));
    const OracleStats stats = oracle_f(cfg, seeds, 1);
    CHECK(stats.per_episode.size() == 100);
    CHECK(stats.mean > 43.0);
    CHECK(stats.mean < 50.0);
}

TEST_CASE("the oracle dominates an untrained greedy policy on the same seeds") {
    ExperimentConfig cfg;
    cfg.world.num_agents = 2;
    cfg.threads = 1;
    std::vector<std::vector<QFunction>> zero(1);
    for (int j = 0; j < 2; ++j) zero[0].emplace_back(cfg.coder.hash_table_size, 9);
    const EvalSummary summary = evaluate(cfg, zero, 50);
    CHECK(summary.oracle_mean_f > summary.mean_f);
    CHECK(summary.normalized < 0.7);  // untrained agents sit far below the baseline
}
