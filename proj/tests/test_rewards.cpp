#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <vector>

#include "satrack/rewards.hpp"
#include "satrack/rng.hpp"

using namespace satrack;

namespace {

DetectionMatrix from_bits(int targets, int agents, unsigned bits) {
    DetectionMatrix d(targets, agents);
    for (int i = 0; i < targets; ++i)
        for (int j = 0; j < agents; ++j)
            d.set(i, j, (bits >> (i * agents + j)) & 1u);
    return d;
}

// counterfactual oracle: rebuild the matrix as if agent j did not exist
int reduced_world_reward(const DetectionMatrix& d, int skip_agent) {
    DetectionMatrix r(d.targets, d.agents - 1);
    for (int i = 0; i < d.targets; ++i) {
        int col = 0;
        for (int j = 0; j < d.agents; ++j) {
            if (j == skip_agent) continue;
            r.set(i, col++, d.at(i, j));
        }
    }
    return global_reward(r);
}

}  // namespace

TEST_CASE("target_detected is an indicator, not a count") {
    DetectionMatrix d(1, 4);
    d.set(0, 0, true);
    CHECK(target_detected(d, 0) == 1);

    DetectionMatrix none(1, 2);
    CHECK(target_detected(none, 0) == 0);

    DetectionMatrix both(1, 2);
    both.set(0, 0, true);
    both.set(0, 1, true);
    CHECK(target_detected(both, 0) == 1);
}

TEST_CASE("global reward counts distinct detected targets") {
    DetectionMatrix d(2, 2);
    d.set(0, 0, true);
    d.set(0, 1, true);
    CHECK(global_reward(d) == 1);

    d.set(1, 0, true);
    CHECK(global_reward(d) == 2);

    CHECK(global_reward(DetectionMatrix(0, 2)) == 0);
}

TEST_CASE("counterfactual zeroes one agent's column") {
    DetectionMatrix d(2, 3);
    d.set(0, 0, true);  // target 0 detected only by agent 0
    CHECK(counterfactual_reward(d, 0) == 0);

    d.set(0, 1, true);  // now redundantly covered
    CHECK(counterfactual_reward(d, 0) == 1);

    CHECK(counterfactual_reward(d, 2) == global_reward(d));  // agent 2 detects nothing
}

TEST_CASE("difference reward is the agent's marginal contribution") {
    DetectionMatrix solo(1, 3);
    solo.set(0, 1, true);
    CHECK(difference_reward(solo, 1) == 1);

    DetectionMatrix shared(1, 3);
    shared.set(0, 1, true);
    shared.set(0, 2, true);
    CHECK(difference_reward(shared, 1) == 0);

    DetectionMatrix both(2, 3);
    both.set(0, 0, true);
    both.set(1, 0, true);
    CHECK(difference_reward(both, 0) == 2);
}

TEST_CASE("exhaustive matrix enumeration: bounds and column-removal equivalence") {
    const int M = 2, N = 4;
    for (unsigned bits = 0; bits < (1u << (M * N)); ++bits) {
        const DetectionMatrix d = from_bits(M, N, bits);
        const int g = global_reward(d);
        CHECK(g <= M);
        int unique_covered = 0;
        for (int i = 0; i < M; ++i) {
            int covering = 0;
            for (int j = 0; j < N; ++j) covering += d.at(i, j);
            unique_covered += covering == 1;
        }
        int d_sum = 0;
        for (int j = 0; j < N; ++j) {
            const int dj = difference_reward(d, j);
            CHECK(dj >= 0);
            CHECK(dj <= g);
            CHECK(counterfactual_reward(d, j) == reduced_world_reward(d, j));
            d_sum += dj;
        }
        CHECK(d_sum == unique_covered);  // each uniquely-covered target pays exactly one agent
        CHECK(d_sum <= g * N);
    }
}

TEST_CASE("geometric counterfactual: removing the agent from the world agrees") {
    const WorldConfig cfg;
    Rng rng(404);
    for (int trial = 0; trial < 500; ++trial) {
        std::vector<AgentState> agents;
        for (int j = 0; j < 4; ++j)
            agents.push_back({{rng.uniform(15, 35), rng.uniform(15, 35)}});
        std::vector<TargetState> targets;
        for (int i = 0; i < 2; ++i) {
            TargetState t;
            t.pos = {rng.uniform(15, 35), rng.uniform(15, 35)};
            targets.push_back(t);
        }
        const DetectionMatrix d = detection_matrix(agents, targets, cfg.detection_radius);
        for (int j = 0; j < 4; ++j) {
            std::vector<AgentState> without = agents;
            without.erase(without.begin() + j);
            const int oracle =
                global_reward(detection_matrix(without, targets, cfg.detection_radius));
            CHECK(counterfactual_reward(d, j) == oracle);
        }
    }
}

TEST_CASE("episode utility sums global rewards over the horizon") {
    const int T = 30;
    std::vector<DetectionMatrix> all_detected(T, DetectionMatrix(2, 2));
    for (auto& d : all_detected) {
        d.set(0, 0, true);
        d.set(1, 1, true);
    }
    CHECK(episode_utility(all_detected) == 60);

    std::vector<DetectionMatrix> none(T, DetectionMatrix(2, 2));
    CHECK(episode_utility(none) == 0);

    // both targets detected from step 11 through 30
    std::vector<DetectionMatrix> late(T, DetectionMatrix(2, 2));
    for (int t = 10; t < T; ++t) {
        late[t].set(0, 0, true);
        late[t].set(1, 1, true);
    }
    CHECK(episode_utility(late) == 40);
}
