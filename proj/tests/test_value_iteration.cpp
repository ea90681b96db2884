#include <cmath>
#include <future>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "rmab/fixtures.hpp"
#include "rmab/value_iteration.hpp"

using namespace rmab;

namespace {

ArmModel single_state(double r_passive, double r_active, double beta) {
    return make_arm(1, {{1.0}}, {{1.0}}, {{r_passive, r_active}}, beta);
}

}  // namespace

TEST_CASE("bellman backup: subsidy enters the passive branch only") {
    Matrix p = {{0.5, 0.5}, {0.5, 0.5}};
    ArmModel arm = make_arm(2, p, p, {{0.0, 0.0}, {0.0, 0.0}}, 0.9);
    std::vector<double> q0, q1, v;
    bellman_backup(arm, 0.5, {0.0, 0.0}, q0, q1, v);
    CHECK(q0 == std::vector<double>{0.5, 0.5});
    CHECK(q1 == std::vector<double>{0.0, 0.0});
    CHECK(v == std::vector<double>{0.5, 0.5});
}

TEST_CASE("bellman backup: single-state fixed point") {
    ArmModel arm = single_state(1.0, 1.0, 0.5);
    std::vector<double> q0, q1, v;
    bellman_backup(arm, 0.0, {2.0}, q0, q1, v);
    CHECK(q0[0] == doctest::Approx(2.0));
    CHECK(q1[0] == doctest::Approx(2.0));
    CHECK(v[0] == doctest::Approx(2.0));
}

TEST_CASE("bellman backup: dimension mismatch is rejected") {
    ArmModel arm = single_state(0.0, 1.0, 0.5);
    std::vector<double> q0, q1, v;
    CHECK_THROWS_AS(bellman_backup(arm, 0.0, {1.0, 2.0}, q0, q1, v), std::invalid_argument);
}

TEST_CASE("restart model: above the top reward, passivity dominates everywhere") {
    // Oracle: exact all-passive value via linear solve, then one backup.
    const ArmModel arm = load_fixture("restart5");
    const double lambda = 0.95;

    const std::vector<double> v_passive =
        oracles::exact_policy_value(arm, lambda, {0, 0, 0, 0, 0});
    std::vector<double> q0, q1, v;
    bellman_backup(arm, lambda, v_passive, q0, q1, v);
    for (int s = 0; s < 5; ++s) CHECK(q0[s] > q1[s]);

    // Iterating to convergence reaches the same conclusion.
    const ValueTable table = solve_value_function(arm, lambda, SolverConfig{});
    REQUIRE(table.converged);
    for (int s = 0; s < 5; ++s) {
        CHECK(table.q_passive[s] > table.q_active[s]);
        CHECK(table.values[s] == doctest::Approx(v_passive[s]).epsilon(1e-7));
    }
}

TEST_CASE("solve_value_function: geometric series") {
    SolverConfig config;

    SUBCASE("active-only reward, beta 0.9") {
        const ValueTable t = solve_value_function(single_state(0.0, 1.0, 0.9), 0.0, config);
        REQUIRE(t.converged);
        CHECK(t.values[0] == doctest::Approx(10.0).epsilon(config.value_tolerance / 0.1));
        CHECK(t.q_active[0] == doctest::Approx(10.0).epsilon(1e-7));
        CHECK(t.q_passive[0] == doctest::Approx(9.0).epsilon(1e-7));
    }

    SUBCASE("passive-only reward") {
        for (double beta : {0.3, 0.5, 0.9}) {
            const double c = 0.7;
            const ValueTable t = solve_value_function(single_state(c, 0.0, beta), 0.0, config);
            REQUIRE(t.converged);
            CHECK(t.values[0] == doctest::Approx(c / (1 - beta)).epsilon(1e-7));
        }
    }
}

TEST_CASE("solve_value_function: values match stationary-policy enumeration") {
    std::mt19937_64 rng(20240811);
    const ArmModel arm = oracles::random_arm(rng, 3, 0.9);
    const ValueTable table = solve_value_function(arm, 0.0, SolverConfig{});
    REQUIRE(table.converged);
    const std::vector<double> expected = oracles::brute_force_values(arm, 0.0);
    for (int s = 0; s < 3; ++s) {
        CHECK(std::abs(table.values[s] - expected[s]) < 1e-6);
    }
}

TEST_CASE("oracle equivalence across sizes and subsidies") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        const int k = 2 + static_cast<int>(rng() % 3);  // K in 2..4
        const ArmModel arm = oracles::random_arm(rng, k, 0.9);
        const double lambda = -1.0 + 2.0 * (trial / 19.0);
        const ValueTable table = solve_value_function(arm, lambda, SolverConfig{});
        REQUIRE(table.converged);
        const std::vector<double> expected = oracles::brute_force_values(arm, lambda);
        for (int s = 0; s < k; ++s) {
            CHECK(std::abs(table.values[s] - expected[s]) < 1e-6);
        }
    }
}

TEST_CASE("non-convergence is reported, not thrown") {
    SolverConfig config;
    config.max_iterations = 3;
    config.value_tolerance = 1e-12;
    const ValueTable t = solve_value_function(single_state(0.0, 1.0, 0.9), 0.0, config);
    CHECK_FALSE(t.converged);
    CHECK(t.iterations_used == 3);
}

TEST_CASE("contraction of successive differences") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 10; ++trial) {
        const ArmModel arm = oracles::random_arm(rng, 2 + static_cast<int>(rng() % 4), 0.9);
        std::vector<double> residuals;
        solve_value_function(arm, -0.5 + trial * 0.1, SolverConfig{}, &residuals);
        for (std::size_t i = 1; i < residuals.size(); ++i) {
            CHECK(residuals[i] <= arm.discount * residuals[i - 1] + 1e-12);
        }
    }
}

TEST_CASE("monotonicity in the subsidy") {
    std::mt19937_64 rng(123);
    const ArmModel arm = oracles::random_arm(rng, 4, 0.9);
    SolverConfig config;
    config.value_tolerance = 1e-12;

    double prev_lambda = -1.0;
    ValueTable prev = solve_value_function(arm, prev_lambda, config);
    for (double lambda = -0.8; lambda <= 1.0 + 1e-12; lambda += 0.2) {
        const ValueTable cur = solve_value_function(arm, lambda, config);
        for (int s = 0; s < 4; ++s) {
            CHECK(cur.values[s] >= prev.values[s] - 1e-9);
            // Q(s,0,.) grows at least as fast as the subsidy itself.
            CHECK(cur.q_passive[s] - prev.q_passive[s] >= (lambda - prev_lambda) - 1e-9);
        }
        prev = cur;
        prev_lambda = lambda;
    }
}

TEST_CASE("reward shift moves values by c/(1-beta) and keeps actions") {
    std::mt19937_64 rng(456);
    const ArmModel arm = oracles::random_arm(rng, 4, 0.9);
    const double c = 2.5;
    ArmModel shifted = arm;
    for (auto& r : shifted.rewards) {
        r[0] += c;
        r[1] += c;
    }

    SolverConfig config;
    config.value_tolerance = 1e-12;
    const double lambda = 0.3;
    const ValueTable a = solve_value_function(arm, lambda, config);
    const ValueTable b = solve_value_function(shifted, lambda, config);
    const double shift = c / (1 - arm.discount);
    for (int s = 0; s < 4; ++s) {
        CHECK(std::abs((b.values[s] - a.values[s]) - shift) < 1e-8);
        const double gap_a = a.q_active[s] - a.q_passive[s];
        const double gap_b = b.q_active[s] - b.q_passive[s];
        if (std::abs(gap_a) > config.action_tolerance) {
            CHECK((gap_a > 0) == (gap_b > 0));
        }
    }
}

TEST_CASE("concurrent solves on a shared model agree") {
    std::mt19937_64 rng(31337);
    const ArmModel arm = oracles::random_arm(rng, 4, 0.9);
    auto run = [&arm](double lambda) { return solve_value_function(arm, lambda, SolverConfig{}); };
    auto f1 = std::async(std::launch::async, run, 0.2);
    auto f2 = std::async(std::launch::async, run, 0.2);
    const ValueTable a = f1.get();
    const ValueTable b = f2.get();
    CHECK(a.values == b.values);
    CHECK(a.iterations_used == b.iterations_used);
}
