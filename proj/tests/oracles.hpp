#pragma once

// Independent oracles used only by tests: exact linear-algebra policy
// evaluation, stationary-policy enumeration, exact expectations by joint
// chain enumeration, random model generators and a small CSV reader.
// Nothing here shares code with the solver paths it checks.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "rmab/arm_model.hpp"
#include "rmab/policies.hpp"

namespace oracles {

// Gaussian elimination with partial pivoting; a is row-major n x n.
std::vector<double> linsolve(std::vector<std::vector<double>> a, std::vector<double> b);

// Exact value of the stationary deterministic policy given by one action
// per state, via (I - beta*P_pi)^-1 r_pi with the subsidy paid on passive
// states.
std::vector<double> exact_policy_value(const rmab::ArmModel& arm, double lambda,
                                       const std::vector<int>& actions);

// Pointwise max over all 2^K stationary deterministic policies.
std::vector<double> brute_force_values(const rmab::ArmModel& arm, double lambda);

// Optimal actions derived from the brute-force value function by one
// Q-comparison; gap_out receives Q1 - Q0.
std::vector<int> brute_force_actions(const rmab::ArmModel& arm, double lambda,
                                     std::vector<double>* gap_out = nullptr);

// Random row-stochastic model with uniform [0,1] rewards.
rmab::ArmModel random_arm(std::mt19937_64& rng, int num_states, double beta);

// Random model satisfying all four structural threshold conditions in the
// non-decreasing direction: constant passive kernel, actively shifted
// mass toward the top state growing with s, constant passive reward and
// non-decreasing active reward.
rmab::ArmModel random_monotone_arm(std::mt19937_64& rng, int num_states, double beta);

// Exact H-step rollout expectation under "initial action then myopic",
// by full enumeration of the joint transition tree.
double exact_rollout_expectation(const rmab::RmabInstance& instance,
                                 const rmab::JointState& state,
                                 const std::vector<int>& initial_action, int horizon);

// Exact mean discounted cumulative reward of the myopic policy over T
// steps, averaged over the uniform initial joint distribution, by dynamic
// programming over the joint chain.
double exact_myopic_sim_expectation(const rmab::RmabInstance& instance, int horizon_steps);

// Rows of comma-separated fields.
std::vector<std::vector<std::string>> read_csv(const std::string& text);

}  // namespace oracles
