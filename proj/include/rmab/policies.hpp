#pragma once

#include <cstdint>
#include <vector>

#include "rmab/arm_model.hpp"
#include "rmab/rng.hpp"

namespace rmab {

// N possibly non-identical arms sharing one discount factor; exactly M
// arms are played per step.
struct RmabInstance {
    std::vector<ArmModel> arms;
    int plays_per_step = 1;  // M
    double discount = 0.0;   // shared beta

    int num_arms() const { return static_cast<int>(arms.size()); }
    void validate() const;
};

// One state per arm, 1-based.
struct JointState {
    std::vector<int> states;

    void validate(const RmabInstance& instance) const;
};

// Precomputed Whittle indices, one vector per arm; per_arm[n][s-1] is the
// index of arm n+1 in state s. Only meaningful for indexable arms.
struct IndexTable {
    std::vector<std::vector<double>> per_arm;
};

struct RolloutConfig {
    int horizon = 4;          // H, look-ahead length
    int trajectories = 30;    // L
    int candidate_limit = 0;  // |A| for M > 1; 0 means "number of arms"
    std::uint64_t seed = 0;   // stream seed for stand-alone use

    void validate() const;
};

// Per-candidate diagnostics from a rollout decision. `score` is the
// improvement objective r~ + beta*Q~ actually maximized; `q_estimate`
// alone is the plain H-step look-ahead value, kept so the two rankings
// can be compared.
struct RolloutCandidate {
    std::vector<int> arms;  // 1-based, sorted
    double immediate = 0.0;    // r~(X, xi): one-step reward from all arms
    double q_estimate = 0.0;   // Q~_{H,L}(X, xi)
    double score = 0.0;        // immediate + beta * q_estimate
};

struct RolloutStats {
    double value_mean = 0.0;
    double value_stddev = 0.0;        // sample stddev across trajectories
    long long trajectory_steps = 0;   // simulated (trajectory, step) pairs
};

// The M arms with the highest immediate active rewards r(s,1); ties go to
// the lowest arm identifier. Returns sorted 1-based identifiers.
std::vector<int> myopic_action(const RmabInstance& instance, const JointState& state);

// The M arms with the highest Whittle indices at their current states.
// Throws std::invalid_argument if the table does not cover every arm.
std::vector<int> whittle_action(const RmabInstance& instance, const JointState& state,
                                const IndexTable& indices);

// Mean over L simulated trajectories of the discounted H-step reward sum,
// applying initial_action at the first step and the myopic rule after.
// All arms transition every step (active matrix if played, passive if
// not) and all arms contribute their state-action reward.
double rollout_value_estimate(const RmabInstance& instance, const JointState& state,
                              const std::vector<int>& initial_action,
                              const RolloutConfig& config, std::uint64_t rng_key,
                              RolloutStats* stats = nullptr);

// One-step improvement over the myopic base policy: picks the candidate
// action maximizing r~ + beta*Q~. For M=1 all N single-arm actions are
// candidates; for M>1 the candidate_limit subsets with the highest
// one-step reward r~ are evaluated. Score ties go to the
// lexicographically smallest arm set. Trajectory substreams are derived
// per trajectory index, shared across candidates.
std::vector<int> rollout_action(const RmabInstance& instance, const JointState& state,
                                const RolloutConfig& config, std::uint64_t rng_key,
                                std::vector<RolloutCandidate>* diagnostics = nullptr,
                                long long* trajectory_steps = nullptr);

// Enumerates the candidate initial actions a rollout decision will score:
// all single arms for M=1, otherwise the `limit` M-subsets with the
// highest one-step reward sums, in decreasing-reward order (ties
// lexicographic).
std::vector<std::vector<int>> rollout_candidates(const RmabInstance& instance,
                                                 const JointState& state, int limit);

}  // namespace rmab
