#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

namespace rmab {

using Matrix = std::vector<std::vector<double>>;

// A single restless arm: a two-action MDP on states 1..K where the
// passive action (a=0) also moves the state and also pays a reward.
//
// States are 1-indexed in every report, file and error message; vector
// storage is 0-indexed, so entry [s][s'] is the transition from state
// s+1 to state s'+1.
struct ArmModel {
    int num_states = 0;            // K
    Matrix passive_transitions;    // K x K, row-stochastic (action 0)
    Matrix active_transitions;     // K x K, row-stochastic (action 1)
    std::vector<std::array<double, 2>> rewards;  // rewards[s][a]
    double discount = 0.0;         // beta in (0,1)

    // Throws std::invalid_argument if any invariant fails:
    // rows must sum to 1 within 1e-9 with entries in [0,1], rewards must
    // be finite, and 0 < discount < 1. `label` prefixes error messages.
    void validate(const std::string& label = "arm") const;

    double min_reward() const;
    double max_reward() const;
    double max_abs_reward() const;
};

// Builds an arm from row-major data; validates before returning.
ArmModel make_arm(int num_states, Matrix passive, Matrix active,
                  std::vector<std::array<double, 2>> rewards, double discount);

}  // namespace rmab
