#pragma once

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "rmab/policies.hpp"

namespace rmab {

struct MyopicPolicy {};
struct WhittlePolicy {
    IndexTable indices;
};
struct RolloutPolicy {
    RolloutConfig config;
};
using PolicyChoice = std::variant<MyopicPolicy, WhittlePolicy, RolloutPolicy>;

struct SimulationConfig {
    int horizon_steps = 0;   // T
    int replications = 0;    // R
    std::uint64_t seed = 0;
    // Fixed starting point, or uniform-random per replication when unset.
    std::optional<JointState> initial_state;
    PolicyChoice policy = MyopicPolicy{};
    // Replication substreams are keyed by (seed, replication_offset + r),
    // so two runs of R/2 replications at offsets 0 and R/2 pool into
    // exactly the run with R replications.
    int replication_offset = 0;

    void validate() const;
};

struct SimulationTrace {
    // Mean over replications of the discounted cumulative reward through
    // step t, and its standard error, t = 0..T-1.
    std::vector<double> per_step_mean;
    std::vector<double> per_step_stderr;
    std::vector<double> final_value_per_replication;  // length R
};

// Runs R independent replications of T steps each. Every step the policy
// picks M arms, chosen arms transition under their active matrices and
// the rest under their passive matrices, and all N arms contribute their
// beta^t-weighted state-action reward. Environment draws come from a
// per-replication stream independent of any policy-internal randomness,
// so traces under different policies share the same transition noise.
// Throws std::invalid_argument before simulating if a Whittle policy is
// requested with an incomplete index table.
SimulationTrace simulate(const RmabInstance& instance, const SimulationConfig& config);

}  // namespace rmab
