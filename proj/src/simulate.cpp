#include "rmab/simulate.hpp"

#include <cmath>

namespace rmab {

namespace {

// Stream tags: initial states, environment transitions, policy-internal
// draws. Arbitrary distinct constants.
constexpr std::uint64_t kTagInit = 0x696e6974;
constexpr std::uint64_t kTagEnv = 0x656e76;
constexpr std::uint64_t kTagPolicy = 0x706f6c;

}  // namespace

void SimulationConfig::validate() const {
    if (horizon_steps < 1) throw std::invalid_argument("horizon_steps must be >= 1");
    if (replications < 1) throw std::invalid_argument("replications must be >= 1");
    if (replication_offset < 0) throw std::invalid_argument("replication_offset must be >= 0");
}

SimulationTrace simulate(const RmabInstance& instance, const SimulationConfig& config) {
    instance.validate();
    config.validate();
    if (config.initial_state) config.initial_state->validate(instance);

    const int n_arms = instance.num_arms();
    const int t_steps = config.horizon_steps;
    const double beta = instance.discount;

    const WhittlePolicy* whittle = std::get_if<WhittlePolicy>(&config.policy);
    const RolloutPolicy* rollout = std::get_if<RolloutPolicy>(&config.policy);
    if (whittle) {
        // Fail before simulating anything if the table is incomplete.
        if (static_cast<int>(whittle->indices.per_arm.size()) != n_arms) {
            throw std::invalid_argument("whittle policy: index table covers " +
                                        std::to_string(whittle->indices.per_arm.size()) +
                                        " arms, instance has " + std::to_string(n_arms));
        }
        for (int n = 0; n < n_arms; ++n) {
            if (static_cast<int>(whittle->indices.per_arm[n].size()) !=
                instance.arms[n].num_states) {
                throw std::invalid_argument("whittle policy: index table for arm " +
                                            std::to_string(n + 1) + " does not cover every state");
            }
        }
    }
    if (rollout) rollout->config.validate();

    SimulationTrace trace;
    trace.per_step_mean.assign(t_steps, 0.0);
    trace.per_step_stderr.assign(t_steps, 0.0);
    trace.final_value_per_replication.reserve(config.replications);

    // Welford accumulators per step.
    std::vector<double> mean(t_steps, 0.0), m2(t_steps, 0.0);

    JointState state;
    state.states.resize(n_arms);
    std::vector<int> played;

    for (int r = 0; r < config.replications; ++r) {
        const std::uint64_t rep = static_cast<std::uint64_t>(config.replication_offset + r);

        if (config.initial_state) {
            state = *config.initial_state;
        } else {
            RngStream init(derive_key(config.seed, kTagInit, rep));
            for (int n = 0; n < n_arms; ++n) {
                const int k = instance.arms[n].num_states;
                int s = 1 + static_cast<int>(init.uniform() * k);
                state.states[n] = s > k ? k : s;
            }
        }

        RngStream env(derive_key(config.seed, kTagEnv, rep));
        double cumulative = 0.0;
        double weight = 1.0;

        for (int t = 0; t < t_steps; ++t) {
            if (whittle) {
                played = whittle_action(instance, state, whittle->indices);
            } else if (rollout) {
                // Per-(replication, step) substream; the environment
                // stream is untouched, so policy choice does not perturb
                // the transition noise.
                played = rollout_action(instance, state, rollout->config,
                                        derive_key(config.seed, kTagPolicy, rep,
                                                   static_cast<std::uint64_t>(t)));
            } else {
                played = myopic_action(instance, state);
            }

            double step_reward = 0.0;
            auto it = played.begin();
            for (int n = 0; n < n_arms; ++n) {
                const bool active = (it != played.end() && *it == n + 1);
                if (active) ++it;
                step_reward += instance.arms[n].rewards[state.states[n] - 1][active ? 1 : 0];
            }
            cumulative += weight * step_reward;
            weight *= beta;

            const double delta = cumulative - mean[t];
            mean[t] += delta / (r + 1);
            m2[t] += delta * (cumulative - mean[t]);

            it = played.begin();
            for (int n = 0; n < n_arms; ++n) {
                const bool active = (it != played.end() && *it == n + 1);
                if (active) ++it;
                const ArmModel& arm = instance.arms[n];
                const auto& row = active ? arm.active_transitions[state.states[n] - 1]
                                         : arm.passive_transitions[state.states[n] - 1];
                const double u = env.uniform();
                double acc = 0.0;
                int next = arm.num_states;
                for (int s2 = 1; s2 <= arm.num_states; ++s2) {
                    acc += row[s2 - 1];
                    if (u < acc) {
                        next = s2;
                        break;
                    }
                }
                state.states[n] = next;
            }
        }
        trace.final_value_per_replication.push_back(cumulative);
    }

    const int reps = config.replications;
    for (int t = 0; t < t_steps; ++t) {
        trace.per_step_mean[t] = mean[t];
        trace.per_step_stderr[t] =
            reps > 1 ? std::sqrt(std::max(0.0, m2[t] / (reps - 1)) / reps) : 0.0;
    }
    return trace;
}

}  // namespace rmab
