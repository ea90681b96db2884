#include "rmab/policies.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <set>

namespace rmab {

void RmabInstance::validate() const {
    if (arms.empty()) throw std::invalid_argument("instance has no arms");
    for (std::size_t n = 0; n < arms.size(); ++n) {
        arms[n].validate("arm " + std::to_string(n + 1));
        if (arms[n].discount != discount) {
            throw std::invalid_argument("arm " + std::to_string(n + 1) +
                                        " discount differs from the instance discount");
        }
    }
    if (plays_per_step < 1 || plays_per_step > num_arms()) {
        throw std::invalid_argument("plays_per_step must lie in 1..N");
    }
}

void JointState::validate(const RmabInstance& instance) const {
    if (static_cast<int>(states.size()) != instance.num_arms()) {
        throw std::invalid_argument("joint state has " + std::to_string(states.size()) +
                                    " entries, expected " + std::to_string(instance.num_arms()));
    }
    for (int n = 0; n < instance.num_arms(); ++n) {
        if (states[n] < 1 || states[n] > instance.arms[n].num_states) {
            throw std::invalid_argument("state " + std::to_string(states[n]) + " of arm " +
                                        std::to_string(n + 1) + " is out of range");
        }
    }
}

void RolloutConfig::validate() const {
    if (horizon < 1) throw std::invalid_argument("rollout horizon must be >= 1");
    if (trajectories < 1) throw std::invalid_argument("rollout trajectories must be >= 1");
    if (candidate_limit < 0) throw std::invalid_argument("candidate_limit must be >= 0");
}

namespace {

// Indices (0-based) of the M largest scores, ties to the lowest index.
// Returned sorted ascending.
std::vector<int> top_m(const std::vector<double>& scores, int m) {
    std::vector<int> order(scores.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (scores[a] != scores[b]) return scores[a] > scores[b];
        return a < b;
    });
    order.resize(m);
    std::sort(order.begin(), order.end());
    return order;
}

std::vector<int> to_ids(std::vector<int> zero_based) {
    for (int& v : zero_based) ++v;
    return zero_based;
}

// Flattened per-arm tables for the inner simulation loops.
struct SimKernels {
    int num_arms;
    int plays;
    double beta;
    std::vector<int> k;                       // states per arm
    std::vector<std::vector<double>> r0, r1;  // rewards by 0-based state
    std::vector<std::vector<double>> cum0, cum1;  // K*K cumulative rows

    explicit SimKernels(const RmabInstance& inst)
        : num_arms(inst.num_arms()), plays(inst.plays_per_step), beta(inst.discount) {
        k.resize(num_arms);
        r0.resize(num_arms);
        r1.resize(num_arms);
        cum0.resize(num_arms);
        cum1.resize(num_arms);
        for (int n = 0; n < num_arms; ++n) {
            const ArmModel& arm = inst.arms[n];
            k[n] = arm.num_states;
            r0[n].resize(k[n]);
            r1[n].resize(k[n]);
            for (int s = 0; s < k[n]; ++s) {
                r0[n][s] = arm.rewards[s][0];
                r1[n][s] = arm.rewards[s][1];
            }
            auto cumulate = [&](const Matrix& p, std::vector<double>& cum) {
                cum.resize(k[n] * k[n]);
                for (int s = 0; s < k[n]; ++s) {
                    double acc = 0.0;
                    for (int t = 0; t < k[n]; ++t) {
                        acc += p[s][t];
                        cum[s * k[n] + t] = acc;
                    }
                }
            };
            cumulate(arm.passive_transitions, cum0[n]);
            cumulate(arm.active_transitions, cum1[n]);
        }
    }

    int sample_next(int arm, int state0, bool active, double u) const {
        const std::vector<double>& cum = active ? cum1[arm] : cum0[arm];
        const double* row = cum.data() + state0 * k[arm];
        for (int t = 0; t < k[arm] - 1; ++t) {
            if (u < row[t]) return t;
        }
        return k[arm] - 1;
    }

    // Myopic rule on 0-based states: marks the M arms with the highest
    // r(s,1) active in `active`, ties to the lowest arm.
    void myopic_mark(const std::vector<int>& states0, std::vector<char>& active) const {
        std::fill(active.begin(), active.end(), 0);
        for (int pick = 0; pick < plays; ++pick) {
            int best = -1;
            double best_r = 0.0;
            for (int n = 0; n < num_arms; ++n) {
                if (active[n]) continue;
                const double r = r1[n][states0[n]];
                if (best < 0 || r > best_r) {
                    best = n;
                    best_r = r;
                }
            }
            active[best] = 1;
        }
    }

    double step_reward(const std::vector<int>& states0, const std::vector<char>& active) const {
        double total = 0.0;
        for (int n = 0; n < num_arms; ++n) {
            total += active[n] ? r1[n][states0[n]] : r0[n][states0[n]];
        }
        return total;
    }
};

double estimate_with(const SimKernels& kern, const std::vector<int>& start0,
                     const std::vector<char>& initial_active, int horizon, int trajectories,
                     std::uint64_t rng_key, RolloutStats* stats) {
    const int n_arms = kern.num_arms;
    std::vector<int> states0(n_arms);
    std::vector<char> active(n_arms);

    double sum = 0.0, sumsq = 0.0;
    long long steps = 0;
    for (int l = 0; l < trajectories; ++l) {
        RngStream stream(derive_key(rng_key, static_cast<std::uint64_t>(l)));
        states0 = start0;
        double value = 0.0;
        double weight = 1.0;
        for (int h = 0; h < horizon; ++h) {
            if (h == 0) {
                active = initial_active;
            } else {
                kern.myopic_mark(states0, active);
            }
            value += weight * kern.step_reward(states0, active);
            weight *= kern.beta;
            // One draw per arm per step keeps the streams aligned across
            // candidate actions (common random numbers).
            for (int n = 0; n < n_arms; ++n) {
                const double u = stream.uniform();
                states0[n] = kern.sample_next(n, states0[n], active[n] != 0, u);
            }
            ++steps;
        }
        sum += value;
        sumsq += value * value;
    }
    const double mean = sum / trajectories;
    if (stats) {
        stats->value_mean = mean;
        stats->trajectory_steps = steps;
        stats->value_stddev =
            trajectories > 1
                ? std::sqrt(std::max(0.0, (sumsq - sum * sum / trajectories) / (trajectories - 1)))
                : 0.0;
    }
    return mean;
}

std::vector<char> mark_of(const std::vector<int>& ids, int n_arms) {
    std::vector<char> active(n_arms, 0);
    for (int id : ids) active[id - 1] = 1;
    return active;
}

}  // namespace

std::vector<int> myopic_action(const RmabInstance& instance, const JointState& state) {
    state.validate(instance);
    std::vector<double> scores(instance.num_arms());
    for (int n = 0; n < instance.num_arms(); ++n) {
        scores[n] = instance.arms[n].rewards[state.states[n] - 1][1];
    }
    return to_ids(top_m(scores, instance.plays_per_step));
}

std::vector<int> whittle_action(const RmabInstance& instance, const JointState& state,
                                const IndexTable& indices) {
    state.validate(instance);
    if (static_cast<int>(indices.per_arm.size()) != instance.num_arms()) {
        throw std::invalid_argument("index table covers " + std::to_string(indices.per_arm.size()) +
                                    " arms, instance has " + std::to_string(instance.num_arms()));
    }
    std::vector<double> scores(instance.num_arms());
    for (int n = 0; n < instance.num_arms(); ++n) {
        if (static_cast<int>(indices.per_arm[n].size()) != instance.arms[n].num_states) {
            throw std::invalid_argument("index table for arm " + std::to_string(n + 1) +
                                        " does not cover every state");
        }
        scores[n] = indices.per_arm[n][state.states[n] - 1];
    }
    return to_ids(top_m(scores, instance.plays_per_step));
}

std::vector<std::vector<int>> rollout_candidates(const RmabInstance& instance,
                                                 const JointState& state, int limit) {
    state.validate(instance);
    const int n_arms = instance.num_arms();
    const int m = instance.plays_per_step;

    if (m == 1) {
        // Every single-arm action is evaluated.
        std::vector<std::vector<int>> all;
        all.reserve(n_arms);
        for (int n = 1; n <= n_arms; ++n) all.push_back({n});
        return all;
    }

    if (limit < 1) limit = n_arms;
    // Rank M-subsets by their one-step reward sum. Only the active-passive
    // reward margin varies across subsets, so order arms by margin and run
    // a best-first search over index combinations.
    std::vector<int> order(n_arms);
    for (int n = 0; n < n_arms; ++n) order[n] = n;
    std::vector<double> margin(n_arms);
    for (int n = 0; n < n_arms; ++n) {
        const int s = state.states[n] - 1;
        margin[n] = instance.arms[n].rewards[s][1] - instance.arms[n].rewards[s][0];
    }
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (margin[a] != margin[b]) return margin[a] > margin[b];
        return a < b;
    });

    auto subset_ids = [&](const std::vector<int>& positions) {
        std::vector<int> ids;
        ids.reserve(positions.size());
        for (int p : positions) ids.push_back(order[p] + 1);
        std::sort(ids.begin(), ids.end());
        return ids;
    };
    auto subset_sum = [&](const std::vector<int>& positions) {
        double sum = 0.0;
        for (int p : positions) sum += margin[order[p]];
        return sum;
    };

    struct Entry {
        double sum;
        std::vector<int> ids;
        std::vector<int> positions;
    };
    auto worse = [](const Entry& a, const Entry& b) {
        if (a.sum != b.sum) return a.sum < b.sum;
        return a.ids > b.ids;
    };
    std::priority_queue<Entry, std::vector<Entry>, decltype(worse)> heap(worse);
    std::set<std::vector<int>> seen;

    std::vector<int> first(m);
    for (int i = 0; i < m; ++i) first[i] = i;
    heap.push({subset_sum(first), subset_ids(first), first});
    seen.insert(first);

    std::vector<std::vector<int>> candidates;
    while (!heap.empty() && static_cast<int>(candidates.size()) < limit) {
        Entry e = heap.top();
        heap.pop();
        candidates.push_back(e.ids);
        // Successors: bump any chosen position one slot to the right.
        for (int i = m - 1; i >= 0; --i) {
            std::vector<int> next = e.positions;
            ++next[i];
            if (next[i] >= n_arms) continue;
            if (i + 1 < m && next[i] >= next[i + 1]) continue;
            if (seen.insert(next).second) {
                heap.push({subset_sum(next), subset_ids(next), next});
            }
        }
    }
    return candidates;
}

double rollout_value_estimate(const RmabInstance& instance, const JointState& state,
                              const std::vector<int>& initial_action,
                              const RolloutConfig& config, std::uint64_t rng_key,
                              RolloutStats* stats) {
    instance.validate();
    state.validate(instance);
    config.validate();
    if (static_cast<int>(initial_action.size()) != instance.plays_per_step) {
        throw std::invalid_argument("initial action plays " +
                                    std::to_string(initial_action.size()) + " arms, expected " +
                                    std::to_string(instance.plays_per_step));
    }
    for (int id : initial_action) {
        if (id < 1 || id > instance.num_arms()) {
            throw std::invalid_argument("initial action names arm " + std::to_string(id) +
                                        ", out of range");
        }
    }

    const SimKernels kern(instance);
    std::vector<int> start0(instance.num_arms());
    for (int n = 0; n < instance.num_arms(); ++n) start0[n] = state.states[n] - 1;
    return estimate_with(kern, start0, mark_of(initial_action, instance.num_arms()),
                         config.horizon, config.trajectories, rng_key, stats);
}

std::vector<int> rollout_action(const RmabInstance& instance, const JointState& state,
                                const RolloutConfig& config, std::uint64_t rng_key,
                                std::vector<RolloutCandidate>* diagnostics,
                                long long* trajectory_steps) {
    instance.validate();
    state.validate(instance);
    config.validate();

    const SimKernels kern(instance);
    std::vector<int> start0(instance.num_arms());
    for (int n = 0; n < instance.num_arms(); ++n) start0[n] = state.states[n] - 1;

    const auto candidates = rollout_candidates(instance, state, config.candidate_limit);
    if (diagnostics) diagnostics->clear();
    if (trajectory_steps) *trajectory_steps = 0;

    std::vector<int> best;
    double best_score = 0.0;
    for (const auto& ids : candidates) {
        const auto active = mark_of(ids, instance.num_arms());
        RolloutStats stats;
        // The same rng_key for every candidate: trajectory substreams are
        // shared, so candidates are compared under common random numbers.
        const double q = estimate_with(kern, start0, active, config.horizon,
                                       config.trajectories, rng_key, &stats);
        const double immediate = kern.step_reward(start0, active);
        const double score = immediate + kern.beta * q;
        if (trajectory_steps) *trajectory_steps += stats.trajectory_steps;
        if (diagnostics) diagnostics->push_back({ids, immediate, q, score});
        if (best.empty() || score > best_score || (score == best_score && ids < best)) {
            best = ids;
            best_score = score;
        }
    }
    return best;
}

}  // namespace rmab
