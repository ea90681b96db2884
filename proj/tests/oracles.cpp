#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>
#include <stdexcept>

namespace oracles {

using rmab::ArmModel;
using rmab::JointState;
using rmab::Matrix;
using rmab::RmabInstance;

std::vector<double> linsolve(std::vector<std::vector<double>> a, std::vector<double> b) {
    const int n = static_cast<int>(b.size());
    for (int col = 0; col < n; ++col) {
        int pivot = col;
        for (int row = col + 1; row < n; ++row) {
            if (std::abs(a[row][col]) > std::abs(a[pivot][col])) pivot = row;
        }
        if (std::abs(a[pivot][col]) < 1e-14) throw std::runtime_error("singular system");
        std::swap(a[col], a[pivot]);
        std::swap(b[col], b[pivot]);
        for (int row = col + 1; row < n; ++row) {
            const double f = a[row][col] / a[col][col];
            for (int k = col; k < n; ++k) a[row][k] -= f * a[col][k];
            b[row] -= f * b[col];
        }
    }
    std::vector<double> x(n);
    for (int row = n - 1; row >= 0; --row) {
        double acc = b[row];
        for (int k = row + 1; k < n; ++k) acc -= a[row][k] * x[k];
        x[row] = acc / a[row][row];
    }
    return x;
}

std::vector<double> exact_policy_value(const ArmModel& arm, double lambda,
                                       const std::vector<int>& actions) {
    const int k = arm.num_states;
    std::vector<std::vector<double>> a(k, std::vector<double>(k, 0.0));
    std::vector<double> b(k);
    for (int s = 0; s < k; ++s) {
        const auto& row =
            actions[s] == 1 ? arm.active_transitions[s] : arm.passive_transitions[s];
        for (int t = 0; t < k; ++t) a[s][t] = (s == t ? 1.0 : 0.0) - arm.discount * row[t];
        b[s] = arm.rewards[s][actions[s]] + (actions[s] == 0 ? lambda : 0.0);
    }
    return linsolve(std::move(a), std::move(b));
}

std::vector<double> brute_force_values(const ArmModel& arm, double lambda) {
    const int k = arm.num_states;
    std::vector<double> best(k, -1e300);
    for (int mask = 0; mask < (1 << k); ++mask) {
        std::vector<int> actions(k);
        for (int s = 0; s < k; ++s) actions[s] = (mask >> s) & 1;
        const std::vector<double> v = exact_policy_value(arm, lambda, actions);
        for (int s = 0; s < k; ++s) best[s] = std::max(best[s], v[s]);
    }
    return best;
}

std::vector<int> brute_force_actions(const ArmModel& arm, double lambda,
                                     std::vector<double>* gap_out) {
    const int k = arm.num_states;
    const std::vector<double> v = brute_force_values(arm, lambda);
    std::vector<int> actions(k);
    if (gap_out) gap_out->resize(k);
    for (int s = 0; s < k; ++s) {
        double e0 = 0.0, e1 = 0.0;
        for (int t = 0; t < k; ++t) {
            e0 += arm.passive_transitions[s][t] * v[t];
            e1 += arm.active_transitions[s][t] * v[t];
        }
        const double q0 = arm.rewards[s][0] + lambda + arm.discount * e0;
        const double q1 = arm.rewards[s][1] + arm.discount * e1;
        actions[s] = q1 > q0 ? 1 : 0;
        if (gap_out) (*gap_out)[s] = q1 - q0;
    }
    return actions;
}

namespace {

std::vector<double> random_distribution(std::mt19937_64& rng, int n) {
    std::uniform_real_distribution<double> u(0.01, 1.0);
    std::vector<double> row(n);
    double sum = 0.0;
    for (double& p : row) {
        p = u(rng);
        sum += p;
    }
    for (double& p : row) p /= sum;
    return row;
}

}  // namespace

ArmModel random_arm(std::mt19937_64& rng, int num_states, double beta) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Matrix p0, p1;
    for (int s = 0; s < num_states; ++s) {
        p0.push_back(random_distribution(rng, num_states));
        p1.push_back(random_distribution(rng, num_states));
    }
    std::vector<std::array<double, 2>> rewards(num_states);
    for (auto& r : rewards) r = {u(rng), u(rng)};
    return rmab::make_arm(num_states, p0, p1, rewards, beta);
}

ArmModel random_monotone_arm(std::mt19937_64& rng, int num_states, double beta) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const std::vector<double> kappa = random_distribution(rng, num_states);
    const std::vector<double> base = random_distribution(rng, num_states);

    std::vector<double> weight(num_states);
    for (double& w : weight) w = u(rng);
    std::sort(weight.begin(), weight.end());

    Matrix p0(num_states, kappa);
    Matrix p1(num_states, std::vector<double>(num_states));
    for (int s = 0; s < num_states; ++s) {
        for (int t = 0; t < num_states; ++t) {
            p1[s][t] = (1.0 - weight[s]) * base[t] + (t == num_states - 1 ? weight[s] : 0.0);
        }
    }

    const double passive_reward = u(rng);
    std::vector<std::array<double, 2>> rewards(num_states);
    double active = passive_reward;
    for (int s = 0; s < num_states; ++s) {
        rewards[s] = {passive_reward, active};
        active += 0.3 * u(rng);
    }
    return rmab::make_arm(num_states, p0, p1, rewards, beta);
}

namespace {

std::vector<int> myopic_marks(const RmabInstance& instance, const std::vector<int>& states0) {
    const int n = instance.num_arms();
    std::vector<int> marks(n, 0);
    for (int pick = 0; pick < instance.plays_per_step; ++pick) {
        int best = -1;
        double best_r = 0.0;
        for (int i = 0; i < n; ++i) {
            if (marks[i]) continue;
            const double r = instance.arms[i].rewards[states0[i]][1];
            if (best < 0 || r > best_r) {
                best = i;
                best_r = r;
            }
        }
        marks[best] = 1;
    }
    return marks;
}

double step_reward(const RmabInstance& instance, const std::vector<int>& states0,
                   const std::vector<int>& marks) {
    double total = 0.0;
    for (int n = 0; n < instance.num_arms(); ++n) {
        total += instance.arms[n].rewards[states0[n]][marks[n]];
    }
    return total;
}

// Expectation over all joint successor states, as a weighted recursion.
double transition_expectation(const RmabInstance& instance, const std::vector<int>& states0,
                              const std::vector<int>& marks,
                              const std::function<double(const std::vector<int>&)>& tail) {
    const int n = instance.num_arms();
    std::vector<int> next(n);
    std::function<double(int, double)> rec = [&](int arm, double prob) -> double {
        if (prob == 0.0) return 0.0;
        if (arm == n) return prob * tail(next);
        const auto& row = marks[arm] ? instance.arms[arm].active_transitions[states0[arm]]
                                     : instance.arms[arm].passive_transitions[states0[arm]];
        double acc = 0.0;
        for (int t = 0; t < instance.arms[arm].num_states; ++t) {
            next[arm] = t;
            acc += rec(arm + 1, prob * row[t]);
        }
        return acc;
    };
    return rec(0, 1.0);
}

}  // namespace

double exact_rollout_expectation(const RmabInstance& instance, const JointState& state,
                                 const std::vector<int>& initial_action, int horizon) {
    std::vector<int> states0(instance.num_arms());
    for (int n = 0; n < instance.num_arms(); ++n) states0[n] = state.states[n] - 1;

    std::function<double(const std::vector<int>&, int)> value =
        [&](const std::vector<int>& s, int h) -> double {
        if (h == horizon) return 0.0;
        std::vector<int> marks;
        if (h == 0) {
            marks.assign(instance.num_arms(), 0);
            for (int id : initial_action) marks[id - 1] = 1;
        } else {
            marks = myopic_marks(instance, s);
        }
        const double r = step_reward(instance, s, marks);
        const double cont = transition_expectation(
            instance, s, marks, [&](const std::vector<int>& next) { return value(next, h + 1); });
        return r + instance.discount * cont;
    };
    return value(states0, 0);
}

double exact_myopic_sim_expectation(const RmabInstance& instance, int horizon_steps) {
    // Backward dynamic program over the joint state space under the
    // myopic decision rule, discount applied per remaining depth.
    const int n = instance.num_arms();
    std::vector<int> sizes(n);
    int total = 1;
    for (int i = 0; i < n; ++i) {
        sizes[i] = instance.arms[i].num_states;
        total *= sizes[i];
    }
    auto decode = [&](int code) {
        std::vector<int> s(n);
        for (int i = 0; i < n; ++i) {
            s[i] = code % sizes[i];
            code /= sizes[i];
        }
        return s;
    };
    auto encode = [&](const std::vector<int>& s) {
        int code = 0;
        for (int i = n - 1; i >= 0; --i) code = code * sizes[i] + s[i];
        return code;
    };

    std::vector<double> value(total, 0.0);
    for (int depth = 0; depth < horizon_steps; ++depth) {
        std::vector<double> next(total);
        for (int code = 0; code < total; ++code) {
            const std::vector<int> s = decode(code);
            const std::vector<int> marks = myopic_marks(instance, s);
            const double cont = transition_expectation(
                instance, s, marks,
                [&](const std::vector<int>& ns) { return value[encode(ns)]; });
            next[code] = step_reward(instance, s, marks) + instance.discount * cont;
        }
        value.swap(next);
    }

    double mean = 0.0;
    for (int code = 0; code < total; ++code) mean += value[code];
    return mean / total;
}

std::vector<std::vector<std::string>> read_csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream lines(text);
    std::string line;
    while (std::getline(lines, line)) {
        std::vector<std::string> fields;
        std::istringstream cells(line);
        std::string cell;
        while (std::getline(cells, cell, ',')) fields.push_back(cell);
        if (!line.empty() && line.back() == ',') fields.push_back("");
        rows.push_back(std::move(fields));
    }
    return rows;
}

}  // namespace oracles
