#include "rmab/value_iteration.hpp"

#include <cmath>

namespace rmab {

void SolverConfig::validate() const {
    if (max_iterations < 1) throw std::invalid_argument("max_iterations must be >= 1");
    if (!(value_tolerance > 0.0)) throw std::invalid_argument("value_tolerance must be > 0");
    if (!(action_tolerance > 0.0)) throw std::invalid_argument("action_tolerance must be > 0");
}

void bellman_backup(const ArmModel& model, double subsidy,
                    const std::vector<double>& values_in,
                    std::vector<double>& q_passive, std::vector<double>& q_active,
                    std::vector<double>& values_out) {
    const int k = model.num_states;
    if (static_cast<int>(values_in.size()) != k) {
        throw std::invalid_argument("bellman_backup: values_in has length " +
                                    std::to_string(values_in.size()) + ", expected " +
                                    std::to_string(k));
    }
    q_passive.resize(k);
    q_active.resize(k);
    const double beta = model.discount;
    for (int s = 0; s < k; ++s) {
        const auto& p0 = model.passive_transitions[s];
        const auto& p1 = model.active_transitions[s];
        double e0 = 0.0, e1 = 0.0;
        for (int t = 0; t < k; ++t) {
            e0 += p0[t] * values_in[t];
            e1 += p1[t] * values_in[t];
        }
        q_passive[s] = model.rewards[s][0] + subsidy + beta * e0;
        q_active[s] = model.rewards[s][1] + beta * e1;
    }
    // values_out may alias values_in, so write only after both reads.
    values_out.resize(k);
    for (int s = 0; s < k; ++s) values_out[s] = std::max(q_passive[s], q_active[s]);
}

ValueTable solve_value_function(const ArmModel& model, double subsidy,
                                const SolverConfig& config,
                                std::vector<double>* residual_history) {
    config.validate();
    const int k = model.num_states;

    ValueTable table;
    table.subsidy = subsidy;
    table.values.assign(k, 0.0);
    if (residual_history) residual_history->clear();

    std::vector<double> next(k);
    for (int it = 0; it < config.max_iterations; ++it) {
        bellman_backup(model, subsidy, table.values, table.q_passive, table.q_active, next);
        double diff = 0.0;
        for (int s = 0; s < k; ++s) diff = std::max(diff, std::abs(next[s] - table.values[s]));
        table.values.swap(next);
        table.iterations_used = it + 1;
        if (residual_history) residual_history->push_back(diff);
        if (diff < config.value_tolerance) {
            table.converged = true;
            break;
        }
    }
    return table;
}

}  // namespace rmab
