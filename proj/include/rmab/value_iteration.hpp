#pragma once

#include <vector>

#include "rmab/arm_model.hpp"

namespace rmab {

struct SolverConfig {
    int max_iterations = 100000;     // T_max
    double value_tolerance = 1e-9;   // eps_V: stop when sup-norm step < this
    double action_tolerance = 1e-6;  // Delta: |Q1-Q0| below this counts as a tie

    void validate() const;
};

// Converged (or truncated) solution of the single-arm dynamic program at
// one subsidy value.
struct ValueTable {
    double subsidy = 0.0;
    std::vector<double> q_passive;  // Q(s, a=0, lambda)
    std::vector<double> q_active;   // Q(s, a=1, lambda)
    std::vector<double> values;     // V(s, lambda) = max of the two
    int iterations_used = 0;
    bool converged = false;
};

// One Bellman backup:
//   q_passive[s] = r(s,0) + lambda + beta * sum_s' p0[s][s'] * values_in[s']
//   q_active[s]  = r(s,1) +          beta * sum_s' p1[s][s'] * values_in[s']
//   values_out[s] = max(q_passive[s], q_active[s])
// Output vectors are resized to K. values_out may alias values_in.
// Throws std::invalid_argument if values_in does not have length K.
void bellman_backup(const ArmModel& model, double subsidy,
                    const std::vector<double>& values_in,
                    std::vector<double>& q_passive, std::vector<double>& q_active,
                    std::vector<double>& values_out);

// Value iteration from V = 0 until the sup-norm successive difference
// drops below config.value_tolerance or config.max_iterations backups
// have run. Non-convergence is reported through ValueTable::converged,
// not an exception. When residual_history is non-null it receives the
// sup-norm difference after every backup.
ValueTable solve_value_function(const ArmModel& model, double subsidy,
                                const SolverConfig& config,
                                std::vector<double>* residual_history = nullptr);

}  // namespace rmab
