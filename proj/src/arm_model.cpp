#include "rmab/arm_model.hpp"

#include <cmath>
#include <limits>

namespace rmab {

namespace {

void check_matrix(const Matrix& m, int k, const std::string& label,
                  const std::string& which) {
    if (static_cast<int>(m.size()) != k) {
        throw std::invalid_argument(label + ": " + which + " has " +
                                    std::to_string(m.size()) + " rows, expected " +
                                    std::to_string(k));
    }
    for (int s = 0; s < k; ++s) {
        const auto& row = m[s];
        if (static_cast<int>(row.size()) != k) {
            throw std::invalid_argument(label + ": " + which + " row " +
                                        std::to_string(s + 1) + " has " +
                                        std::to_string(row.size()) + " entries, expected " +
                                        std::to_string(k));
        }
        double sum = 0.0;
        for (double p : row) {
            if (!(p >= 0.0 && p <= 1.0)) {
                throw std::invalid_argument(label + ": " + which + " row " +
                                            std::to_string(s + 1) +
                                            " has an entry outside [0,1]");
            }
            sum += p;
        }
        if (std::abs(sum - 1.0) > 1e-9) {
            throw std::invalid_argument(label + ": " + which + " row " +
                                        std::to_string(s + 1) + " sums to " +
                                        std::to_string(sum) + ", expected 1");
        }
    }
}

}  // namespace

void ArmModel::validate(const std::string& label) const {
    if (num_states < 1) {
        throw std::invalid_argument(label + ": num_states must be positive");
    }
    check_matrix(passive_transitions, num_states, label, "passive_transitions");
    check_matrix(active_transitions, num_states, label, "active_transitions");
    if (static_cast<int>(rewards.size()) != num_states) {
        throw std::invalid_argument(label + ": rewards has " +
                                    std::to_string(rewards.size()) + " rows, expected " +
                                    std::to_string(num_states));
    }
    for (int s = 0; s < num_states; ++s) {
        for (int a = 0; a < 2; ++a) {
            if (!std::isfinite(rewards[s][a])) {
                throw std::invalid_argument(label + ": reward (state " +
                                            std::to_string(s + 1) + ", action " +
                                            std::to_string(a) + ") is not finite");
            }
        }
    }
    if (!(discount > 0.0 && discount < 1.0)) {
        throw std::invalid_argument(label + ": discount must lie in (0,1)");
    }
}

double ArmModel::min_reward() const {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& r : rewards) m = std::min({m, r[0], r[1]});
    return m;
}

double ArmModel::max_reward() const {
    double m = -std::numeric_limits<double>::infinity();
    for (const auto& r : rewards) m = std::max({m, r[0], r[1]});
    return m;
}

double ArmModel::max_abs_reward() const {
    return std::max(std::abs(min_reward()), std::abs(max_reward()));
}

ArmModel make_arm(int num_states, Matrix passive, Matrix active,
                  std::vector<std::array<double, 2>> rewards, double discount) {
    ArmModel arm;
    arm.num_states = num_states;
    arm.passive_transitions = std::move(passive);
    arm.active_transitions = std::move(active);
    arm.rewards = std::move(rewards);
    arm.discount = discount;
    arm.validate();
    return arm;
}

}  // namespace rmab
