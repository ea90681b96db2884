#include "rmab/indexability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace rmab {

void SubsidyGrid::validate() const {
    if (points.size() < 2) throw std::invalid_argument("subsidy grid needs at least 2 points");
    for (std::size_t i = 1; i < points.size(); ++i) {
        if (!(points[i] > points[i - 1])) {
            throw std::invalid_argument("subsidy grid must be strictly increasing");
        }
    }
}

double SubsidyGrid::spacing() const {
    double gap = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < points.size(); ++i) gap = std::min(gap, points[i] - points[i - 1]);
    return gap;
}

SubsidyGrid SubsidyGrid::linspace(double lo, double hi, int n) {
    SubsidyGrid grid;
    grid.points.resize(n);
    for (int i = 0; i < n; ++i) grid.points[i] = lo + i * (hi - lo) / (n - 1);
    grid.validate();
    return grid;
}

SubsidyGrid SubsidyGrid::default_for(const ArmModel& model) {
    const double rmin = model.min_reward();
    const double rmax = model.max_reward();
    // Indices lie within the reward span; the extra margin and the [-1,1]
    // widening keep the grid comparable across the benchmark models.
    double lo = rmin - (rmax - rmin) - 0.1;
    double hi = rmax + 0.1;
    lo = std::min(lo, -1.0);
    hi = std::max(hi, 1.0);
    return linspace(lo, hi, 201);
}

PolicyMatrix compute_policy_matrix(const ArmModel& model, const SubsidyGrid& grid,
                                   const SolverConfig& config) {
    model.validate();
    grid.validate();
    config.validate();

    const int k = model.num_states;
    const int j_count = grid.size();

    PolicyMatrix pm;
    pm.grid = grid;
    pm.action_tolerance = config.action_tolerance;
    pm.actions.assign(k, std::vector<int>(j_count, 0));
    pm.q_gap.assign(k, std::vector<double>(j_count, 0.0));

    for (int j = 0; j < j_count; ++j) {
        const double lambda = grid.points[j];
        const ValueTable table = solve_value_function(model, lambda, config);
        if (!table.converged) {
            SolveError err("value iteration did not converge at subsidy " +
                           std::to_string(lambda) + " within " +
                           std::to_string(config.max_iterations) + " iterations");
            err.subsidy = lambda;
            throw err;
        }
        for (int s = 0; s < k; ++s) {
            const double gap = table.q_active[s] - table.q_passive[s];
            pm.q_gap[s][j] = gap;
            // Ties go to the passive action.
            pm.actions[s][j] = (std::abs(gap) < config.action_tolerance) ? 0 : (gap > 0.0 ? 1 : 0);
        }
    }
    return pm;
}

std::set<int> passive_set(const PolicyMatrix& pm, int j) {
    if (j < 1 || j > pm.grid.size()) {
        throw std::invalid_argument("passive_set: grid position " + std::to_string(j) +
                                    " out of range 1.." + std::to_string(pm.grid.size()));
    }
    std::set<int> states;
    for (int s = 0; s < pm.num_states(); ++s) {
        if (pm.actions[s][j - 1] == 0) states.insert(s + 1);
    }
    return states;
}

IndexReport verify_indexability(const PolicyMatrix& pm) {
    const int k = pm.num_states();
    const int j_count = pm.grid.size();

    IndexReport report;
    report.num_states = k;
    report.passive_sets.reserve(j_count);
    for (int j = 1; j <= j_count; ++j) report.passive_sets.push_back(passive_set(pm, j));

    report.indexable = true;
    for (int s = 0; s < k; ++s) {
        const auto& row = pm.actions[s];
        bool monotone = true;
        for (int j = 1; j < j_count; ++j) {
            if (row[j] > row[j - 1]) {
                monotone = false;
                break;
            }
        }
        if (monotone) continue;
        report.indexable = false;
        // One witness per passive point sandwiched between active points:
        // the first active subsidy, the violating passive one, and the
        // next active one after it.
        int j1 = 0;
        while (j1 < j_count && row[j1] != 1) ++j1;
        for (int j2 = j1 + 1; j2 < j_count; ++j2) {
            if (row[j2] != 0) continue;
            int j3 = j2 + 1;
            while (j3 < j_count && row[j3] != 1) ++j3;
            if (j3 == j_count) break;
            report.witnesses.push_back({s + 1, pm.grid.points[j1], pm.grid.points[j2],
                                        pm.grid.points[j3]});
        }
    }

    if (!report.indexable) return report;

    report.whittle_index.resize(k);
    report.flags.assign(k, IndexFlag::none);
    report.bracket_width.assign(k, 0.0);
    for (int s = 0; s < k; ++s) {
        const auto& row = pm.actions[s];
        int j = 0;
        while (j < j_count && row[j] != 0) ++j;
        if (j == j_count) {
            report.whittle_index[s] = std::numeric_limits<double>::infinity();
            report.flags[s] = IndexFlag::above_grid;
        } else if (j == 0) {
            report.whittle_index[s] = pm.grid.points[0];
            report.flags[s] = IndexFlag::at_or_below_grid;
        } else {
            report.whittle_index[s] = pm.grid.points[j];
            report.bracket_width[s] = pm.grid.points[j] - pm.grid.points[j - 1];
        }
    }
    return report;
}

namespace {

// Action of one state at an off-grid subsidy, with the same tie rule the
// policy matrix uses.
int action_at(const ArmModel& model, double lambda, int s, const SolverConfig& config) {
    const ValueTable table = solve_value_function(model, lambda, config);
    if (!table.converged) {
        SolveError err("value iteration did not converge at subsidy " + std::to_string(lambda));
        err.subsidy = lambda;
        throw err;
    }
    const double gap = table.q_active[s] - table.q_passive[s];
    return (std::abs(gap) < config.action_tolerance) ? 0 : (gap > 0.0 ? 1 : 0);
}

}  // namespace

IndexReport compute_whittle_indices(const ArmModel& model, const SubsidyGrid& grid,
                                    const SolverConfig& config, bool refine) {
    const PolicyMatrix pm = compute_policy_matrix(model, grid, config);
    IndexReport report = verify_indexability(pm);
    if (!refine || !report.indexable) return report;

    const double target = grid.spacing() / 100.0;
    for (int s = 0; s < model.num_states; ++s) {
        if (report.flags[s] != IndexFlag::none) continue;
        const auto& row = pm.actions[s];
        int j = 0;
        while (row[j] != 0) ++j;
        double lo = grid.points[j - 1];  // active here
        double hi = grid.points[j];      // passive here
        while (hi - lo >= target) {
            const double mid = 0.5 * (lo + hi);
            if (action_at(model, mid, s, config) == 0) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        report.whittle_index[s] = 0.5 * (lo + hi);
        report.bracket_width[s] = hi - lo;
    }
    return report;
}

StructuralReport check_structural_conditions(const ArmModel& model) {
    model.validate();
    const int k = model.num_states;
    const double slack = 1e-12;

    // Tail sums q(kk|s,a) = sum_{j>=kk} p^a[s][j].
    auto tails = [&](const Matrix& p) {
        Matrix q(k, std::vector<double>(k, 0.0));
        for (int s = 0; s < k; ++s) {
            double acc = 0.0;
            for (int j = k - 1; j >= 0; --j) {
                acc += p[s][j];
                q[s][j] = acc;
            }
        }
        return q;
    };
    const Matrix q0 = tails(model.passive_transitions);
    const Matrix q1 = tails(model.active_transitions);

    StructuralReport rep;
    for (int a = 0; a < 2; ++a) {
        bool nondec = true, noninc = true;
        for (int s = 0; s < k; ++s) {
            for (int t = s + 1; t < k; ++t) {
                if (!(model.rewards[t][a] >= model.rewards[s][a] - slack)) nondec = false;
                if (!(model.rewards[t][a] <= model.rewards[s][a] + slack)) noninc = false;
            }
        }
        rep.reward_monotone_nondecreasing[a] = nondec;
        rep.reward_monotone_nonincreasing[a] = noninc;

        const Matrix& q = (a == 0) ? q0 : q1;
        bool tail_mono = true;
        for (int kk = 0; kk < k && tail_mono; ++kk) {
            for (int s = 0; s < k && tail_mono; ++s) {
                for (int t = s + 1; t < k; ++t) {
                    if (!(q[t][kk] >= q[s][kk] - slack)) {
                        tail_mono = false;
                        break;
                    }
                }
            }
        }
        rep.tail_monotone[a] = tail_mono;
    }

    bool rsuper = true, rsub = true;
    for (int s = 0; s < k; ++s) {
        const double ds = model.rewards[s][1] - model.rewards[s][0];
        for (int t = s + 1; t < k; ++t) {
            const double dt = model.rewards[t][1] - model.rewards[t][0];
            if (!(dt >= ds - slack)) rsuper = false;
            if (!(dt <= ds + slack)) rsub = false;
        }
    }
    rep.reward_superadditive = rsuper;
    rep.reward_subadditive = rsub;

    bool tsuper = true, tsub = true;
    for (int kk = 0; kk < k; ++kk) {
        for (int s = 0; s < k; ++s) {
            const double ds = q1[s][kk] - q0[s][kk];
            for (int t = s + 1; t < k; ++t) {
                const double dt = q1[t][kk] - q0[t][kk];
                if (!(dt >= ds - slack)) tsuper = false;
                if (!(dt <= ds + slack)) tsub = false;
            }
        }
    }
    rep.tail_superadditive = tsuper;
    rep.tail_subadditive = tsub;

    const bool base = rep.reward_monotone_nondecreasing[0] && rep.reward_monotone_nondecreasing[1] &&
                      rep.tail_monotone[0] && rep.tail_monotone[1];
    rep.theorem1_nondecreasing_case = base && rep.reward_superadditive && rep.tail_superadditive;
    rep.theorem1_nonincreasing_case = base && rep.reward_subadditive && rep.tail_subadditive;
    return rep;
}

std::vector<std::optional<int>> threshold_state_curve(const PolicyMatrix& pm) {
    std::vector<std::optional<int>> curve(pm.grid.size());
    for (int j = 0; j < pm.grid.size(); ++j) {
        curve[j] = std::nullopt;
        for (int s = 0; s < pm.num_states(); ++s) {
            if (pm.actions[s][j] == 0) {
                curve[j] = s + 1;
                break;
            }
        }
    }
    return curve;
}

}  // namespace rmab
