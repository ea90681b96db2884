#pragma once

#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "rmab/arm_model.hpp"
#include "rmab/value_iteration.hpp"

namespace rmab {

// Finite grid of subsidy values, strictly increasing, at least two points.
struct SubsidyGrid {
    std::vector<double> points;

    void validate() const;
    int size() const { return static_cast<int>(points.size()); }
    double spacing() const;  // smallest gap between consecutive points

    static SubsidyGrid linspace(double lo, double hi, int n);

    // Default grid: 201 evenly spaced points spanning the arm's reward
    // range with margin, widened so that [-1,1] is always covered.
    static SubsidyGrid default_for(const ArmModel& model);
};

// Thrown by compute_policy_matrix when value iteration fails to converge
// at some grid point; the message names the offending subsidy.
struct SolveError : std::runtime_error {
    using std::runtime_error::runtime_error;
    double subsidy = 0.0;
};

// Optimal action per (state, subsidy grid point). actions[s][j] is 0 or 1;
// whenever |q_gap[s][j]| < Delta the action is forced to 0 (tie rule).
struct PolicyMatrix {
    SubsidyGrid grid;
    std::vector<std::vector<int>> actions;   // K x J
    std::vector<std::vector<double>> q_gap;  // Q(s,1,l_j) - Q(s,0,l_j)
    double action_tolerance = 1e-6;          // the Delta the matrix was built with

    int num_states() const { return static_cast<int>(actions.size()); }
};

// A 1 -> 0 -> 1 action pattern across increasing subsidies for one state;
// certifies non-indexability.
struct Witness {
    int state;  // 1-based
    double lambda_active_low;
    double lambda_passive;
    double lambda_active_high;
};

enum class IndexFlag {
    none,
    at_or_below_grid,  // row all zeros: true index is at or below the first grid point
    above_grid,        // row all ones: no finite index on this grid
};

struct IndexReport {
    int num_states = 0;
    bool indexable = false;
    // Defined only when indexable: whittle_index[s] is the index of state
    // s+1 (+infinity for rows flagged above_grid).
    std::vector<double> whittle_index;
    std::vector<IndexFlag> flags;
    // Half-width bound on each index: the final bisection bracket when
    // refined, otherwise the bracketing grid gap. 0 for flagged states.
    std::vector<double> bracket_width;
    std::vector<Witness> witnesses;                // empty iff indexable
    std::vector<std::set<int>> passive_sets;       // B(lambda_j), 1-based states
};

// Booleans from the structural sufficient conditions for a single
// threshold policy in s. Each flag is an exhaustive conjunction of
// pairwise inequalities evaluated with 1e-12 slack.
struct StructuralReport {
    bool reward_monotone_nondecreasing[2] = {false, false};
    bool reward_monotone_nonincreasing[2] = {false, false};
    bool tail_monotone[2] = {false, false};  // q(k|s,a) non-decreasing in s for all k
    bool reward_superadditive = false;
    bool reward_subadditive = false;
    bool tail_superadditive = false;
    bool tail_subadditive = false;
    bool theorem1_nondecreasing_case = false;
    bool theorem1_nonincreasing_case = false;
};

// Solves the dynamic program at every grid point and collects the optimal
// actions. Throws SolveError if any grid point fails to converge.
PolicyMatrix compute_policy_matrix(const ArmModel& model, const SubsidyGrid& grid,
                                   const SolverConfig& config);

// States (1-based) whose action in grid column j (1-based) is passive.
std::set<int> passive_set(const PolicyMatrix& pm, int j);

// Checks that every row of the policy matrix is non-increasing across the
// grid (equivalently, that the passive sets are nested). When indexable,
// the index of each state is the first grid subsidy with a passive
// action; otherwise every violating 1->0->1 dip produces a witness,
// ordered by (state, first active point, violating passive point).
IndexReport verify_indexability(const PolicyMatrix& pm);

// compute_policy_matrix + verify_indexability. With refine set and an
// indexable arm, each interior index is bisected between its bracketing
// grid points, re-solving the value function at every probe, until the
// bracket is narrower than grid-spacing/100.
IndexReport compute_whittle_indices(const ArmModel& model, const SubsidyGrid& grid,
                                    const SolverConfig& config, bool refine);

StructuralReport check_structural_conditions(const ArmModel& model);

// Smallest passive state per grid column, or nullopt for all-active
// columns.
std::vector<std::optional<int>> threshold_state_curve(const PolicyMatrix& pm);

}  // namespace rmab
