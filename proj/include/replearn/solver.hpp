#pragma once

#include <utility>
#include <vector>

#include "replearn/grid.hpp"
#include "replearn/model.hpp"

namespace replearn {

/// Continuation values of the two absorbing cascade regions under the
/// epsilon-tremble selection.  Beliefs are frozen there, so each is a
/// geometric series of the per-period flow.
struct CascadeValues {
    double down = 0.0;
    double up = 0.0;
};

struct SolveOptions {
    int m = 50;
    double epsilon = 0.0;  // public tremble, in [0, 1/2)
    double tol = 1e-10;    // sup-norm stopping threshold
    int max_iter = 0;      // 0 = derive from tol and delta

    void validate() const;
    int effective_max_iter(double delta) const;
};

/// Solved infinite-horizon dynamic program on the aligned grid.
/// Vectors cover all 2m+1 nodes; entries at nodes 0 and 2m hold the cascade
/// constants (V = v_down/v_up, theta = 0, Delta = -c, D = 0).
struct Solution {
    ModelParams params;
    Statics statics;
    SolveOptions opts;
    Grid grid;
    std::vector<double> V;
    std::vector<double> theta;
    std::vector<double> Delta;
    std::vector<double> D;
    double v_down = 0.0;
    double v_up = 0.0;
    int iterations = 0;
    double sup_residual = 0.0;
};

struct ConcavityReport {
    bool is_monotone = false;
    bool is_concave_in_log_odds = false;
    double max_violation = 0.0;
};

CascadeValues cascade_values(const ModelParams& params, double epsilon);

/// One application of the Bellman operator to the interior nodes.
/// Returns the updated full-size vector (boundary entries set to the cascade
/// constants) and the sup-norm change over the interior.
std::pair<std::vector<double>, double> bellman_step(
    const std::vector<double>& V, const Grid& grid, const ModelParams& params,
    const CascadeValues& cascades);

/// Value iteration to the fixed point, then policy recovery.
/// Throws std::runtime_error if max_iter is reached before tol.
Solution solve(const ModelParams& params, const SolveOptions& opts = {});

/// Marginal incentive Delta_k = (2q-1)[p + delta(V_up(k) - V_dn(k))] - c on
/// interior nodes; -c at the cascade nodes.
std::vector<double> marginal_incentive(const std::vector<double>& V,
                                       const Grid& grid,
                                       const ModelParams& params,
                                       const CascadeValues& cascades);

/// theta_k = 1{Delta_k > 0}; the seller plays 0 at exact indifference.
std::vector<double> policy_from_value(const std::vector<double>& Delta);

/// Finite-difference gradient D_k = V_up(k) - V_dn(k) per interior node,
/// with cascade constants supplying out-of-range evaluations.
std::vector<double> finite_difference_gradient(const std::vector<double>& V,
                                               const Grid& grid,
                                               const CascadeValues& cascades);

/// Checks first differences >= -tol and neighbor second differences
/// V_{k+1} - 2 V_k + V_{k-1} <= tol over the node array; reports the worst
/// violation of either kind.
ConcavityReport concavity_report(const std::vector<double>& V,
                                 const Grid& grid,
                                 double tol_violation = 1e-9);

}  // namespace replearn
