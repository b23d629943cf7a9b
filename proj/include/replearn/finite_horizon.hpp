#pragma once

#include <vector>

#include "replearn/solver.hpp"

namespace replearn {

/// Backward-induction solution of the T-period game on the same grid as the
/// infinite-horizon solver.  V[t] and theta[t] (t = 0..T-1) hold the period
/// t+1 objects; boundary entries carry the per-period cascade values.
struct FiniteSolution {
    ModelParams params;
    Statics statics;
    SolveOptions opts;
    Grid grid;
    int T = 0;
    BuyerTieBreak buyer_tie_break = BuyerTieBreak::Buy;
    std::vector<std::vector<double>> V;
    std::vector<std::vector<double>> theta;
    std::vector<double> v_down;  // per period
    std::vector<double> v_up;
};

struct ConvergencePoint {
    int T = 0;
    double gap = 0.0;    // sup-node |V_1^(T) - V_inf|
    double bound = 0.0;  // delta^T * p / (1 - delta)
};

struct ConvergenceReport {
    std::vector<ConvergencePoint> points;
    bool gaps_nonincreasing = false;
    bool pointwise_nondecreasing = false;
};

/// Record of the two-period boundary configuration: at a public belief
/// exactly on the up-cascade boundary, the buyer's action after a low
/// signal depends on the tie-break alone.
struct PathologyRecord {
    double lambda_1 = 0.0;  // belief whose buy-update lands on the boundary
    double lambda_2 = 0.0;  // the boundary belief itself
    int action_after_L_tie_buy = 0;
    int action_after_L_tie_pass = 0;
    bool actions_differ = false;
};

/// Solves the T-period problem backward from V_{T+1} = 0.  The one-step
/// operator is the same as bellman_step; the buyer tie-break flag is
/// recorded (region boundaries stay with the cascades by convention).
FiniteSolution solve_finite(const ModelParams& params, int T,
                            const SolveOptions& opts = {},
                            BuyerTieBreak tie_break = BuyerTieBreak::Buy);

/// Sup-norm gaps between V_1 under each horizon in T_list (increasing) and
/// the infinite-horizon fixed point.
ConvergenceReport convergence_to_infinite(const ModelParams& params,
                                          const std::vector<int>& T_list,
                                          const SolveOptions& opts = {});

PathologyRecord boundary_pathology_demo(const ModelParams& params);

}  // namespace replearn
