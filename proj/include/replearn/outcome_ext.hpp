#pragma once

#include <cstdint>
#include <vector>

#include "replearn/simulate.hpp"
#include "replearn/solver.hpp"

namespace replearn {

enum class Outcome { Good, Bad, None };

/// Outcome-disclosure parameters: precision rho in (1/2, 1] and likelihood
/// ratio w = rho/(1-rho) (infinite at rho = 1, a perfectly revealing
/// outcome).
struct OutcomeParams {
    double rho = 0.75;
    double w = 3.0;

    static OutcomeParams from_rho(double rho);
};

/// Benchmark solution augmented with public post-purchase outcomes.  Delta
/// holds the marginal incentive from the exact conditional expectation over
/// (action, outcome); Delta_display evaluates the coarser
/// (2q-1)[V(l-) ... (2rho-1)(V(+G)-V(+B))] decomposition for comparison.
struct OutcomeSolution {
    ModelParams params;
    Statics statics;
    Grid grid;
    double rho = 0.0;
    double w = 0.0;
    double epsilon = 0.0;
    std::vector<double> V;
    std::vector<double> theta;
    std::vector<double> Delta;
    std::vector<double> Delta_display;
    double max_display_discrepancy = 0.0;
    double v_down = 0.0;
    double v_up = 0.0;
    int iterations = 0;
    double sup_residual = 0.0;
};

/// One row of the signal-precision comparative-statics table.
struct PrecisionPoint {
    double q = 0.0;
    double z = 0.0;
    double lambda_under = 0.0;
    double lambda_over = 0.0;
    double eta = 0.0;
    int invest_nodes = 0;
    double invest_lambda_lo = 0.0;  // 0 when the investment set is empty
    double invest_lambda_hi = 0.0;
    double max_delta = 0.0;
    PatternClass classification = PatternClass::NoInvestment;
};

/// Bayes update using both the action and (after a purchase) the public
/// outcome: r' = r z w after (buy, G), r z / w after (buy, B), r / z after a
/// pass.  Cascades stay frozen, which is why the thresholds travel along.
/// Throws on an inconsistent action/outcome pairing (outcome present iff
/// action = 1).
Belief outcome_update(const Belief& belief, int action, Outcome outcome,
                      const Statics& statics, double w);

/// Value iteration on the benchmark grid with post-purchase evaluations at
/// ell + log z +- log w via linear interpolation (cascade constants beyond
/// the boundaries).
OutcomeSolution solve_outcomes(const ModelParams& params, double rho,
                               int m = 50, double tol = 1e-10,
                               double epsilon = 0.0);

/// Exit-time statistics under the outcome model.  Beliefs move off-grid, so
/// the policy is read at the nearest interior node each period.  Shares the
/// per-path RNG streams with the benchmark hitting_stats.
HittingStats hitting_stats_outcomes(const OutcomeSolution& solution,
                                    double lambda0, int n_paths, int T_max,
                                    std::uint64_t seed);

/// Solve-and-classify across a list of signal precisions.
std::vector<PrecisionPoint> precision_sweep(const ModelParams& params,
                                            const std::vector<double>& q_values,
                                            int m = 50, double tol = 1e-10);

}  // namespace replearn
