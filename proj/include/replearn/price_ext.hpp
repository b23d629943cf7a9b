#pragma once

#include <functional>
#include <string>
#include <vector>

#include "replearn/model.hpp"

namespace replearn {

/// Interval of posted prices that keep the buyer's action signal-sensitive
/// at a given belief.
struct PriceSet {
    double p_low = 0.0;
    double p_high = 0.0;
};

/// Non-price primitives for the flexible-price problem.
struct FlexParams {
    double v = 1.0;
    double q = 0.75;
    double c = 0.22;
    double delta = 0.92;

    void validate() const;
};

struct FlexDomain {
    double lambda_min = 0.01;
    double lambda_max = 0.99;
};

/// Flexible-price solution on a truncated aligned log-odds grid.  At each
/// node the seller either pools (buy-all at price p_low, belief frozen) or
/// plays informative at the top implementable price p_high with +-log z
/// transitions.  Updates leaving the truncated domain continue at the
/// pooling value of the overshot belief (documented approximation).
struct FlexSolution {
    FlexParams params;
    FlexDomain domain;
    int m = 50;
    double tol = 1e-10;
    double log_z = 0.0;
    std::vector<double> ell;
    std::vector<double> lambda;
    std::vector<double> V;
    std::vector<double> theta;
    std::vector<double> price;
    std::vector<char> pooling;
    int pooling_count = 0;
    int iterations = 0;
    double sup_residual = 0.0;
};

struct DeltaBarEval {
    double delta = 0.0;
    bool no_pooling = false;
};

struct DeltaBarResult {
    bool found = false;
    double lo = 0.0;
    double hi = 0.0;
    double estimate = 0.0;
    std::vector<DeltaBarEval> evaluations;
    bool monotone_consistent = true;
    std::string note;
};

/// p_low = v (r/z)/(1 + r/z), p_high = v (r z)/(1 + r z): the price interval
/// for which r/z < K(p) < r z.
PriceSet price_set(const Belief& belief, double v, double z);

FlexSolution solve_flexible(const FlexParams& params, const FlexDomain& domain,
                            int m = 50, double tol = 1e-10);

/// Bisection over delta for the predicate "no node pools".  All predicate
/// evaluations are recorded; an inconsistent (non-monotone) set of
/// evaluations yields a warning and the widest bracket spanned by them.
DeltaBarResult delta_bar_search(const std::function<bool(double)>& no_pooling,
                                double tol_delta);

/// delta_bar for the flexible-price problem proper.
DeltaBarResult delta_bar(const FlexParams& params_excl_delta,
                         const FlexDomain& domain, int m, double tol_delta,
                         double solve_tol = 1e-10);

}  // namespace replearn
