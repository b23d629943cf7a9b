#include "replearn/finite_horizon.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace replearn {

FiniteSolution solve_finite(const ModelParams& params, int T,
                            const SolveOptions& opts,
                            BuyerTieBreak tie_break) {
    params.validate();
    opts.validate();
    if (T < 1) throw std::invalid_argument("finite: T must be >= 1");

    FiniteSolution fs;
    fs.params = params;
    fs.opts = opts;
    fs.statics = derive_statics(params);
    fs.grid = build_grid(fs.statics, opts.m);
    fs.T = T;
    fs.buyer_tie_break = tie_break;
    fs.V.assign(static_cast<std::size_t>(T), {});
    fs.theta.assign(static_cast<std::size_t>(T), {});
    fs.v_down.assign(static_cast<std::size_t>(T), 0.0);
    fs.v_up.assign(static_cast<std::size_t>(T), 0.0);

    const int m = opts.m;
    const double p = params.p;
    const double q = params.q;
    const double c = params.c;
    const double delta = params.delta;
    const double eps = opts.epsilon;
    const std::size_t n = fs.grid.nodes.size();

    // Continuation objects for period t+1; zero at the terminal horizon.
    std::vector<double> V_next(n, 0.0);
    double vu_next = 0.0;
    double vd_next = 0.0;

    for (int t = T; t >= 1; --t) {
        const double vu = p * (1.0 - eps) + delta * vu_next;
        const double vd = p * eps + delta * vd_next;
        std::vector<double> V_t(n, 0.0);
        std::vector<double> theta_t(n, 0.0);
        V_t.front() = vd;
        V_t.back() = vu;
        for (int k = 1; k <= 2 * m - 1; ++k) {
            const double up = k + m <= 2 * m - 1
                                  ? V_next[static_cast<std::size_t>(k + m)]
                                  : vu_next;
            const double dn = k - m >= 1
                                  ? V_next[static_cast<std::size_t>(k - m)]
                                  : vd_next;
            const double invest =
                p * q - c + delta * (q * up + (1.0 - q) * dn);
            const double shirk =
                p * (1.0 - q) + delta * ((1.0 - q) * up + q * dn);
            V_t[static_cast<std::size_t>(k)] = std::max(invest, shirk);
            // Seller tie-break: theta = 0 at exact indifference.
            theta_t[static_cast<std::size_t>(k)] =
                invest > shirk ? 1.0 : 0.0;
        }
        fs.V[static_cast<std::size_t>(t - 1)] = V_t;
        fs.theta[static_cast<std::size_t>(t - 1)] = std::move(theta_t);
        fs.v_down[static_cast<std::size_t>(t - 1)] = vd;
        fs.v_up[static_cast<std::size_t>(t - 1)] = vu;
        V_next = std::move(V_t);
        vu_next = vu;
        vd_next = vd;
    }
    return fs;
}

ConvergenceReport convergence_to_infinite(const ModelParams& params,
                                          const std::vector<int>& T_list,
                                          const SolveOptions& opts) {
    if (T_list.empty())
        throw std::invalid_argument("convergence: T_list must be nonempty");
    for (std::size_t i = 1; i < T_list.size(); ++i)
        if (T_list[i] <= T_list[i - 1])
            throw std::invalid_argument("convergence: T_list must increase");

    const Solution inf = solve(params, opts);
    ConvergenceReport rep;
    rep.gaps_nonincreasing = true;
    rep.pointwise_nondecreasing = true;

    std::vector<double> prev_V1;
    double prev_gap = std::numeric_limits<double>::infinity();
    for (int T : T_list) {
        const FiniteSolution fs = solve_finite(params, T, opts);
        const std::vector<double>& V1 = fs.V.front();
        double gap = 0.0;
        for (std::size_t k = 0; k < V1.size(); ++k)
            gap = std::max(gap, std::abs(V1[k] - inf.V[k]));
        ConvergencePoint pt;
        pt.T = T;
        pt.gap = gap;
        pt.bound = std::pow(params.delta, T) * params.p / (1.0 - params.delta);
        rep.points.push_back(pt);
        if (gap > prev_gap + 1e-15) rep.gaps_nonincreasing = false;
        if (!prev_V1.empty()) {
            for (std::size_t k = 0; k < V1.size(); ++k)
                if (V1[k] < prev_V1[k] - 1e-12)
                    rep.pointwise_nondecreasing = false;
        }
        prev_V1 = V1;
        prev_gap = gap;
    }
    return rep;
}

PathologyRecord boundary_pathology_demo(const ModelParams& params) {
    const Statics s = derive_statics(params);
    PathologyRecord rec;
    // A buy from odds K lands exactly on the up-cascade boundary K z.
    rec.lambda_1 = s.K / (1.0 + s.K);
    rec.lambda_2 = s.lambda_over;
    // At the boundary the low-signal posterior is (K z)/z = K identically,
    // so the action is decided by the tie-break alone.  Passing prior odds
    // r = K with a unit likelihood keeps the tie exact in floating point.
    const auto action_at_tie = [&s](BuyerTieBreak tb) {
        const double posterior = s.K;
        if (posterior > s.K) return 1;
        return posterior == s.K && tb == BuyerTieBreak::Buy ? 1 : 0;
    };
    rec.action_after_L_tie_buy = action_at_tie(BuyerTieBreak::Buy);
    rec.action_after_L_tie_pass = action_at_tie(BuyerTieBreak::Pass);
    rec.actions_differ =
        rec.action_after_L_tie_buy != rec.action_after_L_tie_pass;
    return rec;
}

}  // namespace replearn
