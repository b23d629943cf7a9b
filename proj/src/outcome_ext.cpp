#include "replearn/outcome_ext.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "replearn/rng.hpp"

namespace replearn {

namespace {

/// Linear interpolation of the node array at log-odds t, with the cascade
/// constants beyond (and at) the boundaries.
double interp_value(const std::vector<double>& V, const Grid& grid, double t,
                    double v_down, double v_up) {
    if (t >= grid.ell_over) return v_up;
    if (t <= grid.ell_under) return v_down;
    const double s = (t - grid.ell_under) / grid.h;
    int j = static_cast<int>(s);
    if (j >= grid.size() - 1) return v_up;
    const double frac = s - j;
    return (1.0 - frac) * V[static_cast<std::size_t>(j)] +
           frac * V[static_cast<std::size_t>(j + 1)];
}

}  // namespace

OutcomeParams OutcomeParams::from_rho(double rho) {
    if (!(rho > 0.5 && rho <= 1.0))
        throw std::invalid_argument(
            "outcomes.rho: must satisfy 1/2 < rho <= 1");
    OutcomeParams op;
    op.rho = rho;
    op.w = rho < 1.0 ? rho / (1.0 - rho)
                     : std::numeric_limits<double>::infinity();
    return op;
}

Belief outcome_update(const Belief& belief, int action, Outcome outcome,
                      const Statics& statics, double w) {
    if (action == 1 && outcome == Outcome::None)
        throw std::invalid_argument(
            "outcome_update: a purchase must carry an outcome");
    if (action == 0 && outcome != Outcome::None)
        throw std::invalid_argument(
            "outcome_update: a non-purchase carries no outcome");
    if (belief.lambda <= 0.0 || belief.lambda >= 1.0) return belief;
    // Cascade thresholds are unchanged by outcome disclosure; beliefs there
    // stay frozen exactly as in the benchmark.
    if (region_of(belief, statics) != Region::Experimentation) return belief;

    const double log_w = std::log(w);
    if (action == 0) return Belief::from_ell(belief.ell - statics.log_z);
    return Belief::from_ell(outcome == Outcome::Good
                                ? belief.ell + statics.log_z + log_w
                                : belief.ell + statics.log_z - log_w);
}

OutcomeSolution solve_outcomes(const ModelParams& params, double rho, int m,
                               double tol, double epsilon) {
    params.validate();
    const OutcomeParams op = OutcomeParams::from_rho(rho);
    if (m < 1) throw std::invalid_argument("outcomes: m must be >= 1");
    if (!(tol > 0.0)) throw std::invalid_argument("outcomes: tol must be > 0");

    OutcomeSolution os;
    os.params = params;
    os.statics = derive_statics(params);
    os.grid = build_grid(os.statics, m);
    os.rho = op.rho;
    os.w = op.w;
    os.epsilon = epsilon;
    const CascadeValues cv = cascade_values(params, epsilon);
    os.v_down = cv.down;
    os.v_up = cv.up;

    const double q = params.q;
    const double p = params.p;
    const double c = params.c;
    const double delta = params.delta;
    const double log_z = os.statics.log_z;
    const double log_w = std::log(op.w);
    const std::size_t n = os.grid.nodes.size();

    std::vector<double> V(n, 0.0);
    V.front() = cv.down;
    V.back() = cv.up;

    SolveOptions iter_opts;
    iter_opts.tol = tol;
    const int max_iter = iter_opts.effective_max_iter(delta);
    double sup_diff = 0.0;
    int it = 0;
    std::vector<double> W(n);
    for (; it < max_iter; ++it) {
        W.front() = cv.down;
        W.back() = cv.up;
        sup_diff = 0.0;
        for (int k = 1; k <= 2 * m - 1; ++k) {
            const double e = os.grid.nodes[static_cast<std::size_t>(k)];
            const double vg =
                interp_value(V, os.grid, e + log_z + log_w, cv.down, cv.up);
            const double vb =
                interp_value(V, os.grid, e + log_z - log_w, cv.down, cv.up);
            const double dn =
                k - m >= 1 ? V[static_cast<std::size_t>(k - m)] : cv.down;
            const double invest =
                p * q - c +
                delta * (q * (rho * vg + (1.0 - rho) * vb) + (1.0 - q) * dn);
            const double shirk =
                p * (1.0 - q) +
                delta *
                    ((1.0 - q) * ((1.0 - rho) * vg + rho * vb) + q * dn);
            const double w_val = std::max(invest, shirk);
            W[static_cast<std::size_t>(k)] = w_val;
            sup_diff = std::max(
                sup_diff, std::abs(w_val - V[static_cast<std::size_t>(k)]));
        }
        V.swap(W);
        if (sup_diff <= tol) {
            ++it;
            break;
        }
    }
    if (sup_diff > tol)
        throw std::runtime_error(
            "outcomes: value iteration did not reach tol within max_iter");

    os.V = V;
    os.Delta.assign(n, -c);
    os.Delta_display.assign(n, -c);
    os.theta.assign(n, 0.0);
    for (int k = 1; k <= 2 * m - 1; ++k) {
        const double e = os.grid.nodes[static_cast<std::size_t>(k)];
        const double vg =
            interp_value(V, os.grid, e + log_z + log_w, cv.down, cv.up);
        const double vb =
            interp_value(V, os.grid, e + log_z - log_w, cv.down, cv.up);
        const double dn =
            k - m >= 1 ? V[static_cast<std::size_t>(k - m)] : cv.down;
        // Exact conditional-expectation decomposition from the primitives.
        const double d_exact =
            (2.0 * q - 1.0) * p - c +
            delta * ((q + rho - 1.0) * vg + (q - rho) * vb -
                     (2.0 * q - 1.0) * dn);
        // The coarser printed decomposition, retained for comparison.
        const double d_disp =
            (2.0 * q - 1.0) * p - c +
            delta * ((2.0 * q - 1.0) * dn +
                     (2.0 * q - 1.0) * (2.0 * rho - 1.0) * (vg - vb));
        os.Delta[static_cast<std::size_t>(k)] = d_exact;
        os.Delta_display[static_cast<std::size_t>(k)] = d_disp;
        os.theta[static_cast<std::size_t>(k)] = d_exact > 0.0 ? 1.0 : 0.0;
        os.max_display_discrepancy =
            std::max(os.max_display_discrepancy, std::abs(d_exact - d_disp));
    }
    os.iterations = it;
    os.sup_residual = sup_diff;
    return os;
}

HittingStats hitting_stats_outcomes(const OutcomeSolution& solution,
                                    double lambda0, int n_paths, int T_max,
                                    std::uint64_t seed) {
    if (n_paths < 1)
        throw std::invalid_argument("hitting: n_paths must be >= 1");
    const Belief b0 = Belief::from_lambda(lambda0);
    const Region r0 = region_of(b0, solution.statics);
    const double q = solution.params.q;
    const double rho = solution.rho;
    const double log_z = solution.statics.log_z;
    const double log_w = std::log(solution.w);

    HittingStats hs;
    hs.n_paths = n_paths;
    std::vector<double> taus;
    taus.reserve(static_cast<std::size_t>(n_paths));
    double sum_tau_up = 0.0;

    for (int i = 0; i < n_paths; ++i) {
        SplitMix64 rng(seed, static_cast<std::uint64_t>(i));
        AbsorbSide side = AbsorbSide::None;
        if (r0 != Region::Experimentation)
            side = r0 == Region::UpCascade ? AbsorbSide::Up : AbsorbSide::Down;
        double ell = b0.ell;
        int t = 0;
        while (side == AbsorbSide::None && t < T_max) {
            ++t;
            // Beliefs move off-grid here, so read the policy at the nearest
            // interior node each period.
            const int node = solution.grid.nearest_interior_node(ell);
            const bool high =
                rng.bernoulli(solution.theta[static_cast<std::size_t>(node)]);
            const bool signal_h = rng.bernoulli(high ? q : 1.0 - q);
            if (signal_h) {
                const bool good = rng.bernoulli(high ? rho : 1.0 - rho);
                ell += good ? log_z + log_w : log_z - log_w;
            } else {
                ell -= log_z;
            }
            if (ell >= solution.statics.ell_over)
                side = AbsorbSide::Up;
            else if (ell <= solution.statics.ell_under)
                side = AbsorbSide::Down;
        }
        if (side == AbsorbSide::None) {
            ++hs.n_censored;
            continue;
        }
        taus.push_back(static_cast<double>(t));
        if (side == AbsorbSide::Up) {
            ++hs.n_up;
            sum_tau_up += t;
        } else {
            ++hs.n_down;
        }
    }

    hs.fraction_up = static_cast<double>(hs.n_up) / n_paths;
    hs.fraction_down = static_cast<double>(hs.n_down) / n_paths;
    hs.fraction_censored = static_cast<double>(hs.n_censored) / n_paths;
    if (!taus.empty()) {
        double sum = 0.0;
        for (double x : taus) sum += x;
        hs.mean_tau = sum / static_cast<double>(taus.size());
        double ss = 0.0;
        for (double x : taus) ss += (x - hs.mean_tau) * (x - hs.mean_tau);
        if (taus.size() > 1)
            hs.se_tau = std::sqrt(ss / (static_cast<double>(taus.size()) - 1) /
                                  static_cast<double>(taus.size()));
        std::vector<double> sorted = taus;
        std::sort(sorted.begin(), sorted.end());
        const std::size_t mid = sorted.size() / 2;
        hs.median_tau = sorted.size() % 2 == 1
                            ? sorted[mid]
                            : 0.5 * (sorted[mid - 1] + sorted[mid]);
    }
    if (hs.n_up > 0) hs.mean_tau_up = sum_tau_up / hs.n_up;
    return hs;
}

std::vector<PrecisionPoint> precision_sweep(const ModelParams& params,
                                            const std::vector<double>& q_values,
                                            int m, double tol) {
    std::vector<PrecisionPoint> table;
    table.reserve(q_values.size());
    for (double qv : q_values) {
        ModelParams mp = params;
        mp.q = qv;
        SolveOptions opts;
        opts.m = m;
        opts.tol = tol;
        const Solution sol = solve(mp, opts);
        const PatternReport rep = classify(sol);
        PrecisionPoint pt;
        pt.q = qv;
        pt.z = sol.statics.z;
        pt.lambda_under = sol.statics.lambda_under;
        pt.lambda_over = sol.statics.lambda_over;
        pt.eta = sol.statics.eta;
        pt.classification = rep.classification;
        for (const auto& comp : rep.components)
            pt.invest_nodes += comp.hi - comp.lo + 1;
        if (!rep.components.empty()) {
            pt.invest_lambda_lo = rep.components.front().lambda_lo;
            pt.invest_lambda_hi = rep.components.back().lambda_hi;
        }
        double max_d = -std::numeric_limits<double>::infinity();
        for (int k = 1; k <= 2 * m - 1; ++k)
            max_d = std::max(max_d, sol.Delta[static_cast<std::size_t>(k)]);
        pt.max_delta = max_d;
        table.push_back(pt);
    }
    return table;
}

}  // namespace replearn
