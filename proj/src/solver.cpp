#include "replearn/solver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace replearn {

namespace {

double value_up(const std::vector<double>& V, int k, int m,
                const CascadeValues& cascades) {
    return k + m <= 2 * m - 1 ? V[static_cast<std::size_t>(k + m)]
                              : cascades.up;
}

double value_dn(const std::vector<double>& V, int k, int m,
                const CascadeValues& cascades) {
    return k - m >= 1 ? V[static_cast<std::size_t>(k - m)] : cascades.down;
}

}  // namespace

void SolveOptions::validate() const {
    if (m < 1) throw std::invalid_argument("solver.m: must be >= 1");
    if (!(tol > 0.0)) throw std::invalid_argument("solver.tol: must be > 0");
    if (!(epsilon >= 0.0 && epsilon < 0.5))
        throw std::invalid_argument(
            "solver.epsilon: must satisfy 0 <= epsilon < 1/2");
    if (max_iter < 0)
        throw std::invalid_argument("solver.max_iter: must be >= 0");
}

int SolveOptions::effective_max_iter(double delta) const {
    if (max_iter > 0) return max_iter;
    if (!(delta > 0.0 && delta < 1.0)) return 16;
    const double n = std::log(tol) / std::log(delta);
    return std::max(16, 10 * static_cast<int>(std::ceil(n)));
}

CascadeValues cascade_values(const ModelParams& params, double epsilon) {
    CascadeValues cv;
    cv.down = params.p * epsilon / (1.0 - params.delta);
    cv.up = params.p * (1.0 - epsilon) / (1.0 - params.delta);
    return cv;
}

std::pair<std::vector<double>, double> bellman_step(
    const std::vector<double>& V, const Grid& grid, const ModelParams& params,
    const CascadeValues& cascades) {
    const int m = grid.m;
    const double p = params.p;
    const double q = params.q;
    const double c = params.c;
    const double delta = params.delta;

    std::vector<double> W(V.size());
    W.front() = cascades.down;
    W.back() = cascades.up;
    double sup_diff = 0.0;
    for (int k = 1; k <= 2 * m - 1; ++k) {
        const double up = value_up(V, k, m, cascades);
        const double dn = value_dn(V, k, m, cascades);
        const double invest = p * q - c + delta * (q * up + (1.0 - q) * dn);
        const double shirk =
            p * (1.0 - q) + delta * ((1.0 - q) * up + q * dn);
        const double w = std::max(invest, shirk);
        W[static_cast<std::size_t>(k)] = w;
        sup_diff =
            std::max(sup_diff, std::abs(w - V[static_cast<std::size_t>(k)]));
    }
    return {std::move(W), sup_diff};
}

std::vector<double> marginal_incentive(const std::vector<double>& V,
                                       const Grid& grid,
                                       const ModelParams& params,
                                       const CascadeValues& cascades) {
    const int m = grid.m;
    std::vector<double> Delta(V.size(), -params.c);
    for (int k = 1; k <= 2 * m - 1; ++k) {
        const double gap =
            value_up(V, k, m, cascades) - value_dn(V, k, m, cascades);
        Delta[static_cast<std::size_t>(k)] =
            (2.0 * params.q - 1.0) * (params.p + params.delta * gap) -
            params.c;
    }
    return Delta;
}

std::vector<double> policy_from_value(const std::vector<double>& Delta) {
    std::vector<double> theta(Delta.size(), 0.0);
    for (std::size_t k = 0; k < Delta.size(); ++k)
        theta[k] = Delta[k] > 0.0 ? 1.0 : 0.0;
    return theta;
}

std::vector<double> finite_difference_gradient(const std::vector<double>& V,
                                               const Grid& grid,
                                               const CascadeValues& cascades) {
    const int m = grid.m;
    std::vector<double> D(V.size(), 0.0);
    for (int k = 1; k <= 2 * m - 1; ++k)
        D[static_cast<std::size_t>(k)] =
            value_up(V, k, m, cascades) - value_dn(V, k, m, cascades);
    return D;
}

ConcavityReport concavity_report(const std::vector<double>& V,
                                 const Grid& grid, double tol_violation) {
    ConcavityReport rep;
    const int n = grid.size();
    double worst_mono = 0.0;   // most negative first difference, as excess
    double worst_concave = 0.0;  // most positive second difference
    for (int k = 0; k + 1 < n; ++k) {
        const double d = V[static_cast<std::size_t>(k + 1)] -
                         V[static_cast<std::size_t>(k)];
        worst_mono = std::max(worst_mono, -d);
    }
    for (int k = 1; k + 1 < n; ++k) {
        const double d2 = V[static_cast<std::size_t>(k + 1)] -
                          2.0 * V[static_cast<std::size_t>(k)] +
                          V[static_cast<std::size_t>(k - 1)];
        worst_concave = std::max(worst_concave, d2);
    }
    rep.is_monotone = worst_mono <= tol_violation;
    rep.is_concave_in_log_odds = worst_concave <= tol_violation;
    rep.max_violation = std::max(worst_mono, worst_concave);
    return rep;
}

Solution solve(const ModelParams& params, const SolveOptions& opts) {
    params.validate();
    opts.validate();

    Solution sol;
    sol.params = params;
    sol.opts = opts;
    sol.statics = derive_statics(params);
    sol.grid = build_grid(sol.statics, opts.m);

    const CascadeValues cv = cascade_values(params, opts.epsilon);
    sol.v_down = cv.down;
    sol.v_up = cv.up;

    std::vector<double> V(sol.grid.nodes.size(), 0.0);
    V.front() = cv.down;
    V.back() = cv.up;

    const int max_iter = opts.effective_max_iter(params.delta);
    double sup_diff = 0.0;
    int it = 0;
    for (; it < max_iter; ++it) {
        auto [W, d] = bellman_step(V, sol.grid, params, cv);
        V = std::move(W);
        sup_diff = d;
        if (sup_diff <= opts.tol) {
            ++it;
            break;
        }
    }
    if (sup_diff > opts.tol)
        throw std::runtime_error(
            "solve: value iteration did not reach tol within max_iter");

    sol.V = std::move(V);
    sol.Delta = marginal_incentive(sol.V, sol.grid, params, cv);
    sol.theta = policy_from_value(sol.Delta);
    sol.D = finite_difference_gradient(sol.V, sol.grid, cv);
    sol.iterations = it;
    sol.sup_residual = sup_diff;
    return sol;
}

}  // namespace replearn
