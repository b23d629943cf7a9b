#include "replearn/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "replearn/rng.hpp"

namespace replearn {

namespace {

/// Per-period stepping state shared by the path simulators.
struct WalkState {
    double ell = 0.0;
    int node = 0;           // interior node index while unabsorbed
    AbsorbSide side = AbsorbSide::None;
};

/// One interior period: draw quality from the policy, the signal from the
/// quality, map the signal to the action, and move one Bayes step.
struct StepResult {
    double theta = 0.0;
    int action = 0;
};

StepResult step_interior(const Solution& sol, WalkState& st, SplitMix64& rng) {
    const double theta_prob = sol.theta[static_cast<std::size_t>(st.node)];
    const bool high = rng.bernoulli(theta_prob);
    const double p_high_signal = high ? sol.params.q : 1.0 - sol.params.q;
    const bool signal_h = rng.bernoulli(p_high_signal);
    const int action = signal_h ? 1 : 0;

    const int m = sol.grid.m;
    if (action == 1) {
        if (st.node + m >= 2 * m) {
            st.ell = sol.grid.nodes[static_cast<std::size_t>(st.node)] +
                     sol.statics.log_z;
            st.side = AbsorbSide::Up;
        } else {
            st.node += m;
            st.ell = sol.grid.nodes[static_cast<std::size_t>(st.node)];
        }
    } else {
        if (st.node - m <= 0) {
            st.ell = sol.grid.nodes[static_cast<std::size_t>(st.node)] -
                     sol.statics.log_z;
            st.side = AbsorbSide::Down;
        } else {
            st.node -= m;
            st.ell = sol.grid.nodes[static_cast<std::size_t>(st.node)];
        }
    }
    return {high ? 1.0 : 0.0, action};
}

double logistic(double ell) {
    if (ell == std::numeric_limits<double>::infinity()) return 1.0;
    if (ell == -std::numeric_limits<double>::infinity()) return 0.0;
    return 1.0 / (1.0 + std::exp(-ell));
}

}  // namespace

double drift(double theta, double q, double z) {
    if (!(theta >= 0.0 && theta <= 1.0))
        throw std::invalid_argument("drift: theta must lie in [0, 1]");
    return (2.0 * q - 1.0) * (2.0 * theta - 1.0) * std::log(z);
}

Path simulate_path(const Solution& solution, double lambda0, int T_max,
                   std::uint64_t seed, std::uint64_t path_id) {
    if (!(lambda0 > 0.0 && lambda0 < 1.0))
        throw std::invalid_argument("simulate: lambda0 must lie in (0, 1)");
    if (T_max < 1)
        throw std::invalid_argument("simulate: T_max must be >= 1");

    Path path;
    path.seed = seed;
    path.path_id = path_id;
    path.lambda_series.reserve(static_cast<std::size_t>(T_max) + 1);
    path.theta_series.reserve(static_cast<std::size_t>(T_max));
    path.action_series.reserve(static_cast<std::size_t>(T_max));

    SplitMix64 rng(seed, path_id);
    const Belief b0 = Belief::from_lambda(lambda0);
    const Region r0 = region_of(b0, solution.statics);

    WalkState st;
    if (r0 == Region::Experimentation) {
        st.node = solution.grid.nearest_interior_node(b0.ell);
        st.ell = solution.grid.nodes[static_cast<std::size_t>(st.node)];
    } else {
        st.ell = b0.ell;
        st.side = r0 == Region::UpCascade ? AbsorbSide::Up : AbsorbSide::Down;
        path.absorbed_at = 0;
    }
    path.lambda_series.push_back(st.side == AbsorbSide::None
                                     ? solution.grid.lambda_of(st.node)
                                     : lambda0);

    for (int t = 1; t <= T_max; ++t) {
        if (st.side == AbsorbSide::None) {
            const StepResult sr = step_interior(solution, st, rng);
            path.theta_series.push_back(sr.theta);
            path.action_series.push_back(sr.action);
            path.lambda_series.push_back(st.side == AbsorbSide::None
                                             ? solution.grid.lambda_of(st.node)
                                             : logistic(st.ell));
            if (st.side != AbsorbSide::None && !path.absorbed_at)
                path.absorbed_at = t;
        } else {
            // Frozen cascade: theta = 0, buy-all up / buy-none down.
            path.theta_series.push_back(0.0);
            path.action_series.push_back(st.side == AbsorbSide::Up ? 1 : 0);
            path.lambda_series.push_back(path.lambda_series.back());
        }
    }
    path.absorbed_to = st.side;
    return path;
}

HittingStats hitting_stats(const Solution& solution, double lambda0,
                           int n_paths, int T_max, std::uint64_t seed) {
    if (n_paths < 1)
        throw std::invalid_argument("hitting: n_paths must be >= 1");
    const Belief b0 = Belief::from_lambda(lambda0);
    const Region r0 = region_of(b0, solution.statics);

    HittingStats hs;
    hs.n_paths = n_paths;
    std::vector<double> taus;
    taus.reserve(static_cast<std::size_t>(n_paths));
    double sum_tau_up = 0.0;

    for (int i = 0; i < n_paths; ++i) {
        SplitMix64 rng(seed, static_cast<std::uint64_t>(i));
        WalkState st;
        if (r0 != Region::Experimentation) {
            st.side =
                r0 == Region::UpCascade ? AbsorbSide::Up : AbsorbSide::Down;
        } else {
            st.node = solution.grid.nearest_interior_node(b0.ell);
        }
        int t = 0;
        while (st.side == AbsorbSide::None && t < T_max) {
            ++t;
            step_interior(solution, st, rng);
        }
        if (st.side == AbsorbSide::None) {
            ++hs.n_censored;
            continue;
        }
        taus.push_back(static_cast<double>(t));
        if (st.side == AbsorbSide::Up) {
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

PatternReport classify(const Solution& solution) {
    PatternReport rep;
    const int m = solution.grid.m;
    int k = 1;
    while (k <= 2 * m - 1) {
        if (solution.Delta[static_cast<std::size_t>(k)] > 0.0) {
            NodeInterval iv;
            iv.lo = k;
            while (k + 1 <= 2 * m - 1 &&
                   solution.Delta[static_cast<std::size_t>(k + 1)] > 0.0)
                ++k;
            iv.hi = k;
            iv.lambda_lo = solution.grid.lambda_of(iv.lo);
            iv.lambda_hi = solution.grid.lambda_of(iv.hi);
            rep.components.push_back(iv);
        }
        ++k;
    }
    for (std::size_t i = 1; i < rep.components.size(); ++i) {
        NodeInterval gap;
        gap.lo = rep.components[i - 1].hi + 1;
        gap.hi = rep.components[i].lo - 1;
        gap.lambda_lo = solution.grid.lambda_of(gap.lo);
        gap.lambda_hi = solution.grid.lambda_of(gap.hi);
        rep.gap_intervals.push_back(gap);
    }
    switch (rep.components.size()) {
        case 0: rep.classification = PatternClass::NoInvestment; break;
        case 1: rep.classification = PatternClass::EarlyResolution; break;
        case 2: rep.classification = PatternClass::DoubleHump; break;
        default: rep.classification = PatternClass::Other; break;
    }
    return rep;
}

WelfareReport welfare_mc(const Solution& solution, double lambda0,
                         int n_paths, int horizon, std::uint64_t seed) {
    if (horizon < 1)
        throw std::invalid_argument("welfare: horizon must be >= 1");
    if (n_paths < 1)
        throw std::invalid_argument("welfare: n_paths must be >= 1");
    const Belief b0 = Belief::from_lambda(lambda0);
    const Region r0 = region_of(b0, solution.statics);
    const double v = solution.params.v;
    const double p = solution.params.p;
    const double c = solution.params.c;
    const double delta = solution.params.delta;

    double sum_b = 0.0, sum_s = 0.0, sum_t = 0.0;
    double ss_b = 0.0, ss_s = 0.0, ss_t = 0.0;
    for (int i = 0; i < n_paths; ++i) {
        SplitMix64 rng(seed, static_cast<std::uint64_t>(i));
        WalkState st;
        if (r0 != Region::Experimentation)
            st.side =
                r0 == Region::UpCascade ? AbsorbSide::Up : AbsorbSide::Down;
        else
            st.node = solution.grid.nearest_interior_node(b0.ell);

        double disc = 1.0;
        double buyer = 0.0, seller = 0.0, total = 0.0;
        for (int t = 1; t <= horizon; ++t) {
            double theta;
            int action;
            if (st.side == AbsorbSide::None) {
                const StepResult sr = step_interior(solution, st, rng);
                theta = sr.theta;
                action = sr.action;
            } else {
                theta = 0.0;
                action = st.side == AbsorbSide::Up ? 1 : 0;
            }
            buyer += disc * action * (v * theta - p);
            seller += disc * (p * action - c * theta);
            total += disc * (action * v * theta - c * theta);
            disc *= delta;
        }
        sum_b += buyer;
        sum_s += seller;
        sum_t += total;
        ss_b += buyer * buyer;
        ss_s += seller * seller;
        ss_t += total * total;
    }

    const auto finish = [n_paths](double sum, double ss, double& mean,
                                  double& se) {
        mean = sum / n_paths;
        if (n_paths > 1) {
            const double var =
                std::max(0.0, (ss - n_paths * mean * mean) / (n_paths - 1));
            se = std::sqrt(var / n_paths);
        } else {
            se = 0.0;
        }
    };
    WelfareReport rep;
    rep.n_paths = n_paths;
    rep.horizon = horizon;
    finish(sum_b, ss_b, rep.buyer_mean, rep.buyer_se);
    finish(sum_s, ss_s, rep.seller_mean, rep.seller_se);
    finish(sum_t, ss_t, rep.total_mean, rep.total_se);
    return rep;
}

const char* to_string(PatternClass c) {
    switch (c) {
        case PatternClass::EarlyResolution: return "EarlyResolution";
        case PatternClass::DoubleHump: return "DoubleHump";
        case PatternClass::NoInvestment: return "NoInvestment";
        case PatternClass::Other: return "Other";
    }
    return "Unknown";
}

}  // namespace replearn
