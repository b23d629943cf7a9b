#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "replearn/solver.hpp"

namespace replearn {

enum class AbsorbSide { None, Up, Down };

/// One simulated belief/quality/action trajectory under a solved policy.
/// lambda_series has T_max+1 entries; theta_series and action_series have
/// T_max entries (period t acts at lambda_series[t-1] and produces
/// lambda_series[t]).  After absorption the belief is frozen and the cascade
/// behavior (buy-all / buy-none, theta = 0) continues to be recorded.
struct Path {
    std::uint64_t seed = 0;
    std::uint64_t path_id = 0;
    std::vector<double> lambda_series;
    std::vector<double> theta_series;
    std::vector<int> action_series;
    std::optional<int> absorbed_at;
    AbsorbSide absorbed_to = AbsorbSide::None;
};

struct HittingStats {
    int n_paths = 0;
    int n_up = 0;
    int n_down = 0;
    int n_censored = 0;
    double mean_tau = 0.0;    // over absorbed paths
    double median_tau = 0.0;  // over absorbed paths
    double se_tau = 0.0;
    double mean_tau_up = 0.0;  // over paths absorbed up
    double fraction_up = 0.0;
    double fraction_down = 0.0;
    double fraction_censored = 0.0;
};

enum class PatternClass { EarlyResolution, DoubleHump, NoInvestment, Other };

/// Index interval of interior nodes, inclusive, with the lambda endpoints.
struct NodeInterval {
    int lo = 0;
    int hi = 0;
    double lambda_lo = 0.0;
    double lambda_hi = 0.0;
};

struct PatternReport {
    std::vector<NodeInterval> components;  // maximal runs of Delta > 0
    std::vector<NodeInterval> gap_intervals;
    PatternClass classification = PatternClass::NoInvestment;
};

struct WelfareReport {
    int n_paths = 0;
    int horizon = 0;
    double buyer_mean = 0.0;
    double buyer_se = 0.0;
    double seller_mean = 0.0;
    double seller_se = 0.0;
    double total_mean = 0.0;
    double total_se = 0.0;
};

/// One-step expected log-odds change mu = (2q-1)(2 theta - 1) log z.
double drift(double theta, double q, double z);

/// Simulates T_max periods from lambda0 (snapped once to the nearest
/// interior node when it lies in the experimentation region).  Reproducible:
/// the RNG stream is a pure function of (seed, path_id).
Path simulate_path(const Solution& solution, double lambda0, int T_max,
                   std::uint64_t seed, std::uint64_t path_id = 0);

/// Monte Carlo exit-time statistics from lambda0 over n_paths paths, each on
/// its own (seed, path_id) stream.  Paths still interior at T_max are
/// reported as censored.
HittingStats hitting_stats(const Solution& solution, double lambda0,
                           int n_paths, int T_max, std::uint64_t seed);

/// Connected components of {Delta > 0} over interior nodes and the induced
/// Early-Resolution / Double-Hump / NoInvestment / Other classification.
PatternReport classify(const Solution& solution);

/// Discounted buyer surplus, seller profit, and total surplus over `horizon`
/// periods, averaged over n_paths simulated paths.  Flows per period:
/// buyer a(v theta - p), seller p a - c theta, total a v theta - c theta.
WelfareReport welfare_mc(const Solution& solution, double lambda0,
                         int n_paths, int horizon, std::uint64_t seed);

const char* to_string(PatternClass c);

}  // namespace replearn
