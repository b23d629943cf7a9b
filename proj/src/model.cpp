#include "replearn/model.hpp"

#include <cmath>
#include <limits>

namespace replearn {

namespace {

[[noreturn]] void fail(const std::string& what) {
    throw std::invalid_argument(what);
}

}  // namespace

void ModelParams::validate() const {
    if (!(v > 0.0) || !std::isfinite(v)) fail("model.v: must satisfy v > 0");
    if (!(p > 0.0 && p < v)) fail("model.p: must satisfy 0 < p < v");
    if (!(q > 0.5 && q < 1.0)) fail("model.q: must satisfy 1/2 < q < 1");
    if (!(c > 0.0) || !std::isfinite(c)) fail("model.c: must satisfy c > 0");
    if (!(delta > 0.0 && delta < 1.0))
        fail("model.delta: must satisfy 0 < delta < 1");
}

Belief Belief::from_lambda(double lambda) {
    if (!(lambda >= 0.0 && lambda <= 1.0))
        fail("belief: lambda must lie in [0, 1]");
    Belief b;
    b.lambda = lambda;
    if (lambda <= 0.0)
        b.ell = -std::numeric_limits<double>::infinity();
    else if (lambda >= 1.0)
        b.ell = std::numeric_limits<double>::infinity();
    else
        b.ell = std::log(lambda / (1.0 - lambda));
    return b;
}

Belief Belief::from_ell(double ell) {
    Belief b;
    b.ell = ell;
    if (ell == -std::numeric_limits<double>::infinity())
        b.lambda = 0.0;
    else if (ell == std::numeric_limits<double>::infinity())
        b.lambda = 1.0;
    else
        b.lambda = 1.0 / (1.0 + std::exp(-ell));
    return b;
}

Statics derive_statics(const ModelParams& params) {
    params.validate();
    Statics s;
    s.z = params.q / (1.0 - params.q);
    s.K = params.p / (params.v - params.p);
    s.r_under = s.K / s.z;
    s.r_over = s.K * s.z;
    s.lambda_under = s.r_under / (1.0 + s.r_under);
    s.lambda_over = s.r_over / (1.0 + s.r_over);
    s.eta = params.c / (params.p * (2.0 * params.q - 1.0));
    s.log_z = std::log(s.z);
    const double log_K = std::log(s.K);
    s.ell_under = log_K - s.log_z;
    s.ell_over = log_K + s.log_z;
    return s;
}

Region region_of(const Belief& belief, const Statics& statics) {
    if (belief.lambda <= statics.lambda_under) return Region::DownCascade;
    if (belief.lambda >= statics.lambda_over) return Region::UpCascade;
    return Region::Experimentation;
}

int buyer_action(double r, Signal signal, const Statics& statics,
                 BuyerTieBreak tie_break) {
    const double posterior = signal == Signal::H ? r * statics.z
                                                 : r / statics.z;
    if (posterior > statics.K) return 1;
    if (posterior == statics.K && tie_break == BuyerTieBreak::Buy) return 1;
    return 0;
}

std::pair<double, double> action_likelihoods(Region region, double q) {
    switch (region) {
        case Region::UpCascade: return {1.0, 1.0};
        case Region::Experimentation: return {q, 1.0 - q};
        case Region::DownCascade: return {0.0, 0.0};
    }
    return {0.0, 0.0};
}

Belief bayes_action_update(const Belief& belief, int action,
                           const Statics& statics) {
    if (belief.lambda <= 0.0 || belief.lambda >= 1.0) return belief;
    if (region_of(belief, statics) != Region::Experimentation) return belief;
    const double ell =
        action == 1 ? belief.ell + statics.log_z : belief.ell - statics.log_z;
    return Belief::from_ell(ell);
}

int myopic_policy(Region region, double eta) {
    if (region != Region::Experimentation) return 0;
    return eta < 1.0 ? 1 : 0;
}

}  // namespace replearn
