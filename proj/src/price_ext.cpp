#include "replearn/price_ext.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace replearn {

namespace {

double logit(double lambda) { return std::log(lambda / (1.0 - lambda)); }

double p_low_at_ell(double ell, double v, double z) {
    const double r = std::exp(ell);
    return v * (r / z) / (1.0 + r / z);
}

double p_high_at_ell(double ell, double v, double z) {
    const double r = std::exp(ell);
    return v * (r * z) / (1.0 + r * z);
}

}  // namespace

void FlexParams::validate() const {
    if (!(v > 0.0)) throw std::invalid_argument("flex.v: must satisfy v > 0");
    if (!(q > 0.5 && q < 1.0))
        throw std::invalid_argument("flex.q: must satisfy 1/2 < q < 1");
    if (!(c > 0.0)) throw std::invalid_argument("flex.c: must satisfy c > 0");
    if (!(delta >= 0.0 && delta < 1.0))
        throw std::invalid_argument("flex.delta: must satisfy 0 <= delta < 1");
}

PriceSet price_set(const Belief& belief, double v, double z) {
    if (!(belief.lambda > 0.0 && belief.lambda < 1.0))
        throw std::invalid_argument("price_set: lambda must lie in (0, 1)");
    PriceSet ps;
    ps.p_low = p_low_at_ell(belief.ell, v, z);
    ps.p_high = p_high_at_ell(belief.ell, v, z);
    return ps;
}

FlexSolution solve_flexible(const FlexParams& params, const FlexDomain& domain,
                            int m, double tol) {
    params.validate();
    if (m < 1) throw std::invalid_argument("flex: m must be >= 1");
    if (!(tol > 0.0)) throw std::invalid_argument("flex: tol must be > 0");
    if (!(domain.lambda_min > 0.0 && domain.lambda_min < domain.lambda_max &&
          domain.lambda_max < 1.0))
        throw std::invalid_argument(
            "flex: domain must satisfy 0 < lambda_min < lambda_max < 1");

    FlexSolution fx;
    fx.params = params;
    fx.domain = domain;
    fx.m = m;
    fx.tol = tol;

    const double z = params.q / (1.0 - params.q);
    const double log_z = std::log(z);
    fx.log_z = log_z;
    const double h = log_z / m;
    const double ell_min = logit(domain.lambda_min);
    const double ell_max = logit(domain.lambda_max);
    if (!std::isfinite(ell_min) || !std::isfinite(ell_max))
        throw std::domain_error("flex: domain is not representable in log-odds");
    const int n = static_cast<int>((ell_max - ell_min) / h + 1e-12) + 1;

    fx.ell.resize(static_cast<std::size_t>(n));
    fx.lambda.resize(static_cast<std::size_t>(n));
    std::vector<double> pool(static_cast<std::size_t>(n));
    std::vector<double> p_hi(static_cast<std::size_t>(n));
    std::vector<double> up_out(static_cast<std::size_t>(n));
    std::vector<double> dn_out(static_cast<std::size_t>(n));
    const double annuity = 1.0 / (1.0 - params.delta);
    for (int k = 0; k < n; ++k) {
        const double e = ell_min + k * h;
        fx.ell[static_cast<std::size_t>(k)] = e;
        fx.lambda[static_cast<std::size_t>(k)] = 1.0 / (1.0 + std::exp(-e));
        pool[static_cast<std::size_t>(k)] =
            p_low_at_ell(e, params.v, z) * annuity;
        p_hi[static_cast<std::size_t>(k)] = p_high_at_ell(e, params.v, z);
        // Continuation for steps that leave the truncated domain: the
        // pooling value of the overshot belief.
        up_out[static_cast<std::size_t>(k)] =
            p_low_at_ell(e + log_z, params.v, z) * annuity;
        dn_out[static_cast<std::size_t>(k)] =
            p_low_at_ell(e - log_z, params.v, z) * annuity;
    }

    const double q = params.q;
    const double c = params.c;
    const double delta = params.delta;
    std::vector<double> V = pool;
    const int max_iter = std::max(
        64, delta > 0.0
                ? 10 * static_cast<int>(
                           std::ceil(std::log(tol) / std::log(delta)))
                : 64);
    double sup_diff = 0.0;
    int it = 0;
    std::vector<double> W(V.size());
    for (; it < max_iter; ++it) {
        sup_diff = 0.0;
        for (int k = 0; k < n; ++k) {
            const double up =
                k + m < n ? V[static_cast<std::size_t>(k + m)]
                          : up_out[static_cast<std::size_t>(k)];
            const double dn =
                k - m >= 0 ? V[static_cast<std::size_t>(k - m)]
                           : dn_out[static_cast<std::size_t>(k)];
            const double ph = p_hi[static_cast<std::size_t>(k)];
            const double invest =
                ph * q - c + delta * (q * up + (1.0 - q) * dn);
            const double shirk =
                ph * (1.0 - q) + delta * ((1.0 - q) * up + q * dn);
            const double w = std::max(
                pool[static_cast<std::size_t>(k)], std::max(invest, shirk));
            W[static_cast<std::size_t>(k)] = w;
            sup_diff =
                std::max(sup_diff, std::abs(w - V[static_cast<std::size_t>(k)]));
        }
        V.swap(W);
        if (sup_diff <= tol) {
            ++it;
            break;
        }
    }
    if (sup_diff > tol)
        throw std::runtime_error(
            "flex: value iteration did not reach tol within max_iter");

    fx.V = V;
    fx.theta.assign(static_cast<std::size_t>(n), 0.0);
    fx.price.assign(static_cast<std::size_t>(n), 0.0);
    fx.pooling.assign(static_cast<std::size_t>(n), 0);
    for (int k = 0; k < n; ++k) {
        const double up = k + m < n ? V[static_cast<std::size_t>(k + m)]
                                    : up_out[static_cast<std::size_t>(k)];
        const double dn = k - m >= 0 ? V[static_cast<std::size_t>(k - m)]
                                     : dn_out[static_cast<std::size_t>(k)];
        const double ph = p_hi[static_cast<std::size_t>(k)];
        const double invest = ph * q - c + delta * (q * up + (1.0 - q) * dn);
        const double shirk =
            ph * (1.0 - q) + delta * ((1.0 - q) * up + q * dn);
        const double info = std::max(invest, shirk);
        // Ties go to the informative branch.
        const bool pools = pool[static_cast<std::size_t>(k)] > info;
        fx.pooling[static_cast<std::size_t>(k)] = pools ? 1 : 0;
        if (pools) {
            fx.price[static_cast<std::size_t>(k)] =
                pool[static_cast<std::size_t>(k)] * (1.0 - delta);
            fx.theta[static_cast<std::size_t>(k)] = 0.0;
            ++fx.pooling_count;
        } else {
            fx.price[static_cast<std::size_t>(k)] = ph;
            fx.theta[static_cast<std::size_t>(k)] = invest > shirk ? 1.0 : 0.0;
        }
    }
    fx.iterations = it;
    fx.sup_residual = sup_diff;
    return fx;
}

DeltaBarResult delta_bar_search(const std::function<bool(double)>& no_pooling,
                                double tol_delta) {
    if (!(tol_delta > 0.0))
        throw std::invalid_argument("delta_bar: tol_delta must be > 0");
    DeltaBarResult res;
    const auto eval = [&](double d) {
        const bool ok = no_pooling(d);
        res.evaluations.push_back({d, ok});
        return ok;
    };

    const double lo_end = std::min(tol_delta, 0.5);
    const double hi_end = std::max(1.0 - tol_delta, 0.5);
    const bool at_lo = eval(lo_end);
    const bool at_hi = lo_end < hi_end ? eval(hi_end) : at_lo;
    if (!at_hi) {
        res.found = false;
        res.note = "not found: pooling persists at delta = 1 - tol_delta";
        res.lo = lo_end;
        res.hi = hi_end;
        return res;
    }
    if (at_lo) {
        res.found = false;
        res.note = "not found: no pooling even at delta = tol_delta";
        res.lo = lo_end;
        res.hi = hi_end;
        return res;
    }

    // Coarse scan before bisecting.  Bisection alone can never surface a
    // non-monotone predicate; the scan can.
    for (int i = 1; i <= 9; ++i) {
        const double d = i / 10.0;
        if (d > lo_end && d < hi_end && hi_end - lo_end > tol_delta) eval(d);
    }
    const auto span = [&res]() {
        double max_false = -1.0, min_true = 2.0;
        for (const auto& e : res.evaluations) {
            if (e.no_pooling)
                min_true = std::min(min_true, e.delta);
            else
                max_false = std::max(max_false, e.delta);
        }
        return std::pair<double, double>{max_false, min_true};
    };
    auto [max_false, min_true] = span();
    if (max_false > min_true) {
        res.monotone_consistent = false;
        res.note =
            "warning: predicate not monotone in delta; returning the widest "
            "bracket spanned by the inconsistent evaluations";
        res.lo = min_true;
        res.hi = max_false;
        res.found = true;
        res.estimate = 0.5 * (res.lo + res.hi);
        return res;
    }

    double lo = max_false;
    double hi = min_true;
    while (hi - lo > tol_delta) {
        const double mid = 0.5 * (lo + hi);
        if (eval(mid))
            hi = mid;
        else
            lo = mid;
    }
    res.found = true;
    res.lo = lo;
    res.hi = hi;
    res.estimate = 0.5 * (lo + hi);
    return res;
}

DeltaBarResult delta_bar(const FlexParams& params_excl_delta,
                         const FlexDomain& domain, int m, double tol_delta,
                         double solve_tol) {
    return delta_bar_search(
        [&](double d) {
            FlexParams fp = params_excl_delta;
            fp.delta = d;
            return solve_flexible(fp, domain, m, solve_tol).pooling_count == 0;
        },
        tol_delta);
}

}  // namespace replearn
