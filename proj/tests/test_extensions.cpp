#include <doctest.h>

#include <cmath>
#include <limits>

#include "replearn/outcome_ext.hpp"
#include "replearn/price_ext.hpp"

using namespace replearn;

namespace {

ModelParams fig1() { return {1.0, 0.40, 0.75, 0.22, 0.92}; }

FlexParams fig1_flex(double delta) { return {1.0, 0.75, 0.22, delta}; }

}  // namespace

TEST_CASE("implementable price interval") {
    const PriceSet ps = price_set(Belief::from_lambda(0.5), 1.0, 3.0);
    CHECK(ps.p_low == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(ps.p_high == doctest::Approx(0.75).epsilon(1e-12));

    const PriceSet top = price_set(Belief::from_lambda(1.0 - 1e-9), 1.0, 3.0);
    CHECK(top.p_low == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(top.p_high == doctest::Approx(1.0).epsilon(1e-6));

    for (double lambda : {0.05, 0.2, 0.5, 0.8, 0.97}) {
        const PriceSet s = price_set(Belief::from_lambda(lambda), 1.0, 3.0);
        CHECK(s.p_low < s.p_high);
        CHECK(s.p_low > 0.0);
        CHECK(s.p_high < 1.0);
    }
    CHECK_THROWS_AS(price_set(Belief::from_lambda(0.0), 1.0, 3.0),
                    std::invalid_argument);
}

TEST_CASE("prices inside the set keep the buyer on her signal") {
    for (double lambda : {0.1, 0.3, 0.5, 0.7, 0.9}) {
        for (double q : {0.6, 0.75, 0.9}) {
            const double z = q / (1.0 - q);
            const Belief b = Belief::from_lambda(lambda);
            const PriceSet ps = price_set(b, 1.0, z);
            ModelParams mp = fig1();
            mp.q = q;
            mp.p = 0.5 * (ps.p_low + ps.p_high);
            const Statics s = derive_statics(mp);
            const double r = lambda / (1.0 - lambda);
            CHECK(buyer_action(r, Signal::H, s) == 1);
            CHECK(buyer_action(r, Signal::L, s) == 0);
        }
    }
}

TEST_CASE("impatient flexible-price seller solves the myopic comparison") {
    const FlexParams fp = fig1_flex(0.0);
    const FlexSolution fx = solve_flexible(fp, {0.05, 0.95}, 4, 1e-12);
    for (std::size_t k = 0; k < fx.ell.size(); ++k) {
        const PriceSet ps =
            price_set(Belief::from_ell(fx.ell[k]), fp.v, 3.0);
        const double info =
            std::max(ps.p_high * (1.0 - fp.q), ps.p_high * fp.q - fp.c);
        CHECK(fx.V[k] == doctest::Approx(std::max(ps.p_low, info))
                             .epsilon(1e-12));
        CHECK(fx.pooling[k] == (ps.p_low > info ? 1 : 0));
    }
}

TEST_CASE("patient flexible-price seller pools only near certainty") {
    const FlexSolution fx = solve_flexible(fig1_flex(0.95), {0.01, 0.99}, 50);
    CHECK(fx.pooling_count > 0);
    for (std::size_t k = 0; k < fx.ell.size(); ++k) {
        if (fx.pooling[k]) {
            CHECK(fx.lambda[k] > 0.95);
            CHECK(fx.theta[k] == 0.0);
        } else {
            // Informative nodes post the top implementable price.
            const PriceSet ps =
                price_set(Belief::from_ell(fx.ell[k]), 1.0, 3.0);
            CHECK(fx.price[k] == doctest::Approx(ps.p_high).epsilon(1e-12));
        }
    }
    // The informative branch steps exactly m grid intervals, i.e. +-log z.
    CHECK(fx.log_z == doctest::Approx(std::log(3.0)).epsilon(1e-12));
    CHECK(fx.ell[static_cast<std::size_t>(fx.m)] - fx.ell[0] ==
          doctest::Approx(fx.log_z).epsilon(1e-9));
}

TEST_CASE("pooling recedes as patience grows") {
    const FlexSolution lo = solve_flexible(fig1_flex(0.5), {0.01, 0.99}, 25);
    const FlexSolution hi = solve_flexible(fig1_flex(0.95), {0.01, 0.99}, 25);
    CHECK(lo.pooling_count > hi.pooling_count);
}

TEST_CASE("delta_bar on the flexible-price model") {
    const DeltaBarResult res = delta_bar(fig1_flex(0.0), {0.01, 0.99}, 25,
                                         1e-3, 1e-9);
    REQUIRE(res.found);
    CHECK(res.monotone_consistent);
    CHECK(res.lo > 0.0);
    CHECK(res.hi < 1.0);
    CHECK(res.hi - res.lo <= 1e-3 + 1e-12);
    // The threshold sits between a pooling delta and a non-pooling delta.
    CHECK(solve_flexible(fig1_flex(res.lo - 0.05), {0.01, 0.99}, 25)
              .pooling_count > 0);
    CHECK(solve_flexible(fig1_flex(std::min(res.hi + 0.01, 0.999)),
                         {0.01, 0.99}, 25)
              .pooling_count == 0);
}

TEST_CASE("delta_bar search mechanics with injected predicates") {
    SUBCASE("clean threshold") {
        const DeltaBarResult res = delta_bar_search(
            [](double d) { return d > 0.437; }, 1e-3);
        REQUIRE(res.found);
        CHECK(res.monotone_consistent);
        CHECK(res.lo <= 0.437);
        CHECK(res.hi >= 0.437);
        CHECK(res.hi - res.lo <= 1e-3 + 1e-12);
        CHECK(res.estimate == doctest::Approx(0.437).epsilon(2e-3));
    }
    SUBCASE("coarse tolerance stops almost immediately") {
        const DeltaBarResult res =
            delta_bar_search([](double d) { return d > 0.437; }, 0.5);
        CHECK(res.evaluations.size() <= 3);
    }
    SUBCASE("always-pooling reports not found") {
        const DeltaBarResult res =
            delta_bar_search([](double) { return false; }, 1e-3);
        CHECK_FALSE(res.found);
        CHECK(res.note.find("persists") != std::string::npos);
    }
    SUBCASE("never-pooling reports not found") {
        const DeltaBarResult res =
            delta_bar_search([](double) { return true; }, 1e-3);
        CHECK_FALSE(res.found);
        CHECK(res.note.find("no pooling even") != std::string::npos);
    }
    SUBCASE("non-monotone predicate is flagged with the widest bracket") {
        const DeltaBarResult res = delta_bar_search(
            [](double d) { return d > 0.85 || (d > 0.15 && d < 0.25); },
            1e-3);
        CHECK_FALSE(res.monotone_consistent);
        CHECK(res.note.find("warning") != std::string::npos);
        CHECK(res.lo == doctest::Approx(0.2));
        CHECK(res.hi == doctest::Approx(0.8));
    }
}

TEST_CASE("outcome-augmented Bayes update") {
    const Statics s = derive_statics(fig1());
    const Belief b = Belief::from_lambda(0.5);

    CHECK(outcome_update(b, 1, Outcome::Good, s, 3.0).lambda ==
          doctest::Approx(0.9).epsilon(1e-12));
    CHECK(outcome_update(b, 1, Outcome::Bad, s, 3.0).lambda ==
          doctest::Approx(0.5).epsilon(1e-12));
    CHECK(outcome_update(b, 0, Outcome::None, s, 3.0).lambda ==
          doctest::Approx(0.25).epsilon(1e-12));

    const double w_inf = std::numeric_limits<double>::infinity();
    CHECK(outcome_update(b, 1, Outcome::Good, s, w_inf).lambda == 1.0);
    CHECK(outcome_update(b, 1, Outcome::Bad, s, w_inf).lambda == 0.0);

    // Frozen in cascades.
    const Belief up = Belief::from_lambda(0.8);
    CHECK(outcome_update(up, 1, Outcome::Good, s, 3.0).lambda == 0.8);

    CHECK_THROWS_AS(outcome_update(b, 1, Outcome::None, s, 3.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(outcome_update(b, 0, Outcome::Good, s, 3.0),
                    std::invalid_argument);
}

TEST_CASE("outcome likelihood coefficients add up") {
    for (double q : {0.55, 0.75, 0.9}) {
        for (double rho : {0.55, 0.65, 0.75, 0.85, 0.99}) {
            CHECK((q + rho - 1.0) + (q - rho) ==
                  doctest::Approx(2.0 * q - 1.0).epsilon(1e-15));
        }
    }
}

TEST_CASE("vanishing outcome precision recovers the benchmark") {
    const Solution bench = solve(fig1(), {});
    const OutcomeSolution os = solve_outcomes(fig1(), 0.5 + 1e-9, 50);
    double gap = 0.0;
    for (std::size_t k = 0; k < bench.V.size(); ++k)
        gap = std::max(gap, std::abs(os.V[k] - bench.V[k]));
    CHECK(gap <= 1e-6);
}

TEST_CASE("outcome disclosure keeps every benchmark investment node active") {
    const Solution bench = solve(fig1(), {});
    const OutcomeSolution os = solve_outcomes(fig1(), 0.75, 50);
    for (int k = 1; k <= 2 * os.grid.m - 1; ++k) {
        if (bench.Delta[static_cast<std::size_t>(k)] > 0.0)
            CHECK(os.Delta[static_cast<std::size_t>(k)] > 0.0);
    }
    // The printed decomposition genuinely differs from the exact one here.
    CHECK(os.max_display_discrepancy > 1e-3);
    CHECK(os.rho == 0.75);
    CHECK(os.sup_residual <= 1e-10);
}

TEST_CASE("outcome solver matches the lattice oracle at rho equal to 0.75") {
    // With rho = 0.75 the outcome likelihood ratio equals z, so a good
    // outcome jumps two Bayes steps (always absorbing up from the interior)
    // and a bad outcome exactly cancels the action step.  Each zone then
    // solves a scalar fixed point, independent of the interpolation path.
    const double p = 0.40, q = 0.75, c = 0.22, delta = 0.92, rho = 0.75;
    const double v_up = 5.0;
    const auto zone_value = [&](double dn) {
        double x = 0.0;
        for (int i = 0; i < 100000; ++i) {
            const double invest =
                p * q - c +
                delta * (q * (rho * v_up + (1.0 - rho) * x) + (1.0 - q) * dn);
            const double shirk =
                p * (1.0 - q) +
                delta *
                    ((1.0 - q) * ((1.0 - rho) * v_up + rho * x) + q * dn);
            const double next = std::max(invest, shirk);
            if (std::abs(next - x) < 1e-14) return next;
            x = next;
        }
        return x;
    };
    const double zone1 = zone_value(0.0);
    const double zone2 = zone_value(zone1);

    const OutcomeSolution os = solve_outcomes(fig1(), 0.75, 50);
    const int m = os.grid.m;
    for (int k = 1; k <= 2 * m - 1; ++k) {
        // The center node's pass also exits down, so it shares the zone-1
        // equation here.
        const double expected = k <= m ? zone1 : zone2;
        CHECK(os.V[static_cast<std::size_t>(k)] ==
              doctest::Approx(expected).epsilon(1e-8));
    }
    const double delta_zone2 =
        (2.0 * q - 1.0) * p - c +
        delta * ((q + rho - 1.0) * v_up + (q - rho) * zone2 -
                 (2.0 * q - 1.0) * zone1);
    CHECK(os.Delta[static_cast<std::size_t>(2 * m - 1)] ==
          doctest::Approx(delta_zone2).epsilon(1e-8));
    CHECK(os.Delta[1] == doctest::Approx(2.28).epsilon(1e-8));
}

TEST_CASE("outcome solver input validation") {
    CHECK_THROWS_AS(solve_outcomes(fig1(), 0.5, 10), std::invalid_argument);
    CHECK_THROWS_AS(solve_outcomes(fig1(), 1.2, 10), std::invalid_argument);
    CHECK_THROWS_AS(OutcomeParams::from_rho(0.4), std::invalid_argument);
    CHECK(OutcomeParams::from_rho(0.75).w == doctest::Approx(3.0));
}

TEST_CASE("public outcomes accelerate absorption into the up-cascade") {
    const Solution bench = solve(fig1(), {});
    const OutcomeSolution os = solve_outcomes(fig1(), 0.9, 50);
    const HittingStats base = hitting_stats(bench, 0.5, 20000, 500, 33);
    const HittingStats fast = hitting_stats_outcomes(os, 0.5, 20000, 500, 33);
    CHECK(fast.mean_tau_up <=
          base.mean_tau_up + 3.0 * (base.se_tau + fast.se_tau));
    CHECK(fast.mean_tau_up < base.mean_tau_up);
}

TEST_CASE("precision sweep emits the comparative-statics table") {
    const auto table = precision_sweep(fig1(), {0.6, 0.75, 0.9}, 25);
    REQUIRE(table.size() == 3);
    for (std::size_t i = 1; i < table.size(); ++i) {
        CHECK(table[i].lambda_under < table[i - 1].lambda_under);
        CHECK(table[i].lambda_over > table[i - 1].lambda_over);
    }
    for (const auto& row : table) CHECK(row.invest_nodes >= 0);

    // A single-element sweep is one solve.
    const auto single = precision_sweep(fig1(), {0.75}, 25);
    SolveOptions opts;
    opts.m = 25;
    const Solution direct = solve(fig1(), opts);
    const PatternReport rep = classify(direct);
    REQUIRE(single.size() == 1);
    CHECK(single[0].classification == rep.classification);
    CHECK(single[0].lambda_under == direct.statics.lambda_under);
    CHECK(single[0].z == direct.statics.z);
}
