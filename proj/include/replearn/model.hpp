#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

namespace replearn {

/// Primitive parameters of the reputation game.
///
/// v     buyer value of a high-quality good (currency, > 0)
/// p     posted price (currency, 0 < p < v)
/// q     private-signal precision (1/2 < q < 1)
/// c     cost of producing high quality (currency, > 0)
/// delta seller discount factor (0 < delta < 1)
struct ModelParams {
    double v = 1.0;
    double p = 0.40;
    double q = 0.75;
    double c = 0.22;
    double delta = 0.92;

    /// Throws std::invalid_argument naming the violated constraint.
    void validate() const;
};

/// Constants derived from ModelParams.
///
/// z is the signal likelihood ratio q/(1-q); K the buyer's odds threshold
/// p/(v-p).  Odds below K/z (at or below lambda_under) form the down-cascade,
/// odds above K*z (at or above lambda_over) the up-cascade.  eta is the
/// myopic cost ratio c/(p(2q-1)).  Log-odds are the working coordinate:
/// ell_over - ell_under spans exactly two Bayes steps of log z.
struct Statics {
    double z = 0.0;
    double K = 0.0;
    double r_under = 0.0;
    double r_over = 0.0;
    double lambda_under = 0.0;
    double lambda_over = 0.0;
    double eta = 0.0;
    double log_z = 0.0;
    double ell_under = 0.0;
    double ell_over = 0.0;
};

enum class Region { DownCascade, Experimentation, UpCascade };

enum class Signal { H, L };

/// Buyer behavior when the posterior sits exactly on the purchase threshold.
enum class BuyerTieBreak { Buy, Pass };

/// Public belief that current quality is high, carried in both probability
/// and log-odds form.  Log-odds are authoritative for arithmetic.
struct Belief {
    double lambda = 0.5;
    double ell = 0.0;

    static Belief from_lambda(double lambda);
    static Belief from_ell(double ell);
};

/// Computes all Statics fields in closed form.  Validates params first.
Statics derive_statics(const ModelParams& params);

/// Classifies a belief.  Boundaries belong to the cascades: lambda <=
/// lambda_under is DownCascade, lambda >= lambda_over is UpCascade.
Region region_of(const Belief& belief, const Statics& statics);

/// One buyer's purchase decision given prior odds r and her signal.
/// Buys iff posterior odds exceed K, or equal K under the Buy tie-break.
int buyer_action(double r, Signal signal, const Statics& statics,
                 BuyerTieBreak tie_break = BuyerTieBreak::Buy);

/// Purchase probabilities (psi1, psi0) conditional on high/low quality.
std::pair<double, double> action_likelihoods(Region region, double q);

/// Bayes update of the public belief after observing a purchase (action=1)
/// or a non-purchase (action=0).  Interior beliefs move by +-log z in
/// log-odds; cascade and degenerate beliefs are unchanged.
Belief bayes_action_update(const Belief& belief, int action,
                           const Statics& statics);

/// One-period best response of the seller: invest only in the
/// experimentation region and only when eta < 1 (ties go to 0).
int myopic_policy(Region region, double eta);

}  // namespace replearn
