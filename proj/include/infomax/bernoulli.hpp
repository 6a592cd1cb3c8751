#pragma once

#include "infomax/types.hpp"

namespace infomax {

// Kullback-Leibler divergence D(p,q) = p ln(p/q) + (1-p) ln((1-p)/(1-q))
// between Bernoulli(p) and Bernoulli(q), in nats. Terms with p in {0,1}
// drop via the 0 ln 0 = 0 convention; q in {0,1} with p != q yields +inf,
// which is a legitimate value, not an error.
double kl_bernoulli(double p, double q);

// H(p) = -p ln p - (1-p) ln(1-p), nats.
double binary_entropy(double p);

// ln B(a,b) through lgamma, stable for counts up to 1e9.
double log_beta(double a, double b);

// Log-density of the Beta(wins+1, plays-wins+1) posterior at x. Identically 0
// for an unplayed arm (uniform prior). -inf at x in {0,1} when the matching
// exponent is positive.
double beta_log_pdf(const ArmStats& s, double x);

// Regularized incomplete beta I_x(wins+1, plays-wins+1), i.e. the posterior
// CDF, evaluated by Lentz continued fraction to ~1e-13 relative accuracy.
double beta_cdf(const ArmStats& s, double x);

}  // namespace infomax
