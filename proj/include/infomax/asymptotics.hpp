#pragma once

#include <string>
#include <vector>

#include "infomax/types.hpp"

namespace infomax {

// Lower bound on the expected number of plays of a suboptimal arm with mean
// p_i against the best arm p_1 after n total plays: ln n / D(p_i, p_1).
double lai_robbins_plays(double p_i, double p_1, double n);

// Regret slope against ln n when the bound is saturated: (p1-p2)/D(p2,p1).
double lai_robbins_regret_slope(double p_1, double p_2);

// n2 D(pi2_hat, pi1_hat) - ln n. Negative: the exploratory arm is due.
double infop_boundary_residual(double n, double n2, double pi1_hat, double pi2_hat);

// Play-weighted mixture of sample means.
double mixture_point(double n1, double n2, double pi1_hat, double pi2_hat);

// Mixture point and play fraction that equalize D(pi1,.) = D(pi2,.).
struct OptimalSplit {
  double pi_s;  // equalizing mixture point
  double x;     // fraction of plays on the better arm
};
OptimalSplit optimal_split(double pi1_hat, double pi2_hat);

// Fastest decay rate of ln H(b_max) per play: -D(p1, p_s) at the optimal
// split (equal to -D(p2, p_s) there). Negative.
double infoid_rate(double p_1, double p_2);

// Decay achieved by greedily reducing H(b_max) itself instead of its log.
struct MaxEntRate {
  double rate;       // nats per play, negative; slower than infoid_rate
  double x;          // equilibrium play fraction on the better arm
  double p_s;        // its mixture point
};
MaxEntRate maxent_rate(double p_1, double p_2);

// Expected regret change from starting with H_0 = ln2 / 2^m of prior
// information about the best arm's identity: -ln2 (p1-p_s)/D(p1,p_s) * m.
double voi_delta_regret(double p_1, double p_2, int m);

// Two-term entropy decomposition of H(pi_max): Gaussian exploit term and the
// exponent of the exploratory tail term (whose prefactor is not predicted).
struct EntropyAsymptote {
  double gaussian_term;         // 0.5 ln(2 pi e sigma_1^2)
  double exploratory_exponent;  // -n2 D(pi2_hat, pi1_hat)
};
EntropyAsymptote infop_entropy_asymptote(double n1, double n2, double pi1_hat,
                                         double pi2_hat);

// Labeled prediction for reporting.
struct RatePrediction {
  std::string name;
  double value;
  std::string units;
};
std::vector<RatePrediction> rate_table(double p_1, double p_2, double n);

}  // namespace infomax
