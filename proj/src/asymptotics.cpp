#include "infomax/asymptotics.hpp"

#include <cmath>
#include <stdexcept>

#include "infomax/bernoulli.hpp"

namespace infomax {

namespace {

void require_distinct_interior(double p_1, double p_2) {
  if (!(p_1 > 0.0 && p_1 < 1.0 && p_2 > 0.0 && p_2 < 1.0))
    throw std::invalid_argument("probabilities must be interior to (0,1)");
  if (p_1 == p_2) throw std::invalid_argument("probabilities must differ");
}

// Bisection on D(p1,q) = D(p2,q) for q between p2 and p1; cross-checks the
// closed form against transcription slips.
double equalizer_bisect(double p_1, double p_2) {
  double lo = std::min(p_1, p_2), hi = std::max(p_1, p_2);
  auto g = [&](double q) { return kl_bernoulli(p_1, q) - kl_bernoulli(p_2, q); };
  for (int it = 0; it < 200 && hi - lo > 1e-16; ++it) {
    double mid = 0.5 * (lo + hi);
    if (g(mid) * g(lo) <= 0.0)
      hi = mid;
    else
      lo = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

double lai_robbins_plays(double p_i, double p_1, double n) {
  if (p_i == p_1) throw std::invalid_argument("lai_robbins_plays: divergent at p_i = p_1");
  return std::log(n) / kl_bernoulli(p_i, p_1);
}

double lai_robbins_regret_slope(double p_1, double p_2) {
  return (p_1 - p_2) / kl_bernoulli(p_2, p_1);
}

double infop_boundary_residual(double n, double n2, double pi1_hat, double pi2_hat) {
  return n2 * kl_bernoulli(pi2_hat, pi1_hat) - std::log(n);
}

double mixture_point(double n1, double n2, double pi1_hat, double pi2_hat) {
  return (n1 * pi1_hat + n2 * pi2_hat) / (n1 + n2);
}

OptimalSplit optimal_split(double pi1_hat, double pi2_hat) {
  require_distinct_interior(pi1_hat, pi2_hat);
  double f = (binary_entropy(pi1_hat) - binary_entropy(pi2_hat)) / (pi1_hat - pi2_hat);
  double pi_s = 1.0 / (1.0 + std::exp(f));
  double check = equalizer_bisect(pi1_hat, pi2_hat);
  if (std::abs(pi_s - check) > 1e-9)
    throw std::logic_error("optimal_split: closed form disagrees with bisection");
  return {pi_s, (pi_s - pi2_hat) / (pi1_hat - pi2_hat)};
}

double infoid_rate(double p_1, double p_2) {
  OptimalSplit s = optimal_split(p_1, p_2);
  return -kl_bernoulli(p_1, s.pi_s);
}

MaxEntRate maxent_rate(double p_1, double p_2) {
  require_distinct_interior(p_1, p_2);
  double d12 = kl_bernoulli(p_1, p_2);
  double d21 = kl_bernoulli(p_2, p_1);
  double x = d12 / (d12 + d21);
  double p_s = (p_1 * d12 + p_2 * d21) / (d12 + d21);
  double rate = -(d12 * kl_bernoulli(p_1, p_s) + d21 * kl_bernoulli(p_2, p_s)) / (d12 + d21);
  return {rate, x, p_s};
}

double voi_delta_regret(double p_1, double p_2, int m) {
  if (m < 0) throw std::invalid_argument("voi_delta_regret: m must be >= 0");
  if (m == 0) return 0.0;
  OptimalSplit s = optimal_split(p_1, p_2);
  return -std::log(2.0) * (p_1 - s.pi_s) / kl_bernoulli(p_1, s.pi_s) * m;
}

EntropyAsymptote infop_entropy_asymptote(double n1, double n2, double pi1_hat,
                                         double pi2_hat) {
  double var1 = pi1_hat * (1.0 - pi1_hat) / n1;
  double gauss = 0.5 * std::log(2.0 * M_PI * M_E * var1);
  return {gauss, -n2 * kl_bernoulli(pi2_hat, pi1_hat)};
}

std::vector<RatePrediction> rate_table(double p_1, double p_2, double n) {
  OptimalSplit s = optimal_split(p_1, p_2);
  MaxEntRate me = maxent_rate(p_1, p_2);
  std::vector<RatePrediction> t;
  t.push_back({"kl_p2_p1", kl_bernoulli(p_2, p_1), "nats"});
  t.push_back({"kl_p1_p2", kl_bernoulli(p_1, p_2), "nats"});
  t.push_back({"lai_robbins_plays", lai_robbins_plays(p_2, p_1, n), "plays"});
  t.push_back({"lai_robbins_regret_slope", lai_robbins_regret_slope(p_1, p_2),
               "regret per ln(plays)"});
  t.push_back({"mixture_point_optimal", s.pi_s, "probability"});
  t.push_back({"play_fraction_optimal", s.x, "fraction"});
  t.push_back({"infoid_rate", infoid_rate(p_1, p_2), "nats per play"});
  t.push_back({"maxent_rate", me.rate, "nats per play"});
  t.push_back({"maxent_play_fraction", me.x, "fraction"});
  t.push_back({"maxent_mixture_point", me.p_s, "probability"});
  t.push_back({"voi_regret_per_level", voi_delta_regret(p_1, p_2, 1), "regret per level"});
  return t;
}

}  // namespace infomax
