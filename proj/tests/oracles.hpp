#pragma once

// Test-side oracles, independent of the library's computation paths:
// long-double closed forms, dense Simpson quadrature, digamma-based Beta
// entropy, and a Monte-Carlo best-arm sampler.

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "infomax/types.hpp"

namespace oracle {

inline long double kl(long double p, long double q) {
  long double t = 0.0L;
  if (p > 0.0L) t += p * std::log(p / q);
  if (p < 1.0L) t += (1.0L - p) * std::log((1.0L - p) / (1.0L - q));
  return t;
}

inline long double entropy(long double p) {
  long double t = 0.0L;
  if (p > 0.0L) t -= p * std::log(p);
  if (p < 1.0L) t -= (1.0L - p) * std::log(1.0L - p);
  return t;
}

inline long double beta_pdf(std::int64_t wins, std::int64_t plays, long double x) {
  long double w = wins, l = plays - wins;
  long double lg = std::lgamma(w + 1.0L) + std::lgamma(l + 1.0L) - std::lgamma(w + l + 2.0L);
  long double t = -lg;
  if (w > 0) t += w * std::log(x);
  if (l > 0) t += l * std::log(1.0L - x);
  return std::exp(t);
}

// Composite Simpson of f over [0,1] with 2^k intervals.
template <typename F>
long double simpson01(F f, int k = 17) {
  const std::int64_t n = std::int64_t(1) << k;
  const long double h = 1.0L / n;
  long double s = f(0.0L) + f(1.0L);
  for (std::int64_t i = 1; i < n; ++i) s += f(i * h) * (i % 2 ? 4.0L : 2.0L);
  return s * h / 3.0L;
}

inline long double beta_cdf(std::int64_t wins, std::int64_t plays, long double x, int k = 17) {
  const std::int64_t n = std::int64_t(1) << k;
  const long double h = x / n;
  auto f = [&](long double t) { return beta_pdf(wins, plays, t); };
  long double s = f(0.0L) + f(x);
  for (std::int64_t i = 1; i < n; ++i) s += f(i * h) * (i % 2 ? 4.0L : 2.0L);
  return s * h / 3.0L;
}

// digamma via recurrence + asymptotic series; accurate to ~1e-14 for x > 0.
inline long double digamma(long double x) {
  long double r = 0.0L;
  while (x < 8.0L) {
    r -= 1.0L / x;
    x += 1.0L;
  }
  long double ix = 1.0L / x, ix2 = ix * ix;
  r += std::log(x) - 0.5L * ix -
       ix2 * (1.0L / 12.0L - ix2 * (1.0L / 120.0L - ix2 * (1.0L / 252.0L - ix2 / 240.0L)));
  return r;
}

// Differential entropy of Beta(a,b), closed form.
inline long double beta_entropy(long double a, long double b) {
  long double lb = std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
  return lb - (a - 1.0L) * digamma(a) - (b - 1.0L) * digamma(b) +
         (a + b - 2.0L) * digamma(a + b);
}

inline double sample_beta(std::int64_t wins, std::int64_t plays, std::mt19937_64& rng) {
  std::gamma_distribution<double> ga(double(wins) + 1.0, 1.0);
  std::gamma_distribution<double> gb(double(plays - wins) + 1.0, 1.0);
  double x = ga(rng);
  double y = gb(rng);
  return x / (x + y);
}

// Monte-Carlo estimate of Pr(arm 0 posterior beats arm 1 posterior).
struct McEstimate {
  double p;
  double se;
};

inline McEstimate mc_prob_first_best(const infomax::ArmStats& a, const infomax::ArmStats& b,
                                     int samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::int64_t hits = 0;
  for (int i = 0; i < samples; ++i) {
    double x = sample_beta(a.wins, a.plays, rng);
    double y = sample_beta(b.wins, b.plays, rng);
    if (x > y) ++hits;
  }
  double p = double(hits) / samples;
  // smoothed variance keeps the band meaningful at 0 or n hits
  double p_adj = (hits + 0.5) / (samples + 1.0);
  return {p, std::sqrt(p_adj * (1.0 - p_adj) / samples)};
}

}  // namespace oracle
