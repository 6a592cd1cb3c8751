#include "infomax/bernoulli.hpp"

#include <cmath>

namespace infomax {

namespace {

// x ln(x/y), with 0 ln 0 = 0.
double xlog_ratio(double x, double y) {
  if (x == 0.0) return 0.0;
  if (y == 0.0) return kInfinity;
  return x * std::log(x / y);
}

// Continued fraction for the regularized incomplete beta, modified Lentz.
double beta_cf(double x, double a, double b) {
  constexpr double tiny = 1e-300;
  constexpr double eps = 1e-15;
  double qab = a + b;
  double qap = a + 1.0;
  double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < tiny) d = tiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= 400000; ++m) {
    double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) <= eps) break;
  }
  return h;
}

double reg_inc_beta(double x, double a, double b) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  double front = std::exp(a * std::log(x) + b * std::log1p(-x) - log_beta(a, b));
  if (x < (a + 1.0) / (a + b + 2.0))
    return front * beta_cf(x, a, b) / a;
  return 1.0 - std::exp(b * std::log1p(-x) + a * std::log(x) - log_beta(a, b)) *
                   beta_cf(1.0 - x, b, a) / b;
}

}  // namespace

double kl_bernoulli(double p, double q) {
  if (p == q) return 0.0;
  return xlog_ratio(p, q) + xlog_ratio(1.0 - p, 1.0 - q);
}

double binary_entropy(double p) {
  double h = 0.0;
  if (p > 0.0) h -= p * std::log(p);
  if (p < 1.0) h -= (1.0 - p) * std::log1p(-p);
  return h;
}

double log_beta(double a, double b) {
  return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

double beta_log_pdf(const ArmStats& s, double x) {
  if (s.plays == 0) return 0.0;
  double w = static_cast<double>(s.wins);
  double l = static_cast<double>(s.plays - s.wins);
  double t = -log_beta(w + 1.0, l + 1.0);
  if (w > 0.0) t += w * std::log(x);
  if (l > 0.0) t += l * std::log1p(-x);
  return t;
}

double beta_cdf(const ArmStats& s, double x) {
  return reg_inc_beta(x, static_cast<double>(s.wins) + 1.0,
                      static_cast<double>(s.plays - s.wins) + 1.0);
}

}  // namespace infomax
