#include "infomax/belief.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace infomax {

namespace {

constexpr double kLogCellQuantum = 0.04879016417;  // ln(1.05): plays quantum
constexpr double kLogitCell = 1.0 / 16.0;          // posterior-mean lattice, logit units
constexpr double kSigmaInflate = 1.07;             // covers quantization slack

struct Cluster {
  double lo, hi, spacing;
};

double sigmoid(double s) { return 1.0 / (1.0 + std::exp(-s)); }

// Quantized center/scale of one arm's posterior. Pure in the key integers.
void quantized_gaussian(std::int64_t logit_cell, double n_pow, double& mu_q,
                        double& sigma_q) {
  double s = (static_cast<double>(logit_cell) + 0.5) * kLogitCell;
  mu_q = sigmoid(s);
  sigma_q = kSigmaInflate * std::sqrt(mu_q * (1.0 - mu_q) / n_pow);
}

void append_window(double mu_q, double sigma_q, const GridSettings& gs,
                   std::vector<double>& nodes, std::vector<Cluster>& clusters) {
  double h = sigma_q / gs.spacing_divisor;
  int half = static_cast<int>(std::ceil(gs.window_sigmas * gs.spacing_divisor));
  double lo = 1.0, hi = 0.0;
  for (int k = -half; k <= half; ++k) {
    double x = mu_q + k * h;
    if (x <= 0.0 || x >= 1.0) continue;
    nodes.push_back(x);
    lo = std::min(lo, x);
    hi = std::max(hi, x);
  }
  if (lo <= hi) clusters.push_back({lo, hi, h});
}

void append_bridge(double anchor, double dir, double h0, double cap, double growth,
                   std::vector<double>& nodes) {
  double h = h0;
  double x = anchor;
  while (h <= cap) {
    x += dir * h;
    if (x <= 0.0 || x >= 1.0) return;
    nodes.push_back(x);
    h *= growth;
  }
}

ArrayXd to_array(std::vector<double>& nodes) {
  std::sort(nodes.begin(), nodes.end());
  std::vector<double> out;
  out.reserve(nodes.size());
  for (double v : nodes) {
    if (out.empty() || v - out.back() > 1e-13) out.push_back(v);
  }
  if (out.back() < 1.0) out.push_back(1.0);
  return Eigen::Map<ArrayXd>(out.data(), static_cast<Index>(out.size()));
}

ArrayXd build_nodes(const std::vector<ArmStats>& stats, const GridSettings& gs) {
  std::vector<double> nodes;
  nodes.reserve(1024);
  nodes.push_back(0.0);
  nodes.push_back(1.0);
  for (int j = 0; j <= gs.base_intervals; ++j)
    nodes.push_back(static_cast<double>(j) / gs.base_intervals);

  std::vector<Cluster> clusters;
  double n_total_q = 0.0, mix_num = 0.0;
  int played = 0;
  for (const ArmStats& s : stats) {
    if (s.plays == 0) continue;
    ++played;
    double mu = s.posterior_mean();
    std::int64_t nu =
        static_cast<std::int64_t>(std::floor(std::log(static_cast<double>(s.plays)) / kLogCellQuantum));
    double n_pow = std::exp(nu * kLogCellQuantum);
    std::int64_t cell = static_cast<std::int64_t>(std::floor(std::log(mu / (1.0 - mu)) / kLogitCell));
    double mu_q, sigma_q;
    quantized_gaussian(cell, n_pow, mu_q, sigma_q);
    append_window(mu_q, sigma_q, gs, nodes, clusters);
    n_total_q += n_pow;
    mix_num += n_pow * mu_q;
  }
  if (played >= 2) {
    double mu_mix = mix_num / n_total_q;
    std::int64_t cell =
        static_cast<std::int64_t>(std::floor(std::log(mu_mix / (1.0 - mu_mix)) / kLogitCell));
    double s = (static_cast<double>(cell) + 0.5) * kLogitCell;
    double mu_q = sigmoid(s);
    double sigma_q = kSigmaInflate * std::sqrt(mu_q * (1.0 - mu_q) / n_total_q);
    append_window(mu_q, sigma_q, gs, nodes, clusters);
  }

  double cap = 1.0 / gs.base_intervals;
  for (const Cluster& c : clusters) {
    append_bridge(c.lo, -1.0, c.spacing, cap, gs.bridge_growth, nodes);
    append_bridge(c.hi, +1.0, c.spacing, cap, gs.bridge_growth, nodes);
  }
  return to_array(nodes);
}

// logaddexp chain; exact for arbitrary dynamic range.
double log_add(double a, double b) {
  if (a == -kInfinity) return b;
  if (b == -kInfinity) return a;
  double hi = std::max(a, b);
  double d = hi - std::min(a, b);
  if (d > 40.0) return hi;
  return hi + std::log1p(std::exp(-d));
}

// Log-space cumulative of exp(log_pdf) at every node; out[last] is the raw
// log total, which the caller subtracts to normalize. Power-law boundary
// cells keep the first/last masses exact where the log rows hit -inf.
double log_cumulative(const ArrayXd& x, const ArrayXd& log_pdf, double left_power,
                      double right_power, ArrayXd& cells, ArrayXd& out) {
  detail::cell_log_masses(x, log_pdf, left_power, right_power, cells);
  const Index n = x.size();
  out.resize(n);
  out[0] = -kInfinity;
  double carry = -kInfinity;
  for (Index k = 1; k < n; ++k) {
    carry = log_add(carry, cells[k - 1]);
    out[k] = carry;
  }
  return carry;
}

}  // namespace

namespace detail {

void cell_log_masses(const ArrayXd& x, const ArrayXd& L, double left_power,
                     double right_power, ArrayXd& out) {
  const Index n = x.size();
  out.resize(n - 1);
  for (Index k = 0; k + 1 < n; ++k) {
    double la = L[k], lb = L[k + 1];
    double h = x[k + 1] - x[k];
    if (la == -kInfinity && lb == -kInfinity) {
      out[k] = -kInfinity;
    } else if (la == -kInfinity) {
      // first cell, integrand ~ C x^s
      out[k] = lb + std::log(x[k + 1]) - std::log1p(left_power);
    } else if (lb == -kInfinity) {
      // last cell, integrand ~ C (1-x)^s
      out[k] = la + std::log1p(-x[k]) - std::log1p(right_power);
    } else {
      double m = std::max(la, lb);
      double d = std::abs(la - lb);
      double f;  // ln((1 - e^-d)/d)
      if (d < 1e-6)
        f = -0.5 * d + d * d / 24.0;
      else
        f = std::log(-std::expm1(-d)) - std::log(d);
      out[k] = m + std::log(h) + f;
    }
  }
}

double log_sum_exp(const ArrayXd& v) {
  double m = v.maxCoeff();
  if (m == -kInfinity || std::isnan(m)) return m;
  return m + std::log((v - m).exp().sum());
}

double log_integral_exp(const ArrayXd& x, const ArrayXd& L, double left_power,
                        double right_power, ArrayXd& scratch) {
  cell_log_masses(x, L, left_power, right_power, scratch);
  return log_sum_exp(scratch);
}

std::vector<std::int64_t> grid_key(const std::vector<ArmStats>& stats,
                                   const GridSettings& gs) {
  std::vector<std::int64_t> key;
  key.reserve(2 * stats.size() + 2);
  key.push_back(static_cast<std::int64_t>(stats.size()));
  key.push_back(gs.base_intervals);
  for (const ArmStats& s : stats) {
    if (s.plays == 0) {
      key.push_back(-1);
      key.push_back(0);
      continue;
    }
    double mu = s.posterior_mean();
    key.push_back(static_cast<std::int64_t>(
        std::floor(std::log(static_cast<double>(s.plays)) / kLogCellQuantum)));
    key.push_back(static_cast<std::int64_t>(std::floor(std::log(mu / (1.0 - mu)) / kLogitCell)));
  }
  return key;
}

void build_arm_rows(const BeliefGrid& grid, const ArmStats& s, bool want_linear,
                    bool want_log, ArmRows& out) {
  const Index n = grid.nodes();
  double w = static_cast<double>(s.wins);
  double l = static_cast<double>(s.plays - s.wins);

  out.log_pdf.resize(n);
  if (s.plays == 0) {
    out.log_pdf.setZero();
  } else {
    out.log_pdf.setConstant(-log_beta(w + 1.0, l + 1.0));
    if (w > 0.0) out.log_pdf += w * grid.log_x;
    if (l > 0.0) out.log_pdf += l * grid.log_1mx;
  }

  if (want_log) {
    double total = log_cumulative(grid.x, out.log_pdf, w, l, out.cells, out.log_cdf);
    out.log_cdf -= total;
    out.log_cdf[n - 1] = 0.0;
  }
  if (want_linear) {
    out.pdf = out.log_pdf.exp();
    double t = (grid.trapz * out.pdf).sum();
    out.pdf /= t;
    out.cdf.resize(n);
    out.cdf[0] = 0.0;
    double acc = 0.0;
    for (Index k = 1; k < n; ++k) {
      acc += 0.5 * (grid.x[k] - grid.x[k - 1]) * (out.pdf[k] + out.pdf[k - 1]);
      out.cdf[k] = acc;
    }
    double norm = out.cdf[n - 1];
    out.cdf /= norm;
    out.pdf /= norm;
  }
}

}  // namespace detail

BeliefGrid make_grid(const std::vector<ArmStats>& stats, const GridSettings& gs) {
  return refine(BeliefGrid{}, stats, gs);
}

BeliefGrid refine(BeliefGrid grid, const std::vector<ArmStats>& stats,
                  const GridSettings& gs) {
  auto key = detail::grid_key(stats, gs);
  bool same_nodes = (key == grid.key) && grid.x.size() > 0;
  if (same_nodes && grid.stats == stats) return grid;

  if (!same_nodes) {
    grid.x = build_nodes(stats, gs);
    const Index n = grid.x.size();
    grid.log_x = grid.x.log();
    grid.log_1mx = (-grid.x).log1p();
    grid.trapz.resize(n);
    grid.trapz.setZero();
    for (Index k = 0; k + 1 < n; ++k) {
      double h2 = 0.5 * (grid.x[k + 1] - grid.x[k]);
      grid.trapz[k] += h2;
      grid.trapz[k + 1] += h2;
    }
    grid.key = std::move(key);
  }

  const int K = static_cast<int>(stats.size());
  grid.stats = stats;
  grid.log_pdf.resize(K);
  grid.log_cdf.resize(K);
  grid.pdf.resize(K);
  grid.cdf.resize(K);
  detail::ArmRows rows;
  for (int i = 0; i < K; ++i) {
    detail::build_arm_rows(grid, stats[i], true, true, rows);
    grid.log_pdf[i] = std::move(rows.log_pdf);
    grid.log_cdf[i] = std::move(rows.log_cdf);
    grid.pdf[i] = std::move(rows.pdf);
    grid.cdf[i] = std::move(rows.cdf);
  }
  return grid;
}

ArrayXd max_density(const BeliefGrid& grid) {
  const int K = grid.arms();
  if (K < 1) throw std::invalid_argument("max_density: need at least one arm");
  ArrayXd rho = ArrayXd::Zero(grid.nodes());
  ArrayXd term(grid.nodes());
  for (int i = 0; i < K; ++i) {
    term = grid.pdf[i];
    for (int j = 0; j < K; ++j)
      if (j != i) term *= grid.cdf[j];
    rho += term;
  }
  return rho;
}

double integrate(const BeliefGrid& grid, const ArrayXd& f) {
  return (grid.trapz * f).sum();
}

double differential_entropy(const BeliefGrid& grid, const ArrayXd& density) {
  ArrayXd g = (density > 0.0).select(-density * density.max(1e-300).log(), 0.0);
  return (grid.trapz * g).sum();
}

double differential_entropy(const ArrayXd& x, const ArrayXd& density) {
  const Index n = x.size();
  double h = 0.0;
  auto g = [&](Index k) {
    double d = density[k];
    return d > 0.0 ? -d * std::log(d) : 0.0;
  };
  for (Index k = 0; k + 1 < n; ++k) h += 0.5 * (x[k + 1] - x[k]) * (g(k) + g(k + 1));
  return h;
}

BestArmBelief prob_best(const BeliefGrid& grid) {
  const int K = grid.arms();
  if (K < 2) throw std::invalid_argument("prob_best: need at least two arms");
  BestArmBelief out;
  out.log_q.resize(K);
  ArrayXd integrand(grid.nodes()), scratch;
  for (int i = 0; i < K; ++i) {
    integrand = grid.log_pdf[i];
    double left_power = static_cast<double>(grid.stats[i].wins);
    for (int j = 0; j < K; ++j) {
      if (j == i) continue;
      integrand += grid.log_cdf[j];
      left_power += static_cast<double>(grid.stats[j].wins) + 1.0;
    }
    double right_power = static_cast<double>(grid.stats[i].plays - grid.stats[i].wins);
    out.log_q[i] = detail::log_integral_exp(grid.x, integrand, left_power, right_power, scratch);
  }
  out.log_q -= detail::log_sum_exp(out.log_q);
  out.q = out.log_q.exp();
  auto [h, lh] = identity_entropy_log(out.log_q);
  out.entropy = h;
  out.log_entropy = lh;
  return out;
}

std::pair<double, double> identity_entropy_log(const ArrayXd& log_q) {
  const Index K = log_q.size();
  Index m = 0;
  log_q.maxCoeff(&m);
  double rest = -kInfinity;
  for (Index i = 0; i < K; ++i)
    if (i != m) rest = log_add(rest, log_q[i]);

  if (rest == -kInfinity) return {0.0, -kInfinity};

  if (rest > -27.6) {  // exact branch; q_max is far enough from 1
    double h = 0.0;
    for (Index i = 0; i < K; ++i) {
      double q = std::exp(log_q[i]);
      if (q > 0.0) h -= q * log_q[i];
    }
    h = std::max(h, 0.0);
    return {h, std::log(h)};
  }
  // asymptotic branch: H ~ sum_{i != m} q_i (1 - ln q_i)
  double lh = -kInfinity;
  for (Index i = 0; i < K; ++i) {
    if (i == m || log_q[i] == -kInfinity) continue;
    lh = log_add(lh, log_q[i] + std::log(1.0 - log_q[i]));
  }
  return {std::exp(lh), lh};
}

std::pair<double, double> identity_entropy(const ArrayXd& q) {
  double s = q.sum();
  ArrayXd log_q = (q / s).max(0.0).log();
  return identity_entropy_log(log_q);
}

}  // namespace infomax
