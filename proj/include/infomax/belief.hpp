#pragma once

#include <utility>
#include <vector>

#include "infomax/bernoulli.hpp"
#include "infomax/types.hpp"

namespace infomax {

// Node-placement parameters for the adaptive grid. Dense windows of spacing
// sigma/spacing_divisor are laid around each posterior mean (and around the
// play-weighted mixture point, which dominates the cross-arm integrals);
// the space between windows is filled with geometrically growing spacing.
struct GridSettings {
  int base_intervals = 64;
  double window_sigmas = 8.0;
  double spacing_divisor = 12.0;
  double bridge_growth = 1.35;

  friend bool operator==(const GridSettings&, const GridSettings&) = default;
};

// Shared abscissae over [0,1] plus per-arm posterior rows evaluated at the
// nodes. Log rows carry the tails (values down to exp(-1e6) are usable via
// their logs); linear rows serve the bulk quadratures. Immutable once built.
struct BeliefGrid {
  ArrayXd x;
  ArrayXd log_x, log_1mx;
  ArrayXd trapz;  // trapezoid weights for integration over the nodes

  std::vector<ArmStats> stats;
  std::vector<ArrayXd> log_pdf;  // analytic Beta log-density
  std::vector<ArrayXd> log_cdf;  // log-space cumulative, normalized to 0 at x=1
  std::vector<ArrayXd> pdf;      // normalized so the trapezoid integral is 1
  std::vector<ArrayXd> cdf;      // trapezoid cumulative of pdf, exact 1 at x=1

  std::vector<std::int64_t> key;  // quantized state the nodes were built from

  Index nodes() const { return x.size(); }
  int arms() const { return static_cast<int>(stats.size()); }
};

// Builds the grid for the given arm states. Node positions depend only on a
// quantized view of the stats, so equal states always produce identical
// grids regardless of the path that led to them.
BeliefGrid make_grid(const std::vector<ArmStats>& stats, const GridSettings& gs = {});

// Re-targets a grid at new stats. Keeps the node set when the quantized key
// is unchanged (idempotent for unchanged stats); always refreshes rows.
BeliefGrid refine(BeliefGrid grid, const std::vector<ArmStats>& stats,
                  const GridSettings& gs = {});

// Density of pi_max = max_i pi_i at the nodes:
// rho(x) = sum_i P_i(x) prod_{j != i} F_j(x).
ArrayXd max_density(const BeliefGrid& grid);

// Trapezoid integral of f over the grid nodes.
double integrate(const BeliefGrid& grid, const ArrayXd& f);

// -int rho ln rho dx with 0 ln 0 = 0; may be negative.
double differential_entropy(const BeliefGrid& grid, const ArrayXd& density);
double differential_entropy(const ArrayXd& x, const ArrayXd& density);

// Posterior probability of each arm being the best, carried in log space.
struct BestArmBelief {
  ArrayXd q;
  ArrayXd log_q;
  double entropy = 0.0;      // H(b_max), nats
  double log_entropy = 0.0;  // ln H(b_max), computed without cancellation

  int best() const {
    Index i = 0;
    log_q.maxCoeff(&i);
    return static_cast<int>(i);
  }
};

// q_i = int P_i(x) prod_{j != i} F_j(x) dx, integrated in log space so that
// tails as small as exp(-1e6) survive. Requires K >= 2.
BestArmBelief prob_best(const BeliefGrid& grid);

// H(b_max) = -sum q_i ln q_i and its log. The log switches to the
// -q ln q asymptotic once the non-maximal mass drops below ~1e-12, where the
// direct expression would cancel catastrophically.
std::pair<double, double> identity_entropy(const ArrayXd& q);
std::pair<double, double> identity_entropy_log(const ArrayXd& log_q);

namespace detail {

// Scratch rows for hypothetical single-arm updates on a fixed grid.
struct ArmRows {
  ArrayXd log_pdf, log_cdf, pdf, cdf, cells;
};

// Rebuilds one arm's rows on the grid's nodes (linear and/or log families).
void build_arm_rows(const BeliefGrid& grid, const ArmStats& s, bool want_linear,
                    bool want_log, ArmRows& out);

// Log-masses of the integrand exp(L) on each grid cell (exact for
// log-linear integrands). Boundary cells use the known power behavior
// x^left_power near 0 and (1-x)^right_power near 1.
void cell_log_masses(const ArrayXd& x, const ArrayXd& L, double left_power,
                     double right_power, ArrayXd& out);

// logsumexp of a log-mass array.
double log_sum_exp(const ArrayXd& v);

// log integral of exp(L) over the grid via cell_log_masses.
double log_integral_exp(const ArrayXd& x, const ArrayXd& L, double left_power,
                        double right_power, ArrayXd& scratch);

std::vector<std::int64_t> grid_key(const std::vector<ArmStats>& stats,
                                   const GridSettings& gs);

}  // namespace detail

}  // namespace infomax
