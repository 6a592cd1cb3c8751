#include "infomax/policies.hpp"

#include <cmath>
#include <stdexcept>

namespace infomax {

namespace {

struct Scratch {
  detail::ArmRows rows;
  ArrayXd rho, term, integrand, cells, log_q;
};

Scratch& scratch() {
  static thread_local Scratch s;
  return s;
}

Decision pick_min(ArrayXd scores) {
  Decision d;
  Index arm = 0;
  double best = scores.minCoeff(&arm);
  d.arm = static_cast<int>(arm);
  d.tie = false;
  for (Index i = 0; i < scores.size(); ++i)
    if (i != arm && scores[i] == best) d.tie = true;
  d.scores = std::move(scores);
  return d;
}

// Entropy of pi_max with one arm's linear rows swapped out.
double entropy_swapped(const BeliefGrid& g, int swap, const ArrayXd& pdf_s,
                       const ArrayXd& cdf_s, Scratch& ws) {
  const int K = g.arms();
  ws.rho.setZero(g.nodes());
  for (int i = 0; i < K; ++i) {
    ws.term = (i == swap) ? pdf_s : g.pdf[i];
    for (int j = 0; j < K; ++j)
      if (j != i) ws.term *= (j == swap) ? cdf_s : g.cdf[j];
    ws.rho += ws.term;
  }
  return differential_entropy(g, ws.rho);
}

// ln H(b_max) with one arm's log rows and stats swapped out.
double log_entropy_swapped(const BeliefGrid& g, int swap, const ArmStats& stats_s,
                           const ArrayXd& log_pdf_s, const ArrayXd& log_cdf_s,
                           Scratch& ws) {
  const int K = g.arms();
  ws.log_q.resize(K);
  auto stat = [&](int i) -> const ArmStats& { return i == swap ? stats_s : g.stats[i]; };
  for (int i = 0; i < K; ++i) {
    ws.integrand = (i == swap) ? log_pdf_s : g.log_pdf[i];
    double left = static_cast<double>(stat(i).wins);
    for (int j = 0; j < K; ++j) {
      if (j == i) continue;
      ws.integrand += (j == swap) ? log_cdf_s : g.log_cdf[j];
      left += static_cast<double>(stat(j).wins) + 1.0;
    }
    double right = static_cast<double>(stat(i).plays - stat(i).wins);
    ws.log_q[i] = detail::log_integral_exp(g.x, ws.integrand, left, right, ws.cells);
  }
  ws.log_q -= detail::log_sum_exp(ws.log_q);
  return identity_entropy_log(ws.log_q).second;
}

enum class Objective { MaxEntropy, LogIdentity, Identity };

const ArrayXd& empty_row() {
  static const ArrayXd e;
  return e;
}

Decision entropy_policy_decide(const std::vector<ArmStats>& stats, const BeliefGrid& grid,
                               Objective obj) {
  const int K = static_cast<int>(stats.size());
  if (grid.stats != stats)
    throw std::invalid_argument("decide: grid rows do not match the arm stats");
  Scratch& ws = scratch();

  double base = 0.0;
  if (obj == Objective::MaxEntropy) {
    ws.rho = max_density(grid);
    base = differential_entropy(grid, ws.rho);
  } else {
    base = log_entropy_swapped(grid, -1, ArmStats{}, empty_row(), empty_row(), ws);
  }

  ArrayXd scores(K);
  for (int i = 0; i < K; ++i) {
    double p_win = stats[i].posterior_mean();
    double after[2];
    const bool outcomes[2] = {true, false};
    for (int k = 0; k < 2; ++k) {
      ArmStats hypo = record(stats[i], outcomes[k]);
      if (obj == Objective::MaxEntropy) {
        detail::build_arm_rows(grid, hypo, true, false, ws.rows);
        after[k] = entropy_swapped(grid, i, ws.rows.pdf, ws.rows.cdf, ws);
      } else {
        detail::build_arm_rows(grid, hypo, false, true, ws.rows);
        after[k] = log_entropy_swapped(grid, i, hypo, ws.rows.log_pdf, ws.rows.log_cdf, ws);
      }
    }
    if (obj == Objective::Identity) {
      // relative change of H: exp(ln H' - ln H) - 1, averaged over outcomes
      scores[i] = p_win * (std::exp(after[0] - base) - 1.0) +
                  (1.0 - p_win) * (std::exp(after[1] - base) - 1.0);
    } else {
      scores[i] = p_win * after[0] + (1.0 - p_win) * after[1] - base;
    }
  }
  return pick_min(std::move(scores));
}

double bisect_kl_upper(double pi_hat, double target) {
  if (target <= 0.0) return pi_hat;
  if (pi_hat >= 1.0) return 1.0;
  if (kl_bernoulli(pi_hat, 1.0) <= target) return 1.0;
  double lo = pi_hat, hi = 1.0;
  while (hi - lo > 1e-13) {
    double mid = 0.5 * (lo + hi);
    if (kl_bernoulli(pi_hat, mid) <= target)
      lo = mid;
    else
      hi = mid;
  }
  return lo;
}

}  // namespace

PolicyKind policy_from_name(const std::string& name) {
  if (name == "info-p") return PolicyKind::InfoP;
  if (name == "info-id") return PolicyKind::InfoId;
  if (name == "max-ent") return PolicyKind::MaxEnt;
  if (name == "thompson") return PolicyKind::Thompson;
  if (name == "kl-ucb") return PolicyKind::KlUcb;
  if (name == "ucb-lai") return PolicyKind::UcbLai;
  if (name == "ucb-tuned") return PolicyKind::UcbTuned;
  if (name == "ucb2") return PolicyKind::Ucb2;
  throw std::invalid_argument("unknown policy: " + name);
}

std::string policy_name(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::InfoP: return "info-p";
    case PolicyKind::InfoId: return "info-id";
    case PolicyKind::MaxEnt: return "max-ent";
    case PolicyKind::Thompson: return "thompson";
    case PolicyKind::KlUcb: return "kl-ucb";
    case PolicyKind::UcbLai: return "ucb-lai";
    case PolicyKind::UcbTuned: return "ucb-tuned";
    case PolicyKind::Ucb2: return "ucb2";
  }
  throw std::logic_error("unreachable");
}

Decision infop_decide(const std::vector<ArmStats>& stats, const BeliefGrid& grid) {
  return entropy_policy_decide(stats, grid, Objective::MaxEntropy);
}

Decision infoid_decide(const std::vector<ArmStats>& stats, const BeliefGrid& grid) {
  return entropy_policy_decide(stats, grid, Objective::LogIdentity);
}

Decision maxent_decide(const std::vector<ArmStats>& stats, const BeliefGrid& grid) {
  return entropy_policy_decide(stats, grid, Objective::Identity);
}

double beta_sample(const ArmStats& s, std::mt19937_64& rng) {
  std::gamma_distribution<double> ga(static_cast<double>(s.wins) + 1.0, 1.0);
  std::gamma_distribution<double> gb(static_cast<double>(s.plays - s.wins) + 1.0, 1.0);
  double a = ga(rng);
  double b = gb(rng);
  return a / (a + b);
}

Decision thompson_decide(const std::vector<ArmStats>& stats, std::mt19937_64& rng) {
  Decision d;
  double best = -1.0;
  for (int i = 0; i < static_cast<int>(stats.size()); ++i) {
    double v = beta_sample(stats[i], rng);
    if (v > best) {
      best = v;
      d.arm = i;
    }
  }
  return d;
}

Decision thompson_decide(const std::vector<ArmStats>& stats, const BeliefGrid& grid,
                         std::mt19937_64& rng) {
  Decision d = thompson_decide(stats, rng);
  d.scores = prob_best(grid).q;
  return d;
}

double klucb_index(const ArmStats& s, std::int64_t t, double c) {
  if (s.plays == 0) return 1.0;
  double lt = std::log(static_cast<double>(t));
  double budget = lt + c * std::log(std::max(lt, 1.0));
  budget = std::max(budget, 0.0);
  return bisect_kl_upper(s.sample_mean(), budget / static_cast<double>(s.plays));
}

double ucblai_index(const ArmStats& s, std::int64_t n, double xi) {
  if (s.plays == 0) return 1.0;
  double r = static_cast<double>(n) / static_cast<double>(s.plays);
  double target = 0.0;
  if (r > M_E) target = std::max(0.0, std::log(r) + xi * std::log(std::log(r)));
  return bisect_kl_upper(s.sample_mean(), target / static_cast<double>(s.plays));
}

double ucb_tuned_index(const ArmStats& s, std::int64_t t) {
  if (s.plays == 0) return kInfinity;
  double pi = s.sample_mean();
  double lt_over_n = std::log(static_cast<double>(t)) / static_cast<double>(s.plays);
  double v = pi * (1.0 - pi) + std::sqrt(2.0 * lt_over_n);
  return pi + std::sqrt(lt_over_n * std::min(0.25, v));
}

std::int64_t ucb2_tau(double alpha, int epoch) {
  return static_cast<std::int64_t>(std::ceil(std::pow(1.0 + alpha, epoch)));
}

double ucb2_index(const ArmStats& s, std::int64_t t, double alpha, int epoch) {
  if (s.plays == 0) return kInfinity;
  double tau = static_cast<double>(ucb2_tau(alpha, epoch));
  double bonus =
      std::sqrt((1.0 + alpha) * std::log(M_E * static_cast<double>(t) / tau) / (2.0 * tau));
  return s.sample_mean() + bonus;
}

}  // namespace infomax
