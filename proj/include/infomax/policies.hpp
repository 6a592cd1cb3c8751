#pragma once

#include <random>
#include <string>
#include <vector>

#include "infomax/belief.hpp"
#include "infomax/types.hpp"

namespace infomax {

enum class PolicyKind { InfoP, InfoId, MaxEnt, Thompson, KlUcb, UcbLai, UcbTuned, Ucb2 };

PolicyKind policy_from_name(const std::string& name);
std::string policy_name(PolicyKind kind);

struct PolicyConfig {
  PolicyKind kind = PolicyKind::InfoP;
  double xi = -0.5;          // ucb-lai
  double klucb_c = 0.0;      // kl-ucb log-log coefficient
  double ucb2_alpha = 0.1;   // ucb2 epoch growth
  GridSettings grid;
};

// Chosen arm plus the per-arm scores the choice was made from. For the
// entropy policies the score is the expected objective change (most negative
// wins); ties resolve to the lowest index and set the flag.
struct Decision {
  int arm = 0;
  ArrayXd scores;
  bool tie = false;
};

// Expected change of H(pi_max) per arm, hypothetical win/loss updates
// weighted by the posterior-predictive win probability (w+1)/(n+2).
Decision infop_decide(const std::vector<ArmStats>& stats, const BeliefGrid& grid);

// Expected change of ln H(b_max) per arm.
Decision infoid_decide(const std::vector<ArmStats>& stats, const BeliefGrid& grid);

// Expected relative change of H(b_max) itself (scores are dH/H; the common
// positive factor H leaves the argmin unchanged and avoids underflow once
// H drops below the smallest double).
Decision maxent_decide(const std::vector<ArmStats>& stats, const BeliefGrid& grid);

// One Beta sample per arm, play the argmax. Equivalent to choosing arm i
// with probability q_i. Scores are left empty.
Decision thompson_decide(const std::vector<ArmStats>& stats, std::mt19937_64& rng);

// Same draw, but also reports q from the grid in the score field.
Decision thompson_decide(const std::vector<ArmStats>& stats, const BeliefGrid& grid,
                         std::mt19937_64& rng);

double beta_sample(const ArmStats& s, std::mt19937_64& rng);

// Largest q >= pi_hat with n_i D(pi_hat, q) <= ln t + c ln ln t.
double klucb_index(const ArmStats& s, std::int64_t t, double c);

// chi solving n_i D(pi_hat, chi) = ln(n/n_i) + xi ln ln(n/n_i), target
// clamped at 0 when negative or undefined (n/n_i <= e).
double ucblai_index(const ArmStats& s, std::int64_t n, double xi);

// pi_hat + sqrt((ln t / n_i) min(1/4, V_i)) with V_i the empirical Bernoulli
// variance plus sqrt(2 ln t / n_i).
double ucb_tuned_index(const ArmStats& s, std::int64_t t);

// pi_hat + sqrt((1+alpha) ln(e t / tau(r)) / (2 tau(r))).
double ucb2_index(const ArmStats& s, std::int64_t t, double alpha, int epoch);
std::int64_t ucb2_tau(double alpha, int epoch);

}  // namespace infomax
