#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "infomax/belief.hpp"
#include "infomax/types.hpp"

namespace infomax {

// A run of consecutive plays of one arm, simulated as a single event.
struct Stretch {
  int arm = 0;
  std::int64_t length = 1;
  std::int64_t wins = -1;  // filled after sampling
};

using ArmChooser = std::function<int(const std::vector<ArmStats>&)>;

// Largest L such that the deterministic policy keeps choosing `arm` at every
// intermediate state even if all L plays lose. Worst-case losses only lower
// the arm's standing, so the policy holds through any actual outcome
// sequence and the batched simulation stays exact. Search: double/halve from
// the initial guess, then dissect dichotomically. Returns at least 1 (the
// already-committed play) and at most cap.
std::int64_t stretch_lower_bound(const ArmChooser& choose, const std::vector<ArmStats>& stats,
                                 int arm, std::int64_t initial_guess, std::int64_t cap);

// Draws wins ~ Binomial(length, p_arm) and applies the single conjugate
// batch update.
void play_stretch(double p_arm, Stretch& stretch, std::vector<ArmStats>& stats,
                  std::mt19937_64& rng);

// Event-driven proportional-betting step: the current best arm is played for
// ceil(Exp(mean 1/(1-q_best))) plays, then one inferior arm is drawn from the
// conditional q_j / (1-q_best). Requires q_best > 1/2; callers fall back to
// per-play sampling otherwise.
std::pair<Stretch, int> thompson_stretch(const BestArmBelief& belief, std::mt19937_64& rng);

}  // namespace infomax
