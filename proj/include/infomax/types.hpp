#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>

#include <Eigen/Core>

namespace infomax {

using ArrayXd = Eigen::ArrayXd;
using Index = Eigen::Index;

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

// Success/failure counters of one arm. The Beta(wins+1, plays-wins+1)
// posterior of the arm's success probability is derived from these.
struct ArmStats {
  std::int64_t plays = 0;
  std::int64_t wins = 0;

  // Empirical success frequency; only meaningful when plays > 0.
  double sample_mean() const { return static_cast<double>(wins) / static_cast<double>(plays); }

  // Mean of the Beta posterior under the uniform prior. Defined for all
  // states, including unplayed arms (-> 1/2).
  double posterior_mean() const {
    return static_cast<double>(wins + 1) / static_cast<double>(plays + 2);
  }

  friend bool operator==(const ArmStats&, const ArmStats&) = default;
};

inline ArmStats record(ArmStats s, bool win) {
  ++s.plays;
  if (win) ++s.wins;
  return s;
}

inline ArmStats record_batch(ArmStats s, std::int64_t plays, std::int64_t wins) {
  if (plays < 0 || wins < 0 || wins > plays)
    throw std::invalid_argument("record_batch: wins must satisfy 0 <= wins <= plays");
  s.plays += plays;
  s.wins += wins;
  return s;
}

inline bool is_probability(double x) { return x >= 0.0 && x <= 1.0; }

}  // namespace infomax
