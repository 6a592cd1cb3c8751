#include "infomax/fastsim.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace infomax {

std::int64_t stretch_lower_bound(const ArmChooser& choose, const std::vector<ArmStats>& stats,
                                 int arm, std::int64_t initial_guess, std::int64_t cap) {
  if (cap < 1) throw std::invalid_argument("stretch_lower_bound: cap must be >= 1");
  std::vector<ArmStats> probe = stats;
  auto holds = [&](std::int64_t losses) {
    probe[arm].plays = stats[arm].plays + losses;
    return choose(probe) == arm;
  };

  std::int64_t g = std::clamp<std::int64_t>(initial_guess, 1, cap);
  std::int64_t lo = 0, hi = -1;  // holds(lo) true, holds(hi) false
  if (holds(g)) {
    lo = g;
    while (lo < cap) {
      std::int64_t next = std::min(cap, 2 * lo);
      if (holds(next)) {
        lo = next;
      } else {
        hi = next;
        break;
      }
    }
    if (hi < 0) return cap;  // the whole remaining budget is safe
  } else {
    hi = g;
    while (hi > 1) {
      std::int64_t next = hi / 2;
      if (holds(next)) {
        lo = next;
        break;
      }
      hi = next;
    }
  }
  while (hi - lo > 1) {
    std::int64_t mid = lo + (hi - lo) / 2;
    if (holds(mid))
      lo = mid;
    else
      hi = mid;
  }
  return std::min(lo + 1, cap);
}

void play_stretch(double p_arm, Stretch& stretch, std::vector<ArmStats>& stats,
                  std::mt19937_64& rng) {
  if (stretch.length < 1) throw std::invalid_argument("play_stretch: length must be >= 1");
  std::binomial_distribution<std::int64_t> bin(stretch.length, p_arm);
  stretch.wins = bin(rng);
  stats[stretch.arm] = record_batch(stats[stretch.arm], stretch.length, stretch.wins);
}

std::pair<Stretch, int> thompson_stretch(const BestArmBelief& belief, std::mt19937_64& rng) {
  const Index K = belief.log_q.size();
  Index best = 0;
  belief.log_q.maxCoeff(&best);
  if (!(belief.q[best] > 0.5))
    throw std::invalid_argument("thompson_stretch: requires q_best > 1/2");

  // log(1 - q_best) via the other arms' mass; exact deep in the tail
  double log_rest = -kInfinity;
  for (Index j = 0; j < K; ++j) {
    if (j == best) continue;
    double a = std::max(log_rest, belief.log_q[j]);
    if (a == -kInfinity) continue;
    log_rest = a + std::log(std::exp(log_rest - a) + std::exp(belief.log_q[j] - a));
  }

  Stretch s;
  s.arm = static_cast<int>(best);
  constexpr std::int64_t kMaxLength = std::int64_t(1) << 60;
  double rate = std::exp(log_rest);
  if (rate < 1e-300) {
    s.length = kMaxLength;  // effectively "until the caller's cap"
  } else {
    std::exponential_distribution<double> expo(rate);
    double draw = expo(rng);
    s.length = draw >= static_cast<double>(kMaxLength)
                   ? kMaxLength
                   : std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(draw)));
  }

  // inferior arm from the conditional q_j / (1 - q_best)
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  double u = unif(rng);
  double acc = 0.0;
  int inferior = -1;
  for (Index j = 0; j < K; ++j) {
    if (j == best) continue;
    acc += std::exp(belief.log_q[j] - log_rest);
    inferior = static_cast<int>(j);
    if (u <= acc) break;
  }
  return {s, inferior};
}

}  // namespace infomax
