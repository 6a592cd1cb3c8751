#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "infomax/asymptotics.hpp"
#include "infomax/fit.hpp"
#include "infomax/policies.hpp"
#include "infomax/types.hpp"

namespace infomax {

struct BanditEnv {
  std::vector<double> p;
  int best_arm() const;
  double p_best() const { return p[best_arm()]; }
};

enum class FastMode { InfoP, Thompson, Off };
FastMode fast_mode_from_name(const std::string& name);
std::string fast_mode_name(FastMode mode);

struct FastSimSettings {
  bool enabled = true;
  std::int64_t min_n = 1000;
  FastMode mode = FastMode::Off;
  std::int64_t initial_stretch = 16;
};

struct ExperimentConfig {
  std::vector<double> arms;
  PolicyConfig policy;
  std::int64_t horizon = 0;
  int ensemble = 1;
  std::uint64_t seed = 1;
  int checkpoints_per_decade = 32;
  FastSimSettings fast;
  int workers = 0;  // 0: INFOMAX_WORKERS env var, then hardware concurrency

  // value-of-information protocol
  int voi_level = 0;  // pre-train with Info-id down to H0 = ln2 / 2^level
  std::int64_t voi_pretrain_cap = 100000;

  void validate() const;
};

// Per-realization record: log-spaced checkpoints of regret and entropies,
// plus one event per play of a truly suboptimal arm.
struct EpisodeTrace {
  std::vector<std::int64_t> n;
  std::vector<double> regret;
  std::vector<double> ln_h_best;  // ln H(b_max)
  std::vector<double> h_pi_max;   // H(pi_max)
  std::vector<double> n2;         // suboptimal plays so far

  struct Event {
    std::int64_t n;
    std::int64_t n2;
    double n2_d;  // n2 D(pi2_hat, pi1_hat) at the pre-play state
  };
  std::vector<Event> events;

  std::uint64_t seed = 0;
  std::int64_t pretrain_plays = 0;
  std::int64_t pretrain_suboptimal = 0;
  bool pretrain_capped = false;
};

std::vector<std::int64_t> make_checkpoints(std::int64_t horizon, int per_decade);
std::uint64_t realization_seed(std::uint64_t master, int realization);

// Deterministic in (config.seed, realization), independent of scheduling.
EpisodeTrace run_episode(const ExperimentConfig& cfg, int realization);

struct EnsembleResult {
  std::vector<std::int64_t> n;
  std::vector<double> mean_regret, se_regret;
  std::vector<double> mean_lnh, se_lnh;
  std::vector<double> mean_hpi;
  std::vector<double> mean_n2;
  std::vector<EpisodeTrace> traces;

  // mean y vs f(n) slope over checkpoints with n in [lo, hi]
  LinearFit fit_regret_vs_log_n(std::int64_t lo, std::int64_t hi) const;
  LinearFit fit_lnh_vs_n(std::int64_t lo, std::int64_t hi) const;
  LinearFit fit_lnh_vs_log_n(std::int64_t lo, std::int64_t hi) const;
};

EnsembleResult run_ensemble(const ExperimentConfig& cfg);

struct BoundaryResult {
  std::vector<EpisodeTrace::Event> events;
  double fraction_below = 0.0;  // share with n2 D <= ln n + 1
  double envelope = 0.0;        // max n2 D / ln n over the asymptotic window
  std::int64_t window_lo = 0, window_hi = 0;
};

// Requires a two-arm Info-p configuration.
BoundaryResult boundary_scatter(const ExperimentConfig& cfg);

struct VoiLevelResult {
  int m = 0;
  double h0 = 0.0;
  double mean_regret = 0.0, se_regret = 0.0;  // at the reference horizon
  double delta_regret = 0.0;                  // vs the m = 0 level
  double mean_pretrain_plays = 0.0;
  EnsembleResult ensemble;
};

struct VoiResult {
  std::vector<VoiLevelResult> levels;
  LinearFit minus_delta_fit;     // -dR vs m
  double predicted_slope = 0.0;  // ln2 (p1-ps)/D(p1,ps)
};

VoiResult voi_experiment(const ExperimentConfig& cfg, const std::vector<int>& levels);

struct EntropyDecayResult {
  PolicyKind kind;
  EnsembleResult ensemble;
  LinearFit fit;            // lnH vs n (info-id/max-ent) or vs ln n (info-p)
  bool log_log = false;     // true when the fit abscissa is ln n
  double predicted = 0.0;   // asymptotic rate (0 when none applies)
  std::int64_t fit_lo = 0, fit_hi = 0;
};

std::vector<EntropyDecayResult> entropy_decay_experiment(
    const ExperimentConfig& cfg, const std::vector<PolicyKind>& policies,
    std::int64_t fit_lo = 0, std::int64_t fit_hi = 0);

int resolve_workers(int configured);

}  // namespace infomax
