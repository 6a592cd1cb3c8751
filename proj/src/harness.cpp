#include "infomax/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <thread>

#include "infomax/fastsim.hpp"

namespace infomax {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

bool is_index_policy(PolicyKind k) {
  return k == PolicyKind::KlUcb || k == PolicyKind::UcbLai || k == PolicyKind::UcbTuned ||
         k == PolicyKind::Ucb2;
}

class Episode {
 public:
  Episode(const ExperimentConfig& cfg, int realization)
      : cfg_(cfg),
        env_{cfg.arms},
        k_(static_cast<int>(cfg.arms.size())),
        best_(env_.best_arm()),
        rng_(realization_seed(cfg.seed, realization)),
        stats_(cfg.arms.size()),
        base_plays_(cfg.arms.size(), 0),
        epoch_(cfg.arms.size(), 0),
        pending_(cfg.arms.size(), 0),
        cps_(make_checkpoints(cfg.horizon, cfg.checkpoints_per_decade)) {
    trace_.seed = realization_seed(cfg.seed, realization);
    last_stretch_ = std::max<std::int64_t>(1, cfg.fast.initial_stretch / 2);
  }

  EpisodeTrace run() {
    if (cfg_.voi_level > 0) pretrain();
    const std::int64_t horizon = cfg_.horizon;
    while (n_ < horizon) {
      if (cfg_.policy.kind == PolicyKind::InfoP && fast_active(FastMode::InfoP)) {
        refresh_grid();
        Decision d = infop_decide(stats_, grid_);
        if (d.arm == best_ && has_strict_sample_max(d.arm)) {
          std::int64_t guess = std::max<std::int64_t>(cfg_.fast.initial_stretch, 2 * last_stretch_);
          std::int64_t bound =
              stretch_lower_bound(probe_chooser(), stats_, d.arm, guess, horizon - n_);
          last_stretch_ = bound;
          play_segmented(d.arm, bound);
        } else {
          naive_play(d.arm);
        }
        continue;
      }
      if (cfg_.policy.kind == PolicyKind::Thompson && fast_active(FastMode::Thompson)) {
        refresh_grid();
        BestArmBelief belief = prob_best(grid_);
        int b = belief.best();
        if (belief.q[b] > 0.5) {
          auto [stretch, inferior] = thompson_stretch(belief, rng_);
          play_segmented(b, std::min(stretch.length, horizon - n_));
          if (n_ < horizon && inferior >= 0) naive_play(inferior);
          continue;
        }
      }
      naive_play(decide());
    }
    return std::move(trace_);
  }

 private:
  bool fast_active(FastMode mode) const {
    return cfg_.fast.enabled && cfg_.fast.mode == mode && n_ >= cfg_.fast.min_n;
  }

  bool has_strict_sample_max(int arm) const {
    if (stats_[arm].plays == 0) return false;
    double m = stats_[arm].sample_mean();
    for (int j = 0; j < k_; ++j) {
      if (j == arm) continue;
      if (stats_[j].plays == 0 || stats_[j].sample_mean() >= m) return false;
    }
    return true;
  }

  ArmChooser probe_chooser() {
    return [this](const std::vector<ArmStats>& s) {
      probe_grid_ = refine(std::move(probe_grid_), s, cfg_.policy.grid);
      return infop_decide(s, probe_grid_).arm;
    };
  }

  void refresh_grid() { grid_ = refine(std::move(grid_), stats_, cfg_.policy.grid); }

  int decide() {
    switch (cfg_.policy.kind) {
      case PolicyKind::InfoP:
        refresh_grid();
        return infop_decide(stats_, grid_).arm;
      case PolicyKind::InfoId:
        refresh_grid();
        return infoid_decide(stats_, grid_).arm;
      case PolicyKind::MaxEnt:
        refresh_grid();
        return maxent_decide(stats_, grid_).arm;
      case PolicyKind::Thompson:
        return thompson_decide(stats_, rng_).arm;
      default:
        break;
    }
    // index policies: every arm is played once before any comparison
    for (int i = 0; i < k_; ++i)
      if (stats_[i].plays == 0) return i;
    if (cfg_.policy.kind == PolicyKind::Ucb2) return decide_ucb2();
    int arm = 0;
    double best = -kInfinity;
    for (int i = 0; i < k_; ++i) {
      double idx = 0.0;
      switch (cfg_.policy.kind) {
        case PolicyKind::KlUcb: idx = klucb_index(stats_[i], n_, cfg_.policy.klucb_c); break;
        case PolicyKind::UcbLai: idx = ucblai_index(stats_[i], n_, cfg_.policy.xi); break;
        case PolicyKind::UcbTuned: idx = ucb_tuned_index(stats_[i], n_); break;
        default: throw std::logic_error("unreachable policy");
      }
      if (idx > best) {
        best = idx;
        arm = i;
      }
    }
    return arm;
  }

  int decide_ucb2() {
    if (ucb2_arm_ >= 0 && pending_[ucb2_arm_] > 0) {
      --pending_[ucb2_arm_];
      return ucb2_arm_;
    }
    int arm = 0;
    double best = -kInfinity;
    for (int i = 0; i < k_; ++i) {
      double idx = ucb2_index(stats_[i], n_, cfg_.policy.ucb2_alpha, epoch_[i]);
      if (idx > best) {
        best = idx;
        arm = i;
      }
    }
    std::int64_t block = ucb2_tau(cfg_.policy.ucb2_alpha, epoch_[arm] + 1) -
                         ucb2_tau(cfg_.policy.ucb2_alpha, epoch_[arm]);
    ++epoch_[arm];
    pending_[arm] = std::max<std::int64_t>(block, 1) - 1;
    ucb2_arm_ = arm;
    return arm;
  }

  void naive_play(int arm) {
    if (arm != best_) record_event(arm);
    std::bernoulli_distribution outcome(env_.p[arm]);
    stats_[arm] = record(stats_[arm], outcome(rng_));
    ++n_;
    record_checkpoints();
  }

  void play_segmented(int arm, std::int64_t length) {
    std::int64_t left = length;
    while (left > 0) {
      std::int64_t seg = left;
      if (next_cp_ < cps_.size()) seg = std::min(seg, cps_[next_cp_] - n_);
      Stretch st{arm, seg};
      play_stretch(env_.p[arm], st, stats_, rng_);
      n_ += seg;
      left -= seg;
      record_checkpoints();
    }
  }

  void record_event(int arm) {
    EpisodeTrace::Event e;
    e.n = n_;
    e.n2 = stats_[arm].plays - base_plays_[arm];
    e.n2_d = 0.0;
    if (e.n2 > 0 && stats_[best_].plays > 0)
      e.n2_d = e.n2 * kl_bernoulli(stats_[arm].sample_mean(), stats_[best_].sample_mean());
    trace_.events.push_back(e);
  }

  double regret() const {
    double r = 0.0;
    for (int i = 0; i < k_; ++i)
      r += static_cast<double>(stats_[i].plays - base_plays_[i]) * (env_.p_best() - env_.p[i]);
    return r;
  }

  std::int64_t suboptimal_plays() const {
    std::int64_t s = 0;
    for (int i = 0; i < k_; ++i)
      if (i != best_) s += stats_[i].plays - base_plays_[i];
    return s;
  }

  void record_checkpoints() {
    while (next_cp_ < cps_.size() && n_ >= cps_[next_cp_]) {
      refresh_grid();
      trace_.n.push_back(n_);
      trace_.regret.push_back(regret());
      trace_.ln_h_best.push_back(prob_best(grid_).log_entropy);
      trace_.h_pi_max.push_back(differential_entropy(grid_, max_density(grid_)));
      trace_.n2.push_back(static_cast<double>(suboptimal_plays()));
      ++next_cp_;
    }
  }

  void pretrain() {
    double target = std::log(std::log(2.0)) - cfg_.voi_level * std::log(2.0);
    std::int64_t played = 0;
    while (true) {
      refresh_grid();
      if (prob_best(grid_).log_entropy <= target) break;
      if (played >= cfg_.voi_pretrain_cap) {
        trace_.pretrain_capped = true;
        break;
      }
      int arm = infoid_decide(stats_, grid_).arm;
      std::bernoulli_distribution outcome(env_.p[arm]);
      stats_[arm] = record(stats_[arm], outcome(rng_));
      ++played;
    }
    trace_.pretrain_plays = played;
    for (int i = 0; i < k_; ++i) {
      base_plays_[i] = stats_[i].plays;
      if (i != best_) trace_.pretrain_suboptimal += stats_[i].plays;
    }
  }

  const ExperimentConfig& cfg_;
  BanditEnv env_;
  int k_;
  int best_;
  std::mt19937_64 rng_;
  std::vector<ArmStats> stats_;
  std::vector<std::int64_t> base_plays_;
  std::vector<int> epoch_;
  std::vector<std::int64_t> pending_;
  int ucb2_arm_ = -1;
  std::vector<std::int64_t> cps_;
  std::size_t next_cp_ = 0;
  std::int64_t n_ = 0;
  std::int64_t last_stretch_ = 8;
  BeliefGrid grid_, probe_grid_;
  EpisodeTrace trace_;
};

std::vector<EpisodeTrace> run_traces(const ExperimentConfig& cfg) {
  cfg.validate();
  const int r = cfg.ensemble;
  std::vector<EpisodeTrace> traces(r);
  int workers = std::min(resolve_workers(cfg.workers), r);
  std::atomic<int> next{0};
  std::vector<std::string> errors(workers);
  auto work = [&](int w) {
    try {
      while (true) {
        int i = next.fetch_add(1);
        if (i >= r) break;
        traces[i] = run_episode(cfg, i);
      }
    } catch (const std::exception& e) {
      errors[w] = e.what();
      next.store(r);
    }
  };
  if (workers <= 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& t : pool) t.join();
  }
  for (const auto& e : errors)
    if (!e.empty()) throw std::runtime_error(e);
  return traces;
}

double mean_of(const std::vector<double>& v) {
  double s = 0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double se_of(const std::vector<double>& v, double mean) {
  if (v.size() < 2) return 0.0;
  double ss = 0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / ((v.size() - 1.0) * v.size()));
}

}  // namespace

int BanditEnv::best_arm() const {
  int b = 0;
  for (int i = 1; i < static_cast<int>(p.size()); ++i)
    if (p[i] > p[b]) b = i;
  return b;
}

FastMode fast_mode_from_name(const std::string& name) {
  if (name == "info-p") return FastMode::InfoP;
  if (name == "thompson") return FastMode::Thompson;
  if (name == "off") return FastMode::Off;
  throw std::invalid_argument("unknown fast_sim.mode: " + name);
}

std::string fast_mode_name(FastMode mode) {
  switch (mode) {
    case FastMode::InfoP: return "info-p";
    case FastMode::Thompson: return "thompson";
    case FastMode::Off: return "off";
  }
  throw std::logic_error("unreachable");
}

void ExperimentConfig::validate() const {
  if (arms.size() < 2) throw std::invalid_argument("env.arms: need at least two arms");
  for (double p : arms)
    if (!is_probability(p)) throw std::invalid_argument("env.arms: probabilities must lie in [0,1]");
  BanditEnv env{arms};
  int b = env.best_arm();
  for (int i = 0; i < static_cast<int>(arms.size()); ++i)
    if (i != b && arms[i] == arms[b])
      throw std::invalid_argument("env.arms: the best arm must be unique");
  if (horizon < static_cast<std::int64_t>(arms.size()))
    throw std::invalid_argument("sim.horizon: must be at least the number of arms");
  if (ensemble < 1) throw std::invalid_argument("sim.ensemble: must be >= 1");
  if (checkpoints_per_decade < 1)
    throw std::invalid_argument("sim.checkpoints_per_decade: must be >= 1");
  if (fast.min_n < 0) throw std::invalid_argument("sim.fast_sim.min_n: must be >= 0");
  if (fast.initial_stretch < 1)
    throw std::invalid_argument("sim.fast_sim.initial_stretch: must be >= 1");
  if (voi_level < 0) throw std::invalid_argument("voi level: must be >= 0");
  if (!(std::isfinite(policy.xi))) throw std::invalid_argument("policy.xi: must be finite");
  if (policy.klucb_c < 0) throw std::invalid_argument("policy.c: must be >= 0");
}

std::vector<std::int64_t> make_checkpoints(std::int64_t horizon, int per_decade) {
  std::vector<std::int64_t> cps;
  for (int k = 0;; ++k) {
    double v = std::pow(10.0, static_cast<double>(k) / per_decade);
    auto n = static_cast<std::int64_t>(std::llround(v));
    if (n > horizon) break;
    if (cps.empty() || n > cps.back()) cps.push_back(n);
  }
  if (cps.empty() || cps.back() != horizon) cps.push_back(horizon);
  return cps;
}

std::uint64_t realization_seed(std::uint64_t master, int realization) {
  return splitmix64(splitmix64(master) ^ splitmix64(0x9E3779B97F4A7C15ull +
                                                     static_cast<std::uint64_t>(realization)));
}

EpisodeTrace run_episode(const ExperimentConfig& cfg, int realization) {
  try {
    return Episode(cfg, realization).run();
  } catch (const std::exception& e) {
    throw std::runtime_error("realization " + std::to_string(realization) +
                             " failed: " + e.what());
  }
}

EnsembleResult run_ensemble(const ExperimentConfig& cfg) {
  EnsembleResult out;
  out.traces = run_traces(cfg);
  const auto& cps = out.traces.front().n;
  out.n = cps;
  const std::size_t c = cps.size();
  std::vector<double> buf(out.traces.size());
  auto reduce = [&](auto getter, std::vector<double>& mean, std::vector<double>* se) {
    mean.resize(c);
    if (se) se->resize(c);
    for (std::size_t k = 0; k < c; ++k) {
      for (std::size_t t = 0; t < out.traces.size(); ++t) buf[t] = getter(out.traces[t], k);
      mean[k] = mean_of(buf);
      if (se) (*se)[k] = se_of(buf, mean[k]);
    }
  };
  reduce([](const EpisodeTrace& t, std::size_t k) { return t.regret[k]; }, out.mean_regret,
         &out.se_regret);
  reduce([](const EpisodeTrace& t, std::size_t k) { return t.ln_h_best[k]; }, out.mean_lnh,
         &out.se_lnh);
  reduce([](const EpisodeTrace& t, std::size_t k) { return t.h_pi_max[k]; }, out.mean_hpi,
         nullptr);
  reduce([](const EpisodeTrace& t, std::size_t k) { return t.n2[k]; }, out.mean_n2, nullptr);
  return out;
}

namespace {

LinearFit fit_window(const std::vector<std::int64_t>& n, const std::vector<double>& y,
                     std::int64_t lo, std::int64_t hi, bool log_x) {
  std::vector<double> xs, ys;
  for (std::size_t k = 0; k < n.size(); ++k) {
    if (n[k] < lo || n[k] > hi) continue;
    xs.push_back(log_x ? std::log(static_cast<double>(n[k])) : static_cast<double>(n[k]));
    ys.push_back(y[k]);
  }
  return fit_line(xs, ys);
}

}  // namespace

LinearFit EnsembleResult::fit_regret_vs_log_n(std::int64_t lo, std::int64_t hi) const {
  return fit_window(n, mean_regret, lo, hi, true);
}

LinearFit EnsembleResult::fit_lnh_vs_n(std::int64_t lo, std::int64_t hi) const {
  return fit_window(n, mean_lnh, lo, hi, false);
}

LinearFit EnsembleResult::fit_lnh_vs_log_n(std::int64_t lo, std::int64_t hi) const {
  return fit_window(n, mean_lnh, lo, hi, true);
}

BoundaryResult boundary_scatter(const ExperimentConfig& cfg) {
  if (cfg.policy.kind != PolicyKind::InfoP)
    throw std::invalid_argument("boundary: requires the info-p policy");
  if (cfg.arms.size() != 2) throw std::invalid_argument("boundary: requires two arms");
  EnsembleResult ens = run_ensemble(cfg);
  BoundaryResult out;
  out.window_lo = cfg.horizon / 10;
  out.window_hi = cfg.horizon;
  std::int64_t below = 0, total = 0;
  double envelope = 0.0;
  for (const auto& t : ens.traces) {
    for (const auto& e : t.events) {
      ++total;
      double ln_n = std::log(static_cast<double>(std::max<std::int64_t>(e.n, 2)));
      if (e.n2_d <= ln_n + 1.0) ++below;
      if (e.n >= out.window_lo && e.n <= out.window_hi)
        envelope = std::max(envelope, e.n2_d / ln_n);
      out.events.push_back(e);
    }
  }
  out.fraction_below = total > 0 ? static_cast<double>(below) / total : 0.0;
  out.envelope = envelope;
  return out;
}

VoiResult voi_experiment(const ExperimentConfig& cfg, const std::vector<int>& levels) {
  if (cfg.arms.size() != 2) throw std::invalid_argument("voi: requires two arms");
  if (levels.empty()) throw std::invalid_argument("voi: need at least one m level");
  VoiResult out;
  for (int m : levels) {
    ExperimentConfig level_cfg = cfg;
    level_cfg.voi_level = m;
    VoiLevelResult lvl;
    lvl.m = m;
    lvl.h0 = std::log(2.0) / std::pow(2.0, m);
    lvl.ensemble = run_ensemble(level_cfg);
    for (const auto& t : lvl.ensemble.traces)
      if (t.pretrain_capped)
        throw std::runtime_error("voi: pre-training horizon cap exceeded at m = " +
                                 std::to_string(m));
    lvl.mean_regret = lvl.ensemble.mean_regret.back();
    lvl.se_regret = lvl.ensemble.se_regret.back();
    double pt = 0;
    for (const auto& t : lvl.ensemble.traces) pt += static_cast<double>(t.pretrain_plays);
    lvl.mean_pretrain_plays = pt / lvl.ensemble.traces.size();
    out.levels.push_back(std::move(lvl));
  }
  double baseline = out.levels.front().mean_regret;
  for (const auto& lvl : out.levels)
    if (lvl.m == 0) baseline = lvl.mean_regret;
  std::vector<double> xs, ys;
  for (auto& lvl : out.levels) {
    lvl.delta_regret = lvl.mean_regret - baseline;
    xs.push_back(lvl.m);
    ys.push_back(-lvl.delta_regret);
  }
  out.minus_delta_fit = fit_line(xs, ys);
  BanditEnv env{cfg.arms};
  int b = env.best_arm();
  out.predicted_slope = -voi_delta_regret(env.p[b], env.p[1 - b], 1);
  return out;
}

std::vector<EntropyDecayResult> entropy_decay_experiment(
    const ExperimentConfig& cfg, const std::vector<PolicyKind>& policies, std::int64_t fit_lo,
    std::int64_t fit_hi) {
  if (cfg.arms.size() != 2)
    throw std::invalid_argument("entropy experiment: requires two arms");
  BanditEnv env{cfg.arms};
  int b = env.best_arm();
  double p1 = env.p[b], p2 = env.p[1 - b];
  std::vector<EntropyDecayResult> out;
  for (PolicyKind kind : policies) {
    ExperimentConfig run_cfg = cfg;
    run_cfg.policy.kind = kind;
    run_cfg.fast.mode = kind == PolicyKind::InfoP ? FastMode::InfoP
                        : kind == PolicyKind::Thompson ? FastMode::Thompson
                                                       : FastMode::Off;
    EntropyDecayResult r;
    r.kind = kind;
    r.ensemble = run_ensemble(run_cfg);
    r.log_log = (kind == PolicyKind::InfoP || kind == PolicyKind::Thompson);
    if (r.log_log) {
      r.fit_lo = fit_lo > 0 ? fit_lo : std::max<std::int64_t>(cfg.horizon / 100, 2);
      r.fit_hi = fit_hi > 0 ? fit_hi : cfg.horizon;
      r.fit = r.ensemble.fit_lnh_vs_log_n(r.fit_lo, r.fit_hi);
      r.predicted = kind == PolicyKind::InfoP ? -1.0 : 0.0;
    } else {
      r.fit_lo = fit_lo > 0 ? fit_lo : std::max<std::int64_t>(cfg.horizon / 6, 2);
      r.fit_hi = fit_hi > 0 ? fit_hi : cfg.horizon;
      r.fit = r.ensemble.fit_lnh_vs_n(r.fit_lo, r.fit_hi);
      r.predicted = kind == PolicyKind::InfoId  ? infoid_rate(p1, p2)
                    : kind == PolicyKind::MaxEnt ? maxent_rate(p1, p2).rate
                                                 : 0.0;
    }
    out.push_back(std::move(r));
  }
  return out;
}

int resolve_workers(int configured) {
  if (configured > 0) return configured;
  if (const char* env = std::getenv("INFOMAX_WORKERS")) {
    int v = std::atoi(env);
    if (v > 0) return v;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

}  // namespace infomax
