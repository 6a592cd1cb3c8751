#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "infomax/config.hpp"
#include "infomax/io.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace infomax;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitConfig = 2;
constexpr int kExitTolerance = 3;

struct CommonArgs {
  std::string config_path;
  std::string arms_csv;
  std::string fast_flag;
  std::string policy;
  std::string out_dir;
  std::uint64_t seed = 0;
  double horizon = 0;
  int ensemble = 0;
  int workers = -1;
  bool seed_set = false, horizon_set = false, ensemble_set = false, workers_set = false;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("-c,--config", args.config_path, "config file")->required();
  cmd->add_option("--seed", args.seed, "override sim.seed")->each([&args](const std::string&) {
    args.seed_set = true;
  });
  cmd->add_option("--horizon", args.horizon, "override sim.horizon")
      ->each([&args](const std::string&) { args.horizon_set = true; });
  cmd->add_option("--ensemble", args.ensemble, "override sim.ensemble")
      ->each([&args](const std::string&) { args.ensemble_set = true; });
  cmd->add_option("--arms", args.arms_csv, "override env.arms (comma separated)");
  cmd->add_option("--policy", args.policy, "override policy.kind");
  cmd->add_option("--workers", args.workers, "override sim.workers")
      ->each([&args](const std::string&) { args.workers_set = true; });
  cmd->add_option("--out", args.out_dir, "override output.dir");
  cmd->add_option("--fast", args.fast_flag, "override sim.fast_sim.enabled (on/off)");
}

RunConfig load_config(const CommonArgs& args) {
  RunConfig cfg = parse_config_file(args.config_path);
  ConfigOverrides ov;
  if (args.seed_set) ov.seed = args.seed;
  if (args.horizon_set) ov.horizon = static_cast<std::int64_t>(args.horizon);
  if (args.ensemble_set) ov.ensemble = args.ensemble;
  if (args.workers_set) ov.workers = args.workers;
  if (!args.policy.empty()) ov.policy = args.policy;
  if (!args.out_dir.empty()) ov.out_dir = args.out_dir;
  if (!args.arms_csv.empty()) {
    std::vector<double> arms;
    std::string item;
    std::stringstream ss(args.arms_csv);
    while (std::getline(ss, item, ',')) arms.push_back(std::stod(item));
    ov.arms = arms;
  }
  if (!args.fast_flag.empty()) {
    if (args.fast_flag != "on" && args.fast_flag != "off")
      throw ConfigError("--fast: expected on or off");
    ov.fast_enabled = (args.fast_flag == "on");
  }
  apply_overrides(cfg, ov);
  return cfg;
}

json fit_json(const LinearFit& f) {
  return {{"slope", f.slope},
          {"intercept", f.intercept},
          {"slope_se", f.slope_se},
          {"points", f.points}};
}

bool rel_ok(double value, double target, double rtol) {
  return std::abs(value - target) <= rtol * std::abs(target);
}

struct OutputSink {
  fs::path dir;
  RunManifest manifest;

  explicit OutputSink(const RunConfig& cfg) : dir(cfg.out_dir) {
    fs::create_directories(dir);
    manifest.started_utc = utc_now();
    manifest.seed = cfg.experiment.seed;
    manifest.config_text = cfg.canonical_text();
  }

  std::string path(const std::string& name) {
    manifest.outputs.push_back((dir / name).string());
    return (dir / name).string();
  }

  void finish(const json& summary, const std::string& summary_name) {
    std::ofstream out(path(summary_name));
    out << summary.dump(2) << '\n';
    manifest.finished_utc = utc_now();
    write_manifest((dir / "manifest.json").string(), manifest);
  }
};

std::pair<double, double> top_two(const std::vector<double>& arms) {
  BanditEnv env{arms};
  int b = env.best_arm();
  double second = -1.0;
  for (int i = 0; i < static_cast<int>(arms.size()); ++i)
    if (i != b) second = std::max(second, arms[i]);
  return {arms[b], second};
}

int cmd_run(const CommonArgs& args) {
  RunConfig cfg = load_config(args);
  const ExperimentConfig& ex = cfg.experiment;
  OutputSink sink(cfg);
  EnsembleResult ens = run_ensemble(ex);

  std::string name = policy_name(ex.policy.kind);
  write_ensemble_csv(sink.path("run_" + name + ".csv"), ens);

  auto [p1, p2] = top_two(ex.arms);
  double lr_slope = lai_robbins_regret_slope(p1, p2);
  if (cfg.subtract_lr)
    write_ensemble_subtracted_csv(sink.path("run_" + name + "_sub.csv"), ens, lr_slope);

  LinearFit regret_fit = ens.fit_regret_vs_log_n(ex.horizon / 10, ex.horizon);
  LinearFit lnh_fit =
      ens.fit_lnh_vs_log_n(std::max<std::int64_t>(ex.horizon / 100, 2), ex.horizon);

  bool all_pass = true;
  json checks = json::array();
  if (cfg.check_regret_slope_rtol > 0) {
    bool pass = rel_ok(regret_fit.slope, lr_slope, cfg.check_regret_slope_rtol);
    checks.push_back({{"name", "regret_slope_vs_lai_robbins"},
                      {"pass", pass},
                      {"value", regret_fit.slope},
                      {"target", lr_slope},
                      {"tol", cfg.check_regret_slope_rtol}});
    all_pass = all_pass && pass;
    std::printf("%s regret_slope: value=%s target=%s rtol=%s\n", pass ? "PASS" : "FAIL",
                g17(regret_fit.slope).c_str(), g17(lr_slope).c_str(),
                g17(cfg.check_regret_slope_rtol).c_str());
  }

  json summary;
  summary["artifact_version"] = kArtifactVersion;
  summary["command"] = "run";
  summary["policy"] = name;
  summary["arms"] = ex.arms;
  summary["horizon"] = ex.horizon;
  summary["ensemble"] = ex.ensemble;
  summary["seed"] = ex.seed;
  summary["regret_vs_log_n"] = fit_json(regret_fit);
  summary["lai_robbins_slope"] = lr_slope;
  summary["lnh_vs_log_n"] = fit_json(lnh_fit);
  summary["final_mean_regret"] = ens.mean_regret.back();
  summary["final_se_regret"] = ens.se_regret.back();
  summary["checks"] = checks;
  sink.finish(summary, "summary_run.json");
  return all_pass ? kExitOk : kExitTolerance;
}

int cmd_compare(const CommonArgs& args) {
  RunConfig cfg = load_config(args);
  OutputSink sink(cfg);
  json per_policy = json::array();
  bool all_pass = true;
  auto [p1, p2] = top_two(cfg.experiment.arms);
  double lr_slope = lai_robbins_regret_slope(p1, p2);
  for (PolicyKind kind : cfg.compare_policies) {
    ExperimentConfig ex = cfg.experiment;
    ex.policy.kind = kind;
    ex.fast.mode = kind == PolicyKind::InfoP      ? FastMode::InfoP
                   : kind == PolicyKind::Thompson ? FastMode::Thompson
                                                  : FastMode::Off;
    EnsembleResult ens = run_ensemble(ex);
    std::string name = policy_name(kind);
    write_ensemble_csv(sink.path("compare_" + name + ".csv"), ens);
    if (cfg.subtract_lr)
      write_ensemble_subtracted_csv(sink.path("compare_" + name + "_sub.csv"), ens, lr_slope);
    LinearFit fit = ens.fit_regret_vs_log_n(ex.horizon / 10, ex.horizon);
    json j;
    j["policy"] = name;
    j["final_mean_regret"] = ens.mean_regret.back();
    j["final_se_regret"] = ens.se_regret.back();
    j["regret_vs_log_n"] = fit_json(fit);
    if (cfg.check_regret_slope_rtol > 0) {
      bool pass = rel_ok(fit.slope, lr_slope, cfg.check_regret_slope_rtol);
      j["slope_check_pass"] = pass;
      all_pass = all_pass && pass;
    }
    per_policy.push_back(j);
  }
  json summary;
  summary["artifact_version"] = kArtifactVersion;
  summary["command"] = "compare";
  summary["arms"] = cfg.experiment.arms;
  summary["lai_robbins_slope"] = lr_slope;
  summary["policies"] = per_policy;
  sink.finish(summary, "summary_compare.json");
  return all_pass ? kExitOk : kExitTolerance;
}

int cmd_boundary(const CommonArgs& args) {
  RunConfig cfg = load_config(args);
  OutputSink sink(cfg);
  BoundaryResult res = boundary_scatter(cfg.experiment);
  write_boundary_csv(sink.path("boundary.csv"), res.events);
  bool pass = true;
  if (cfg.check_boundary_below_frac > 0)
    pass = res.fraction_below >= cfg.check_boundary_below_frac;
  json summary;
  summary["artifact_version"] = kArtifactVersion;
  summary["command"] = "boundary";
  summary["events"] = res.events.size();
  summary["fraction_below_ln_n_plus_1"] = res.fraction_below;
  summary["envelope_ratio"] = res.envelope;
  summary["envelope_window"] = {res.window_lo, res.window_hi};
  summary["check_pass"] = pass;
  sink.finish(summary, "summary_boundary.json");
  std::printf("%s boundary: below=%.4f envelope=%.4f events=%zu\n", pass ? "PASS" : "FAIL",
              res.fraction_below, res.envelope, res.events.size());
  return pass ? kExitOk : kExitTolerance;
}

int cmd_voi(const CommonArgs& args) {
  RunConfig cfg = load_config(args);
  OutputSink sink(cfg);
  VoiResult res = voi_experiment(cfg.experiment, cfg.voi_levels);
  for (const auto& lvl : res.levels)
    write_ensemble_csv(sink.path("voi_m" + std::to_string(lvl.m) + ".csv"), lvl.ensemble);
  write_voi_delta_csv(sink.path("voi_delta.csv"), res);
  bool pass = true;
  if (cfg.check_voi_slope_rtol > 0)
    pass = rel_ok(res.minus_delta_fit.slope, res.predicted_slope, cfg.check_voi_slope_rtol);
  json summary;
  summary["artifact_version"] = kArtifactVersion;
  summary["command"] = "voi";
  summary["minus_delta_r_vs_m"] = fit_json(res.minus_delta_fit);
  summary["predicted_slope"] = res.predicted_slope;
  json levels = json::array();
  for (const auto& lvl : res.levels)
    levels.push_back({{"m", lvl.m},
                      {"h0", lvl.h0},
                      {"mean_regret", lvl.mean_regret},
                      {"se_regret", lvl.se_regret},
                      {"delta_regret", lvl.delta_regret},
                      {"mean_pretrain_plays", lvl.mean_pretrain_plays}});
  summary["levels"] = levels;
  summary["check_pass"] = pass;
  sink.finish(summary, "summary_voi.json");
  std::printf("%s voi: slope=%s predicted=%s\n", pass ? "PASS" : "FAIL",
              g17(res.minus_delta_fit.slope).c_str(), g17(res.predicted_slope).c_str());
  return pass ? kExitOk : kExitTolerance;
}

int cmd_entropy(const CommonArgs& args) {
  RunConfig cfg = load_config(args);
  OutputSink sink(cfg);
  auto results = entropy_decay_experiment(cfg.experiment, cfg.entropy_policies,
                                          cfg.entropy_fit_min, cfg.entropy_fit_max);
  bool all_pass = true;
  json per_policy = json::array();
  for (const auto& r : results) {
    std::string name = policy_name(r.kind);
    write_ensemble_csv(sink.path("entropy_" + name + ".csv"), r.ensemble);
    json j;
    j["policy"] = name;
    j["fit"] = fit_json(r.fit);
    j["abscissa"] = r.log_log ? "ln_n" : "n";
    j["fit_window"] = {r.fit_lo, r.fit_hi};
    j["predicted"] = r.predicted;
    if (cfg.check_entropy_slope_rtol > 0 && r.predicted != 0.0) {
      bool pass = rel_ok(r.fit.slope, r.predicted, cfg.check_entropy_slope_rtol);
      j["slope_check_pass"] = pass;
      all_pass = all_pass && pass;
    }
    per_policy.push_back(j);
  }
  json summary;
  summary["artifact_version"] = kArtifactVersion;
  summary["command"] = "entropy";
  summary["arms"] = cfg.experiment.arms;
  summary["policies"] = per_policy;
  sink.finish(summary, "summary_entropy.json");
  return all_pass ? kExitOk : kExitTolerance;
}

int cmd_rates(double p1, double p2, double n, const std::string& out_dir) {
  auto table = rate_table(p1, p2, n);
  std::printf("%-28s %-24s %s\n", "quantity", "value", "units");
  json record;
  record["p1"] = p1;
  record["p2"] = p2;
  record["n"] = n;
  for (const auto& r : table) {
    std::printf("%-28s %-24s %s\n", r.name.c_str(), g17(r.value).c_str(), r.units.c_str());
    record[r.name] = r.value;
  }
  std::printf("record: %s\n", record.dump().c_str());
  if (!out_dir.empty()) {
    fs::create_directories(out_dir);
    std::ofstream out(fs::path(out_dir) / "rates.json");
    out << record.dump(2) << '\n';
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bernoulli bandit simulator: Infomax policies, baselines, and asymptotics"};
  app.require_subcommand(1);

  CommonArgs run_args, compare_args, boundary_args, voi_args, entropy_args;
  add_common(app.add_subcommand("run", "ensemble run of one policy"), run_args);
  add_common(app.add_subcommand("compare", "one run per configured policy"), compare_args);
  add_common(app.add_subcommand("boundary", "Info-p suboptimal-play scatter"), boundary_args);
  add_common(app.add_subcommand("voi", "value-of-information protocol"), voi_args);
  add_common(app.add_subcommand("entropy", "entropy decay per policy"), entropy_args);

  double p1 = 0.9, p2 = 0.8, n = 1e6;
  std::string rates_out;
  CLI::App* rates = app.add_subcommand("rates", "closed-form predictions table");
  rates->add_option("--p1", p1, "best arm probability")->required();
  rates->add_option("--p2", p2, "suboptimal arm probability")->required();
  rates->add_option("--n", n, "reference horizon for the play-count bound");
  rates->add_option("--out", rates_out, "directory for rates.json");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (app.got_subcommand("run")) return cmd_run(run_args);
    if (app.got_subcommand("compare")) return cmd_compare(compare_args);
    if (app.got_subcommand("boundary")) return cmd_boundary(boundary_args);
    if (app.got_subcommand("voi")) return cmd_voi(voi_args);
    if (app.got_subcommand("entropy")) return cmd_entropy(entropy_args);
    if (app.got_subcommand("rates")) return cmd_rates(p1, p2, n, rates_out);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitConfig;
}
