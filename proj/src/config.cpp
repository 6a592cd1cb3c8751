#include "infomax/config.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace infomax {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  std::size_t b = s.find_last_not_of(" \t\r");
  if (a == std::string::npos) return "";
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double parse_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("");
    return d;
  } catch (...) {
    throw ConfigError(key + ": expected a number, got '" + v + "'");
  }
}

std::int64_t parse_int(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    double d = std::stod(v, &pos);  // accepts 1e6 style horizons
    if (pos != v.size()) throw std::invalid_argument("");
    auto n = static_cast<std::int64_t>(std::llround(d));
    if (static_cast<double>(n) != d) throw std::invalid_argument("");
    return n;
  } catch (...) {
    throw ConfigError(key + ": expected an integer, got '" + v + "'");
  }
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError(key + ": expected a boolean, got '" + v + "'");
}

std::string g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

RunConfig parse_config_text(const std::string& text) {
  RunConfig cfg;
  ExperimentConfig& ex = cfg.experiment;
  std::string fast_mode = "auto";
  bool have_arms = false, have_policy = false, have_horizon = false;

  std::istringstream in(text);
  std::string line, section;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string s = trim(line);
    if (s.empty() || s[0] == '#' || s[0] == ';') continue;
    if (s.front() == '[') {
      if (s.back() != ']') throw ConfigError("line " + std::to_string(line_no) + ": bad section");
      section = trim(s.substr(1, s.size() - 2));
      static const std::set<std::string> known{"env",     "policy", "grid", "sim",
                                               "output",  "voi",    "compare",
                                               "entropy", "check"};
      if (!known.count(section))
        throw ConfigError("unknown section [" + section + "]");
      continue;
    }
    std::size_t eq = s.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
    std::string key = trim(s.substr(0, eq));
    std::string value = trim(s.substr(eq + 1));
    std::string full = section + "." + key;

    if (section == "env") {
      if (key == "arms") {
        ex.arms.clear();
        for (const auto& it : split_list(value)) {
          double p = parse_double(full, it);
          if (!is_probability(p))
            throw ConfigError("env.arms: probability " + it + " outside [0,1]");
          ex.arms.push_back(p);
        }
        have_arms = !ex.arms.empty();
      } else {
        throw ConfigError("unknown key " + full);
      }
    } else if (section == "policy") {
      if (key == "kind") {
        ex.policy.kind = policy_from_name(value);
        have_policy = true;
      } else if (key == "xi") {
        ex.policy.xi = parse_double(full, value);
      } else if (key == "c") {
        ex.policy.klucb_c = parse_double(full, value);
        if (ex.policy.klucb_c < 0) throw ConfigError("policy.c: must be >= 0");
      } else if (key == "alpha") {
        ex.policy.ucb2_alpha = parse_double(full, value);
        if (ex.policy.ucb2_alpha <= 0) throw ConfigError("policy.alpha: must be > 0");
      } else {
        throw ConfigError("unknown key " + full);
      }
    } else if (section == "grid") {
      if (key == "base_intervals") {
        ex.policy.grid.base_intervals = static_cast<int>(parse_int(full, value));
        if (ex.policy.grid.base_intervals < 8)
          throw ConfigError("grid.base_intervals: must be >= 8");
      } else if (key == "window_sigmas") {
        ex.policy.grid.window_sigmas = parse_double(full, value);
      } else if (key == "spacing_divisor") {
        ex.policy.grid.spacing_divisor = parse_double(full, value);
      } else if (key == "bridge_growth") {
        ex.policy.grid.bridge_growth = parse_double(full, value);
        if (ex.policy.grid.bridge_growth <= 1.0)
          throw ConfigError("grid.bridge_growth: must be > 1");
      } else {
        throw ConfigError("unknown key " + full);
      }
    } else if (section == "sim") {
      if (key == "horizon") {
        ex.horizon = parse_int(full, value);
        have_horizon = true;
      } else if (key == "ensemble") {
        ex.ensemble = static_cast<int>(parse_int(full, value));
      } else if (key == "seed") {
        ex.seed = static_cast<std::uint64_t>(parse_int(full, value));
      } else if (key == "checkpoints_per_decade") {
        ex.checkpoints_per_decade = static_cast<int>(parse_int(full, value));
      } else if (key == "workers") {
        ex.workers = static_cast<int>(parse_int(full, value));
      } else if (key == "fast_sim.enabled") {
        ex.fast.enabled = parse_bool(full, value);
      } else if (key == "fast_sim.min_n") {
        ex.fast.min_n = parse_int(full, value);
      } else if (key == "fast_sim.mode") {
        if (value != "auto") fast_mode_from_name(value);  // validates
        fast_mode = value;
      } else if (key == "fast_sim.initial_stretch") {
        ex.fast.initial_stretch = parse_int(full, value);
      } else {
        throw ConfigError("unknown key " + full);
      }
    } else if (section == "output") {
      if (key == "dir") {
        cfg.out_dir = value;
      } else if (key == "subtract_lr") {
        cfg.subtract_lr = parse_bool(full, value);
      } else {
        throw ConfigError("unknown key " + full);
      }
    } else if (section == "voi") {
      if (key == "m_levels") {
        cfg.voi_levels.clear();
        for (const auto& it : split_list(value)) {
          int m = static_cast<int>(parse_int(full, it));
          if (m < 0) throw ConfigError("voi.m_levels: levels must be >= 0");
          cfg.voi_levels.push_back(m);
        }
      } else if (key == "pretrain_cap") {
        ex.voi_pretrain_cap = parse_int(full, value);
      } else {
        throw ConfigError("unknown key " + full);
      }
    } else if (section == "compare") {
      if (key == "policies") {
        cfg.compare_policies.clear();
        for (const auto& it : split_list(value)) cfg.compare_policies.push_back(policy_from_name(it));
      } else {
        throw ConfigError("unknown key " + full);
      }
    } else if (section == "entropy") {
      if (key == "policies") {
        cfg.entropy_policies.clear();
        for (const auto& it : split_list(value)) cfg.entropy_policies.push_back(policy_from_name(it));
      } else if (key == "fit_min_n") {
        cfg.entropy_fit_min = parse_int(full, value);
      } else if (key == "fit_max_n") {
        cfg.entropy_fit_max = parse_int(full, value);
      } else {
        throw ConfigError("unknown key " + full);
      }
    } else if (section == "check") {
      if (key == "regret_slope_rtol") {
        cfg.check_regret_slope_rtol = parse_double(full, value);
      } else if (key == "entropy_slope_rtol") {
        cfg.check_entropy_slope_rtol = parse_double(full, value);
      } else if (key == "voi_slope_rtol") {
        cfg.check_voi_slope_rtol = parse_double(full, value);
      } else if (key == "boundary_below_frac") {
        cfg.check_boundary_below_frac = parse_double(full, value);
      } else {
        throw ConfigError("unknown key " + full);
      }
    } else {
      throw ConfigError("key " + key + " appears before any section");
    }
  }

  if (!have_arms) throw ConfigError("missing required key env.arms");
  if (!have_policy) throw ConfigError("missing required key policy.kind");
  if (!have_horizon) throw ConfigError("missing required key sim.horizon");

  if (fast_mode == "auto") {
    ex.fast.mode = ex.policy.kind == PolicyKind::InfoP      ? FastMode::InfoP
                   : ex.policy.kind == PolicyKind::Thompson ? FastMode::Thompson
                                                            : FastMode::Off;
  } else {
    ex.fast.mode = fast_mode_from_name(fast_mode);
  }

  try {
    ex.validate();
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
  return cfg;
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

void apply_overrides(RunConfig& cfg, const ConfigOverrides& ov) {
  ExperimentConfig& ex = cfg.experiment;
  if (ov.seed) ex.seed = *ov.seed;
  if (ov.horizon) ex.horizon = *ov.horizon;
  if (ov.ensemble) ex.ensemble = *ov.ensemble;
  if (ov.arms) ex.arms = *ov.arms;
  if (ov.policy) {
    ex.policy.kind = policy_from_name(*ov.policy);
    ex.fast.mode = ex.policy.kind == PolicyKind::InfoP      ? FastMode::InfoP
                   : ex.policy.kind == PolicyKind::Thompson ? FastMode::Thompson
                                                            : FastMode::Off;
  }
  if (ov.workers) ex.workers = *ov.workers;
  if (ov.out_dir) cfg.out_dir = *ov.out_dir;
  if (ov.fast_enabled) ex.fast.enabled = *ov.fast_enabled;
  try {
    ex.validate();
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
}

std::string RunConfig::canonical_text() const {
  const ExperimentConfig& ex = experiment;
  std::ostringstream out;
  out << "[env]\n";
  out << "arms = ";
  for (std::size_t i = 0; i < ex.arms.size(); ++i)
    out << (i ? ", " : "") << g17(ex.arms[i]);
  out << "\n\n[policy]\n";
  out << "kind = " << policy_name(ex.policy.kind) << "\n";
  out << "xi = " << g17(ex.policy.xi) << "\n";
  out << "c = " << g17(ex.policy.klucb_c) << "\n";
  out << "alpha = " << g17(ex.policy.ucb2_alpha) << "\n";
  out << "\n[grid]\n";
  out << "base_intervals = " << ex.policy.grid.base_intervals << "\n";
  out << "window_sigmas = " << g17(ex.policy.grid.window_sigmas) << "\n";
  out << "spacing_divisor = " << g17(ex.policy.grid.spacing_divisor) << "\n";
  out << "bridge_growth = " << g17(ex.policy.grid.bridge_growth) << "\n";
  out << "\n[sim]\n";
  out << "horizon = " << ex.horizon << "\n";
  out << "ensemble = " << ex.ensemble << "\n";
  out << "seed = " << ex.seed << "\n";
  out << "checkpoints_per_decade = " << ex.checkpoints_per_decade << "\n";
  out << "workers = " << ex.workers << "\n";
  out << "fast_sim.enabled = " << (ex.fast.enabled ? "true" : "false") << "\n";
  out << "fast_sim.min_n = " << ex.fast.min_n << "\n";
  out << "fast_sim.mode = " << fast_mode_name(ex.fast.mode) << "\n";
  out << "fast_sim.initial_stretch = " << ex.fast.initial_stretch << "\n";
  out << "\n[output]\n";
  out << "dir = " << out_dir << "\n";
  out << "subtract_lr = " << (subtract_lr ? "true" : "false") << "\n";
  out << "\n[voi]\n";
  out << "m_levels = ";
  for (std::size_t i = 0; i < voi_levels.size(); ++i) out << (i ? ", " : "") << voi_levels[i];
  out << "\n";
  out << "pretrain_cap = " << ex.voi_pretrain_cap << "\n";
  out << "\n[compare]\n";
  out << "policies = ";
  for (std::size_t i = 0; i < compare_policies.size(); ++i)
    out << (i ? ", " : "") << policy_name(compare_policies[i]);
  out << "\n";
  out << "\n[entropy]\n";
  out << "policies = ";
  for (std::size_t i = 0; i < entropy_policies.size(); ++i)
    out << (i ? ", " : "") << policy_name(entropy_policies[i]);
  out << "\n";
  out << "fit_min_n = " << entropy_fit_min << "\n";
  out << "fit_max_n = " << entropy_fit_max << "\n";
  out << "\n[check]\n";
  out << "regret_slope_rtol = " << g17(check_regret_slope_rtol) << "\n";
  out << "entropy_slope_rtol = " << g17(check_entropy_slope_rtol) << "\n";
  out << "voi_slope_rtol = " << g17(check_voi_slope_rtol) << "\n";
  out << "boundary_below_frac = " << g17(check_boundary_below_frac) << "\n";
  return out.str();
}

}  // namespace infomax
