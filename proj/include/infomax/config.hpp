#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "infomax/harness.hpp"

namespace infomax {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Everything a run needs, parsed from the sectioned key-value config file.
struct RunConfig {
  ExperimentConfig experiment;

  std::string out_dir = "out";
  bool subtract_lr = false;

  std::vector<int> voi_levels{0, 1, 2, 3, 4, 5};
  std::vector<PolicyKind> compare_policies{PolicyKind::InfoP, PolicyKind::Thompson,
                                           PolicyKind::KlUcb};
  std::vector<PolicyKind> entropy_policies{PolicyKind::InfoId, PolicyKind::MaxEnt,
                                           PolicyKind::InfoP};
  std::int64_t entropy_fit_min = 0;  // 0: protocol default
  std::int64_t entropy_fit_max = 0;

  // tolerances checked after a run when nonzero; failures flip the exit code
  double check_regret_slope_rtol = 0.0;
  double check_entropy_slope_rtol = 0.0;
  double check_voi_slope_rtol = 0.0;
  double check_boundary_below_frac = 0.0;

  // Serializes every setting; parsing the text reproduces this config.
  std::string canonical_text() const;
};

// Command-line overrides applied on top of the file.
struct ConfigOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::int64_t> horizon;
  std::optional<int> ensemble;
  std::optional<std::vector<double>> arms;
  std::optional<std::string> policy;
  std::optional<int> workers;
  std::optional<std::string> out_dir;
  std::optional<bool> fast_enabled;
};

RunConfig parse_config_text(const std::string& text);
RunConfig parse_config_file(const std::string& path);
void apply_overrides(RunConfig& cfg, const ConfigOverrides& ov);

}  // namespace infomax
