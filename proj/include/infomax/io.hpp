#pragma once

#include <string>
#include <vector>

#include "infomax/config.hpp"
#include "infomax/harness.hpp"

namespace infomax {

inline constexpr const char* kArtifactVersion = "0.1.0";

// 17 significant digits, enough to round-trip a double exactly.
std::string g17(double v);

struct CheckResult {
  std::string name;
  bool pass = true;
  double value = 0.0;
  double target = 0.0;
  double tol = 0.0;
};

// Stable CSV schemas, one header per subcommand.
void write_ensemble_csv(const std::string& path, const EnsembleResult& r);
// Same rows with the Lai-Robbins leading term subtracted from the regret.
void write_ensemble_subtracted_csv(const std::string& path, const EnsembleResult& r,
                                   double lr_slope);
void write_boundary_csv(const std::string& path,
                        const std::vector<EpisodeTrace::Event>& events);
void write_voi_delta_csv(const std::string& path, const VoiResult& r);

struct RunManifest {
  std::string started_utc, finished_utc;
  std::uint64_t seed = 0;
  std::string config_text;
  std::vector<std::string> outputs;
};

void write_manifest(const std::string& path, const RunManifest& manifest);
std::string utc_now();

void write_text(const std::string& path, const std::string& text);

}  // namespace infomax
