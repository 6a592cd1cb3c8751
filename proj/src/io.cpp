#include "infomax/io.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace infomax {

std::string g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  return out;
}

}  // namespace

void write_text(const std::string& path, const std::string& text) {
  auto out = open_out(path);
  out << text;
}

void write_ensemble_csv(const std::string& path, const EnsembleResult& r) {
  auto out = open_out(path);
  out << "n,mean_regret,se_regret,mean_lnH,se_lnH,mean_n2\n";
  for (std::size_t k = 0; k < r.n.size(); ++k) {
    out << r.n[k] << ',' << g17(r.mean_regret[k]) << ',' << g17(r.se_regret[k]) << ','
        << g17(r.mean_lnh[k]) << ',' << g17(r.se_lnh[k]) << ',' << g17(r.mean_n2[k]) << '\n';
  }
}

void write_ensemble_subtracted_csv(const std::string& path, const EnsembleResult& r,
                                   double lr_slope) {
  auto out = open_out(path);
  out << "n,mean_regret,se_regret,mean_lnH,se_lnH,mean_n2\n";
  for (std::size_t k = 0; k < r.n.size(); ++k) {
    double sub = r.mean_regret[k] - lr_slope * std::log(static_cast<double>(r.n[k]));
    out << r.n[k] << ',' << g17(sub) << ',' << g17(r.se_regret[k]) << ',' << g17(r.mean_lnh[k])
        << ',' << g17(r.se_lnh[k]) << ',' << g17(r.mean_n2[k]) << '\n';
  }
}

void write_boundary_csv(const std::string& path,
                        const std::vector<EpisodeTrace::Event>& events) {
  auto out = open_out(path);
  out << "n,n2_d\n";
  for (const auto& e : events) out << e.n << ',' << g17(e.n2_d) << '\n';
}

void write_voi_delta_csv(const std::string& path, const VoiResult& r) {
  auto out = open_out(path);
  out << "m,h0,mean_regret,se_regret,delta_r,minus_delta_r\n";
  for (const auto& lvl : r.levels) {
    out << lvl.m << ',' << g17(lvl.h0) << ',' << g17(lvl.mean_regret) << ','
        << g17(lvl.se_regret) << ',' << g17(lvl.delta_regret) << ',' << g17(-lvl.delta_regret)
        << '\n';
  }
}

std::string utc_now() {
  auto now = std::chrono::system_clock::now();
  std::time_t t = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_manifest(const std::string& path, const RunManifest& m) {
  nlohmann::json j;
  j["artifact_version"] = kArtifactVersion;
  j["started_utc"] = m.started_utc;
  j["finished_utc"] = m.finished_utc;
  j["master_seed"] = m.seed;
  j["config"] = m.config_text;
  j["outputs"] = m.outputs;
  auto out = open_out(path);
  out << j.dump(2) << '\n';
}

}  // namespace infomax
