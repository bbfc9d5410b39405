// Persistence: profile snapshots and checkpoints (JSON), run configuration
// with strict schema validation, the series CSV with fixed 17-significant-
// digit decimals, and the run manifest.
#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "krf/flow.hpp"
#include "krf/profile.hpp"

namespace krf {

inline constexpr const char* kFormatVersion = "1.0";

// ---- profile snapshots ----
nlohmann::json profile_to_json(const RadialProfile& P);
RadialProfile profile_from_json(const nlohmann::json& j);
void write_profile(const std::filesystem::path& path, const RadialProfile& P);
RadialProfile read_profile(const std::filesystem::path& path);

// ---- run configuration ----
struct RunConfig {
  FlowConfig flow;
  std::vector<std::string> monitors;  // doubling_time | pinching_window |
                                      // continuation | convergence
  std::string out_dir = "out";
  std::vector<std::string> formats = {"csv", "json"};
};

// Strict: unknown keys anywhere are rejected.
RunConfig run_config_from_json(const nlohmann::json& j);
nlohmann::json run_config_to_json(const RunConfig& cfg);
RunConfig read_run_config(const std::filesystem::path& path);

uint64_t config_hash(const nlohmann::json& canonical);

// Hash of the fields that define the trajectory itself (manifold, grid,
// initial data, stepping policy, gauge); horizon and output settings are
// free to change across a resume.
uint64_t run_identity_hash(const RunConfig& cfg);

// ---- series CSV ----
void write_series_csv(const std::filesystem::path& path,
                      const std::vector<SeriesRow>& rows);
std::vector<SeriesRow> read_series_csv(const std::filesystem::path& path);

// ---- checkpoints ----
struct Checkpoint {
  double t = 0.0;
  std::vector<double> phi;
  uint64_t config_hash = 0;
};

void write_checkpoint(const std::filesystem::path& path, const Checkpoint& ck);
Checkpoint read_checkpoint(const std::filesystem::path& path);

// ---- manifest ----
void write_manifest(const std::filesystem::path& dir, const std::string& command,
                    const nlohmann::json& config,
                    const std::vector<std::string>& outputs);

// 17-significant-digit decimal; round-trips doubles exactly.
std::string format_g17(double v);

}  // namespace krf
