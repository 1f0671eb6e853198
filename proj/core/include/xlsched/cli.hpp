// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "xlsched/simulation.hpp"

// Front-end layer: JSON configuration, CSV/JSON artifacts and the two
// commands exposed by the xlsched tool. This is the only place that
// converts between dBm and watts.
namespace xlsched::cli {

inline constexpr std::string_view kVersion = "0.1.0";

inline constexpr std::string_view kMetricsHeader =
    "sweep_var,sweep_value,algorithm,mean_sum_rate_bpshz,mean_num_scheduled,"
    "mean_avg_rate_bpshz,p_los,p_nlos,realizations,seed";
inline constexpr std::string_view kCcdfHeader = "sweep_value,algorithm,r_meters,ccdf";

/// Which defaults fill fields absent from a config file. kFull uses the
/// reference evaluation setup; kDesk shrinks M, K and S to 128, 200, 50.
enum class Scale { kFull, kDesk };

inline constexpr std::size_t kDeskAntennas = 128;
inline constexpr std::size_t kDeskUsers = 200;
inline constexpr std::size_t kDeskRealizations = 50;

double dbm_to_watts(double dbm);
double watts_to_dbm(double watts);

/// Parses a config document. Power-like fields accept a number in SI units
/// or a string with a unit suffix ("30 dBm", "0.5 W", "-174 dBm/Hz").
/// A run manifest is also accepted; its "config" member is used.
ExperimentSpec parse_config_text(std::string_view json_text, Scale scale = Scale::kFull);
ExperimentSpec parse_config(const std::filesystem::path& path, Scale scale = Scale::kFull);

/// Serialises an ExperimentSpec with every field explicit, in SI units. Parsing the
/// result yields an identical spec.
std::string emit_config(const ExperimentSpec& spec);

/// Sweep value as written to CSV: dBm for the power sweep, SI otherwise.
double sweep_value_for_output(SweepVariable variable, double value);
std::string_view sweep_var_label(SweepVariable variable) noexcept;

std::string format_metrics_csv(const ExperimentSpec& spec, const ExperimentResult& result);
std::string format_ccdf_csv(const ExperimentSpec& spec, const ExperimentResult& result);

struct RunManifest {
  ExperimentSpec spec;
  std::string version{kVersion};
  std::uint64_t seed = 0;
  std::string started_at;   // UTC, ISO 8601
  std::string finished_at;
  std::vector<std::filesystem::path> outputs;
};

std::string emit_manifest(const RunManifest& manifest);

/// Paths written by cmd_sweep next to the metrics CSV.
std::filesystem::path ccdf_path_for(const std::filesystem::path& out);
std::filesystem::path manifest_path_for(const std::filesystem::path& out);

/// Runs the sweep and writes <out>, <out>.ccdf.csv and <out>.manifest.json.
RunManifest cmd_sweep(const ExperimentSpec& spec, const std::filesystem::path& out,
                      std::size_t workers = 1);

/// JSON dump of one realization: users, and per algorithm the scheduled set,
/// channels of the scheduled users, powers, rates and the removal trace.
std::string cmd_inspect(const ExperimentSpec& spec, std::uint64_t realization);

/// Worker count from XLSCHED_WORKERS, or 1 when unset or malformed.
std::size_t default_workers();

}  // namespace xlsched::cli
