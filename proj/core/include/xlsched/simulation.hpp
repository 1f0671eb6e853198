// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "xlsched/channel.hpp"
#include "xlsched/config.hpp"
#include "xlsched/schedulers.hpp"

namespace xlsched {

enum class SweepVariable { kTxPower, kEpsilon, kLosProbability, kCommonMinRate };

std::string_view to_string(SweepVariable v) noexcept;
std::optional<SweepVariable> parse_sweep_variable(std::string_view name) noexcept;

/// Returns cfg with the swept field set to `value` (SI units).
SystemConfig apply_sweep(SystemConfig cfg, SweepVariable variable, double value);

struct ExperimentSpec {
  SystemConfig base;
  SweepVariable sweep_variable = SweepVariable::kTxPower;
  std::vector<double> sweep_values;  // SI units; empty means the base value only
  std::vector<Algorithm> algorithms{std::begin(kAllAlgorithms), std::end(kAllAlgorithms)};
  std::size_t num_realizations = 1000;

  bool operator==(const ExperimentSpec&) const = default;
};

/// Throws ConfigInvalid when the experiment or any swept config is invalid.
void validate(const ExperimentSpec& spec);

/// Aggregated metrics of one (sweep value, algorithm) pair.
struct MetricsRow {
  double sweep_value = 0.0;
  Algorithm algorithm = Algorithm::kCbs;
  double mean_sum_rate = 0.0;       // bps/Hz
  double mean_num_scheduled = 0.0;
  double mean_avg_rate = 0.0;       // over realizations with a nonempty schedule
  std::vector<double> ccdf;         // on ExperimentResult::ccdf_grid; empty if nobody scheduled
  double p_los = 0.0;
  double p_nlos = 0.0;
  std::size_t realizations = 0;
  // Per-realization values in realization order, kept for paired statistics.
  std::vector<double> sum_rate_samples;
  std::vector<double> num_scheduled_samples;
};

struct ExperimentResult {
  std::vector<double> ccdf_grid;  // meters
  std::vector<MetricsRow> rows;   // sweep-value major, algorithm minor
};

/// Number of points of the uniform CCDF grid over [0, r_max].
inline constexpr std::size_t kCcdfGridPoints = 100;
std::vector<double> ccdf_grid(double r_max);

/// Sum over scheduled users of log2(1 + p_k / (sigma^2 diag_k)).
double sum_rate(const ScheduleOutcome& outcome);

/// Fraction of scheduled users, pooled over realizations, farther than r.
/// Throws EmptyEnsemble when no user was scheduled in any realization.
double ccdf_estimate(std::span<const std::vector<double>> scheduled_radii, double r);

/// (P_LoS, P_NLoS) estimates pooled over realizations.
std::pair<double, double> state_sched_prob(
    std::span<const std::vector<ChannelState>> scheduled_states);

struct RealizationResult {
  Population population;
  std::vector<ScheduleOutcome> outcomes;  // aligned with the algorithm list
};

/// Samples one realization and runs every algorithm on the same users.
RealizationResult run_realization(const SystemConfig& cfg, std::span<const Algorithm> algorithms,
                                  std::uint64_t realization_index);

/// Runs the Monte-Carlo sweep. Results are independent of `workers`.
ExperimentResult run_experiment(const ExperimentSpec& spec, std::size_t workers = 1);

}  // namespace xlsched
