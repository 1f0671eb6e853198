// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <armadillo>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "xlsched/channel.hpp"
#include "xlsched/config.hpp"
#include "xlsched/graph.hpp"
#include "xlsched/power.hpp"
#include "xlsched/rng.hpp"

namespace xlsched {

enum class Algorithm { kCbs, kCpbs, kGwc, kDbs, kSdbs, kRandom };

inline constexpr Algorithm kAllAlgorithms[] = {Algorithm::kCbs, Algorithm::kCpbs,
                                               Algorithm::kGwc, Algorithm::kDbs,
                                               Algorithm::kSdbs, Algorithm::kRandom};

std::string_view to_string(Algorithm a) noexcept;
/// Accepts "cbs", "cpbs", "gwc", "dbs", "sdbs" / "s-dbs", "random".
std::optional<Algorithm> parse_algorithm(std::string_view name) noexcept;

/// Result of a greedy clique search.
struct CliqueSearch {
  std::vector<std::size_t> vertices;  // insertion order
  double total_weight = 0.0;
};

/// Clique search-based scheduling: grow a clique from the lightest vertex by
/// repeatedly adding the lightest vertex of the common neighbourhood until
/// the accumulated weight reaches the budget or the neighbourhood empties.
CliqueSearch cbs(const UserGraph& g, double p_max);

/// Removes the user with the weakest channel until the set becomes feasible.
struct RemovalResult {
  std::vector<std::size_t> kept;     // survivors, original order preserved
  std::vector<std::size_t> removed;  // in removal order
};
RemovalResult user_removal(std::span<const std::size_t> candidates, const Population& pop,
                           double noise_power, double p_max);

/// Channel power-based scheduling: users by decreasing ||a_k||^2 until the
/// accumulated single-user minimum power reaches the budget.
std::vector<std::size_t> cpbs(const Population& pop, const SystemConfig& cfg);

/// Why a greedy baseline stopped adding users.
enum class StopReason {
  kExhausted,      // no candidate left
  kInfeasible,     // the last addition violated the power budget
  kRankDeficient,  // the last addition was linearly dependent
  kSumRateDrop,    // the last addition lowered the water-filled sum-rate
};

std::string_view to_string(StopReason r) noexcept;

/// Outcome of a baseline with the per-iteration feasibility stop.
struct GreedyResult {
  std::vector<std::size_t> scheduled;    // insertion order
  std::optional<std::size_t> rejected;  // the user removed by the stop rule
  StopReason stop = StopReason::kExhausted;
};

/// Greedy weighted clique on the epsilon graph with uniform-power
/// single-user capacity weights, log2(1 + (P_max/K) ||a_k||^2 / sigma^2).
GreedyResult gwc(const Population& pop, const SystemConfig& cfg);

/// Distance-based scheduling with the equivalent-distance surrogate
/// r_k (1 + sum_i |a_k^H f_i|^2 / ||a_k||^2) over the current ZF precoders.
GreedyResult dbs(const Population& pop, const SystemConfig& cfg);

/// Simplified distance-based scheduling: users by increasing r_k.
GreedyResult sdbs(const Population& pop, const SystemConfig& cfg);

/// Uniformly random order with the per-iteration feasibility stop.
GreedyResult random_sched(const Population& pop, const SystemConfig& cfg, Rng& rng);

/// Single-user capacity weight used by GWC.
std::vector<double> gwc_weights(const Population& pop, const SystemConfig& cfg);

/// Step of the scheduling/removal trace kept for diagnostics.
struct ScheduleOutcome {
  Algorithm algorithm = Algorithm::kCbs;
  std::vector<std::size_t> scheduled;  // population indices
  PowerAllocation allocation;
  std::vector<double> rates;          // bps/Hz, aligned with scheduled
  std::vector<double> gram_inv_diag;  // aligned with scheduled
  double noise_power = 0.0;
  std::size_t candidate_count = 0;     // size of the scheduler's raw output
  std::vector<std::size_t> rank_pruned;
  std::vector<std::size_t> removed;    // by user removal or the baseline stop rule
  std::optional<StopReason> stop;      // baselines only
};

/// Full pipeline for one algorithm: schedule, enforce full rank and
/// feasibility, water-fill, and evaluate the ZF rates.
ScheduleOutcome schedule_and_allocate(Algorithm algorithm, const Population& pop,
                                      const SystemConfig& cfg, Rng& rng);

}  // namespace xlsched
