// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <armadillo>
#include <span>
#include <vector>

namespace xlsched {

/// Optimal powers for a fixed scheduled set under a sum-power budget and
/// per-user rate floors.
struct PowerAllocation {
  std::vector<double> powers;  // watts, in scheduled-set order
  double water_level = 0.0;    // watts
  bool feasible = true;
};

/// Minimum ZF power meeting a rate target: sigma^2 (2^R - 1) [(A^H A)^-1]_kk.
double min_power(double min_rate, double gram_inv_diag_k, double noise_power);

/// Minimum interference-free power: sigma^2 (2^R - 1) / ||a_k||^2.
double single_user_min_power(double min_rate, double channel_power, double noise_power);

/// Sum of min_power over a set given its Gram-inverse diagonal.
double sum_min_power(std::span<const double> gram_inv_diag, std::span<const double> min_rates,
                     double noise_power);

/// Exact feasibility test: sum of minimum ZF powers <= P_max.
bool check_feasibility(std::span<const double> gram_inv_diag, std::span<const double> min_rates,
                       double noise_power, double p_max);

/// Same test on the columns of A; throws RankDeficient when A is not full rank.
bool check_feasibility(const arma::cx_mat& columns, std::span<const double> min_rates,
                       double noise_power, double p_max);

/// Inverse-free sufficient infeasibility test: sum of single-user minimum
/// powers >= P_max implies the set is infeasible.
bool quick_infeasible(std::span<const double> channel_powers, std::span<const double> min_rates,
                      double noise_power, double p_max);

/// Water-filling over the ZF-decoupled channels with rate floors.
///
/// p_k = max(pbar_k, mu - sigma^2 diag_k), with the water level mu located by
/// bisection and then solved exactly on the identified active set. Throws
/// Infeasible when the floors alone exceed the budget.
PowerAllocation waterfill(std::span<const double> gram_inv_diag, std::span<const double> min_rates,
                          double noise_power, double p_max);

}  // namespace xlsched
