// SPDX-License-Identifier: Apache-2.0
#include "xlsched/power.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "xlsched/errors.hpp"
#include "xlsched/precoding.hpp"

namespace xlsched {
namespace {

// 2^R - 1 without cancellation for small R.
double snr_for_rate(double rate) { return std::expm1(rate * std::numbers::ln2); }

void require_same_size(std::size_t a, std::size_t b) {
  if (a != b) throw std::invalid_argument("per-user inputs differ in length");
}

}  // namespace

double min_power(double min_rate, double gram_inv_diag_k, double noise_power) {
  return noise_power * snr_for_rate(min_rate) * gram_inv_diag_k;
}

double single_user_min_power(double min_rate, double channel_power, double noise_power) {
  return noise_power * snr_for_rate(min_rate) / channel_power;
}

double sum_min_power(std::span<const double> gram_inv_diag, std::span<const double> min_rates,
                     double noise_power) {
  require_same_size(gram_inv_diag.size(), min_rates.size());
  double total = 0.0;
  for (std::size_t k = 0; k < gram_inv_diag.size(); ++k)
    total += min_power(min_rates[k], gram_inv_diag[k], noise_power);
  return total;
}

bool check_feasibility(std::span<const double> gram_inv_diag, std::span<const double> min_rates,
                       double noise_power, double p_max) {
  return sum_min_power(gram_inv_diag, min_rates, noise_power) <= p_max;
}

bool check_feasibility(const arma::cx_mat& columns, std::span<const double> min_rates,
                       double noise_power, double p_max) {
  const arma::vec diag = gram_inverse_diag(columns);
  return check_feasibility(std::span<const double>(diag.memptr(), diag.n_elem), min_rates,
                           noise_power, p_max);
}

bool quick_infeasible(std::span<const double> channel_powers, std::span<const double> min_rates,
                      double noise_power, double p_max) {
  require_same_size(channel_powers.size(), min_rates.size());
  double total = 0.0;
  for (std::size_t k = 0; k < channel_powers.size(); ++k)
    total += single_user_min_power(min_rates[k], channel_powers[k], noise_power);
  return total >= p_max;
}

PowerAllocation waterfill(std::span<const double> gram_inv_diag, std::span<const double> min_rates,
                          double noise_power, double p_max) {
  require_same_size(gram_inv_diag.size(), min_rates.size());
  const std::size_t n = gram_inv_diag.size();
  PowerAllocation out;
  if (n == 0) return out;

  std::vector<double> floor(n);
  std::vector<double> level(n);  // sigma^2 diag_k, the "ground" of channel k
  double floor_sum = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    floor[k] = min_power(min_rates[k], gram_inv_diag[k], noise_power);
    level[k] = noise_power * gram_inv_diag[k];
    floor_sum += floor[k];
  }
  if (floor_sum > p_max) throw Infeasible("minimum powers exceed the power budget");

  auto filled = [&](double mu) {
    double total = 0.0;
    for (std::size_t k = 0; k < n; ++k) total += std::max(floor[k], mu - level[k]);
    return total;
  };

  double lo = floor[0] + level[0];
  double hi = p_max + level[0];
  for (std::size_t k = 1; k < n; ++k) {
    lo = std::min(lo, floor[k] + level[k]);
    hi = std::max(hi, p_max + level[k]);
  }

  out.powers = floor;
  out.water_level = lo;
  if (filled(lo) >= p_max) return out;  // every user sits on its floor

  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (filled(mid) < p_max ? lo : hi) = mid;
  }

  // Solve the linear piece exactly on the bracketed active set.
  double mu = 0.5 * (lo + hi);
  std::vector<bool> active(n);
  for (int pass = 0; pass < 4; ++pass) {
    bool changed = false;
    std::size_t count = 0;
    double pinned = 0.0;
    double grounds = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      const bool a = mu - level[k] > floor[k];
      changed |= a != active[k];
      active[k] = a;
      if (a) {
        ++count;
        grounds += level[k];
      } else {
        pinned += floor[k];
      }
    }
    if (count == 0) break;
    mu = (p_max - pinned + grounds) / static_cast<double>(count);
    if (!changed && pass > 0) break;
  }

  // Rounding can leave the total a few ulps above the budget; lower the
  // level until it fits.
  const double active_count = static_cast<double>(std::count(active.begin(), active.end(), true));
  double step = std::numeric_limits<double>::epsilon() * p_max / std::max(active_count, 1.0);
  while (filled(mu) > p_max) {
    mu -= step;
    step *= 2.0;
  }
  out.water_level = mu;
  for (std::size_t k = 0; k < n; ++k) out.powers[k] = std::max(floor[k], mu - level[k]);
  return out;
}

}  // namespace xlsched
