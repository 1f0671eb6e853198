// SPDX-License-Identifier: Apache-2.0
#include "xlsched/config.hpp"

#include <cmath>

#include "xlsched/errors.hpp"

namespace xlsched {
namespace {

void require(bool ok, const char* field, const char* message) {
  if (!ok) throw ConfigInvalid(field, message);
}

bool finite_positive(double v) { return std::isfinite(v) && v > 0.0; }

}  // namespace

void validate(const SystemConfig& cfg) {
  require(cfg.num_antennas >= 1, "num_antennas", "must be at least 1");
  require(cfg.num_users >= 1, "num_users", "must be at least 1");
  require(finite_positive(cfg.carrier_freq), "carrier_freq", "must be positive");
  require(finite_positive(cfg.antenna_spacing), "antenna_spacing", "must be positive");
  // Uncorrelated NLoS entries need at least half-wavelength spacing. The
  // relative slack absorbs rounding of d = lambda / 2 written in decimal.
  require(cfg.antenna_spacing >= 0.5 * cfg.wavelength() * (1.0 - 1e-9), "antenna_spacing",
          "must be at least half a wavelength");
  require(finite_positive(cfg.bandwidth), "bandwidth", "must be positive");
  require(finite_positive(cfg.tx_power_budget), "tx_power_budget", "must be positive");
  require(cfg.los_probability >= 0.0 && cfg.los_probability <= 1.0, "los_probability",
          "must lie in [0, 1]");
  require(cfg.epsilon > 0.0 && cfg.epsilon < 1.0, "epsilon", "must lie in (0, 1)");
  require(finite_positive(cfg.gamma_los), "gamma_los", "must be positive");
  require(finite_positive(cfg.gamma_nlos), "gamma_nlos", "must be positive");
  require(finite_positive(cfg.beta0_los), "beta0_los", "must be positive");
  require(finite_positive(cfg.beta0_nlos), "beta0_nlos", "must be positive");
  require(finite_positive(cfg.noise_psd), "noise_psd", "must be positive");
  require(std::isfinite(cfg.min_rate_lo) && cfg.min_rate_lo >= 0.0, "min_rate_range",
          "lower bound must be non-negative");
  require(std::isfinite(cfg.min_rate_hi) && cfg.min_rate_hi >= cfg.min_rate_lo, "min_rate_range",
          "upper bound must not be below the lower bound");
  require(cfg.min_rate_hi <= kMaxMinRate, "min_rate_range", "must not exceed 64 bps/Hz");
  if (cfg.common_min_rate) {
    require(std::isfinite(*cfg.common_min_rate) && *cfg.common_min_rate >= 0.0 &&
                *cfg.common_min_rate <= kMaxMinRate,
            "common_min_rate", "must lie in [0, 64] bps/Hz");
  }
  require(finite_positive(cfg.r_min), "r_min", "must be positive");
  require(std::isfinite(cfg.r_max) && cfg.r_max > cfg.r_min, "r_max", "must exceed r_min");
}

}  // namespace xlsched
