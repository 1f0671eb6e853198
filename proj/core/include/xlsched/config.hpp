// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>

namespace xlsched {

inline constexpr double kSpeedOfLight = 299'792'458.0;  // m/s

/// Upper bound accepted for any minimum-rate target, in bps/Hz.
inline constexpr double kMaxMinRate = 64.0;

/// Physical and system constants of one downlink XL-MIMO cell.
///
/// Every quantity is in SI units: watts, hertz, meters, watts/hertz.
/// The defaults reproduce the reference evaluation setup (1000-element
/// half-wavelength ULA at 4 GHz, 20 MHz, ITU-R UMi path-loss laws).
struct SystemConfig {
  std::size_t num_antennas = 1000;
  double antenna_spacing = 0.0375;
  double carrier_freq = 4.0e9;
  double bandwidth = 20.0e6;
  std::size_t num_users = 1000;
  double tx_power_budget = 1.0;  // 30 dBm
  double los_probability = 1.0;
  double epsilon = 0.4;
  double gamma_los = 2.20;
  double gamma_nlos = 3.67;
  double beta0_los = 1.0e-4;
  double beta0_nlos = 1.4125375446227544e-4;  // 10^-3.85
  double noise_psd = 3.9810717055349565e-21;  // -174 dBm/Hz
  double min_rate_lo = 5.0;
  double min_rate_hi = 15.0;
  /// When set, every user gets this minimum rate instead of a uniform draw.
  std::optional<double> common_min_rate;
  double r_min = 30.0;
  double r_max = 1000.0;
  std::uint64_t rng_seed = 1;

  double wavelength() const noexcept { return kSpeedOfLight / carrier_freq; }
  double aperture() const noexcept {
    return num_antennas == 0 ? 0.0 : static_cast<double>(num_antennas - 1) * antenna_spacing;
  }
  /// Noise power sigma_w^2 = N0 * B.
  double noise_power() const noexcept { return noise_psd * bandwidth; }

  bool operator==(const SystemConfig&) const = default;
};

/// Throws ConfigInvalid naming the first offending field.
void validate(const SystemConfig& cfg);

}  // namespace xlsched
