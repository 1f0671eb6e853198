// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <armadillo>
#include <cstdint>
#include <functional>
#include <vector>

#include "xlsched/config.hpp"
#include "xlsched/rng.hpp"

namespace xlsched {

// Geometry: the ULA lies on the x-axis centred at the origin and the
// boresight is the y-axis. A user at (r, theta) sits at (r sin theta,
// r cos theta); theta = 0 is boresight. Antennas are isotropic, so users
// behind the array (|theta| > pi/2) see the mirrored channel.

struct UserPosition {
  double r = 0.0;      // meters, distance to the array centre
  double theta = 0.0;  // radians, angle to boresight
};

enum class ChannelState : std::uint8_t { kNlos = 0, kLos = 1 };

struct User {
  UserPosition position;
  ChannelState state = ChannelState::kLos;
  double min_rate = 0.0;  // bps/Hz
  arma::cx_vec channel;   // length M
};

/// Antenna offsets x_m = (m-1) d - D/2 along the array axis.
std::vector<double> antenna_positions(const SystemConfig& cfg);

/// Euclidean distance between a user and the antenna at offset x_m.
double user_antenna_distance(const UserPosition& pos, double antenna_x);

/// Spherical-wave line-of-sight channel vector.
arma::cx_vec los_channel_vector(const UserPosition& pos, const SystemConfig& cfg);

/// Per-antenna NLoS path loss beta_m = beta0 / r_m^gamma.
arma::vec nlos_covariance_diag(const UserPosition& pos, const SystemConfig& cfg);

/// One Rayleigh draw with independent CN(0, beta_m) entries.
arma::cx_vec sample_nlos_vector(const UserPosition& pos, const SystemConfig& cfg, Rng& rng);

/// Bernoulli(los_probability) channel-state draw.
ChannelState sample_channel_state(double los_probability, Rng& rng);

/// Evaluates exactly one of the LoS / NLoS branches depending on the state.
arma::cx_vec multi_state_channel(const UserPosition& pos, ChannelState state,
                                 const SystemConfig& cfg, Rng& rng);

/// Maps a uniform variate to a radius with pdf 2r / (r_max^2 - r_min^2).
double radius_from_uniform(double u, double r_min, double r_max);

/// Position uniformly distributed over the annulus [r_min, r_max] x [-pi, pi].
UserPosition sample_user_position(const SystemConfig& cfg, Rng& rng);

/// Position-dependent LoS probability. The default model ignores the
/// position and returns cfg.los_probability.
using LosProbabilityModel = std::function<double(const UserPosition&)>;

/// All users of one Monte-Carlo realization plus derived channel quantities
/// shared by every scheduler.
struct Population {
  std::vector<User> users;
  arma::cx_mat channels;  // M x K, column k is users[k].channel
  arma::cx_mat gram;      // K x K, channels^H channels
  arma::vec channel_power;  // ||a_k||^2

  std::size_t size() const noexcept { return users.size(); }
};

/// Assembles the derived matrices for an explicit user list.
Population make_population(std::vector<User> users);

/// Samples the K users of realization `realization` from the master seed in
/// cfg. Each user draws from its own sub-stream, so a user's position,
/// uniform state variate and rate do not depend on the other users.
Population sample_population(const SystemConfig& cfg, std::uint64_t realization,
                             const LosProbabilityModel& los_model = {});

}  // namespace xlsched
