// SPDX-License-Identifier: Apache-2.0
#include "xlsched/channel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <utility>

namespace xlsched {

std::vector<double> antenna_positions(const SystemConfig& cfg) {
  const std::size_t m_count = cfg.num_antennas;
  const double half_aperture = 0.5 * cfg.aperture();
  std::vector<double> x(m_count);
  for (std::size_t m = 0; m < m_count; ++m)
    x[m] = static_cast<double>(m) * cfg.antenna_spacing - half_aperture;
  return x;
}

double user_antenna_distance(const UserPosition& pos, double antenna_x) {
  const double d2 = pos.r * pos.r + antenna_x * antenna_x - 2.0 * pos.r * antenna_x * std::sin(pos.theta);
  return std::sqrt(std::max(d2, 0.0));
}

arma::cx_vec los_channel_vector(const UserPosition& pos, const SystemConfig& cfg) {
  const auto x = antenna_positions(cfg);
  const double k0 = 2.0 * std::numbers::pi / cfg.wavelength();
  arma::cx_vec a(x.size());
  for (std::size_t m = 0; m < x.size(); ++m) {
    const double r_m = user_antenna_distance(pos, x[m]);
    const double amplitude = std::sqrt(cfg.beta0_los / std::pow(r_m, cfg.gamma_los));
    a[m] = std::polar(amplitude, -k0 * r_m);
  }
  return a;
}

arma::vec nlos_covariance_diag(const UserPosition& pos, const SystemConfig& cfg) {
  const auto x = antenna_positions(cfg);
  arma::vec beta(x.size());
  for (std::size_t m = 0; m < x.size(); ++m)
    beta[m] = cfg.beta0_nlos / std::pow(user_antenna_distance(pos, x[m]), cfg.gamma_nlos);
  return beta;
}

arma::cx_vec sample_nlos_vector(const UserPosition& pos, const SystemConfig& cfg, Rng& rng) {
  const arma::vec beta = nlos_covariance_diag(pos, cfg);
  std::normal_distribution<double> normal(0.0, 1.0);
  arma::cx_vec a(beta.n_elem);
  for (std::size_t m = 0; m < beta.n_elem; ++m) {
    const double scale = std::sqrt(0.5 * beta[m]);
    const double re = normal(rng);
    const double im = normal(rng);
    a[m] = {scale * re, scale * im};
  }
  return a;
}

ChannelState sample_channel_state(double los_probability, Rng& rng) {
  return uniform01(rng) < los_probability ? ChannelState::kLos : ChannelState::kNlos;
}

arma::cx_vec multi_state_channel(const UserPosition& pos, ChannelState state,
                                 const SystemConfig& cfg, Rng& rng) {
  if (state == ChannelState::kLos) return los_channel_vector(pos, cfg);
  return sample_nlos_vector(pos, cfg, rng);
}

double radius_from_uniform(double u, double r_min, double r_max) {
  return std::sqrt(r_min * r_min + u * (r_max * r_max - r_min * r_min));
}

UserPosition sample_user_position(const SystemConfig& cfg, Rng& rng) {
  const double u_r = uniform01(rng);
  const double u_theta = uniform01(rng);
  return {radius_from_uniform(u_r, cfg.r_min, cfg.r_max),
          -std::numbers::pi + 2.0 * std::numbers::pi * u_theta};
}

Population make_population(std::vector<User> users) {
  Population pop;
  pop.users = std::move(users);
  const std::size_t k_count = pop.users.size();
  const std::size_t m_count = k_count == 0 ? 0 : pop.users.front().channel.n_elem;
  pop.channels.set_size(m_count, k_count);
  for (std::size_t k = 0; k < k_count; ++k) pop.channels.col(k) = pop.users[k].channel;
  pop.gram = pop.channels.t() * pop.channels;
  pop.channel_power.set_size(k_count);
  for (std::size_t k = 0; k < k_count; ++k) pop.channel_power[k] = std::real(pop.gram(k, k));
  return pop;
}

Population sample_population(const SystemConfig& cfg, std::uint64_t realization,
                             const LosProbabilityModel& los_model) {
  std::vector<User> users(cfg.num_users);
  for (std::size_t k = 0; k < cfg.num_users; ++k) {
    Rng rng = make_rng(cfg.rng_seed, {realization, k});
    User& u = users[k];
    u.position = sample_user_position(cfg, rng);
    const double p_los = los_model ? los_model(u.position) : cfg.los_probability;
    u.state = sample_channel_state(p_los, rng);
    const double u_rate = uniform01(rng);
    u.min_rate = cfg.common_min_rate ? *cfg.common_min_rate
                                     : cfg.min_rate_lo + u_rate * (cfg.min_rate_hi - cfg.min_rate_lo);
    u.channel = multi_state_channel(u.position, u.state, cfg, rng);
  }
  return make_population(std::move(users));
}

}  // namespace xlsched
