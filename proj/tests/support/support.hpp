// SPDX-License-Identifier: Apache-2.0
// Helpers shared by the unit, integration and acceptance tests.
#pragma once

#include <armadillo>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "xlsched/channel.hpp"
#include "xlsched/config.hpp"

namespace xlsched::testing {

/// i.i.d. CN(0, 1) matrix.
inline arma::cx_mat random_cx(std::size_t rows, std::size_t cols, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, std::sqrt(0.5));
  arma::cx_mat out(rows, cols);
  for (auto& z : out) z = {n(rng), n(rng)};
  return out;
}

/// Direct inverse diagonal via arma::inv, the independent reference.
inline arma::vec direct_inverse_diag(const arma::cx_mat& a) {
  return arma::real(arma::inv(arma::cx_mat(a.t() * a)).eval().diag());
}

/// Small desk-sized configuration.
inline SystemConfig small_config(std::size_t m, std::size_t k, double rho = 1.0) {
  SystemConfig cfg;
  cfg.num_antennas = m;
  cfg.num_users = k;
  cfg.los_probability = rho;
  return cfg;
}

/// Population built from explicit channel columns and rates.
inline Population population_from(const arma::cx_mat& channels, const std::vector<double>& rates,
                                  const std::vector<double>& radii = {}) {
  std::vector<User> users(channels.n_cols);
  for (std::size_t k = 0; k < users.size(); ++k) {
    users[k].channel = channels.col(k);
    users[k].min_rate = rates[k];
    users[k].position.r = radii.empty() ? 100.0 + static_cast<double>(k) : radii[k];
  }
  return make_population(std::move(users));
}

}  // namespace xlsched::testing
