// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "support.hpp"
#include "xlsched/channel.hpp"
#include "xlsched/errors.hpp"
#include "xlsched/graph.hpp"

namespace xlsched {
namespace {

using std::numbers::pi;

TEST(AntennaPositions, CentredOnOrigin) {
  SystemConfig cfg;
  cfg.num_antennas = 1;
  EXPECT_EQ(antenna_positions(cfg), std::vector<double>{0.0});

  cfg.num_antennas = 2;
  cfg.antenna_spacing = 2.0;
  EXPECT_EQ(antenna_positions(cfg), (std::vector<double>{-1.0, 1.0}));

  cfg.num_antennas = 3;
  cfg.antenna_spacing = 1.0;
  EXPECT_EQ(antenna_positions(cfg), (std::vector<double>{-1.0, 0.0, 1.0}));
  EXPECT_DOUBLE_EQ(cfg.aperture(), 2.0);
}

TEST(UserAntennaDistance, HandGeometry) {
  EXPECT_DOUBLE_EQ(user_antenna_distance({1.0, 0.0}, -1.0), std::sqrt(2.0));
  EXPECT_DOUBLE_EQ(user_antenna_distance({1.0, 0.0}, 1.0), std::sqrt(2.0));
  EXPECT_NEAR(user_antenna_distance({3.0, pi / 2}, -1.0), 4.0, 1e-12);
  EXPECT_NEAR(user_antenna_distance({3.0, pi / 2}, 1.0), 2.0, 1e-12);
}

TEST(UserAntennaDistance, MatchesPlanarNorm) {
  const double r = 30.0;
  const double theta = 0.3;
  const double x = 18.73;
  const double ux = r * std::sin(theta);
  const double uy = r * std::cos(theta);
  EXPECT_NEAR(user_antenna_distance({r, theta}, x), std::hypot(ux - x, uy), 1e-12);
}

TEST(LosChannel, SingleAntennaHandArithmetic) {
  SystemConfig cfg;
  cfg.num_antennas = 1;
  cfg.beta0_los = 1.0;
  cfg.gamma_los = 2.0;
  cfg.carrier_freq = kSpeedOfLight;  // lambda = 1
  const arma::cx_vec a = los_channel_vector({2.0, 0.0}, cfg);
  ASSERT_EQ(a.n_elem, 1u);
  EXPECT_NEAR(std::abs(a[0]), 0.5, 1e-15);
  EXPECT_NEAR(std::arg(a[0]), 0.0, 1e-9);
}

TEST(LosChannel, BoresightSymmetry) {
  SystemConfig cfg;
  cfg.num_antennas = 2;
  const arma::cx_vec a = los_channel_vector({50.0, 0.0}, cfg);
  EXPECT_DOUBLE_EQ(std::abs(a[0]), std::abs(a[1]));
  EXPECT_DOUBLE_EQ(std::arg(a[0]), std::arg(a[1]));
}

TEST(LosChannel, PhaseAndPowerFollowDistances) {
  SystemConfig cfg;
  cfg.num_antennas = 64;
  const UserPosition pos{120.0, -0.7};
  const arma::cx_vec a = los_channel_vector(pos, cfg);
  const auto xs = antenna_positions(cfg);
  double power = 0.0;
  for (std::size_t m = 0; m < xs.size(); ++m) {
    const double d = user_antenna_distance(pos, xs[m]);
    const double phase = std::remainder(-2 * pi * d / cfg.wavelength(), 2 * pi);
    EXPECT_NEAR(std::remainder(std::arg(a[m]) - phase, 2 * pi), 0.0, 1e-6);
    power += cfg.beta0_los / std::pow(d, cfg.gamma_los);
  }
  EXPECT_NEAR(arma::accu(arma::square(arma::abs(a))), power, 1e-12 * power);
}

TEST(LosChannel, NearFieldAmplitudeVariesAcrossArray) {
  SystemConfig cfg;  // M = 1000
  const arma::vec mag = arma::abs(los_channel_vector({cfg.r_min, 0.9}, cfg));
  EXPECT_GT(mag.max() / mag.min(), 1.0);
}

TEST(NlosCovariance, PowerLaw) {
  SystemConfig cfg;
  cfg.num_antennas = 1;
  cfg.beta0_nlos = 1.0;
  cfg.gamma_nlos = 2.0;
  EXPECT_NEAR(nlos_covariance_diag({10.0, 0.0}, cfg)[0], 0.01, 1e-15);

  cfg = SystemConfig{};
  cfg.num_antennas = 32;
  const UserPosition pos{40.0, -pi / 2};  // on the array axis, distance grows with m
  const arma::vec beta = nlos_covariance_diag(pos, cfg);
  for (arma::uword m = 1; m < beta.n_elem; ++m) EXPECT_LT(beta[m], beta[m - 1]);
}

TEST(NlosSample, MomentsMatchCovariance) {
  SystemConfig cfg;
  cfg.num_antennas = 4;
  const UserPosition pos{35.0, 1.2};
  const arma::vec beta = nlos_covariance_diag(pos, cfg);
  Rng rng(7);
  constexpr int kDraws = 100000;
  arma::vec var(4, arma::fill::zeros);
  std::complex<double> cross = 0.0;
  for (int i = 0; i < kDraws; ++i) {
    const arma::cx_vec h = sample_nlos_vector(pos, cfg, rng);
    var += arma::square(arma::abs(h));
    cross += std::conj(h[0]) * h[1] / std::sqrt(beta[0] * beta[1]);
  }
  var /= kDraws;
  for (arma::uword m = 0; m < 4; ++m) EXPECT_NEAR(var[m] / beta[m], 1.0, 0.05);
  EXPECT_LT(std::abs(cross) / kDraws, 0.02);
}

TEST(NlosSample, SameSeedSameVector) {
  SystemConfig cfg;
  cfg.num_antennas = 16;
  Rng a(3), b(3);
  const arma::cx_vec x = sample_nlos_vector({100.0, 0.1}, cfg, a);
  const arma::cx_vec y = sample_nlos_vector({100.0, 0.1}, cfg, b);
  EXPECT_TRUE(arma::all(x == y));
}

TEST(ChannelState, BernoulliDraws) {
  Rng rng(11);
  for (int i = 0; i < 1000; ++i) {
    EXPECT_EQ(sample_channel_state(1.0, rng), ChannelState::kLos);
    EXPECT_EQ(sample_channel_state(0.0, rng), ChannelState::kNlos);
  }
  int los = 0;
  for (int i = 0; i < 100000; ++i) los += sample_channel_state(0.25, rng) == ChannelState::kLos;
  EXPECT_NEAR(los / 100000.0, 0.25, 0.01);
}

TEST(MultiStateChannel, SelectsOneBranch) {
  SystemConfig cfg;
  cfg.num_antennas = 8;
  const UserPosition pos{80.0, 0.4};
  Rng rng(5);
  const arma::cx_vec los = multi_state_channel(pos, ChannelState::kLos, cfg, rng);
  EXPECT_TRUE(arma::all(los == los_channel_vector(pos, cfg)));

  Rng r1(9), r2(9);
  const arma::cx_vec nlos = multi_state_channel(pos, ChannelState::kNlos, cfg, r1);
  EXPECT_TRUE(arma::all(nlos == sample_nlos_vector(pos, cfg, r2)));
}

TEST(UserPosition, InverseTransformEndpointsAndMean) {
  EXPECT_DOUBLE_EQ(radius_from_uniform(0.0, 30.0, 1000.0), 30.0);
  EXPECT_DOUBLE_EQ(radius_from_uniform(1.0, 30.0, 1000.0), 1000.0);

  SystemConfig cfg;
  Rng rng(1);
  double sum = 0.0;
  constexpr int kDraws = 100000;
  for (int i = 0; i < kDraws; ++i) {
    const UserPosition p = sample_user_position(cfg, rng);
    ASSERT_GE(p.r, cfg.r_min);
    ASSERT_LE(p.r, cfg.r_max);
    ASSERT_GE(p.theta, -pi);
    ASSERT_LE(p.theta, pi);
    sum += p.r;
  }
  const double lo = cfg.r_min, hi = cfg.r_max;
  const double expected = 2.0 / 3.0 * (hi * hi * hi - lo * lo * lo) / (hi * hi - lo * lo);
  EXPECT_NEAR(sum / kDraws / expected, 1.0, 0.01);
}

TEST(Population, DeterministicAndConsistent) {
  const SystemConfig cfg = testing::small_config(32, 20, 0.5);
  const Population a = sample_population(cfg, 4);
  const Population b = sample_population(cfg, 4);
  ASSERT_EQ(a.size(), 20u);
  EXPECT_TRUE(arma::all(arma::vectorise(a.channels == b.channels)));
  for (std::size_t k = 0; k < a.size(); ++k) {
    EXPECT_EQ(a.users[k].state, b.users[k].state);
    EXPECT_GE(a.users[k].min_rate, cfg.min_rate_lo);
    EXPECT_LE(a.users[k].min_rate, cfg.min_rate_hi);
    EXPECT_NEAR(a.channel_power[k], std::pow(arma::norm(a.users[k].channel), 2),
                1e-12 * a.channel_power[k]);
  }
  const Population c = sample_population(cfg, 5);
  EXPECT_FALSE(arma::all(arma::vectorise(a.channels == c.channels)));
}

TEST(Population, StatesNestAcrossLosProbability) {
  // A user that is LoS at a lower probability stays LoS at a higher one.
  const auto low = sample_population(testing::small_config(8, 200, 0.25), 0);
  const auto high = sample_population(testing::small_config(8, 200, 0.75), 0);
  for (std::size_t k = 0; k < 200; ++k) {
    EXPECT_DOUBLE_EQ(low.users[k].position.r, high.users[k].position.r);
    if (low.users[k].state == ChannelState::kLos) EXPECT_EQ(high.users[k].state, ChannelState::kLos);
  }
}

TEST(Population, CommonMinRateOverridesDraw) {
  SystemConfig cfg = testing::small_config(8, 10);
  cfg.common_min_rate = 7.0;
  for (const User& u : sample_population(cfg, 0).users) EXPECT_EQ(u.min_rate, 7.0);
}

TEST(Population, NlosFavorablePropagation) {
  SystemConfig cfg = testing::small_config(1024, 2, 0.0);
  double total = 0.0;
  for (std::uint64_t s = 0; s < 200; ++s) {
    const Population p = sample_population(cfg, s);
    total += normalized_correlation(p.users[0].channel, p.users[1].channel);
  }
  EXPECT_LT(total / 200.0, 0.1);
}

TEST(Config, ValidationRejectsBadFields) {
  SystemConfig cfg;
  EXPECT_NO_THROW(validate(cfg));
  cfg.epsilon = 1.5;
  EXPECT_THROW(validate(cfg), ConfigInvalid);
  cfg = {};
  cfg.antenna_spacing = 0.01;
  EXPECT_THROW(validate(cfg), ConfigInvalid);
  cfg = {};
  cfg.r_min = 2000.0;
  EXPECT_THROW(validate(cfg), ConfigInvalid);
  cfg = {};
  cfg.min_rate_hi = 100.0;
  try {
    validate(cfg);
    FAIL();
  } catch (const ConfigInvalid& e) {
    EXPECT_EQ(e.field(), "min_rate_range");
  }
}

TEST(Config, NoisePowerFromDensity) {
  const SystemConfig cfg;
  EXPECT_NEAR(cfg.noise_power(), 7.96e-14, 0.01e-14);
}

}  // namespace
}  // namespace xlsched
