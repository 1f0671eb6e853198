// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <cmath>

#include "support.hpp"
#include "xlsched/errors.hpp"
#include "xlsched/simulation.hpp"

namespace xlsched {
namespace {

ExperimentSpec small_spec(double rho = 0.5) {
  ExperimentSpec spec;
  spec.base = testing::small_config(32, 40, rho);
  spec.sweep_variable = SweepVariable::kTxPower;
  spec.sweep_values = {0.1, 1.0};
  spec.num_realizations = 4;
  return spec;
}

TEST(SumRate, Examples) {
  ScheduleOutcome empty;
  EXPECT_EQ(sum_rate(empty), 0.0);

  ScheduleOutcome one;
  one.scheduled = {0};
  one.noise_power = 0.5;
  one.gram_inv_diag = {2.0};
  one.allocation.powers = {0.5 * 31.0 * 2.0};  // floor of a 5 bps/Hz user
  EXPECT_NEAR(sum_rate(one), 5.0, 1e-12);
}

TEST(SumRate, EqualsSumOfUserRates) {
  const SystemConfig cfg = testing::small_config(32, 40, 0.5);
  const RealizationResult rr = run_realization(cfg, kAllAlgorithms, 3);
  for (const ScheduleOutcome& o : rr.outcomes) {
    double total = 0.0;
    for (double r : o.rates) total += r;
    EXPECT_NEAR(sum_rate(o), total, 1e-9 * std::max(1.0, total));
  }
}

TEST(Ccdf, Examples) {
  const std::vector<std::vector<double>> radii{{200.0}, {600.0}};
  EXPECT_EQ(ccdf_estimate(radii, 0.0), 1.0);
  EXPECT_EQ(ccdf_estimate(radii, 1000.0), 0.0);
  EXPECT_EQ(ccdf_estimate(radii, 400.0), 0.5);
  const std::vector<std::vector<double>> none{{}, {}};
  EXPECT_THROW(ccdf_estimate(none, 1.0), EmptyEnsemble);
}

TEST(StateProbability, Examples) {
  using S = ChannelState;
  const std::vector<std::vector<S>> mixed{{S::kLos, S::kLos}, {S::kNlos, S::kLos}};
  EXPECT_EQ(state_sched_prob(mixed), (std::pair<double, double>{0.75, 0.25}));
  const std::vector<std::vector<S>> los{{S::kLos}};
  EXPECT_EQ(state_sched_prob(los), (std::pair<double, double>{1.0, 0.0}));
  const std::vector<std::vector<S>> nlos{{S::kNlos}};
  EXPECT_EQ(state_sched_prob(nlos), (std::pair<double, double>{0.0, 1.0}));
  EXPECT_THROW(state_sched_prob(std::vector<std::vector<S>>{}), EmptyEnsemble);
}

TEST(RunRealization, DeterministicAndPaired) {
  const SystemConfig cfg = testing::small_config(32, 40, 0.5);
  const RealizationResult a = run_realization(cfg, kAllAlgorithms, 7);
  const RealizationResult b = run_realization(cfg, kAllAlgorithms, 7);
  EXPECT_TRUE(arma::all(arma::vectorise(a.population.channels == b.population.channels)));
  ASSERT_EQ(a.outcomes.size(), std::size(kAllAlgorithms));
  for (std::size_t i = 0; i < a.outcomes.size(); ++i) {
    EXPECT_EQ(a.outcomes[i].scheduled, b.outcomes[i].scheduled);
    EXPECT_EQ(a.outcomes[i].allocation.powers, b.outcomes[i].allocation.powers);
  }
  // Running a single algorithm gives the same outcome as within the full list.
  const Algorithm only[] = {Algorithm::kRandom};
  EXPECT_EQ(run_realization(cfg, only, 7).outcomes[0].scheduled, a.outcomes.back().scheduled);
}

TEST(RunExperiment, RowLayoutAndEstimatorInvariants) {
  const ExperimentSpec spec = small_spec();
  const ExperimentResult r = run_experiment(spec);
  ASSERT_EQ(r.rows.size(), 2 * std::size(kAllAlgorithms));
  ASSERT_EQ(r.ccdf_grid.size(), kCcdfGridPoints);
  EXPECT_EQ(r.ccdf_grid.front(), 0.0);
  EXPECT_EQ(r.ccdf_grid.back(), spec.base.r_max);
  for (std::size_t i = 0; i < r.rows.size(); ++i) {
    const MetricsRow& row = r.rows[i];
    EXPECT_EQ(row.sweep_value, spec.sweep_values[i / std::size(kAllAlgorithms)]);
    EXPECT_EQ(row.algorithm, kAllAlgorithms[i % std::size(kAllAlgorithms)]);
    EXPECT_EQ(row.realizations, 4u);
    if (row.mean_num_scheduled > 0) {
      EXPECT_EQ(row.p_los + row.p_nlos, 1.0);
      EXPECT_EQ(row.ccdf.front(), 1.0);
      EXPECT_GE(row.mean_avg_rate, spec.base.min_rate_lo - 1e-9);
      for (std::size_t j = 1; j < row.ccdf.size(); ++j) EXPECT_LE(row.ccdf[j], row.ccdf[j - 1]);
      EXPECT_EQ(row.ccdf.back(), 0.0);
    }
  }
}

TEST(RunExperiment, SingleRealizationMeansEqualOutcome) {
  ExperimentSpec spec = small_spec();
  spec.sweep_values = {1.0};
  spec.num_realizations = 1;
  const ExperimentResult r = run_experiment(spec);
  const RealizationResult rr = run_realization(apply_sweep(spec.base, spec.sweep_variable, 1.0),
                                               spec.algorithms, 0);
  for (std::size_t a = 0; a < rr.outcomes.size(); ++a) {
    EXPECT_EQ(r.rows[a].mean_sum_rate, sum_rate(rr.outcomes[a]));
    EXPECT_EQ(r.rows[a].mean_num_scheduled, static_cast<double>(rr.outcomes[a].scheduled.size()));
  }
}

TEST(RunExperiment, PrefixOfRealizationsIsStable) {
  ExperimentSpec spec = small_spec();
  spec.num_realizations = 3;
  const ExperimentResult shorter = run_experiment(spec);
  spec.num_realizations = 6;
  const ExperimentResult longer = run_experiment(spec);
  for (std::size_t i = 0; i < shorter.rows.size(); ++i)
    for (std::size_t s = 0; s < 3; ++s)
      EXPECT_EQ(shorter.rows[i].sum_rate_samples[s], longer.rows[i].sum_rate_samples[s]);
}

TEST(RunExperiment, IndependentOfWorkerCount) {
  const ExperimentSpec spec = small_spec();
  const ExperimentResult one = run_experiment(spec, 1);
  const ExperimentResult many = run_experiment(spec, 5);
  ASSERT_EQ(one.rows.size(), many.rows.size());
  for (std::size_t i = 0; i < one.rows.size(); ++i) {
    EXPECT_EQ(one.rows[i].mean_sum_rate, many.rows[i].mean_sum_rate);
    EXPECT_EQ(one.rows[i].ccdf, many.rows[i].ccdf);
  }
}

TEST(RunExperiment, StateProbabilitiesAtExtremes) {
  for (double rho : {0.0, 1.0}) {
    ExperimentSpec spec = small_spec(rho);
    spec.sweep_values = {1.0};
    for (const MetricsRow& row : run_experiment(spec).rows) {
      if (row.mean_num_scheduled == 0) continue;
      EXPECT_EQ(row.p_los, rho);
      EXPECT_EQ(row.p_nlos, 1.0 - rho);
    }
  }
}

TEST(ExperimentSpec, Validation) {
  ExperimentSpec spec = small_spec();
  EXPECT_NO_THROW(validate(spec));
  spec.num_realizations = 0;
  EXPECT_THROW(validate(spec), ConfigInvalid);
  spec = small_spec();
  spec.sweep_variable = SweepVariable::kEpsilon;
  spec.sweep_values = {0.5, 1.2};
  EXPECT_THROW(validate(spec), ConfigInvalid);
  spec.sweep_variable = SweepVariable::kCommonMinRate;
  spec.sweep_values.clear();
  EXPECT_THROW(validate(spec), ConfigInvalid);
}

TEST(SweepVariable, ApplyAndNames) {
  SystemConfig cfg;
  EXPECT_EQ(apply_sweep(cfg, SweepVariable::kTxPower, 2.0).tx_power_budget, 2.0);
  EXPECT_EQ(apply_sweep(cfg, SweepVariable::kEpsilon, 0.3).epsilon, 0.3);
  EXPECT_EQ(apply_sweep(cfg, SweepVariable::kLosProbability, 0.25).los_probability, 0.25);
  EXPECT_EQ(apply_sweep(cfg, SweepVariable::kCommonMinRate, 9.0).common_min_rate, 9.0);
  for (auto v : {SweepVariable::kTxPower, SweepVariable::kEpsilon, SweepVariable::kLosProbability,
                 SweepVariable::kCommonMinRate})
    EXPECT_EQ(parse_sweep_variable(to_string(v)), v);
}

}  // namespace
}  // namespace xlsched
