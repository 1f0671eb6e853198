// SPDX-License-Identifier: Apache-2.0
#include "xlsched/simulation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "xlsched/errors.hpp"
#include "xlsched/precoding.hpp"
#include "xlsched/rng.hpp"

namespace xlsched {
namespace {

// Path component of the random scheduler's sub-stream; users take 0..K-1.
constexpr std::uint64_t kRandomSchedulerStream = 0xA5A5'0000'0000'0001ULL;

// Per (sweep value, realization, algorithm) summary kept for the reduction.
struct Sample {
  double sum_rate = 0.0;
  std::size_t count = 0;
  std::size_t los = 0;
  std::vector<std::uint32_t> beyond;  // scheduled users with r > grid[j]
};

}  // namespace

std::string_view to_string(SweepVariable v) noexcept {
  switch (v) {
    case SweepVariable::kTxPower: return "tx_power";
    case SweepVariable::kEpsilon: return "epsilon";
    case SweepVariable::kLosProbability: return "los_probability";
    case SweepVariable::kCommonMinRate: return "common_min_rate";
  }
  return "unknown";
}

std::optional<SweepVariable> parse_sweep_variable(std::string_view name) noexcept {
  if (name == "tx_power" || name == "p_max") return SweepVariable::kTxPower;
  if (name == "epsilon") return SweepVariable::kEpsilon;
  if (name == "los_probability" || name == "rho") return SweepVariable::kLosProbability;
  if (name == "common_min_rate" || name == "min_rate") return SweepVariable::kCommonMinRate;
  return std::nullopt;
}

SystemConfig apply_sweep(SystemConfig cfg, SweepVariable variable, double value) {
  switch (variable) {
    case SweepVariable::kTxPower: cfg.tx_power_budget = value; break;
    case SweepVariable::kEpsilon: cfg.epsilon = value; break;
    case SweepVariable::kLosProbability: cfg.los_probability = value; break;
    case SweepVariable::kCommonMinRate: cfg.common_min_rate = value; break;
  }
  return cfg;
}

void validate(const ExperimentSpec& spec) {
  validate(spec.base);
  if (spec.num_realizations < 1) throw ConfigInvalid("num_realizations", "must be at least 1");
  if (spec.algorithms.empty()) throw ConfigInvalid("algorithms", "must name at least one algorithm");
  if (spec.sweep_values.empty() && spec.sweep_variable == SweepVariable::kCommonMinRate &&
      !spec.base.common_min_rate)
    throw ConfigInvalid("sweep_values", "a common min-rate sweep needs values");
  for (double v : spec.sweep_values) {
    if (!std::isfinite(v)) throw ConfigInvalid("sweep_values", "must be finite");
    validate(apply_sweep(spec.base, spec.sweep_variable, v));
  }
}

std::vector<double> ccdf_grid(double r_max) {
  std::vector<double> grid(kCcdfGridPoints);
  for (std::size_t j = 0; j < kCcdfGridPoints; ++j)
    grid[j] = r_max * static_cast<double>(j) / static_cast<double>(kCcdfGridPoints - 1);
  return grid;
}

double sum_rate(const ScheduleOutcome& outcome) {
  double total = 0.0;
  for (std::size_t k = 0; k < outcome.scheduled.size(); ++k)
    total += achievable_rate(
        zf_sinr(outcome.allocation.powers[k], outcome.gram_inv_diag[k], outcome.noise_power));
  return total;
}

double ccdf_estimate(std::span<const std::vector<double>> scheduled_radii, double r) {
  std::size_t total = 0;
  std::size_t beyond = 0;
  for (const auto& radii : scheduled_radii) {
    total += radii.size();
    beyond += static_cast<std::size_t>(std::count_if(radii.begin(), radii.end(),
                                                     [r](double x) { return x > r; }));
  }
  if (total == 0) throw EmptyEnsemble("no user was scheduled in any realization");
  return static_cast<double>(beyond) / static_cast<double>(total);
}

std::pair<double, double> state_sched_prob(
    std::span<const std::vector<ChannelState>> scheduled_states) {
  std::size_t total = 0;
  std::size_t los = 0;
  for (const auto& states : scheduled_states) {
    total += states.size();
    los += static_cast<std::size_t>(std::count(states.begin(), states.end(), ChannelState::kLos));
  }
  if (total == 0) throw EmptyEnsemble("no user was scheduled in any realization");
  const double p_los = static_cast<double>(los) / static_cast<double>(total);
  return {p_los, 1.0 - p_los};
}

RealizationResult run_realization(const SystemConfig& cfg, std::span<const Algorithm> algorithms,
                                  std::uint64_t realization_index) {
  RealizationResult out;
  out.population = sample_population(cfg, realization_index);
  out.outcomes.reserve(algorithms.size());
  for (Algorithm a : algorithms) {
    Rng rng = make_rng(cfg.rng_seed, {realization_index, kRandomSchedulerStream});
    out.outcomes.push_back(schedule_and_allocate(a, out.population, cfg, rng));
  }
  return out;
}

ExperimentResult run_experiment(const ExperimentSpec& spec, std::size_t workers) {
  validate(spec);
  ExperimentResult result;
  result.ccdf_grid = ccdf_grid(spec.base.r_max);
  const auto& grid = result.ccdf_grid;

  std::vector<double> values = spec.sweep_values;
  std::vector<SystemConfig> configs;
  if (values.empty()) {
    configs.push_back(spec.base);
    switch (spec.sweep_variable) {
      case SweepVariable::kTxPower: values.push_back(spec.base.tx_power_budget); break;
      case SweepVariable::kEpsilon: values.push_back(spec.base.epsilon); break;
      case SweepVariable::kLosProbability: values.push_back(spec.base.los_probability); break;
      case SweepVariable::kCommonMinRate: values.push_back(*spec.base.common_min_rate); break;
    }
  } else {
    for (double v : values) configs.push_back(apply_sweep(spec.base, spec.sweep_variable, v));
  }

  const std::size_t num_algos = spec.algorithms.size();
  const std::size_t per_value = spec.num_realizations;
  const std::size_t num_tasks = values.size() * per_value;
  std::vector<Sample> samples(num_tasks * num_algos);

  auto run_task = [&](std::size_t task) {
    const std::size_t v = task / per_value;
    const std::size_t s = task % per_value;
    RealizationResult rr = run_realization(configs[v], spec.algorithms, s);
    for (std::size_t a = 0; a < num_algos; ++a) {
      const ScheduleOutcome& o = rr.outcomes[a];
      Sample& out = samples[task * num_algos + a];
      out.sum_rate = sum_rate(o);
      out.count = o.scheduled.size();
      out.beyond.assign(grid.size(), 0);
      for (std::size_t k : o.scheduled) {
        const User& u = rr.population.users[k];
        if (u.state == ChannelState::kLos) ++out.los;
        for (std::size_t j = 0; j < grid.size() && u.position.r > grid[j]; ++j) ++out.beyond[j];
      }
    }
  };

  workers = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(num_tasks, 1));
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t t = next++; t < num_tasks; t = next++) {
      try {
        run_task(t);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = num_tasks;
      }
    }
  };
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  for (std::size_t v = 0; v < values.size(); ++v) {
    for (std::size_t a = 0; a < num_algos; ++a) {
      MetricsRow row;
      row.sweep_value = values[v];
      row.algorithm = spec.algorithms[a];
      row.realizations = per_value;
      std::vector<std::uint64_t> beyond(grid.size(), 0);
      std::size_t scheduled = 0;
      std::size_t los = 0;
      std::size_t nonempty = 0;
      double avg_rate_sum = 0.0;
      for (std::size_t s = 0; s < per_value; ++s) {
        const Sample& x = samples[(v * per_value + s) * num_algos + a];
        row.sum_rate_samples.push_back(x.sum_rate);
        row.num_scheduled_samples.push_back(static_cast<double>(x.count));
        scheduled += x.count;
        los += x.los;
        if (x.count > 0) {
          ++nonempty;
          avg_rate_sum += x.sum_rate / static_cast<double>(x.count);
        }
        for (std::size_t j = 0; j < grid.size(); ++j) beyond[j] += x.beyond[j];
      }
      double rate_total = 0.0;
      for (double r : row.sum_rate_samples) rate_total += r;
      row.mean_sum_rate = rate_total / static_cast<double>(per_value);
      row.mean_num_scheduled = static_cast<double>(scheduled) / static_cast<double>(per_value);
      row.mean_avg_rate = nonempty > 0 ? avg_rate_sum / static_cast<double>(nonempty) : 0.0;
      if (scheduled > 0) {
        row.p_los = static_cast<double>(los) / static_cast<double>(scheduled);
        row.p_nlos = 1.0 - row.p_los;
        row.ccdf.resize(grid.size());
        for (std::size_t j = 0; j < grid.size(); ++j)
          row.ccdf[j] = static_cast<double>(beyond[j]) / static_cast<double>(scheduled);
      }
      result.rows.push_back(std::move(row));
    }
  }
  return result;
}

}  // namespace xlsched
