// SPDX-License-Identifier: Apache-2.0
#include "xlsched/schedulers.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <utility>

#include "xlsched/errors.hpp"
#include "xlsched/precoding.hpp"

namespace xlsched {
namespace {

std::vector<double> min_rates_of(const Population& pop, std::span<const std::size_t> idx) {
  std::vector<double> out(idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i) out[i] = pop.users[idx[i]].min_rate;
  return out;
}

arma::uvec to_uvec(std::span<const std::size_t> idx) {
  arma::uvec out(idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i) out[i] = idx[i];
  return out;
}

std::span<const double> as_span(const arma::vec& v) { return {v.memptr(), v.n_elem}; }

// Batch Gram-inverse diagonal of a subset, from the population Gram.
arma::vec subset_inverse_diag(const Population& pop, std::span<const std::size_t> idx) {
  if (idx.empty()) return {};
  const arma::uvec u = to_uvec(idx);
  return gram_inverse_diag_from_gram(pop.gram.submat(u, u));
}

// True when the subset is full rank and meets its rate floors within p_max.
bool batch_feasible(const Population& pop, std::span<const std::size_t> idx, double noise,
                    double p_max) {
  try {
    const arma::vec diag = subset_inverse_diag(pop, idx);
    return check_feasibility(as_span(diag), min_rates_of(pop, idx), noise, p_max);
  } catch (const RankDeficient&) {
    return false;
  }
}

double waterfilled_sum_rate(const arma::vec& diag, std::span<const double> rates, double noise,
                            double p_max) {
  const PowerAllocation alloc = waterfill(as_span(diag), rates, noise, p_max);
  double total = 0.0;
  for (std::size_t k = 0; k < diag.n_elem; ++k)
    total += achievable_rate(zf_sinr(alloc.powers[k], diag[k], noise));
  return total;
}

// Lowest-index set bit position scan, calling f(index) for each set bit.
template <typename F>
void for_each_bit(std::span<const std::uint64_t> bits, F&& f) {
  for (std::size_t w = 0; w < bits.size(); ++w) {
    std::uint64_t word = bits[w];
    while (word != 0) {
      const int b = std::countr_zero(word);
      f(w * 64 + static_cast<std::size_t>(b));
      word &= word - 1;
    }
  }
}

void intersect(std::vector<std::uint64_t>& acc, std::span<const std::uint64_t> row) {
  for (std::size_t w = 0; w < acc.size(); ++w) acc[w] &= row[w];
}

bool any_bit(const std::vector<std::uint64_t>& bits) {
  return std::any_of(bits.begin(), bits.end(), [](std::uint64_t w) { return w != 0; });
}

// Greedy insertion with the per-iteration stop shared by the baselines.
class GreedyBuilder {
 public:
  GreedyBuilder(const Population& pop, const SystemConfig& cfg, bool stop_on_rate_drop)
      : pop_(pop),
        noise_(cfg.noise_power()),
        p_max_(cfg.tx_power_budget),
        stop_on_rate_drop_(stop_on_rate_drop),
        gram_(pop.gram) {}

  const IncrementalGram& gram() const noexcept { return gram_; }

  // Adds k; returns false once a stop rule fired (k is then rejected).
  bool add(std::size_t k) {
    if (!gram_.append(k)) return reject(k, StopReason::kRankDeficient, false);
    rates_.push_back(pop_.users[k].min_rate);
    const arma::vec diag = gram_.inverse_diag();
    if (!check_feasibility(as_span(diag), rates_, noise_, p_max_))
      return reject(k, StopReason::kInfeasible, true);
    if (stop_on_rate_drop_) {
      const double rate = waterfilled_sum_rate(diag, rates_, noise_, p_max_);
      if (rate < sum_rate_) return reject(k, StopReason::kSumRateDrop, true);
      sum_rate_ = rate;
    }
    return true;
  }

  GreedyResult finish() {
    result_.scheduled = gram_.members();
    // Incremental updates can drift; the batch test has the final word.
    while (!result_.scheduled.empty() &&
           !batch_feasible(pop_, result_.scheduled, noise_, p_max_)) {
      result_.rejected = result_.scheduled.back();
      result_.stop = StopReason::kInfeasible;
      result_.scheduled.pop_back();
    }
    return std::move(result_);
  }

 private:
  bool reject(std::size_t k, StopReason reason, bool appended) {
    if (appended) {
      gram_.pop_back();
      rates_.pop_back();
    }
    result_.rejected = k;
    result_.stop = reason;
    return false;
  }

  const Population& pop_;
  double noise_;
  double p_max_;
  bool stop_on_rate_drop_;
  IncrementalGram gram_;
  std::vector<double> rates_;
  double sum_rate_ = 0.0;
  GreedyResult result_;
};

// Users ordered by `key` ascending, ties by index.
std::vector<std::size_t> order_by(std::size_t n, const std::function<double(std::size_t)>& key) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return key(a) < key(b); });
  return order;
}

}  // namespace

std::string_view to_string(Algorithm a) noexcept {
  switch (a) {
    case Algorithm::kCbs: return "cbs";
    case Algorithm::kCpbs: return "cpbs";
    case Algorithm::kGwc: return "gwc";
    case Algorithm::kDbs: return "dbs";
    case Algorithm::kSdbs: return "sdbs";
    case Algorithm::kRandom: return "random";
  }
  return "unknown";
}

std::optional<Algorithm> parse_algorithm(std::string_view name) noexcept {
  for (Algorithm a : kAllAlgorithms)
    if (name == to_string(a)) return a;
  if (name == "s-dbs") return Algorithm::kSdbs;
  return std::nullopt;
}

std::string_view to_string(StopReason r) noexcept {
  switch (r) {
    case StopReason::kExhausted: return "exhausted";
    case StopReason::kInfeasible: return "infeasible";
    case StopReason::kRankDeficient: return "rank_deficient";
    case StopReason::kSumRateDrop: return "sum_rate_drop";
  }
  return "unknown";
}

CliqueSearch cbs(const UserGraph& g, double p_max) {
  CliqueSearch out;
  const std::size_t n = g.size();
  if (n == 0) return out;

  std::size_t seed = 0;
  for (std::size_t k = 1; k < n; ++k)
    if (g.weight(k) < g.weight(seed)) seed = k;
  out.vertices.push_back(seed);
  out.total_weight = g.weight(seed);

  const auto row = g.row(seed);
  std::vector<std::uint64_t> common(row.begin(), row.end());
  while (any_bit(common) && out.total_weight < p_max) {
    std::size_t best = n;
    for_each_bit(common, [&](std::size_t v) {
      if (best == n || g.weight(v) < g.weight(best)) best = v;
    });
    out.vertices.push_back(best);
    out.total_weight += g.weight(best);
    intersect(common, g.row(best));
  }
  return out;
}

RemovalResult user_removal(std::span<const std::size_t> candidates, const Population& pop,
                           double noise_power, double p_max) {
  RemovalResult out;
  IncrementalGram gram(pop.gram);
  for (std::size_t k : candidates)
    if (!gram.append(k)) throw RankDeficient("user removal needs a full-rank candidate set");

  auto weakest = [&] {
    const auto& m = gram.members();
    std::size_t pos = 0;
    for (std::size_t i = 1; i < m.size(); ++i) {
      const double a = pop.channel_power[m[i]];
      const double b = pop.channel_power[m[pos]];
      if (a < b || (a == b && m[i] < m[pos])) pos = i;
    }
    return pos;
  };

  while (!gram.empty()) {
    const arma::vec diag = gram.inverse_diag();
    const auto rates = min_rates_of(pop, gram.members());
    if (check_feasibility(as_span(diag), rates, noise_power, p_max) &&
        batch_feasible(pop, gram.members(), noise_power, p_max))
      break;
    const std::size_t pos = weakest();
    out.removed.push_back(gram.members()[pos]);
    gram.remove_at(pos);
  }
  out.kept = gram.members();
  return out;
}

std::vector<std::size_t> cpbs(const Population& pop, const SystemConfig& cfg) {
  const double noise = cfg.noise_power();
  const auto order =
      order_by(pop.size(), [&](std::size_t k) { return -pop.channel_power[k]; });
  std::vector<std::size_t> out;
  double omega = 0.0;
  for (std::size_t k : order) {
    out.push_back(k);
    omega += single_user_min_power(pop.users[k].min_rate, pop.channel_power[k], noise);
    if (omega >= cfg.tx_power_budget) break;
  }
  return out;
}

std::vector<double> gwc_weights(const Population& pop, const SystemConfig& cfg) {
  const double noise = cfg.noise_power();
  const double uniform = cfg.tx_power_budget / static_cast<double>(std::max<std::size_t>(pop.size(), 1));
  std::vector<double> w(pop.size());
  for (std::size_t k = 0; k < pop.size(); ++k)
    w[k] = std::log2(1.0 + uniform * pop.channel_power[k] / noise);
  return w;
}

GreedyResult gwc(const Population& pop, const SystemConfig& cfg) {
  GreedyBuilder builder(pop, cfg, false);
  const std::size_t n = pop.size();
  if (n == 0) return builder.finish();
  const UserGraph g = build_graph(pop, cfg.epsilon, gwc_weights(pop, cfg));

  std::size_t v = 0;
  for (std::size_t k = 1; k < n; ++k)
    if (g.weight(k) > g.weight(v)) v = k;
  const auto row = g.row(v);
  std::vector<std::uint64_t> common(row.begin(), row.end());
  while (builder.add(v)) {
    if (!any_bit(common)) break;
    std::size_t best = n;
    for_each_bit(common, [&](std::size_t u) {
      if (best == n || g.weight(u) > g.weight(best)) best = u;
    });
    v = best;
    intersect(common, g.row(v));
  }
  return builder.finish();
}

GreedyResult dbs(const Population& pop, const SystemConfig& cfg) {
  GreedyBuilder builder(pop, cfg, true);
  const std::size_t n = pop.size();
  std::vector<bool> taken(n, false);
  for (std::size_t step = 0; step < n; ++step) {
    const IncrementalGram& ig = builder.gram();
    // Cross-talk of candidate k with precoder f_i is |(G^-1 C[S,k])_i|^2 / [G^-1]_ii.
    arma::mat crosstalk;
    arma::vec diag;
    if (!ig.empty()) {
      const arma::uvec s = to_uvec(ig.members());
      crosstalk = arma::square(arma::abs(ig.inverse() * pop.gram.rows(s)));
      diag = ig.inverse_diag();
    }
    std::size_t best = n;
    double best_metric = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < n; ++k) {
      if (taken[k]) continue;
      double leak = 0.0;
      for (arma::uword i = 0; i < diag.n_elem; ++i) leak += crosstalk(i, k) / diag[i];
      const double metric = pop.users[k].position.r * (1.0 + leak / pop.channel_power[k]);
      if (metric < best_metric) {
        best_metric = metric;
        best = k;
      }
    }
    if (best == n) break;
    taken[best] = true;
    if (!builder.add(best)) break;
  }
  return builder.finish();
}

GreedyResult sdbs(const Population& pop, const SystemConfig& cfg) {
  GreedyBuilder builder(pop, cfg, true);
  for (std::size_t k :
       order_by(pop.size(), [&](std::size_t i) { return pop.users[i].position.r; }))
    if (!builder.add(k)) break;
  return builder.finish();
}

GreedyResult random_sched(const Population& pop, const SystemConfig& cfg, Rng& rng) {
  std::vector<std::size_t> order(pop.size());
  std::iota(order.begin(), order.end(), 0);
  // Explicit Fisher-Yates so the permutation does not depend on the
  // standard library's shuffle.
  for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng() % i]);
  GreedyBuilder builder(pop, cfg, false);
  for (std::size_t k : order)
    if (!builder.add(k)) break;
  return builder.finish();
}

ScheduleOutcome schedule_and_allocate(Algorithm algorithm, const Population& pop,
                                      const SystemConfig& cfg, Rng& rng) {
  ScheduleOutcome out;
  out.algorithm = algorithm;
  out.noise_power = cfg.noise_power();
  const double p_max = cfg.tx_power_budget;

  if (algorithm == Algorithm::kCbs || algorithm == Algorithm::kCpbs) {
    std::vector<std::size_t> candidates =
        algorithm == Algorithm::kCbs ? cbs(build_graph(pop, cfg), p_max).vertices : cpbs(pop, cfg);
    out.candidate_count = candidates.size();
    IncrementalGram full_rank(pop.gram);
    for (std::size_t k : candidates)
      if (!full_rank.append(k)) out.rank_pruned.push_back(k);
    RemovalResult removal = user_removal(full_rank.members(), pop, out.noise_power, p_max);
    out.scheduled = std::move(removal.kept);
    out.removed = std::move(removal.removed);
  } else {
    GreedyResult greedy;
    switch (algorithm) {
      case Algorithm::kGwc: greedy = gwc(pop, cfg); break;
      case Algorithm::kDbs: greedy = dbs(pop, cfg); break;
      case Algorithm::kSdbs: greedy = sdbs(pop, cfg); break;
      default: greedy = random_sched(pop, cfg, rng); break;
    }
    out.candidate_count = greedy.scheduled.size() + (greedy.rejected ? 1 : 0);
    out.scheduled = std::move(greedy.scheduled);
    if (greedy.rejected) out.removed.push_back(*greedy.rejected);
    out.stop = greedy.stop;
  }

  const arma::vec diag = subset_inverse_diag(pop, out.scheduled);
  const auto rates = min_rates_of(pop, out.scheduled);
  out.allocation = waterfill(as_span(diag), rates, out.noise_power, p_max);
  out.gram_inv_diag.assign(diag.begin(), diag.end());
  out.rates.resize(out.scheduled.size());
  for (std::size_t k = 0; k < out.scheduled.size(); ++k)
    out.rates[k] = achievable_rate(zf_sinr(out.allocation.powers[k], diag[k], out.noise_power));
  return out;
}

}  // namespace xlsched
