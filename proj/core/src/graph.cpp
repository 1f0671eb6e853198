// SPDX-License-Identifier: Apache-2.0
#include "xlsched/graph.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <utility>

#include "xlsched/errors.hpp"
#include "xlsched/power.hpp"

namespace xlsched {

double normalized_correlation(const arma::cx_vec& a, const arma::cx_vec& b) {
  const double na = arma::norm(a);
  const double nb = arma::norm(b);
  if (!(na > 0.0) || !(nb > 0.0)) throw ZeroVector("normalized_correlation of a zero vector");
  return std::abs(arma::cdot(a, b)) / (na * nb);
}

UserGraph::UserGraph(std::size_t num_vertices, std::vector<double> weights)
    : weights_(std::move(weights)), words_((num_vertices + 63) / 64) {
  if (weights_.size() != num_vertices) throw std::invalid_argument("one weight per vertex required");
  bits_.assign(num_vertices * words_, 0);
}

void UserGraph::connect(std::size_t i, std::size_t j) noexcept {
  if (i == j) return;
  bits_[i * words_ + j / 64] |= std::uint64_t{1} << (j % 64);
  bits_[j * words_ + i / 64] |= std::uint64_t{1} << (i % 64);
}

std::size_t UserGraph::num_edges() const noexcept {
  std::size_t count = 0;
  for (std::uint64_t w : bits_) count += static_cast<std::size_t>(std::popcount(w));
  return count / 2;
}

UserGraph build_graph(const Population& population, double epsilon, std::vector<double> weights) {
  const std::size_t k_count = population.size();
  UserGraph g(k_count, std::move(weights));
  std::vector<double> norms(k_count);
  for (std::size_t k = 0; k < k_count; ++k) {
    const double p = population.channel_power[k];
    if (!(p > 0.0)) throw ZeroVector("user " + std::to_string(k) + " has a zero channel vector");
    norms[k] = std::sqrt(p);
  }
  for (std::size_t j = 0; j < k_count; ++j) {
    for (std::size_t i = 0; i < j; ++i) {
      const double corr = std::abs(population.gram(i, j)) / (norms[i] * norms[j]);
      if (corr < epsilon) g.connect(i, j);
    }
  }
  return g;
}

UserGraph build_graph(const Population& population, const SystemConfig& cfg) {
  const double noise = cfg.noise_power();
  std::vector<double> weights(population.size());
  for (std::size_t k = 0; k < population.size(); ++k)
    weights[k] = single_user_min_power(population.users[k].min_rate, population.channel_power[k], noise);
  return build_graph(population, cfg.epsilon, std::move(weights));
}

std::vector<std::size_t> neighbors(const UserGraph& g, std::size_t k) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < g.size(); ++i)
    if (g.adjacent(k, i)) out.push_back(i);
  return out;
}

bool is_clique(const UserGraph& g, std::span<const std::size_t> vertices) {
  for (std::size_t a = 0; a < vertices.size(); ++a)
    for (std::size_t b = a + 1; b < vertices.size(); ++b)
      if (!g.adjacent(vertices[a], vertices[b])) return false;
  return true;
}

std::vector<std::size_t> max_clique_within_budget(const UserGraph& g, double budget) {
  std::vector<std::size_t> order(g.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return g.weight(a) < g.weight(b); });

  std::vector<std::size_t> best;
  std::vector<std::size_t> clique;

  // Candidates are kept in ascending weight order, so the cheapest t of them
  // bound how many more vertices the remaining budget can admit.
  std::function<void(double, const std::vector<std::size_t>&)> search =
      [&](double used, const std::vector<std::size_t>& cand) {
        if (clique.size() > best.size()) best = clique;
        std::size_t room = 0;
        double acc = used;
        for (std::size_t v : cand) {
          if (acc + g.weight(v) > budget) break;
          acc += g.weight(v);
          ++room;
        }
        if (clique.size() + room <= best.size()) return;
        for (std::size_t i = 0; i < cand.size(); ++i) {
          const std::size_t v = cand[i];
          if (used + g.weight(v) > budget) break;
          std::vector<std::size_t> next;
          for (std::size_t j = i + 1; j < cand.size(); ++j)
            if (g.adjacent(v, cand[j])) next.push_back(cand[j]);
          clique.push_back(v);
          search(used + g.weight(v), next);
          clique.pop_back();
        }
      };
  search(0.0, order);
  return best;
}

}  // namespace xlsched
