// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <armadillo>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "xlsched/channel.hpp"
#include "xlsched/config.hpp"

namespace xlsched {

/// |a_i^H a_j| / (||a_i|| ||a_j||). Throws ZeroVector for a zero input.
double normalized_correlation(const arma::cx_vec& a, const arma::cx_vec& b);

/// Undirected vertex-weighted user graph.
///
/// Vertices are users; an edge joins two users whose normalised channel
/// correlation is strictly below epsilon. Each adjacency row is a packed
/// bitset of ceil(K/64) words (K = 2048 takes 512 KiB). Immutable once built.
class UserGraph {
 public:
  UserGraph() = default;
  UserGraph(std::size_t num_vertices, std::vector<double> weights);

  std::size_t size() const noexcept { return weights_.size(); }
  std::size_t words_per_row() const noexcept { return words_; }
  bool adjacent(std::size_t i, std::size_t j) const noexcept {
    return (bits_[i * words_ + j / 64] >> (j % 64)) & 1U;
  }
  std::span<const std::uint64_t> row(std::size_t i) const noexcept {
    return {bits_.data() + i * words_, words_};
  }
  double weight(std::size_t k) const noexcept { return weights_[k]; }
  const std::vector<double>& weights() const noexcept { return weights_; }
  std::size_t num_edges() const noexcept;

  /// Sets an undirected edge; self loops are ignored.
  void connect(std::size_t i, std::size_t j) noexcept;

 private:
  std::vector<double> weights_;
  std::size_t words_ = 0;
  std::vector<std::uint64_t> bits_;
};

/// Builds the epsilon-orthogonality graph with single-user minimum power
/// weights over a population.
UserGraph build_graph(const Population& population, const SystemConfig& cfg);

/// Same adjacency rule with caller-supplied weights (used by GWC).
UserGraph build_graph(const Population& population, double epsilon, std::vector<double> weights);

/// Vertices adjacent to k, ascending.
std::vector<std::size_t> neighbors(const UserGraph& g, std::size_t k);

/// True iff every pair in `vertices` is adjacent. Empty sets and singletons
/// are cliques.
bool is_clique(const UserGraph& g, std::span<const std::size_t> vertices);

/// Exact solution of the budgeted maximum clique problem: the largest clique
/// whose weight sum does not exceed `budget`. Branch and bound; intended as
/// a test oracle for graphs of at most ~20 vertices.
std::vector<std::size_t> max_clique_within_budget(const UserGraph& g, double budget);

}  // namespace xlsched
