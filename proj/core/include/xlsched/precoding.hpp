// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <armadillo>
#include <cstddef>
#include <span>
#include <vector>

namespace xlsched {

/// Pivot threshold for the rank test, relative to the unit diagonal of the
/// column-normalised Gram matrix.
inline constexpr double kRankTolerance = 1e-10;

/// diag((G)^-1) for a Hermitian positive definite Gram matrix G = A^H A.
///
/// The matrix is normalised to unit diagonal and Cholesky-factorised; a
/// pivot at or below kRankTolerance raises RankDeficient.
arma::vec gram_inverse_diag_from_gram(const arma::cx_mat& gram);

/// diag((A^H A)^-1) for the columns of A.
arma::vec gram_inverse_diag(const arma::cx_mat& columns);

/// Scheduled users' channel matrix with its cached Gram-inverse diagonal.
class ChannelMatrix {
 public:
  /// Throws RankDeficient when the columns are not linearly independent.
  explicit ChannelMatrix(arma::cx_mat columns);

  const arma::cx_mat& columns() const noexcept { return columns_; }
  const arma::vec& gram_inv_diag() const noexcept { return gram_inv_diag_; }
  std::size_t num_users() const noexcept { return columns_.n_cols; }
  std::size_t num_antennas() const noexcept { return columns_.n_rows; }

 private:
  arma::cx_mat columns_;
  arma::vec gram_inv_diag_;
};

/// Unit-norm precoding vectors, column k for scheduled user k.
struct PrecodingSet {
  arma::cx_mat vectors;
};

/// f_k = A (A^H A)^-1 e_k / sqrt([(A^H A)^-1]_kk).
PrecodingSet zf_precoder(const ChannelMatrix& a);

/// p_k / (sigma^2 [(A^H A)^-1]_kk).
double zf_sinr(double power, double gram_inv_diag_k, double noise_power);

/// Interference-aware SINR of user k for arbitrary unit-norm precoders.
double general_sinr(std::size_t k, std::span<const double> powers, const arma::cx_mat& channels,
                    const PrecodingSet& precoders, double noise_power);

/// log2(1 + sinr).
double achievable_rate(double sinr);

/// Gram inverse maintained under column appends and removals.
///
/// Works on the precomputed Gram matrix of a whole population so that adding
/// a user costs O(n^2) instead of a fresh factorisation. Used by the greedy
/// schedulers that test feasibility after every insertion; final results are
/// always recomputed with gram_inverse_diag_from_gram.
class IncrementalGram {
 public:
  explicit IncrementalGram(const arma::cx_mat& population_gram);

  /// Appends population index k. Returns false, leaving the state untouched,
  /// when the new column lies (numerically) in the span of the current set.
  bool append(std::size_t k);

  /// Removes the member at position `pos` of members().
  void remove_at(std::size_t pos);
  void pop_back() { remove_at(members_.size() - 1); }

  const std::vector<std::size_t>& members() const noexcept { return members_; }
  std::size_t size() const noexcept { return members_.size(); }
  bool empty() const noexcept { return members_.empty(); }

  /// Current (A^H A)^-1 over members(), in member order.
  const arma::cx_mat& inverse() const noexcept { return inverse_; }
  arma::vec inverse_diag() const { return arma::real(inverse_.diag()); }

 private:
  const arma::cx_mat* gram_;
  std::vector<std::size_t> members_;
  arma::cx_mat inverse_;
};

}  // namespace xlsched
