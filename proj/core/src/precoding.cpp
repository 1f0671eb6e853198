// SPDX-License-Identifier: Apache-2.0
#include "xlsched/precoding.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

#include "xlsched/errors.hpp"

namespace xlsched {
namespace {

// G = S^-1 C S^-1 with C of unit diagonal; C = L L^H and inv_lower = L^-1,
// so G^-1 = S inv_lower^H inv_lower S.
struct NormalizedCholesky {
  arma::vec scale;  // 1 / sqrt(G_kk)
  arma::cx_mat inv_lower;
};

NormalizedCholesky factorize(const arma::cx_mat& gram) {
  const arma::uword n = gram.n_rows;
  if (gram.n_cols != n) throw std::invalid_argument("gram matrix must be square");
  NormalizedCholesky f;
  f.scale.set_size(n);
  for (arma::uword k = 0; k < n; ++k) {
    const double d = std::real(gram(k, k));
    if (!(d > 0.0)) throw RankDeficient("zero channel vector in scheduled set");
    f.scale[k] = 1.0 / std::sqrt(d);
  }
  arma::cx_mat normalized(n, n);
  for (arma::uword j = 0; j < n; ++j) {
    for (arma::uword i = 0; i < n; ++i) normalized(i, j) = gram(i, j) * (f.scale[i] * f.scale[j]);
    normalized(j, j) = 1.0;
  }
  arma::cx_mat lower;
  if (!arma::chol(lower, normalized, "lower"))
    throw RankDeficient("channel matrix is not full column rank");
  for (arma::uword k = 0; k < n; ++k) {
    const double pivot = std::norm(lower(k, k));
    if (!(pivot > kRankTolerance))
      throw RankDeficient("channel matrix is numerically rank deficient");
  }
  f.inv_lower = arma::solve(arma::trimatl(lower), arma::eye<arma::cx_mat>(n, n));
  return f;
}

arma::vec diag_from_factor(const NormalizedCholesky& f) {
  const arma::uword n = f.scale.n_elem;
  arma::vec diag(n);
  for (arma::uword k = 0; k < n; ++k) {
    double acc = 0.0;
    for (arma::uword i = k; i < n; ++i) acc += std::norm(f.inv_lower(i, k));  // lower triangular
    diag[k] = acc * f.scale[k] * f.scale[k];
  }
  return diag;
}

}  // namespace

arma::vec gram_inverse_diag_from_gram(const arma::cx_mat& gram) {
  if (gram.n_elem == 0) return {};
  return diag_from_factor(factorize(gram));
}

arma::vec gram_inverse_diag(const arma::cx_mat& columns) {
  if (columns.n_cols == 0) return {};
  if (columns.n_cols > columns.n_rows)
    throw RankDeficient("more scheduled users than antennas");
  return gram_inverse_diag_from_gram(columns.t() * columns);
}

ChannelMatrix::ChannelMatrix(arma::cx_mat columns)
    : columns_(std::move(columns)), gram_inv_diag_(gram_inverse_diag(columns_)) {}

PrecodingSet zf_precoder(const ChannelMatrix& a) {
  const arma::cx_mat& cols = a.columns();
  if (cols.n_cols == 0) return {arma::cx_mat(cols.n_rows, 0)};
  const NormalizedCholesky f = factorize(cols.t() * cols);
  // A G^-1 = (A S inv_lower^H) (inv_lower S)
  const arma::cx_mat scaled_inv = f.inv_lower * arma::diagmat(arma::conv_to<arma::cx_vec>::from(f.scale));
  arma::cx_mat precoders = cols * (scaled_inv.t() * scaled_inv);
  const arma::vec& diag = a.gram_inv_diag();
  for (arma::uword k = 0; k < precoders.n_cols; ++k) precoders.col(k) /= std::sqrt(diag[k]);
  return {std::move(precoders)};
}

double zf_sinr(double power, double gram_inv_diag_k, double noise_power) {
  return power / (noise_power * gram_inv_diag_k);
}

double general_sinr(std::size_t k, std::span<const double> powers, const arma::cx_mat& channels,
                    const PrecodingSet& precoders, double noise_power) {
  const arma::cx_vec a_k = channels.col(k);
  double interference = 0.0;
  double signal = 0.0;
  for (std::size_t i = 0; i < powers.size(); ++i) {
    const double gain = std::norm(arma::cdot(a_k, precoders.vectors.col(i)));
    if (i == k)
      signal = powers[i] * gain;
    else
      interference += powers[i] * gain;
  }
  return signal / (interference + noise_power);
}

double achievable_rate(double sinr) { return std::log2(1.0 + sinr); }

IncrementalGram::IncrementalGram(const arma::cx_mat& population_gram)
    : gram_(&population_gram) {}

bool IncrementalGram::append(std::size_t k) {
  const arma::cx_mat& g = *gram_;
  const double c = std::real(g(k, k));
  if (!(c > 0.0)) return false;
  const arma::uword n = members_.size();
  if (n == 0) {
    inverse_.set_size(1, 1);
    inverse_(0, 0) = 1.0 / c;
    members_.push_back(k);
    return true;
  }
  arma::cx_vec b(n);
  for (arma::uword i = 0; i < n; ++i) b[i] = g(members_[i], k);
  const arma::cx_vec w = inverse_ * b;
  const double schur = c - std::real(arma::cdot(b, w));
  if (!(schur > kRankTolerance * c)) return false;

  arma::cx_mat next(n + 1, n + 1);
  next.submat(0, 0, n - 1, n - 1) = inverse_ + (w * w.t()) / schur;
  next.submat(0, n, n - 1, n) = -w / schur;
  next.submat(n, 0, n, n - 1) = -w.t() / schur;
  next(n, n) = 1.0 / schur;
  inverse_ = std::move(next);
  members_.push_back(k);
  return true;
}

void IncrementalGram::remove_at(std::size_t pos) {
  const arma::uword n = members_.size();
  if (pos >= n) throw std::out_of_range("IncrementalGram::remove_at");
  if (n == 1) {
    inverse_.reset();
    members_.clear();
    return;
  }
  const double pivot = std::real(inverse_(pos, pos));
  arma::cx_vec u = inverse_.col(pos);
  u.shed_row(pos);
  arma::cx_mat rest = inverse_;
  rest.shed_row(pos);
  rest.shed_col(pos);
  inverse_ = rest - (u * u.t()) / pivot;
  members_.erase(members_.begin() + static_cast<std::ptrdiff_t>(pos));
}

}  // namespace xlsched
