#pragma once

// Data-parallel numeric kernels. The top-level functions are OpenMP
// parallel; `reference::` holds straightforward serial versions that the
// tests compare against and the benchmark times.
//
// Parallel reductions run over fixed blocks of kBlockRows rows and the block
// partials are combined in block order, so results are bitwise identical for
// any thread count.

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "checkworthy/matrix.hpp"

namespace checkworthy::kernels {

inline constexpr std::size_t kBlockRows = 256;

struct ColumnStats {
  std::vector<double> mean;
  std::vector<double> stddev;     // population convention
  std::vector<char> constant;     // min == max over the column
};

/// Mean logistic loss over rows plus (lambda/2)|w|^2, bias unpenalized.
/// `grad` has cols + 1 entries: weights first, bias last.
double logistic_objective(const DenseMatrix& x, std::span<const double> y,
                          std::span<const double> w, double bias, double lambda,
                          std::span<double> grad);

/// out[i] = x_i . w + bias
void linear_scores(const DenseMatrix& x, std::span<const double> w, double bias,
                   std::span<double> out);

ColumnStats column_stats(const DenseMatrix& x);

/// x_ij <- (x_ij - mean_j) / stddev_j, or 0 for constant columns.
void standardize_in_place(DenseMatrix& x, const ColumnStats& stats);

namespace reference {

double logistic_objective(const DenseMatrix& x, std::span<const double> y,
                          std::span<const double> w, double bias, double lambda,
                          std::span<double> grad);
void linear_scores(const DenseMatrix& x, std::span<const double> w, double bias,
                   std::span<double> out);
ColumnStats column_stats(const DenseMatrix& x);
void standardize_in_place(DenseMatrix& x, const ColumnStats& stats);

}  // namespace reference

/// log(1 + exp(z)) without overflow.
inline double softplus(double z) {
  return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
}

inline double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

}  // namespace checkworthy::kernels
