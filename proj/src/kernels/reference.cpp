#include <algorithm>
#include <cmath>

#include "checkworthy/error.hpp"
#include "checkworthy/kernels.hpp"

namespace checkworthy::kernels::reference {

double logistic_objective(const DenseMatrix& x, std::span<const double> y,
                          std::span<const double> w, double bias, double lambda,
                          std::span<double> grad) {
  if (y.size() != x.rows || w.size() != x.cols || grad.size() != x.cols + 1)
    throw DataError("logistic_objective: shape mismatch");
  const double n = static_cast<double>(x.rows);
  std::fill(grad.begin(), grad.end(), 0.0);
  double loss = 0.0;
  for (std::size_t i = 0; i < x.rows; ++i) {
    double z = bias;
    for (std::size_t j = 0; j < x.cols; ++j) z += x(i, j) * w[j];
    loss += softplus(z) - y[i] * z;
    const double r = sigmoid(z) - y[i];
    for (std::size_t j = 0; j < x.cols; ++j) grad[j] += r * x(i, j);
    grad[x.cols] += r;
  }
  double penalty = 0.0;
  for (std::size_t j = 0; j < x.cols; ++j) {
    grad[j] = grad[j] / n + lambda * w[j];
    penalty += w[j] * w[j];
  }
  grad[x.cols] /= n;
  return loss / n + 0.5 * lambda * penalty;
}

void linear_scores(const DenseMatrix& x, std::span<const double> w, double bias,
                   std::span<double> out) {
  for (std::size_t i = 0; i < x.rows; ++i) {
    double z = bias;
    for (std::size_t j = 0; j < x.cols; ++j) z += x(i, j) * w[j];
    out[i] = z;
  }
}

ColumnStats column_stats(const DenseMatrix& x) {
  const std::size_t d = x.cols;
  ColumnStats s{std::vector<double>(d, 0.0), std::vector<double>(d, 0.0),
                std::vector<char>(d, 1)};
  if (x.rows == 0) return s;
  const double n = static_cast<double>(x.rows);
  for (std::size_t i = 0; i < x.rows; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      s.mean[j] += x(i, j);
      if (x(i, j) != x(0, j)) s.constant[j] = 0;
    }
  for (auto& m : s.mean) m /= n;
  for (std::size_t i = 0; i < x.rows; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      const double dv = x(i, j) - s.mean[j];
      s.stddev[j] += dv * dv;
    }
  for (std::size_t j = 0; j < d; ++j)
    s.stddev[j] = s.constant[j] ? 0.0 : std::sqrt(s.stddev[j] / n);
  return s;
}

void standardize_in_place(DenseMatrix& x, const ColumnStats& stats) {
  if (stats.mean.size() != x.cols) throw DataError("standardize: width mismatch");
  for (std::size_t i = 0; i < x.rows; ++i)
    for (std::size_t j = 0; j < x.cols; ++j)
      x(i, j) = stats.constant[j] ? 0.0 : (x(i, j) - stats.mean[j]) / stats.stddev[j];
}

}  // namespace checkworthy::kernels::reference
