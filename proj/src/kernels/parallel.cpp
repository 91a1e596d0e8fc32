#include <algorithm>
#include <cmath>

#include "checkworthy/error.hpp"
#include "checkworthy/kernels.hpp"

namespace checkworthy::kernels {

namespace {

// Neumaier compensated sum.
struct CompensatedSum {
  double sum = 0.0;
  double carry = 0.0;
  void add(double v) {
    const double t = sum + v;
    if (std::abs(sum) >= std::abs(v))
      carry += (sum - t) + v;
    else
      carry += (v - t) + sum;
    sum = t;
  }
  double value() const { return sum + carry; }
};

void check_shapes(const DenseMatrix& x, std::span<const double> y, std::span<const double> w,
                  std::span<double> grad) {
  if (y.size() != x.rows || w.size() != x.cols || grad.size() != x.cols + 1)
    throw DataError("logistic_objective: shape mismatch");
}

}  // namespace

double logistic_objective(const DenseMatrix& x, std::span<const double> y,
                          std::span<const double> w, double bias, double lambda,
                          std::span<double> grad) {
  check_shapes(x, y, w, grad);
  const std::size_t n = x.rows;
  const std::size_t d = x.cols;
  const std::size_t blocks = (n + kBlockRows - 1) / kBlockRows;
  std::vector<double> block_loss(blocks, 0.0);
  std::vector<double> block_grad(blocks * (d + 1), 0.0);

#pragma omp parallel for schedule(static)
  for (std::size_t b = 0; b < blocks; ++b) {
    const std::size_t lo = b * kBlockRows;
    const std::size_t hi = std::min(n, lo + kBlockRows);
    double* g = block_grad.data() + b * (d + 1);
    CompensatedSum loss;
    for (std::size_t i = lo; i < hi; ++i) {
      const auto xi = x.row(i);
      double z = bias;
      for (std::size_t j = 0; j < d; ++j) z += xi[j] * w[j];
      loss.add(softplus(z) - y[i] * z);
      const double r = sigmoid(z) - y[i];
      for (std::size_t j = 0; j < d; ++j) g[j] += r * xi[j];
      g[d] += r;
    }
    block_loss[b] = loss.value();
  }

  CompensatedSum total;
  std::fill(grad.begin(), grad.end(), 0.0);
  for (std::size_t b = 0; b < blocks; ++b) {
    total.add(block_loss[b]);
    const double* g = block_grad.data() + b * (d + 1);
    for (std::size_t j = 0; j <= d; ++j) grad[j] += g[j];
  }
  const double inv_n = n > 0 ? 1.0 / static_cast<double>(n) : 0.0;
  double penalty = 0.0;
  for (std::size_t j = 0; j < d; ++j) {
    grad[j] = grad[j] * inv_n + lambda * w[j];
    penalty += w[j] * w[j];
  }
  grad[d] *= inv_n;
  return total.value() * inv_n + 0.5 * lambda * penalty;
}

void linear_scores(const DenseMatrix& x, std::span<const double> w, double bias,
                   std::span<double> out) {
  if (w.size() != x.cols || out.size() != x.rows)
    throw DataError("linear_scores: shape mismatch");
#pragma omp parallel for schedule(static)
  for (std::size_t i = 0; i < x.rows; ++i) {
    const auto xi = x.row(i);
    double z = bias;
    for (std::size_t j = 0; j < x.cols; ++j) z += xi[j] * w[j];
    out[i] = z;
  }
}

ColumnStats column_stats(const DenseMatrix& x) {
  const std::size_t n = x.rows;
  const std::size_t d = x.cols;
  ColumnStats s{std::vector<double>(d, 0.0), std::vector<double>(d, 0.0),
                std::vector<char>(d, 1)};
  if (n == 0) return s;
  const std::size_t blocks = (n + kBlockRows - 1) / kBlockRows;
  const double nd = static_cast<double>(n);

  // Pass 1: per-block column sums and ranges, folded in block order. The
  // residual pass below corrects the mean.
  std::vector<double> part(blocks * d, 0.0);
  std::vector<double> lo(blocks * d), hi(blocks * d);
#pragma omp parallel for schedule(static)
  for (std::size_t b = 0; b < blocks; ++b) {
    const std::size_t r0 = b * kBlockRows;
    const std::size_t r1 = std::min(n, r0 + kBlockRows);
    auto* acc = part.data() + b * d;
    double* l = lo.data() + b * d;
    double* h = hi.data() + b * d;
    const auto first = x.row(r0);
    std::copy(first.begin(), first.end(), l);
    std::copy(first.begin(), first.end(), h);
    for (std::size_t i = r0; i < r1; ++i) {
      const auto xi = x.row(i);
      for (std::size_t j = 0; j < d; ++j) {
        acc[j] += xi[j];
        l[j] = std::min(l[j], xi[j]);
        h[j] = std::max(h[j], xi[j]);
      }
    }
  }
  std::vector<double> col_lo(lo.begin(), lo.begin() + static_cast<std::ptrdiff_t>(d));
  std::vector<double> col_hi(hi.begin(), hi.begin() + static_cast<std::ptrdiff_t>(d));
  for (std::size_t j = 0; j < d; ++j) {
    CompensatedSum total;
    for (std::size_t b = 0; b < blocks; ++b) {
      total.add(part[b * d + j]);
      col_lo[j] = std::min(col_lo[j], lo[b * d + j]);
      col_hi[j] = std::max(col_hi[j], hi[b * d + j]);
    }
    s.mean[j] = total.value() / nd;
    s.constant[j] = col_lo[j] == col_hi[j] ? 1 : 0;
  }

  // Pass 2: residuals and squared deviations, with the residual correction
  // of the corrected two-pass algorithm.
  std::vector<double> resid(blocks * d, 0.0), sq(blocks * d, 0.0);
#pragma omp parallel for schedule(static)
  for (std::size_t b = 0; b < blocks; ++b) {
    const std::size_t r0 = b * kBlockRows;
    const std::size_t r1 = std::min(n, r0 + kBlockRows);
    auto* r = resid.data() + b * d;
    auto* q = sq.data() + b * d;
    for (std::size_t i = r0; i < r1; ++i) {
      const auto xi = x.row(i);
      for (std::size_t j = 0; j < d; ++j) {
        const double dv = xi[j] - s.mean[j];
        r[j] += dv;
        q[j] += dv * dv;
      }
    }
  }
  for (std::size_t j = 0; j < d; ++j) {
    CompensatedSum r, q;
    for (std::size_t b = 0; b < blocks; ++b) {
      r.add(resid[b * d + j]);
      q.add(sq[b * d + j]);
    }
    const double var = (q.value() - r.value() * r.value() / nd) / nd;
    s.mean[j] += r.value() / nd;
    s.stddev[j] = s.constant[j] ? 0.0 : std::sqrt(std::max(var, 0.0));
  }
  return s;
}

void standardize_in_place(DenseMatrix& x, const ColumnStats& stats) {
  if (stats.mean.size() != x.cols)
    throw DataError("standardize: stats width " + std::to_string(stats.mean.size()) +
                    " does not match matrix width " + std::to_string(x.cols));
#pragma omp parallel for schedule(static)
  for (std::size_t i = 0; i < x.rows; ++i) {
    auto xi = x.row(i);
    for (std::size_t j = 0; j < x.cols; ++j)
      xi[j] = (stats.constant[j] || stats.stddev[j] == 0.0)
                  ? 0.0
                  : (xi[j] - stats.mean[j]) / stats.stddev[j];
  }
}

}  // namespace checkworthy::kernels
