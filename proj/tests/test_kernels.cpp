#include <doctest.h>

#include <cmath>
#include <omp.h>
#include <random>

#include "checkworthy/kernels.hpp"

using namespace checkworthy;

namespace {

DenseMatrix random_matrix(std::size_t r, std::size_t c, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.5, 2.0);
  DenseMatrix x(r, c);
  for (auto& v : x.values) v = n(rng);
  return x;
}

struct Problem {
  DenseMatrix x;
  std::vector<double> y, w;
  double bias;
};

Problem random_problem(std::size_t r, std::size_t c, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Problem p{random_matrix(r, c, rng), std::vector<double>(r), std::vector<double>(c), 0.3};
  std::normal_distribution<double> n;
  for (auto& v : p.y) v = rng() % 3 == 0 ? 1.0 : 0.0;
  for (auto& v : p.w) v = 0.2 * n(rng);
  return p;
}

class ThreadCount {
 public:
  explicit ThreadCount(int n) : saved_(omp_get_max_threads()) { omp_set_num_threads(n); }
  ~ThreadCount() { omp_set_num_threads(saved_); }

 private:
  int saved_;
};

}  // namespace

TEST_CASE("logistic objective agrees with the serial reference") {
  for (std::size_t rows : {1u, 37u, 256u, 257u, 1500u}) {
    auto p = random_problem(rows, 13, rows);
    std::vector<double> g1(14), g2(14);
    const double f1 = kernels::logistic_objective(p.x, p.y, p.w, p.bias, 0.7, g1);
    const double f2 = kernels::reference::logistic_objective(p.x, p.y, p.w, p.bias, 0.7, g2);
    CHECK(f1 == doctest::Approx(f2).epsilon(1e-12));
    for (std::size_t j = 0; j < g1.size(); ++j) CHECK(g1[j] == doctest::Approx(g2[j]).epsilon(1e-10));
  }
}

TEST_CASE("parallel reductions are bitwise stable across thread counts") {
  auto p = random_problem(3000, 17, 42);
  std::vector<double> base_g(18);
  double base_f;
  {
    ThreadCount one(1);
    base_f = kernels::logistic_objective(p.x, p.y, p.w, p.bias, 1.0, base_g);
  }
  const auto base_stats = kernels::column_stats(p.x);
  for (int threads : {2, 3, 8}) {
    ThreadCount tc(threads);
    std::vector<double> g(18);
    CHECK(kernels::logistic_objective(p.x, p.y, p.w, p.bias, 1.0, g) == base_f);
    CHECK(g == base_g);
    const auto s = kernels::column_stats(p.x);
    CHECK(s.mean == base_stats.mean);
    CHECK(s.stddev == base_stats.stddev);
  }
}

TEST_CASE("linear scores and standardization match the reference") {
  std::mt19937_64 rng(9);
  auto x = random_matrix(700, 6, rng);
  for (std::size_t i = 0; i < x.rows; ++i) x(i, 2) = 4.0;  // constant column
  const std::vector<double> w{1, -2, 3, 0.5, 0, 7};
  std::vector<double> a(x.rows), b(x.rows);
  kernels::linear_scores(x, w, 0.25, a);
  kernels::reference::linear_scores(x, w, 0.25, b);
  CHECK(a == b);

  const auto s1 = kernels::column_stats(x);
  const auto s2 = kernels::reference::column_stats(x);
  CHECK(s1.constant == s2.constant);
  CHECK(s1.constant[2]);
  for (std::size_t j = 0; j < x.cols; ++j) {
    CHECK(s1.mean[j] == doctest::Approx(s2.mean[j]).epsilon(1e-12));
    CHECK(s1.stddev[j] == doctest::Approx(s2.stddev[j]).epsilon(1e-12));
  }
  auto y1 = x, y2 = x;
  kernels::standardize_in_place(y1, s1);
  kernels::reference::standardize_in_place(y2, s1);
  CHECK(y1 == y2);
}

TEST_CASE("softplus and sigmoid stay finite at extremes") {
  CHECK(kernels::softplus(800.0) == 800.0);
  CHECK(kernels::softplus(-800.0) == 0.0);
  CHECK(kernels::sigmoid(-800.0) == 0.0);
  CHECK(kernels::sigmoid(800.0) == 1.0);
  CHECK(kernels::sigmoid(std::log(3.0)) == doctest::Approx(0.75).epsilon(1e-15));
}
