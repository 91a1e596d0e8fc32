#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "checkworthy/error.hpp"
#include "checkworthy/ranker.hpp"

using namespace checkworthy;

namespace {

const FeatureLayout kTwo = FeatureLayout::make({FeatureGroup::BERT, FeatureGroup::HW}, {});
const FeatureLayout kOne = FeatureLayout::make({FeatureGroup::BERT}, {});

std::pair<DenseMatrix, std::vector<int>> separable(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-3, 3);
  DenseMatrix x(n, 2);
  std::vector<int> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    double a, b;
    do {
      a = u(rng);
      b = u(rng);
    } while (std::abs(a + 0.5 * b) < 0.3);  // margin around the separating line
    x(i, 0) = a;
    x(i, 1) = b;
    y[i] = a + 0.5 * b > 0 ? 1 : 0;
  }
  return {x, y};
}

LRModel unit_model(double weight, double bias) {
  LRModel m;
  m.layout = kOne;
  m.weights = {weight};
  m.bias = bias;
  return m;
}

FeatureVector fv(double v, std::int64_t line = 1) {
  return {{"d", line}, {v}, std::make_shared<FeatureLayout>(kOne)};
}

}  // namespace

TEST_CASE("all-zero features give the intercept-only solution") {
  DenseMatrix x(40, 3);
  std::vector<int> y(40, 0);
  for (int i = 0; i < 10; ++i) y[i] = 1;
  const auto m = train_lr(x, y, {}, FeatureLayout::make({FeatureGroup::VT}, {}));
  for (double w : m.weights) CHECK(w == 0.0);
  CHECK(m.bias == doctest::Approx(std::log(0.25 / 0.75)).epsilon(1e-8));
  CHECK(m.info.stop == StopReason::converged);
}

TEST_CASE("separable data is ranked perfectly") {
  auto [x, y] = separable(200, 1);
  TrainConfig cfg;
  cfg.lambda = 1e-4;
  const auto m = train_lr(x, y, cfg, kTwo);
  double worst_pos = INFINITY, best_neg = -INFINITY;
  for (std::size_t i = 0; i < x.rows; ++i) {
    const double s = m.margin(x.row(i));
    if (y[i]) worst_pos = std::min(worst_pos, s);
    else best_neg = std::max(best_neg, s);
  }
  CHECK(worst_pos > best_neg);
}

TEST_CASE("label validation") {
  DenseMatrix x(3, 1);
  const std::vector<int> ones{1, 1, 1}, bad{0, 2, 1}, shortv{0, 1};
  CHECK_THROWS_AS(train_lr(x, ones, {}, kOne), DataError);
  CHECK_THROWS_AS(train_lr(x, bad, {}, kOne), DataError);
  CHECK_THROWS_AS(train_lr(x, shortv, {}, kOne), DataError);
}

TEST_CASE("optimizer trace and stopping contract") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    auto [x, y] = separable(120, seed);
    for (std::size_t i = 0; i < y.size(); i += 7) y[i] = 1 - y[i];  // label noise
    TrainConfig cfg;
    cfg.lambda = 0.05;
    const auto m = train_lr(x, y, cfg, kTwo);
    const auto& t = m.info.objective_trace;
    REQUIRE(t.size() >= 2);
    for (std::size_t k = 1; k < t.size(); ++k) CHECK(t[k] <= t[k - 1]);
    CHECK((m.info.gradient_inf_norm <= cfg.tolerance || m.info.iterations == cfg.max_iterations));
    CHECK(m.info.stop == StopReason::converged);
  }
  auto [x, y] = separable(100, 9);
  TrainConfig tight;
  tight.max_iterations = 2;
  tight.lambda = 1e-6;
  const auto m = train_lr(x, y, tight, kTwo);
  CHECK(m.info.stop == StopReason::max_iterations);
  CHECK(m.info.iterations == 2);
}

TEST_CASE("training is deterministic") {
  auto [x, y] = separable(300, 4);
  const auto a = train_lr(x, y, {}, kTwo);
  const auto b = train_lr(x, y, {}, kTwo);
  CHECK(a.weights == b.weights);
  CHECK(a.bias == b.bias);
}

TEST_CASE("scores") {
  CHECK(predict_score(unit_model(0, 0), fv(3.0)) == 0.5);
  CHECK(predict_score(unit_model(1, 0), fv(std::log(3.0))) == doctest::Approx(0.75).epsilon(1e-15));
  const auto m = unit_model(0.7, -0.2);
  double prev = -1;
  for (double v = -5; v <= 5; v += 0.5) {
    const double s = predict_score(m, fv(v));
    CHECK(s > prev);
    prev = s;
  }
  FeatureVector wrong{{"d", 1}, {1.0, 2.0}, std::make_shared<FeatureLayout>(kTwo)};
  CHECK_THROWS_AS(predict_score(m, wrong), DataError);
}

TEST_CASE("ranking order and tie-break") {
  const auto m = unit_model(1, 0);
  auto rows = [](std::vector<double> values) {
    std::vector<std::pair<ClaimRecord, FeatureVector>> out;
    for (std::size_t i = 0; i < values.size(); ++i) {
      const auto line = static_cast<std::int64_t>(i + 1);
      out.push_back({ClaimRecord{"d", line, "S", "t", 0}, fv(values[i], line)});
    }
    return out;
  };
  auto lines = [&](const std::vector<RankedRecord>& r) {
    std::vector<std::int64_t> l;
    for (const auto& x : r) l.push_back(x.record.line_no);
    return l;
  };
  CHECK(lines(rank_document(m, rows({0.2, 0.9, 0.9}))) == std::vector<std::int64_t>{2, 3, 1});
  CHECK(lines(rank_document(m, rows({0.4}))) == std::vector<std::int64_t>{1});

  std::mt19937 rng(2);
  std::uniform_real_distribution<double> u(-2, 2);
  std::vector<double> v(40);
  for (auto& x : v) x = std::round(u(rng) * 4) / 4;  // plenty of ties
  auto moved = v;
  for (auto& x : moved) x = 2 * x + 1;
  CHECK(lines(rank_document(m, rows(v))) == lines(rank_document(m, rows(moved))));
}

TEST_CASE("model file round-trip") {
  auto [x, y] = separable(80, 3);
  auto m = train_lr(x, y, {}, kTwo);
  m.standardizer = Standardizer{kernels::column_stats(x)};
  std::stringstream io;
  save_model(io, m);
  const auto back = load_model(io);
  CHECK(back.layout == m.layout);
  CHECK(back.weights == m.weights);
  CHECK(back.bias == m.bias);
  CHECK(back.lambda == m.lambda);
  REQUIRE(back.standardizer.has_value());
  CHECK(back.standardizer->stats.mean == m.standardizer->stats.mean);
  CHECK(back.standardizer->stats.stddev == m.standardizer->stats.stddev);

  std::istringstream junk("not a model\n");
  CHECK_THROWS_AS(load_model(junk), ParseError);
}
