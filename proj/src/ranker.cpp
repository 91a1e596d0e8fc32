#include "checkworthy/ranker.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>

#include "checkworthy/error.hpp"
#include "checkworthy/kernels.hpp"
#include "checkworthy/text.hpp"

namespace checkworthy {

std::string_view stop_reason_name(StopReason r) {
  switch (r) {
    case StopReason::converged: return "converged";
    case StopReason::max_iterations: return "max_iterations";
    case StopReason::line_search_failed: return "line_search_failed";
  }
  return "?";
}

double LRModel::margin(std::span<const double> x) const {
  if (x.size() != weights.size())
    throw DataError("feature width " + std::to_string(x.size()) + " does not match model width " +
                    std::to_string(weights.size()));
  double z = bias;
  for (std::size_t j = 0; j < x.size(); ++j) z += weights[j] * x[j];
  return z;
}

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double inf_norm(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

class Objective {
 public:
  Objective(const DenseMatrix& x, std::vector<double> y, double lambda)
      : x_(x), y_(std::move(y)), lambda_(lambda) {}

  // params = [w..., b]
  double operator()(std::span<const double> params, std::span<double> grad) const {
    const std::size_t d = x_.cols;
    return kernels::logistic_objective(x_, y_, params.first(d), params[d], lambda_, grad);
  }

 private:
  const DenseMatrix& x_;
  std::vector<double> y_;
  double lambda_;
};

struct Pair {
  std::vector<double> s, y;
  double rho;
};

// Two-loop recursion: returns -H g.
std::vector<double> lbfgs_direction(const std::deque<Pair>& hist, std::span<const double> g) {
  std::vector<double> q(g.begin(), g.end());
  std::vector<double> alpha(hist.size());
  for (std::size_t k = hist.size(); k-- > 0;) {
    alpha[k] = hist[k].rho * dot(hist[k].s, q);
    for (std::size_t i = 0; i < q.size(); ++i) q[i] -= alpha[k] * hist[k].y[i];
  }
  if (!hist.empty()) {
    const auto& last = hist.back();
    const double gamma = dot(last.s, last.y) / dot(last.y, last.y);
    for (auto& v : q) v *= gamma;
  }
  for (std::size_t k = 0; k < hist.size(); ++k) {
    const double beta = hist[k].rho * dot(hist[k].y, q);
    for (std::size_t i = 0; i < q.size(); ++i) q[i] += hist[k].s[i] * (alpha[k] - beta);
  }
  for (auto& v : q) v = -v;
  return q;
}

struct LineSearchResult {
  bool ok = false;
  double step = 0.0;
  double f = 0.0;
  std::vector<double> x, g;
};

// Bisection search for the weak Wolfe conditions.
LineSearchResult wolfe_search(const Objective& obj, std::span<const double> x, double f0,
                              std::span<const double> d, double gd0, double initial) {
  constexpr double c1 = 1e-4, c2 = 0.9;
  const double inf = std::numeric_limits<double>::infinity();
  double lo = 0.0, hi = inf, step = initial;
  LineSearchResult best;  // best Armijo point seen
  LineSearchResult trial;
  trial.x.resize(x.size());
  trial.g.resize(x.size());
  for (int k = 0; k < 60; ++k) {
    for (std::size_t i = 0; i < x.size(); ++i) trial.x[i] = x[i] + step * d[i];
    trial.f = obj(trial.x, trial.g);
    trial.step = step;
    const bool armijo = std::isfinite(trial.f) && trial.f <= f0 + c1 * step * gd0 && trial.f < f0;
    if (!armijo) {
      hi = step;
    } else {
      if (!best.ok || trial.f < best.f) {
        best = trial;
        best.ok = true;
      }
      if (dot(trial.g, d) < c2 * gd0) {
        lo = step;
      } else {
        trial.ok = true;
        return trial;
      }
    }
    step = std::isinf(hi) ? 2.0 * lo : 0.5 * (lo + hi);
    if (hi - lo < 1e-20) break;
  }
  return best;
}

void validate_inputs(const DenseMatrix& x, std::span<const int> labels) {
  if (labels.size() != x.rows)
    throw DataError("label count " + std::to_string(labels.size()) + " does not match rows " +
                    std::to_string(x.rows));
  bool has0 = false, has1 = false;
  for (int l : labels) {
    if (l == 0) has0 = true;
    else if (l == 1) has1 = true;
    else throw DataError("labels must be 0 or 1");
  }
  if (!has0 || !has1) throw DataError("training labels contain a single class");
  for (double v : x.values)
    if (!std::isfinite(v)) throw DataError("non-finite feature value");
}

}  // namespace

LRModel train_lr(const DenseMatrix& x, std::span<const int> labels, const TrainConfig& cfg,
                 FeatureLayout layout) {
  validate_inputs(x, labels);
  if (cfg.lambda < 0.0) throw ConfigError("lambda must be >= 0");
  if (!(cfg.tolerance > 0.0)) throw ConfigError("tolerance must be > 0");
  if (cfg.max_iterations <= 0) throw ConfigError("max_iterations must be positive");
  if (layout.segments.empty()) layout.width = x.cols;
  if (layout.width != x.cols) throw DataError("layout width does not match feature matrix");

  const std::size_t d = x.cols;
  Objective obj(x, std::vector<double>(labels.begin(), labels.end()), cfg.lambda);

  std::vector<double> params(d + 1, 0.0), grad(d + 1, 0.0);
  double f = obj(params, grad);

  LRModel model;
  model.layout = std::move(layout);
  model.lambda = cfg.lambda;
  auto& info = model.info;
  info.objective_trace.push_back(f);
  info.stop = StopReason::max_iterations;

  std::deque<Pair> hist;
  int iter = 0;
  while (true) {
    if (inf_norm(grad) <= cfg.tolerance) {
      info.stop = StopReason::converged;
      break;
    }
    if (iter >= cfg.max_iterations) {
      info.stop = StopReason::max_iterations;
      break;
    }
    auto dir = lbfgs_direction(hist, grad);
    double gd = dot(grad, dir);
    if (!(gd < 0.0)) {
      hist.clear();
      dir.assign(grad.begin(), grad.end());
      for (auto& v : dir) v = -v;
      gd = dot(grad, dir);
    }
    const double initial =
        hist.empty() ? std::min(1.0, 1.0 / std::sqrt(dot(grad, grad))) : 1.0;
    auto ls = wolfe_search(obj, params, f, dir, gd, initial);
    if (!ls.ok && !hist.empty()) {
      // Retry once along steepest descent with fresh curvature.
      hist.clear();
      for (std::size_t i = 0; i < dir.size(); ++i) dir[i] = -grad[i];
      gd = dot(grad, dir);
      ls = wolfe_search(obj, params, f, dir, gd, std::min(1.0, 1.0 / std::sqrt(-gd)));
    }
    if (!ls.ok) {
      info.stop = StopReason::line_search_failed;
      break;
    }

    Pair p{std::vector<double>(d + 1), std::vector<double>(d + 1), 0.0};
    for (std::size_t i = 0; i <= d; ++i) {
      p.s[i] = ls.x[i] - params[i];
      p.y[i] = ls.g[i] - grad[i];
    }
    const double sy = dot(p.s, p.y);
    if (sy > 1e-16 * std::sqrt(dot(p.s, p.s) * dot(p.y, p.y)) && sy > 0.0) {
      p.rho = 1.0 / sy;
      hist.push_back(std::move(p));
      if (hist.size() > static_cast<std::size_t>(std::max(1, cfg.history))) hist.pop_front();
    }
    params = std::move(ls.x);
    grad = std::move(ls.g);
    f = ls.f;
    ++iter;
    info.objective_trace.push_back(f);
  }

  model.weights.assign(params.begin(), params.begin() + static_cast<std::ptrdiff_t>(d));
  model.bias = params[d];
  info.iterations = iter;
  info.final_objective = f;
  info.gradient_inf_norm = inf_norm(grad);
  return model;
}

LRModel train_lr(const FeatureMatrix& x, std::span<const int> labels, const TrainConfig& cfg) {
  return train_lr(x.values, labels, cfg, x.layout ? *x.layout : FeatureLayout{});
}

double predict_score(const LRModel& model, const FeatureVector& x) {
  if (x.layout && !model.layout.segments.empty() && !(*x.layout == model.layout))
    throw DataError("feature layout \"" + x.layout->describe() + "\" does not match model layout \"" +
                    model.layout.describe() + "\"");
  return kernels::sigmoid(model.margin(x.values));
}

std::vector<RankedRecord> rank_document(const LRModel& model,
                                        const std::vector<std::pair<ClaimRecord, FeatureVector>>& rows) {
  struct Item {
    double margin;
    std::size_t index;
  };
  std::vector<Item> items;
  items.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    predict_score(model, rows[i].second);  // layout check
    items.push_back({model.margin(rows[i].second.values), i});
  }
  std::sort(items.begin(), items.end(), [&](const Item& a, const Item& b) {
    if (a.margin != b.margin) return a.margin > b.margin;
    return rows[a.index].first.line_no < rows[b.index].first.line_no;
  });
  std::vector<RankedRecord> out;
  out.reserve(items.size());
  for (const auto& it : items)
    out.push_back({rows[it.index].first, kernels::sigmoid(it.margin)});
  return out;
}

void save_model(std::ostream& out, const LRModel& model) {
  out << "checkworthy-lr-model 1\n";
  out << "layout " << model.layout.describe() << '\n';
  out << "lambda " << text::format_double(model.lambda) << '\n';
  out << "bias " << text::format_double(model.bias) << '\n';
  out << "iterations " << model.info.iterations << '\n';
  out << "objective " << text::format_double(model.info.final_objective) << '\n';
  out << "gradient_inf_norm " << text::format_double(model.info.gradient_inf_norm) << '\n';
  out << "stop " << stop_reason_name(model.info.stop) << '\n';
  out << "weights " << model.weights.size() << '\n';
  for (double w : model.weights) out << text::format_double(w) << '\n';
  if (!model.standardizer) {
    out << "standardizer none\n";
    return;
  }
  const auto& st = model.standardizer->stats;
  out << "standardizer " << st.mean.size() << '\n';
  for (std::size_t j = 0; j < st.mean.size(); ++j)
    out << text::format_double(st.mean[j]) << ' ' << text::format_double(st.stddev[j]) << ' '
        << (st.constant[j] ? 1 : 0) << '\n';
}

LRModel load_model(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  auto next = [&](std::string_view key) -> std::string {
    if (!text::read_line(in, line))
      throw ParseError("model: unexpected end of file, expected \"" + std::string(key) + "\"");
    ++line_no;
    const auto sp = line.find(' ');
    if (line.substr(0, sp) != key)
      throw ParseError("model line " + std::to_string(line_no) + ": expected \"" +
                       std::string(key) + "\"");
    return sp == std::string::npos ? std::string() : line.substr(sp + 1);
  };
  auto number = [&](const std::string& s) {
    const auto v = text::parse_double(s);
    if (!v) throw ParseError("model line " + std::to_string(line_no) + ": bad number \"" + s + "\"");
    return *v;
  };

  if (next("checkworthy-lr-model") != "1") throw ParseError("model: unsupported format version");
  LRModel m;
  m.layout = FeatureLayout::parse(next("layout"));
  m.lambda = number(next("lambda"));
  m.bias = number(next("bias"));
  m.info.iterations = static_cast<int>(number(next("iterations")));
  m.info.final_objective = number(next("objective"));
  m.info.gradient_inf_norm = number(next("gradient_inf_norm"));
  const auto stop = next("stop");
  if (stop == "converged") m.info.stop = StopReason::converged;
  else if (stop == "max_iterations") m.info.stop = StopReason::max_iterations;
  else if (stop == "line_search_failed") m.info.stop = StopReason::line_search_failed;
  else throw ParseError("model: unknown stop reason \"" + stop + "\"");
  const auto count = text::parse_int(next("weights"));
  if (!count || *count < 0) throw ParseError("model: bad weight count");
  if (static_cast<std::size_t>(*count) != m.layout.width)
    throw ParseError("model: weight count does not match layout width");
  m.weights.reserve(static_cast<std::size_t>(*count));
  for (std::int64_t i = 0; i < *count; ++i) {
    if (!text::read_line(in, line)) throw ParseError("model: truncated weight vector");
    ++line_no;
    m.weights.push_back(number(std::string(text::trim(line))));
  }
  const auto scaling = next("standardizer");
  if (scaling == "none") return m;
  const auto width = text::parse_int(scaling);
  if (!width || static_cast<std::size_t>(*width) != m.weights.size())
    throw ParseError("model: standardizer width does not match weights");
  Standardizer st;
  for (std::int64_t j = 0; j < *width; ++j) {
    if (!text::read_line(in, line)) throw ParseError("model: truncated standardizer");
    ++line_no;
    const auto f = text::split(text::trim(line), ' ');
    if (f.size() != 3 || (f[2] != "0" && f[2] != "1"))
      throw ParseError("model line " + std::to_string(line_no) + ": expected \"mean stddev constant\"");
    st.stats.mean.push_back(number(std::string(f[0])));
    st.stats.stddev.push_back(number(std::string(f[1])));
    st.stats.constant.push_back(f[2] == "1" ? 1 : 0);
  }
  m.standardizer = std::move(st);
  return m;
}

}  // namespace checkworthy
