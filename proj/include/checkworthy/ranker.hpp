#pragma once

#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "checkworthy/corpus.hpp"
#include "checkworthy/features.hpp"

namespace checkworthy {

struct TrainConfig {
  double lambda = 1.0;
  double tolerance = 1e-8;  // on the gradient infinity-norm
  int max_iterations = 1000;
  std::int64_t seed = 0;  // initialization is zeros; kept for config symmetry
  int history = 10;       // L-BFGS memory
};

enum class StopReason { converged, max_iterations, line_search_failed };

std::string_view stop_reason_name(StopReason r);

struct TrainingInfo {
  int iterations = 0;
  double final_objective = 0.0;
  double gradient_inf_norm = 0.0;
  StopReason stop = StopReason::converged;
  std::vector<double> objective_trace;  // objective after each accepted step, starting at x0
};

/// Binary logistic regression: minimizes mean NLL + (lambda/2)|w|^2.
struct LRModel {
  FeatureLayout layout;
  std::vector<double> weights;
  double bias = 0.0;
  double lambda = 0.0;
  TrainingInfo info;
  // Training-set scaling the weights expect their inputs in; saved with the model.
  std::optional<Standardizer> standardizer;

  double margin(std::span<const double> x) const;
};

/// L-BFGS from zero initialization with a weak-Wolfe line search.
/// Deterministic: identical inputs give bitwise-identical models.
LRModel train_lr(const DenseMatrix& x, std::span<const int> labels, const TrainConfig& cfg,
                 FeatureLayout layout = {});
LRModel train_lr(const FeatureMatrix& x, std::span<const int> labels, const TrainConfig& cfg);

/// sigmoid(w.x + b). Refuses vectors whose layout or width differs.
double predict_score(const LRModel& model, const FeatureVector& x);

struct RankedRecord {
  ClaimRecord record;
  double score = 0.0;
};

/// Descending by score (compared via the linear margin, so saturated
/// probabilities keep their order), ties by ascending line_no.
std::vector<RankedRecord> rank_document(const LRModel& model,
                                        const std::vector<std::pair<ClaimRecord, FeatureVector>>& rows);

void save_model(std::ostream& out, const LRModel& model);
LRModel load_model(std::istream& in);

}  // namespace checkworthy
