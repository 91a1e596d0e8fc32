#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "checkworthy/annotation.hpp"
#include "checkworthy/corpus.hpp"
#include "checkworthy/features.hpp"
#include "checkworthy/ranker.hpp"

namespace checkworthy {

struct RankedItem {
  std::int64_t line_no = 0;
  double score = 0.0;
  std::optional<int> label;
  std::string speaker;
  std::string text;
};

/// Items in rank order: descending score, ascending line_no on ties.
struct RankedDoc {
  std::string doc_id;
  std::vector<RankedItem> items;

  std::vector<int> labels() const;  // throws DataError if any label is missing
};

RankedDoc to_ranked_doc(const std::string& doc_id, const std::vector<RankedRecord>& ranked);

/// Full-depth AP: sum of precision@k over positive ranks k, divided by the
/// number of positives. Throws DataError when there are no positives.
double average_precision(std::span<const int> ranked_labels);

struct PrecisionMetrics {
  double r_precision = 0.0;
  double p_at_5 = 0.0;
  double p_at_10 = 0.0;
};

/// P@k divides by k even when the list is shorter than k.
PrecisionMetrics precision_metrics(std::span<const int> ranked_labels);

double precision_at(std::span<const int> ranked_labels, std::size_t k);

struct DocMetrics {
  std::string doc_id;
  std::size_t sentences = 0;
  std::size_t positives = 0;
  double ap = 0.0;
  double rp = 0.0;
  double p_at_5 = 0.0;
  double p_at_10 = 0.0;
};

struct EvalReport {
  std::vector<DocMetrics> documents;  // sorted by doc_id
  double map = 0.0;
  double mean_rp = 0.0;
  double mean_p_at_5 = 0.0;
  double mean_p_at_10 = 0.0;
  std::size_t doc_count = 0;
};

/// Per-document metrics (computed in parallel) and their unweighted means.
EvalReport evaluate_corpus(const std::vector<RankedDoc>& docs);

void write_eval_tsv(std::ostream& out, const EvalReport& report);
void print_eval_table(std::ostream& out, const EvalReport& report);

struct QualitativeEntry {
  std::string doc_id;
  std::size_t rank = 0;  // 1-based
  std::int64_t line_no = 0;
  std::string speaker;
  std::string text;
};

struct QualitativeReport {
  std::vector<QualitativeEntry> entries;
  std::vector<std::string> notices;  // documents skipped
};

/// Highest-ranked non-check-worthy sentence of every document.
QualitativeReport qualitative_report(const std::vector<RankedDoc>& docs);

void write_qualitative_tsv(std::ostream& out, const QualitativeReport& report);

// ---------------------------------------------------------------------------
// Experiments: assemble -> standardize (train stats) -> fit -> rank -> evaluate

struct ExperimentData {
  const Corpus* train = nullptr;
  const AnnotationIndex* train_index = nullptr;
  const Corpus* test = nullptr;
  const AnnotationIndex* test_index = nullptr;
  FeatureContext ctx;
  TrainConfig train_config;
};

struct ExperimentResult {
  LRModel model;
  std::vector<RankedDoc> ranked;
  EvalReport report;
};

std::vector<int> corpus_labels(const Corpus& corpus);

/// Ranks every document of `corpus` with a model trained on standardized
/// features; `features` must already be standardized and in corpus order.
std::vector<RankedDoc> rank_corpus(const LRModel& model, const Corpus& corpus,
                                   const FeatureMatrix& features);

ExperimentResult run_experiment(const ExperimentData& data, GroupSet enabled);

/// Same cycle starting from pre-assembled matrices (projected to `enabled`).
ExperimentResult run_experiment(const ExperimentData& data, const FeatureMatrix& train_full,
                                const FeatureMatrix& test_full, GroupSet enabled);

enum class AblationMode { leave_one_out, use_only_one };

struct AblationRow {
  std::string name;  // "All", "All-CS", ..., or "CS"
  GroupSet groups;
  EvalReport report;
};

/// Row order: All, All-CS, All-BERT, All-VT, All-HW, All-WE, All-CT, All-POS
/// (leave_one_out) or CS, BERT, VT, HW, WE, CT, POS (use_only_one).
std::vector<AblationRow> run_ablation(const ExperimentData& data, AblationMode mode);

std::vector<FeatureGroup> ablation_group_order();

void write_ablation_tsv(std::ostream& out, const std::vector<AblationRow>& rows,
                        AblationMode mode);
void print_ablation_table(std::ostream& out, const std::vector<AblationRow>& rows,
                          AblationMode mode);

}  // namespace checkworthy
