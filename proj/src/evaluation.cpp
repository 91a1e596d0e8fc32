#include "checkworthy/evaluation.hpp"

#include <algorithm>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include "checkworthy/error.hpp"
#include "checkworthy/text.hpp"

namespace checkworthy {

std::vector<int> RankedDoc::labels() const {
  std::vector<int> out;
  out.reserve(items.size());
  for (const auto& it : items) {
    if (!it.label)
      throw DataError("unlabeled item " + doc_id + ":" + std::to_string(it.line_no));
    out.push_back(*it.label);
  }
  return out;
}

RankedDoc to_ranked_doc(const std::string& doc_id, const std::vector<RankedRecord>& ranked) {
  RankedDoc doc{doc_id, {}};
  doc.items.reserve(ranked.size());
  for (const auto& r : ranked)
    doc.items.push_back({r.record.line_no, r.score, r.record.label, r.record.speaker, r.record.text});
  return doc;
}

double average_precision(std::span<const int> ranked_labels) {
  double sum = 0.0;
  std::size_t hits = 0;
  for (std::size_t k = 0; k < ranked_labels.size(); ++k) {
    if (ranked_labels[k] != 1) continue;
    ++hits;
    sum += static_cast<double>(hits) / static_cast<double>(k + 1);
  }
  if (hits == 0) throw DataError("average precision undefined without positives");
  return sum / static_cast<double>(hits);
}

double precision_at(std::span<const int> ranked_labels, std::size_t k) {
  if (k == 0) return 0.0;
  const std::size_t depth = std::min(k, ranked_labels.size());
  std::size_t hits = 0;
  for (std::size_t i = 0; i < depth; ++i) hits += ranked_labels[i] == 1;
  return static_cast<double>(hits) / static_cast<double>(k);
}

PrecisionMetrics precision_metrics(std::span<const int> ranked_labels) {
  const auto r = static_cast<std::size_t>(std::count(ranked_labels.begin(), ranked_labels.end(), 1));
  return {r == 0 ? 0.0 : precision_at(ranked_labels, r), precision_at(ranked_labels, 5),
          precision_at(ranked_labels, 10)};
}

EvalReport evaluate_corpus(const std::vector<RankedDoc>& docs) {
  std::vector<const RankedDoc*> order;
  for (const auto& d : docs) order.push_back(&d);
  std::sort(order.begin(), order.end(),
            [](const RankedDoc* a, const RankedDoc* b) { return a->doc_id < b->doc_id; });

  std::vector<std::string> no_positive;
  for (const auto* d : order) {
    const bool any = std::any_of(d->items.begin(), d->items.end(),
                                 [](const RankedItem& it) { return it.label == 1; });
    if (!any) no_positive.push_back(d->doc_id);
  }
  if (!no_positive.empty()) {
    std::string msg = "documents without positives:";
    for (const auto& id : no_positive) msg += " " + id;
    throw DataError(msg);
  }

  EvalReport report;
  report.documents.resize(order.size());
  std::vector<std::string> errors(order.size());
#pragma omp parallel for schedule(dynamic)
  for (std::size_t i = 0; i < order.size(); ++i) {
    try {
      const auto labels = order[i]->labels();
      auto& m = report.documents[i];
      m.doc_id = order[i]->doc_id;
      m.sentences = labels.size();
      m.positives = static_cast<std::size_t>(std::count(labels.begin(), labels.end(), 1));
      m.ap = average_precision(labels);
      const auto p = precision_metrics(labels);
      m.rp = p.r_precision;
      m.p_at_5 = p.p_at_5;
      m.p_at_10 = p.p_at_10;
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  }
  for (const auto& e : errors)
    if (!e.empty()) throw DataError(e);

  report.doc_count = report.documents.size();
  if (report.doc_count == 0) return report;
  for (const auto& m : report.documents) {
    report.map += m.ap;
    report.mean_rp += m.rp;
    report.mean_p_at_5 += m.p_at_5;
    report.mean_p_at_10 += m.p_at_10;
  }
  const double n = static_cast<double>(report.doc_count);
  report.map /= n;
  report.mean_rp /= n;
  report.mean_p_at_5 /= n;
  report.mean_p_at_10 /= n;
  return report;
}

void write_eval_tsv(std::ostream& out, const EvalReport& report) {
  out << "doc_id\tsentences\tpositives\tAP\tRP\tP@5\tP@10\n";
  for (const auto& m : report.documents)
    out << m.doc_id << '\t' << m.sentences << '\t' << m.positives << '\t'
        << text::format_double(m.ap) << '\t' << text::format_double(m.rp) << '\t'
        << text::format_double(m.p_at_5) << '\t' << text::format_double(m.p_at_10) << '\n';
  out << "MEAN\t\t\t" << text::format_double(report.map) << '\t'
      << text::format_double(report.mean_rp) << '\t' << text::format_double(report.mean_p_at_5)
      << '\t' << text::format_double(report.mean_p_at_10) << '\n';
}

void print_eval_table(std::ostream& out, const EvalReport& report) {
  fmt::print(out, "{:<32} {:>6} {:>4} {:>7} {:>7} {:>7} {:>7}\n", "document", "sent", "pos", "AP",
             "RP", "P@5", "P@10");
  for (const auto& m : report.documents)
    fmt::print(out, "{:<32} {:>6} {:>4} {:>7.4f} {:>7.4f} {:>7.4f} {:>7.4f}\n", m.doc_id,
               m.sentences, m.positives, m.ap, m.rp, m.p_at_5, m.p_at_10);
  fmt::print(out, "{:<32} {:>6} {:>4} {:>7.4f} {:>7.4f} {:>7.4f} {:>7.4f}\n",
             fmt::format("mean over {} documents", report.doc_count), "", "", report.map,
             report.mean_rp, report.mean_p_at_5, report.mean_p_at_10);
}

QualitativeReport qualitative_report(const std::vector<RankedDoc>& docs) {
  QualitativeReport report;
  for (const auto& d : docs) {
    bool found = false;
    for (std::size_t k = 0; k < d.items.size(); ++k) {
      const auto& it = d.items[k];
      if (!it.label)
        throw DataError("unlabeled item " + d.doc_id + ":" + std::to_string(it.line_no));
      if (*it.label == 0) {
        report.entries.push_back({d.doc_id, k + 1, it.line_no, it.speaker, it.text});
        found = true;
        break;
      }
    }
    if (!found) report.notices.push_back(d.doc_id + ": no non-check-worthy sentence, skipped");
  }
  return report;
}

void write_qualitative_tsv(std::ostream& out, const QualitativeReport& report) {
  out << "doc_id\trank\tline_no\tspeaker\ttext\n";
  for (const auto& e : report.entries)
    out << e.doc_id << '\t' << e.rank << '\t' << e.line_no << '\t' << e.speaker << '\t' << e.text
        << '\n';
}

// ---------------------------------------------------------------------------

std::vector<int> corpus_labels(const Corpus& corpus) {
  std::vector<int> y;
  y.reserve(corpus.sentence_count());
  for (const auto& d : corpus.documents)
    for (const auto& r : d.records) {
      if (!r.label)
        throw DataError("unlabeled record " + d.doc_id + ":" + std::to_string(r.line_no));
      y.push_back(*r.label);
    }
  return y;
}

std::vector<RankedDoc> rank_corpus(const LRModel& model, const Corpus& corpus,
                                   const FeatureMatrix& features) {
  if (features.rows() != corpus.sentence_count())
    throw DataError("feature rows do not match corpus size");
  std::vector<RankedDoc> out;
  std::size_t row = 0;
  for (const auto& d : corpus.documents) {
    std::vector<std::pair<ClaimRecord, FeatureVector>> rows;
    rows.reserve(d.records.size());
    for (const auto& r : d.records) {
      if (features.keys[row] != SentenceKey{r.doc_id, r.line_no})
        throw DataError("feature row order does not match corpus order at " + r.doc_id + ":" +
                        std::to_string(r.line_no));
      rows.emplace_back(r, features.vector(row++));
    }
    out.push_back(to_ranked_doc(d.doc_id, rank_document(model, rows)));
  }
  return out;
}

namespace {

void check_data(const ExperimentData& data) {
  if (!data.train || !data.train_index || !data.test || !data.test_index)
    throw DataError("experiment needs train and test corpora with annotations");
}

}  // namespace

ExperimentResult run_experiment(const ExperimentData& data, const FeatureMatrix& train_full,
                                const FeatureMatrix& test_full, GroupSet enabled) {
  const auto train_x = project(train_full, enabled);
  const auto test_x = project(test_full, enabled);
  auto [train_std, standardizer] = standardize(train_x);
  const auto test_std = standardize(test_x, standardizer);

  ExperimentResult result;
  result.model = train_lr(train_std, corpus_labels(*data.train), data.train_config);
  result.model.standardizer = standardizer;
  result.ranked = rank_corpus(result.model, *data.test, test_std);
  result.report = evaluate_corpus(result.ranked);
  return result;
}

ExperimentResult run_experiment(const ExperimentData& data, GroupSet enabled) {
  check_data(data);
  const auto train_x = assemble_features(*data.train, *data.train_index, data.ctx, enabled);
  const auto test_x = assemble_features(*data.test, *data.test_index, data.ctx, enabled);
  return run_experiment(data, train_x, test_x, enabled);
}

std::vector<FeatureGroup> ablation_group_order() {
  return {FeatureGroup::CS, FeatureGroup::BERT, FeatureGroup::VT, FeatureGroup::HW,
          FeatureGroup::WE, FeatureGroup::CT,   FeatureGroup::POS};
}

std::vector<AblationRow> run_ablation(const ExperimentData& data, AblationMode mode) {
  check_data(data);
  const auto all = GroupSet::all();
  const auto train_full = assemble_features(*data.train, *data.train_index, data.ctx, all);
  const auto test_full = assemble_features(*data.test, *data.test_index, data.ctx, all);

  std::vector<AblationRow> rows;
  if (mode == AblationMode::leave_one_out) rows.push_back({"All", all, {}});
  for (auto g : ablation_group_order()) {
    if (mode == AblationMode::leave_one_out) {
      auto set = all;
      set.erase(g);
      rows.push_back({"All-" + std::string(group_name(g)), set, {}});
    } else {
      rows.push_back({std::string(group_name(g)), GroupSet{g}, {}});
    }
  }
  for (auto& row : rows) row.report = run_experiment(data, train_full, test_full, row.groups).report;
  return rows;
}

void write_ablation_tsv(std::ostream& out, const std::vector<AblationRow>& rows,
                        AblationMode mode) {
  out << "block\tfeatures\tMAP\tRP\tP@5\tP@10\n";
  const char* block = mode == AblationMode::leave_one_out ? "leave_one_out" : "use_only_one";
  for (const auto& r : rows)
    out << block << '\t' << r.name << '\t' << text::format_double(r.report.map) << '\t'
        << text::format_double(r.report.mean_rp) << '\t'
        << text::format_double(r.report.mean_p_at_5) << '\t'
        << text::format_double(r.report.mean_p_at_10) << '\n';
}

void print_ablation_table(std::ostream& out, const std::vector<AblationRow>& rows,
                          AblationMode mode) {
  fmt::print(out, "{}\n", mode == AblationMode::leave_one_out ? "Leave-One-Out" : "Use-Only-One");
  fmt::print(out, "{:<10} {:>7} {:>7} {:>7} {:>7}\n", "features", "MAP", "RP", "P@5", "P@10");
  for (const auto& r : rows)
    fmt::print(out, "{:<10} {:>7.4f} {:>7.4f} {:>7.4f} {:>7.4f}\n", r.name, r.report.map,
               r.report.mean_rp, r.report.mean_p_at_5, r.report.mean_p_at_10);
}

}  // namespace checkworthy
