#include "checkworthy/pipeline.hpp"

#include <filesystem>
#include <fmt/format.h>
#include <fmt/ostream.h>
#include <fstream>
#include <unordered_set>

#include "checkworthy/error.hpp"
#include "checkworthy/evaluation.hpp"
#include "checkworthy/ranker.hpp"
#include "checkworthy/text.hpp"

namespace checkworthy {

namespace fs = std::filesystem;

Corpus load_labeled_corpus(const std::vector<std::string>& transcripts,
                           const std::vector<std::string>& gold, Split split) {
  auto corpus = load_corpus(transcripts, split);
  const auto gold_files = expand_paths(gold);
  if (gold_files.empty()) return corpus;
  std::vector<std::ifstream> streams;
  streams.reserve(gold_files.size());
  std::vector<GoldSource> sources;
  for (const auto& f : gold_files) {
    streams.emplace_back(f);
    if (!streams.back()) throw ParseError("cannot open gold file \"" + f + "\"");
    sources.push_back({&streams.back(), file_stem(f), f});
  }
  return attach_gold_labels(std::move(corpus), sources);
}

FeatureContext Workspace::context() const {
  FeatureContext ctx;
  ctx.store = store ? &*store : nullptr;
  ctx.topics = topics ? &*topics : nullptr;
  ctx.word_list = words ? &*words : nullptr;
  ctx.scores = scores ? &*scores : nullptr;
  ctx.we_policy = we_policy;
  return ctx;
}

namespace {

void add_with_lower(std::unordered_set<std::string>& set, const std::string& w) {
  set.insert(w);
  set.insert(text::to_lower(w));
}

std::vector<ScoreRequest> score_requests(const Workspace& ws) {
  std::vector<ScoreRequest> req;
  for (const auto* c : {ws.train ? &*ws.train : nullptr, ws.test ? &*ws.test : nullptr}) {
    if (!c) continue;
    for (const auto& d : c->documents)
      for (const auto& r : d.records) req.push_back({r.doc_id, r.line_no, r.text});
  }
  return req;
}

}  // namespace

Workspace load_workspace(const RunConfig& cfg, GroupSet groups, bool with_train, bool with_test) {
  Workspace ws;
  ws.we_policy = cfg.we_policy;
  if (!cfg.stopwords.empty()) ws.stopwords = StopwordList::load(cfg.stopwords);
  const StopwordList* sw = ws.stopwords ? &*ws.stopwords : nullptr;

  std::vector<AnnotatedSentence> train_sents, test_sents;
  if (with_train) {
    ws.train = load_labeled_corpus(cfg.train_transcripts, cfg.train_gold, Split::train);
    train_sents = load_conllu_files(cfg.train_annotations, sw);
  }
  if (with_test) {
    ws.test = load_labeled_corpus(cfg.test_transcripts, cfg.test_gold, Split::test);
    test_sents = load_conllu_files(cfg.test_annotations, sw);
  }

  std::vector<TopicDef> topic_defs;
  if (groups.contains(FeatureGroup::CT)) topic_defs = load_topic_file(cfg.topic_seeds);

  if (groups.contains(FeatureGroup::WE) || groups.contains(FeatureGroup::CT)) {
    std::unordered_set<std::string> vocab;
    if (!cfg.vocab_restriction.empty()) {
      for (const auto& w : text::read_word_list(cfg.vocab_restriction)) vocab.insert(w);
    } else {
      for (const auto* sents : {&train_sents, &test_sents})
        for (const auto& s : *sents)
          for (const auto& t : s.tokens) add_with_lower(vocab, t.surface);
      for (const auto& t : topic_defs)
        for (const auto& w : t.seed_words) add_with_lower(vocab, w);
    }
    ws.store = load_embeddings_text(cfg.embeddings, &vocab);
  }
  if (groups.contains(FeatureGroup::CT)) ws.topics = build_topic_vectors(topic_defs, *ws.store);
  if (groups.contains(FeatureGroup::HW)) ws.words = WordList::load(cfg.hw_list);

  if (with_train) ws.train_index = align_annotations(std::move(train_sents), *ws.train);
  if (with_test) ws.test_index = align_annotations(std::move(test_sents), *ws.test);

  if (groups.contains(FeatureGroup::BERT)) {
    if (!cfg.scores.empty())
      ws.scores = load_scores_tsv(cfg.scores);
    else
      ws.scores = fetch_scores_http(cfg.score_endpoint, score_requests(ws), cfg.http);
  }
  return ws;
}

namespace {

std::ofstream open_output(const RunConfig& cfg, const std::string& name) {
  fs::create_directories(cfg.output_dir);
  const auto path = fs::path(cfg.output_dir) / name;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write \"" + path.string() + "\"");
  return out;
}

void write_ranked_tsv(std::ostream& out, const std::vector<RankedDoc>& docs) {
  out << "doc_id\trank\tline_no\tscore\ttext\n";
  for (const auto& d : docs)
    for (std::size_t k = 0; k < d.items.size(); ++k)
      out << d.doc_id << '\t' << (k + 1) << '\t' << d.items[k].line_no << '\t'
          << text::format_double(d.items[k].score) << '\t' << d.items[k].text << '\n';
}

void print_stats(std::ostream& out, std::ostream& tsv, const std::string& split,
                 const CorpusStats& s) {
  const double pct = s.sentence_count ? 100.0 * static_cast<double>(s.positive_count) /
                                            static_cast<double>(s.sentence_count)
                                      : 0.0;
  fmt::print(out, "{:<6} {:>6} {:>10} {:>10} ({:.1f}%)\n", split, s.doc_count, s.sentence_count,
             s.positive_count, pct);
  tsv << split << '\t' << s.doc_count << '\t' << s.sentence_count << '\t' << s.positive_count
      << '\n';
}

ExperimentData experiment_data(const Workspace& ws, const RunConfig& cfg) {
  ExperimentData data;
  data.train = &*ws.train;
  data.train_index = &*ws.train_index;
  data.test = &*ws.test;
  data.test_index = &*ws.test_index;
  data.ctx = ws.context();
  data.train_config = cfg.train;
  return data;
}

void save_model_file(const RunConfig& cfg, const LRModel& model) {
  auto f = open_output(cfg, "model.txt");
  save_model(f, model);
}

void print_training(std::ostream& out, const LRModel& m) {
  fmt::print(out, "trained {} weights: {} after {} iterations, objective {:.6g}, |grad|_inf {:.3g}\n",
             m.weights.size(), stop_reason_name(m.info.stop), m.info.iterations,
             m.info.final_objective, m.info.gradient_inf_norm);
}

int dispatch(Command command, const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  switch (command) {
    case Command::stats: {
      auto tsv = open_output(cfg, "stats.tsv");
      tsv << "split\tdocs\tsentences\tpositives\n";
      fmt::print(out, "{:<6} {:>6} {:>10} {:>10}\n", "split", "docs", "sentences", "positives");
      if (!cfg.train_transcripts.empty())
        print_stats(out, tsv, "train",
                    corpus_stats(load_labeled_corpus(cfg.train_transcripts, cfg.train_gold, Split::train)));
      if (!cfg.test_transcripts.empty())
        print_stats(out, tsv, "test",
                    corpus_stats(load_labeled_corpus(cfg.test_transcripts, cfg.test_gold, Split::test)));
      return 0;
    }
    case Command::featurize: {
      const bool with_test = !cfg.test_transcripts.empty();
      const auto ws = load_workspace(cfg, cfg.features, true, with_test);
      const auto ctx = ws.context();
      const auto train_x = assemble_features(*ws.train, *ws.train_index, ctx, cfg.features);
      auto f = open_output(cfg, "features_train.tsv");
      write_feature_tsv(f, train_x);
      fmt::print(out, "train: {} rows x {} features ({})\n", train_x.rows(), train_x.layout->width,
                 train_x.layout->describe());
      if (with_test) {
        const auto test_x = assemble_features(*ws.test, *ws.test_index, ctx, cfg.features);
        auto g = open_output(cfg, "features_test.tsv");
        write_feature_tsv(g, test_x);
        fmt::print(out, "test: {} rows x {} features\n", test_x.rows(), test_x.layout->width);
      }
      return 0;
    }
    case Command::train: {
      const auto ws = load_workspace(cfg, cfg.features, true, false);
      const auto x = assemble_features(*ws.train, *ws.train_index, ws.context(), cfg.features);
      auto [x_std, standardizer] = standardize(x);
      auto model = train_lr(x_std, corpus_labels(*ws.train), cfg.train);
      model.standardizer = std::move(standardizer);
      save_model_file(cfg, model);
      print_training(out, model);
      return 0;
    }
    case Command::rank: {
      std::ifstream mf(fs::path(cfg.output_dir) / "model.txt");
      const auto model = load_model(mf);
      if (!model.standardizer) throw DataError("model file has no standardizer section");
      const auto groups = model.layout.groups();
      const auto ws = load_workspace(cfg, groups, false, true);
      const auto x = assemble_features(*ws.test, *ws.test_index, ws.context(), groups);
      if (!(*x.layout == model.layout))
        throw DataError("feature layout \"" + x.layout->describe() +
                        "\" does not match model layout \"" + model.layout.describe() + "\"");
      const auto ranked = rank_corpus(model, *ws.test, standardize(x, *model.standardizer));
      auto f = open_output(cfg, "ranked.tsv");
      write_ranked_tsv(f, ranked);
      fmt::print(out, "ranked {} documents\n", ranked.size());
      return 0;
    }
    case Command::evaluate:
    case Command::report: {
      const auto ws = load_workspace(cfg, cfg.features, true, true);
      const auto result = run_experiment(experiment_data(ws, cfg), cfg.features);
      save_model_file(cfg, result.model);
      {
        auto f = open_output(cfg, "ranked.tsv");
        write_ranked_tsv(f, result.ranked);
      }
      if (command == Command::evaluate) {
        auto f = open_output(cfg, "eval.tsv");
        write_eval_tsv(f, result.report);
        print_training(out, result.model);
        print_eval_table(out, result.report);
      } else {
        const auto qr = qualitative_report(result.ranked);
        auto f = open_output(cfg, "qualitative.tsv");
        write_qualitative_tsv(f, qr);
        fmt::print(out, "{:<28} {:>5}  {:<12} {}\n", "document", "rank", "speaker", "statement");
        for (const auto& e : qr.entries)
          fmt::print(out, "{:<28} {:>5}  {:<12} {}\n", e.doc_id, e.rank, e.speaker, e.text);
        for (const auto& n : qr.notices) fmt::print(err, "notice: {}\n", n);
      }
      return 0;
    }
    case Command::ablate: {
      const auto ws = load_workspace(cfg, GroupSet::all(), true, true);
      const auto rows = run_ablation(experiment_data(ws, cfg), cfg.ablation_mode);
      auto f = open_output(cfg, cfg.ablation_mode == AblationMode::leave_one_out
                                    ? "ablation_leave_one_out.tsv"
                                    : "ablation_use_only_one.tsv");
      write_ablation_tsv(f, rows, cfg.ablation_mode);
      print_ablation_table(out, rows, cfg.ablation_mode);
      return 0;
    }
  }
  return 2;
}

}  // namespace

int run_command(Command command, const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const auto problems = validate(cfg, command);
  if (!problems.empty()) {
    fmt::print(err, "configuration is not usable for \"{}\":\n", command_name(command));
    for (const auto& p : problems) fmt::print(err, "  - {}\n", p);
    return 1;
  }
  try {
    return dispatch(command, cfg, out, err);
  } catch (const ConfigError& e) {
    fmt::print(err, "configuration error: {}\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    fmt::print(err, "error: {}\n", e.what());
    return 2;
  }
}

}  // namespace checkworthy
