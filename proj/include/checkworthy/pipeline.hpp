#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "checkworthy/annotation.hpp"
#include "checkworthy/config.hpp"
#include "checkworthy/corpus.hpp"
#include "checkworthy/embedding.hpp"
#include "checkworthy/features.hpp"
#include "checkworthy/score_provider.hpp"
#include "checkworthy/topic.hpp"

namespace checkworthy {

/// Loads transcripts and applies gold files. 2-field gold files target the
/// document whose doc_id equals the gold file stem.
Corpus load_labeled_corpus(const std::vector<std::string>& transcripts,
                           const std::vector<std::string>& gold, Split split);

/// Everything a run needs, loaded once and then read-only.
struct Workspace {
  std::optional<Corpus> train;
  std::optional<Corpus> test;
  std::optional<AnnotationIndex> train_index;
  std::optional<AnnotationIndex> test_index;
  std::optional<StopwordList> stopwords;
  std::optional<EmbeddingStore> store;
  std::optional<TopicSet> topics;
  std::optional<WordList> words;
  std::optional<ScoreMap> scores;
  VectorPolicy we_policy = VectorPolicy::all_words;

  FeatureContext context() const;
};

/// Loads the corpora (`with_train`/`with_test`) and the resources for `groups`.
Workspace load_workspace(const RunConfig& cfg, GroupSet groups, bool with_train, bool with_test);

/// Runs one command. Returns the process exit code: 0 success, 1 validation
/// error, 2 runtime error. Human-readable output goes to `out`, diagnostics to `err`.
int run_command(Command command, const RunConfig& cfg, std::ostream& out, std::ostream& err);

}  // namespace checkworthy
