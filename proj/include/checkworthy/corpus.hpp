#pragma once

#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace checkworthy {

/// One transcript sentence. `label` is 1 for check-worthy, 0 otherwise.
struct ClaimRecord {
  std::string doc_id;
  std::int64_t line_no = 0;
  std::string speaker;
  std::string text;
  std::optional<int> label;

  bool operator==(const ClaimRecord&) const = default;
};

struct Document {
  std::string doc_id;
  std::vector<ClaimRecord> records;

  bool operator==(const Document&) const = default;
};

enum class Split { train, test };

struct Corpus {
  std::vector<Document> documents;
  Split split = Split::train;

  std::size_t sentence_count() const;
  const Document* find(const std::string& doc_id) const;

  bool operator==(const Corpus&) const = default;
};

struct CorpusStats {
  std::size_t doc_count = 0;
  std::size_t sentence_count = 0;
  std::size_t positive_count = 0;

  bool operator==(const CorpusStats&) const = default;
};

/// Parses a CLEF transcript: `line_no \t speaker \t text [\t label]` per line.
/// Blank lines are ignored; everything else is validated strictly and errors
/// carry `doc_id` and the 1-based file line.
std::vector<ClaimRecord> parse_transcript_tsv(std::istream& in,
                                              const std::string& doc_id);

/// Writes the 4-field form (or 3-field for unlabeled records).
void write_transcript_tsv(std::ostream& out, const Document& doc);

/// A gold stream plus the document its 2-field lines refer to.
struct GoldSource {
  std::istream* stream = nullptr;
  std::optional<std::string> doc_id;
  std::string name;  // for error messages
};

/// Applies gold labels and requires every record of the corpus to end up
/// labeled. Gold lines are `line_no \t label` (needs `doc_id` on the source)
/// or `doc_id \t line_no \t label`.
Corpus attach_gold_labels(Corpus corpus, const std::vector<GoldSource>& gold);

CorpusStats corpus_stats(const Corpus& corpus);

/// Loads a directory of transcripts (or explicit files). doc_id is the file
/// stem. Directory entries are taken in lexicographic order. Files are parsed
/// in parallel.
Corpus load_corpus(const std::vector<std::string>& paths, Split split);

/// Expands directories to their regular files (sorted); files pass through.
std::vector<std::string> expand_paths(const std::vector<std::string>& paths);

std::string file_stem(const std::string& path);

}  // namespace checkworthy
