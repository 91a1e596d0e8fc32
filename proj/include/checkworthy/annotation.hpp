#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <ostream>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "checkworthy/corpus.hpp"

namespace checkworthy {

struct Token {
  std::string surface;
  std::string lemma;
  std::string upos;
  std::string xpos;  // "_" when unknown
  std::map<std::string, std::string> morph;
  bool is_stopword = false;

  bool operator==(const Token&) const = default;
};

struct AnnotatedSentence {
  std::string doc_id;
  std::int64_t line_no = 0;
  std::vector<Token> tokens;

  bool operator==(const AnnotatedSentence&) const = default;
};

using SentenceKey = std::pair<std::string, std::int64_t>;

class StopwordList {
 public:
  StopwordList() = default;
  explicit StopwordList(const std::vector<std::string>& words);
  static StopwordList load(const std::string& path);

  bool contains(std::string_view word) const;  // case-insensitive
  std::size_t size() const { return words_.size(); }

 private:
  std::unordered_set<std::string> words_;
};

/// Parses the CoNLL-U subset: 10 columns, blank-line separated blocks, a
/// `# sent_id = <doc_id>:<line_no>` comment per block. Multiword ranges and
/// empty nodes are skipped. Stopword flags are set when `stopwords` is given.
std::vector<AnnotatedSentence> parse_conllu(std::istream& in,
                                            const StopwordList* stopwords = nullptr);

void write_conllu(std::ostream& out, const std::vector<AnnotatedSentence>& sentences);

/// Immutable (doc_id, line_no) -> sentence map covering exactly one corpus.
class AnnotationIndex {
 public:
  const AnnotatedSentence& at(const std::string& doc_id, std::int64_t line_no) const;
  std::size_t size() const { return map_.size(); }

 private:
  friend AnnotationIndex align_annotations(std::vector<AnnotatedSentence>,
                                           const Corpus&);
  std::map<SentenceKey, AnnotatedSentence> map_;
};

AnnotationIndex align_annotations(std::vector<AnnotatedSentence> sentences,
                                  const Corpus& corpus);

/// Loads and concatenates several CoNLL-U files, parsing them in parallel.
std::vector<AnnotatedSentence> load_conllu_files(const std::vector<std::string>& paths,
                                                 const StopwordList* stopwords);

}  // namespace checkworthy
