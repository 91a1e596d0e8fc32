#pragma once

#include <chrono>
#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "checkworthy/annotation.hpp"

namespace checkworthy {

/// (doc_id, line_no) -> probability in [0, 1].
class ScoreMap {
 public:
  /// Throws DataError for a score outside [0,1] (or NaN) and for duplicates.
  void insert(const std::string& doc_id, std::int64_t line_no, double score);
  std::optional<double> find(const std::string& doc_id, std::int64_t line_no) const;
  std::size_t size() const { return scores_.size(); }
  const std::map<SentenceKey, double>& entries() const { return scores_; }

  bool operator==(const ScoreMap&) const = default;

 private:
  std::map<SentenceKey, double> scores_;
};

/// `doc_id \t line_no \t score` per line, strict.
ScoreMap parse_scores_tsv(std::istream& in, const std::string& name = "scores");
ScoreMap load_scores_tsv(const std::string& path);
void write_scores_tsv(std::ostream& out, const ScoreMap& scores);

struct ScoreRequest {
  std::string doc_id;
  std::int64_t line_no = 0;
  std::string text;
};

struct HttpScoreOptions {
  std::size_t batch_size = 64;
  std::size_t parallelism = 1;
  std::chrono::milliseconds timeout{30000};
  int retries = 2;
};

/// POSTs batches to `<endpoint>/score` (endpoint like http://host:port or
/// http://host:port/prefix). Every requested key must come back exactly once
/// with a probability; anything else is an error.
ScoreMap fetch_scores_http(const std::string& endpoint, const std::vector<ScoreRequest>& sentences,
                           const HttpScoreOptions& options = {});

/// JSON wire helpers, exposed for servers and tests.
std::string encode_score_request(const std::vector<ScoreRequest>& batch);
std::vector<ScoreRequest> decode_score_request(const std::string& body);
std::string encode_score_response(const ScoreMap& scores);

}  // namespace checkworthy
