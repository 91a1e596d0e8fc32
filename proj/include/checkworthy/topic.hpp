#pragma once

#include <span>
#include <string>
#include <vector>

#include "checkworthy/embedding.hpp"

namespace checkworthy {

struct TopicDef {
  std::string name;
  std::vector<std::string> seed_words;
};

class TopicSet {
 public:
  std::size_t size() const { return topics_.size(); }
  std::size_t dim() const { return dim_; }
  const std::vector<TopicDef>& topics() const { return topics_; }
  std::span<const double> centroid(std::size_t i) const {
    return {centroids_.data() + i * dim_, dim_};
  }

 private:
  friend TopicSet build_topic_vectors(const std::vector<TopicDef>&, const EmbeddingStore&);
  std::vector<TopicDef> topics_;
  std::size_t dim_ = 0;
  std::vector<double> centroids_;
};

/// Topic file: one `name: word1, word2, ...` per line; '#' starts a comment.
std::vector<TopicDef> parse_topic_file(std::istream& in);
std::vector<TopicDef> load_topic_file(const std::string& path);

/// Centroid per topic = mean of its in-vocabulary seed vectors.
TopicSet build_topic_vectors(const std::vector<TopicDef>& topics, const EmbeddingStore& store);

/// Cosine between the content-word sentence vector and each centroid.
std::vector<double> topic_similarities(std::span<const Token> tokens, const TopicSet& topic_set,
                                       const EmbeddingStore& store);

}  // namespace checkworthy
