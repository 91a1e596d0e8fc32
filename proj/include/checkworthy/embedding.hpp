#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "checkworthy/annotation.hpp"

namespace checkworthy {

/// Read-only word -> vector map. Vectors are stored as float (4 bytes per
/// component); arithmetic on them is done in double.
class EmbeddingStore {
 public:
  EmbeddingStore() = default;
  explicit EmbeddingStore(std::size_t dim) : dim_(dim) {}

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return index_.size(); }

  /// Throws DataError on a wrong-length vector or a duplicate word.
  void add(const std::string& word, std::span<const float> vec);

  /// Exact, case-sensitive lookup.
  std::optional<std::span<const float>> find_exact(std::string_view word) const;

  /// Exact lookup, then the lowercased form.
  std::optional<std::span<const float>> find(std::string_view word) const;

 private:
  std::size_t dim_ = 0;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<float> data_;
};

/// Loads the word2vec text format: header `vocab_size dim`, then
/// `word v1 ... v_dim` per line. With `restrict_to`, only listed words are
/// kept and only their lines are fully validated.
EmbeddingStore load_embeddings_text(const std::string& path,
                                    const std::unordered_set<std::string>* restrict_to = nullptr);

enum class VectorPolicy { all_words, content_words };

/// Mean of the in-vocabulary token vectors (stopwords dropped under
/// content_words). Zero vector if nothing is in vocabulary.
std::vector<double> sentence_vector(std::span<const Token> tokens,
                                    const EmbeddingStore& store, VectorPolicy policy);

/// dot(u,v)/(|u||v|); 0 when either norm is 0. Throws on length mismatch.
double cosine(std::span<const double> u, std::span<const double> v);

}  // namespace checkworthy
