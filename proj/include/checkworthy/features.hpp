#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "checkworthy/annotation.hpp"
#include "checkworthy/corpus.hpp"
#include "checkworthy/embedding.hpp"
#include "checkworthy/kernels.hpp"
#include "checkworthy/matrix.hpp"
#include "checkworthy/score_provider.hpp"
#include "checkworthy/topic.hpp"

namespace checkworthy {

enum class FeatureGroup : std::uint8_t { BERT, WE, CT, CS, HW, VT, POS };

inline constexpr std::array<FeatureGroup, 7> kCanonicalGroups = {
    FeatureGroup::BERT, FeatureGroup::WE, FeatureGroup::CT, FeatureGroup::CS,
    FeatureGroup::HW,   FeatureGroup::VT, FeatureGroup::POS};

std::string_view group_name(FeatureGroup g);
std::optional<FeatureGroup> parse_group(std::string_view name);

/// Set of enabled groups; iteration is always in canonical order.
class GroupSet {
 public:
  constexpr GroupSet() = default;
  GroupSet(std::initializer_list<FeatureGroup> groups) {
    for (auto g : groups) insert(g);
  }
  static GroupSet all() { return GroupSet(0x7F); }
  static GroupSet from_bits(std::uint8_t bits) { return GroupSet(bits & 0x7F); }

  bool contains(FeatureGroup g) const { return bits_ & mask(g); }
  void insert(FeatureGroup g) { bits_ |= mask(g); }
  void erase(FeatureGroup g) { bits_ &= static_cast<std::uint8_t>(~mask(g)); }
  bool empty() const { return bits_ == 0; }
  std::uint8_t bits() const { return bits_; }
  std::vector<FeatureGroup> groups() const;
  std::string to_string() const;  // "BERT,WE"

  /// Parses "BERT,WE,CT" (case-insensitive, "all" accepted).
  static GroupSet parse(std::string_view list);

  bool operator==(const GroupSet&) const = default;

 private:
  explicit GroupSet(std::uint8_t bits) : bits_(bits) {}
  static std::uint8_t mask(FeatureGroup g) {
    return static_cast<std::uint8_t>(1u << static_cast<unsigned>(g));
  }
  std::uint8_t bits_ = 0;
};

struct Segment {
  FeatureGroup group;
  std::size_t offset = 0;
  std::size_t width = 0;

  bool operator==(const Segment&) const = default;
};

struct GroupWidths {
  std::size_t embedding_dim = 0;
  std::size_t topic_count = 0;
  std::size_t width(FeatureGroup g) const;
};

struct FeatureLayout {
  std::vector<Segment> segments;
  std::size_t width = 0;

  static FeatureLayout make(GroupSet enabled, const GroupWidths& widths);
  const Segment* find(FeatureGroup g) const;
  GroupSet groups() const;
  std::string describe() const;  // "BERT:1 WE:300"
  static FeatureLayout parse(std::string_view descriptor);

  bool operator==(const FeatureLayout&) const = default;
};

/// Lowercased lemma list for the handcrafted-word feature.
class WordList {
 public:
  WordList() = default;
  explicit WordList(const std::vector<std::string>& lemmas);
  static WordList load(const std::string& path);
  bool contains(std::string_view lemma) const;  // case-insensitive
  std::size_t size() const { return words_.size(); }

 private:
  std::unordered_set<std::string> words_;
};

/// Read-only resources shared by all extraction workers.
struct FeatureContext {
  const EmbeddingStore* store = nullptr;
  const TopicSet* topics = nullptr;
  const WordList* word_list = nullptr;
  const ScoreMap* scores = nullptr;
  VectorPolicy we_policy = VectorPolicy::all_words;

  GroupWidths widths() const;
  /// Names of the resources missing for `enabled` (empty if complete).
  std::vector<std::string> missing_resources(GroupSet enabled) const;
};

std::vector<double> extract_group(FeatureGroup group, const AnnotatedSentence& sentence,
                                  const FeatureContext& ctx);

struct FeatureVector {
  SentenceKey key;
  std::vector<double> values;
  std::shared_ptr<const FeatureLayout> layout;
};

struct FeatureMatrix {
  std::shared_ptr<const FeatureLayout> layout;
  std::vector<SentenceKey> keys;  // corpus order
  DenseMatrix values;

  std::size_t rows() const { return values.rows; }
  FeatureVector vector(std::size_t i) const;
};

/// One row per corpus record (corpus order), enabled groups concatenated in
/// canonical order. Rows are extracted in parallel.
FeatureMatrix assemble_features(const Corpus& corpus, const AnnotationIndex& index,
                                const FeatureContext& ctx, GroupSet enabled);

/// Single-threaded reference for assemble_features.
FeatureMatrix assemble_features_serial(const Corpus& corpus, const AnnotationIndex& index,
                                       const FeatureContext& ctx, GroupSet enabled);

/// Keeps only the columns of `subset` (which must be part of the layout).
FeatureMatrix project(const FeatureMatrix& m, GroupSet subset);

struct Standardizer {
  kernels::ColumnStats stats;
  std::size_t width() const { return stats.mean.size(); }
};

/// Fits on `m` and returns the transformed matrix.
std::pair<FeatureMatrix, Standardizer> standardize(const FeatureMatrix& m);

/// Applies a previously fitted standardizer; throws on width mismatch.
FeatureMatrix standardize(const FeatureMatrix& m, const Standardizer& fitted);

/// Debug export: header `doc_id line_no GROUP.k ...`, tab separated.
void write_feature_tsv(std::ostream& out, const FeatureMatrix& m);

}  // namespace checkworthy
