#include "checkworthy/topic.hpp"

#include <fstream>
#include <set>

#include "checkworthy/error.hpp"
#include "checkworthy/text.hpp"

namespace checkworthy {

std::vector<TopicDef> parse_topic_file(std::istream& in) {
  std::vector<TopicDef> topics;
  std::set<std::string> names;
  std::string line;
  std::size_t line_no = 0;
  auto fail = [&](const std::string& what) {
    throw ParseError("topic file line " + std::to_string(line_no) + ": " + what);
  };
  while (text::read_line(in, line)) {
    ++line_no;
    if (line_no == 1) text::strip_bom(line);
    const auto body = text::trim(line);
    if (body.empty() || body.front() == '#') continue;
    const auto colon = body.find(':');
    if (colon == std::string_view::npos) fail("expected \"name: word, word, ...\"");
    TopicDef def;
    def.name = std::string(text::trim(body.substr(0, colon)));
    if (def.name.empty()) fail("empty topic name");
    if (!names.insert(def.name).second) fail("duplicate topic \"" + def.name + "\"");
    for (auto w : text::split(body.substr(colon + 1), ',')) {
      const auto seed = text::trim(w);
      if (seed.empty()) continue;
      if (seed.find_first_of(" \t") != std::string_view::npos)
        fail("multi-word seed \"" + std::string(seed) + "\" in topic " + def.name);
      def.seed_words.emplace_back(seed);
    }
    if (def.seed_words.empty()) fail("topic \"" + def.name + "\" has no seed words");
    topics.push_back(std::move(def));
  }
  return topics;
}

std::vector<TopicDef> load_topic_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open topic file \"" + path + "\"");
  try {
    return parse_topic_file(in);
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

TopicSet build_topic_vectors(const std::vector<TopicDef>& topics, const EmbeddingStore& store) {
  TopicSet set;
  set.topics_ = topics;
  set.dim_ = store.dim();
  set.centroids_.assign(topics.size() * store.dim(), 0.0);
  for (std::size_t t = 0; t < topics.size(); ++t) {
    std::size_t found = 0;
    double* c = set.centroids_.data() + t * set.dim_;
    for (const auto& w : topics[t].seed_words) {
      const auto v = store.find(w);
      if (!v) continue;
      for (std::size_t i = 0; i < set.dim_; ++i) c[i] += (*v)[i];
      ++found;
    }
    if (found == 0)
      throw DataError("topic \"" + topics[t].name + "\" has no in-vocabulary seed word");
    for (std::size_t i = 0; i < set.dim_; ++i) c[i] /= static_cast<double>(found);
  }
  return set;
}

std::vector<double> topic_similarities(std::span<const Token> tokens, const TopicSet& topic_set,
                                       const EmbeddingStore& store) {
  if (topic_set.dim() != store.dim())
    throw DataError("topic set built for dim " + std::to_string(topic_set.dim()) +
                    ", store has dim " + std::to_string(store.dim()));
  const auto sv = sentence_vector(tokens, store, VectorPolicy::content_words);
  std::vector<double> out(topic_set.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = cosine(sv, topic_set.centroid(i));
  return out;
}

}  // namespace checkworthy
