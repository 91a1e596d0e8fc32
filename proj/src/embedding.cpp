#include "checkworthy/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "checkworthy/error.hpp"
#include "checkworthy/text.hpp"

namespace checkworthy {

void EmbeddingStore::add(const std::string& word, std::span<const float> vec) {
  if (vec.size() != dim_)
    throw DataError("vector for \"" + word + "\" has " + std::to_string(vec.size()) +
                    " components, expected " + std::to_string(dim_));
  if (!index_.emplace(word, index_.size()).second)
    throw DataError("duplicate word \"" + word + "\"");
  data_.insert(data_.end(), vec.begin(), vec.end());
}

std::optional<std::span<const float>> EmbeddingStore::find_exact(std::string_view word) const {
  const auto it = index_.find(std::string(word));
  if (it == index_.end()) return std::nullopt;
  return std::span<const float>(data_.data() + it->second * dim_, dim_);
}

std::optional<std::span<const float>> EmbeddingStore::find(std::string_view word) const {
  if (auto v = find_exact(word)) return v;
  const auto lower = text::to_lower(word);
  if (lower != word) return find_exact(lower);
  return std::nullopt;
}

namespace {

[[noreturn]] void load_error(const std::string& path, std::size_t line,
                             const std::string& what) {
  throw ParseError(path + ":" + std::to_string(line) + ": " + what);
}

}  // namespace

EmbeddingStore load_embeddings_text(const std::string& path,
                                    const std::unordered_set<std::string>* restrict_to) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open embeddings \"" + path + "\"");

  std::string line;
  if (!text::read_line(in, line)) load_error(path, 1, "missing header");
  text::strip_bom(line);
  std::vector<std::string_view> header;
  for (auto f : text::split(text::trim(line), ' '))
    if (!f.empty()) header.push_back(f);
  if (header.size() != 2) load_error(path, 1, "header must be \"vocab_size dim\"");
  const auto vocab = text::parse_int(header[0]);
  const auto dim = text::parse_int(header[1]);
  if (!vocab || *vocab < 0 || !dim || *dim <= 0)
    load_error(path, 1, "header must be \"vocab_size dim\"");

  EmbeddingStore store(static_cast<std::size_t>(*dim));
  std::vector<float> vec(store.dim());
  std::size_t line_no = 1;
  std::int64_t entries = 0;
  while (text::read_line(in, line)) {
    ++line_no;
    const auto body = text::trim(line);
    if (body.empty()) continue;
    ++entries;
    const auto sp = body.find(' ');
    const std::string word(body.substr(0, sp));
    if (restrict_to && !restrict_to->count(word)) continue;
    if (sp == std::string_view::npos) load_error(path, line_no, "missing vector");

    std::size_t k = 0;
    for (auto f : text::split(body.substr(sp + 1), ' ')) {
      if (f.empty()) continue;
      if (k >= store.dim())
        load_error(path, line_no, "more than " + std::to_string(store.dim()) + " components");
      const auto v = text::parse_double(f);
      if (!v || !std::isfinite(*v))
        load_error(path, line_no, "non-numeric component \"" + std::string(f) + "\"");
      vec[k++] = static_cast<float>(*v);
    }
    if (k != store.dim())
      load_error(path, line_no,
                 "vector has " + std::to_string(k) + " components, expected " +
                     std::to_string(store.dim()));
    try {
      store.add(word, vec);
    } catch (const DataError& e) {
      load_error(path, line_no, e.what());
    }
  }
  if (entries != *vocab)
    load_error(path, line_no,
               "header announces " + std::to_string(*vocab) + " words, file has " +
                   std::to_string(entries));
  return store;
}

std::vector<double> sentence_vector(std::span<const Token> tokens,
                                    const EmbeddingStore& store, VectorPolicy policy) {
  std::vector<double> acc(store.dim(), 0.0);
  std::size_t n = 0;
  for (const auto& t : tokens) {
    if (policy == VectorPolicy::content_words && t.is_stopword) continue;
    const auto v = store.find(t.surface);
    if (!v) continue;
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += (*v)[i];
    ++n;
  }
  if (n > 0)
    for (auto& x : acc) x /= static_cast<double>(n);
  return acc;
}

double cosine(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size())
    throw DataError("cosine: length mismatch " + std::to_string(u.size()) + " vs " +
                    std::to_string(v.size()));
  double dot = 0.0, nu = 0.0, nv = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    dot += u[i] * v[i];
    nu += u[i] * u[i];
    nv += v[i] * v[i];
  }
  if (nu == 0.0 || nv == 0.0) return 0.0;
  const double c = dot / (std::sqrt(nu) * std::sqrt(nv));
  return std::clamp(c, -1.0, 1.0);
}

}  // namespace checkworthy
