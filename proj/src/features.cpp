#include "checkworthy/features.hpp"

#include <algorithm>
#include <cmath>

#include "checkworthy/error.hpp"
#include "checkworthy/text.hpp"

namespace checkworthy {

std::string_view group_name(FeatureGroup g) {
  switch (g) {
    case FeatureGroup::BERT: return "BERT";
    case FeatureGroup::WE: return "WE";
    case FeatureGroup::CT: return "CT";
    case FeatureGroup::CS: return "CS";
    case FeatureGroup::HW: return "HW";
    case FeatureGroup::VT: return "VT";
    case FeatureGroup::POS: return "POS";
  }
  return "?";
}

std::optional<FeatureGroup> parse_group(std::string_view name) {
  const auto upper = [&] {
    std::string s(text::trim(name));
    for (auto& c : s)
      if (c >= 'a' && c <= 'z') c = static_cast<char>(c - 'a' + 'A');
    return s;
  }();
  for (auto g : kCanonicalGroups)
    if (group_name(g) == upper) return g;
  return std::nullopt;
}

std::vector<FeatureGroup> GroupSet::groups() const {
  std::vector<FeatureGroup> out;
  for (auto g : kCanonicalGroups)
    if (contains(g)) out.push_back(g);
  return out;
}

std::string GroupSet::to_string() const {
  std::string s;
  for (auto g : groups()) {
    if (!s.empty()) s += ',';
    s += group_name(g);
  }
  return s;
}

GroupSet GroupSet::parse(std::string_view list) {
  GroupSet set;
  for (auto part : text::split(list, ',')) {
    const auto name = text::trim(part);
    if (name.empty()) continue;
    if (text::to_lower(name) == "all") return all();
    const auto g = parse_group(name);
    if (!g) throw ConfigError("unknown feature group \"" + std::string(name) + "\"");
    set.insert(*g);
  }
  return set;
}

std::size_t GroupWidths::width(FeatureGroup g) const {
  switch (g) {
    case FeatureGroup::BERT: return 1;
    case FeatureGroup::WE: return embedding_dim;
    case FeatureGroup::CT: return topic_count;
    case FeatureGroup::CS: return 4;
    case FeatureGroup::HW: return 1;
    case FeatureGroup::VT: return 3;
    case FeatureGroup::POS: return 4;
  }
  return 0;
}

FeatureLayout FeatureLayout::make(GroupSet enabled, const GroupWidths& widths) {
  if (enabled.empty()) throw ConfigError("no feature groups enabled");
  FeatureLayout layout;
  for (auto g : enabled.groups()) {
    const auto w = widths.width(g);
    layout.segments.push_back({g, layout.width, w});
    layout.width += w;
  }
  return layout;
}

const Segment* FeatureLayout::find(FeatureGroup g) const {
  for (const auto& s : segments)
    if (s.group == g) return &s;
  return nullptr;
}

GroupSet FeatureLayout::groups() const {
  GroupSet set;
  for (const auto& s : segments) set.insert(s.group);
  return set;
}

std::string FeatureLayout::describe() const {
  std::string s;
  for (const auto& seg : segments) {
    if (!s.empty()) s += ' ';
    s += std::string(group_name(seg.group)) + ":" + std::to_string(seg.width);
  }
  return s;
}

FeatureLayout FeatureLayout::parse(std::string_view descriptor) {
  FeatureLayout layout;
  for (auto part : text::split(text::trim(descriptor), ' ')) {
    if (part.empty()) continue;
    const auto colon = part.find(':');
    const auto g = parse_group(part.substr(0, colon));
    const auto w = colon == std::string_view::npos ? std::nullopt
                                                   : text::parse_int(part.substr(colon + 1));
    if (!g || !w || *w < 0)
      throw ParseError("bad layout segment \"" + std::string(part) + "\"");
    if (!layout.segments.empty() &&
        static_cast<int>(*g) <= static_cast<int>(layout.segments.back().group))
      throw ParseError("layout segments out of canonical order");
    layout.segments.push_back({*g, layout.width, static_cast<std::size_t>(*w)});
    layout.width += static_cast<std::size_t>(*w);
  }
  return layout;
}

WordList::WordList(const std::vector<std::string>& lemmas) {
  for (const auto& w : lemmas) words_.insert(text::to_lower(w));
}

WordList WordList::load(const std::string& path) { return WordList(text::read_word_list(path)); }

bool WordList::contains(std::string_view lemma) const {
  return words_.count(text::to_lower(lemma)) > 0;
}

GroupWidths FeatureContext::widths() const {
  return {store ? store->dim() : 0, topics ? topics->size() : 0};
}

std::vector<std::string> FeatureContext::missing_resources(GroupSet enabled) const {
  std::vector<std::string> missing;
  if (enabled.contains(FeatureGroup::BERT) && !scores) missing.push_back("scores");
  if ((enabled.contains(FeatureGroup::WE) || enabled.contains(FeatureGroup::CT)) && !store)
    missing.push_back("embeddings");
  if (enabled.contains(FeatureGroup::CT) && !topics) missing.push_back("topics");
  if (enabled.contains(FeatureGroup::HW) && !word_list) missing.push_back("word list");
  return missing;
}

namespace {

bool is_will_or_shall(const Token& t) {
  const auto lemma = text::to_lower(t.lemma);
  return lemma == "will" || lemma == "shall";
}

const std::string* morph_value(const Token& t, const std::string& key) {
  const auto it = t.morph.find(key);
  return it == t.morph.end() ? nullptr : &it->second;
}

bool is_base_verb(const Token& t) { return t.xpos == "VB"; }

bool is_punct(const Token& t) { return t.upos == "PUNCT" || t.xpos == "." || t.xpos == ","; }

// Tokens allowed between a future marker and its base verb: negation,
// adverbs, and the subject of an inverted question ("will you go").
bool is_future_filler(const Token& t) {
  return t.upos == "PART" || t.upos == "ADV" || t.upos == "PRON" || t.upos == "PROPN" ||
         t.xpos == "RB" || t.xpos == "PRP";
}

std::optional<std::size_t> next_base_verb(const std::vector<Token>& toks, std::size_t from,
                                          std::size_t max_gap) {
  for (std::size_t j = from; j < toks.size() && j <= from + max_gap; ++j) {
    if (is_base_verb(toks[j])) return j;
    if (is_punct(toks[j]) || !is_future_filler(toks[j])) return std::nullopt;
  }
  return std::nullopt;
}

std::array<double, 3> verb_tense_flags(const std::vector<Token>& toks) {
  std::array<double, 3> flags{0.0, 0.0, 0.0};  // past, present, future
  std::vector<char> consumed(toks.size(), 0);

  for (std::size_t i = 0; i < toks.size(); ++i) {
    const auto& t = toks[i];
    if (t.xpos == "MD" && is_will_or_shall(t)) {
      if (const auto j = next_base_verb(toks, i + 1, 3)) {
        flags[2] = 1.0;
        consumed[i] = consumed[*j] = 1;
      }
      continue;
    }
    // be + going + to + base verb
    if (t.xpos == "VBG" && text::to_lower(t.lemma) == "go" && i + 1 < toks.size() &&
        text::to_lower(toks[i + 1].surface) == "to" &&
        (toks[i + 1].xpos == "TO" || toks[i + 1].upos == "PART")) {
      if (const auto j = next_base_verb(toks, i + 2, 1)) {
        flags[2] = 1.0;
        consumed[i] = consumed[i + 1] = consumed[*j] = 1;
        for (std::size_t back = 1; back <= 3 && back <= i; ++back) {
          if (text::to_lower(toks[i - back].lemma) == "be") {
            consumed[i - back] = 1;
            break;
          }
        }
      }
    }
  }

  for (std::size_t i = 0; i < toks.size(); ++i) {
    if (consumed[i]) continue;
    const auto& t = toks[i];
    const auto* form = morph_value(t, "VerbForm");
    if (form && *form != "Fin") continue;
    if (const auto* tense = morph_value(t, "Tense")) {
      if (*tense == "Past") flags[0] = 1.0;
      if (*tense == "Pres") flags[1] = 1.0;
      continue;
    }
    if (t.xpos == "VBD") flags[0] = 1.0;
    if (t.xpos == "VBZ" || t.xpos == "VBP") flags[1] = 1.0;
  }
  return flags;
}

}  // namespace

std::vector<double> extract_group(FeatureGroup group, const AnnotatedSentence& sentence,
                                  const FeatureContext& ctx) {
  const auto& toks = sentence.tokens;
  switch (group) {
    case FeatureGroup::BERT: {
      if (!ctx.scores) throw DataError("BERT feature requested without scores");
      const auto s = ctx.scores->find(sentence.doc_id, sentence.line_no);
      if (!s)
        throw DataError("no score for " + sentence.doc_id + ":" +
                        std::to_string(sentence.line_no));
      return {*s};
    }
    case FeatureGroup::WE:
      if (!ctx.store) throw DataError("WE feature requested without embeddings");
      return sentence_vector(toks, *ctx.store, ctx.we_policy);
    case FeatureGroup::CT:
      if (!ctx.store || !ctx.topics)
        throw DataError("CT feature requested without embeddings and topics");
      return topic_similarities(toks, *ctx.topics, *ctx.store);
    case FeatureGroup::CS: {
      std::vector<double> v(4, 0.0);
      for (const auto& t : toks) {
        if (t.xpos == "JJR") v[0] += 1;
        else if (t.xpos == "JJS") v[1] += 1;
        else if (t.xpos == "RBR") v[2] += 1;
        else if (t.xpos == "RBS") v[3] += 1;
      }
      return v;
    }
    case FeatureGroup::HW: {
      if (!ctx.word_list) throw DataError("HW feature requested without a word list");
      const bool hit = std::any_of(toks.begin(), toks.end(),
                                   [&](const Token& t) { return ctx.word_list->contains(t.lemma); });
      return {hit ? 1.0 : 0.0};
    }
    case FeatureGroup::VT: {
      const auto f = verb_tense_flags(toks);
      return {f.begin(), f.end()};
    }
    case FeatureGroup::POS: {
      std::vector<double> v(4, 0.0);
      for (const auto& t : toks) {
        if (t.upos == "NOUN") v[0] += 1;
        else if (t.upos == "VERB") v[1] += 1;
        else if (t.upos == "ADV") v[2] += 1;
        else if (t.upos == "ADJ") v[3] += 1;
      }
      return v;
    }
  }
  return {};
}

FeatureVector FeatureMatrix::vector(std::size_t i) const {
  const auto r = values.row(i);
  return {keys[i], std::vector<double>(r.begin(), r.end()), layout};
}

namespace {

struct RowRef {
  const ClaimRecord* record;
};

std::vector<RowRef> flatten(const Corpus& corpus) {
  std::vector<RowRef> rows;
  rows.reserve(corpus.sentence_count());
  for (const auto& d : corpus.documents)
    for (const auto& r : d.records) rows.push_back({&r});
  return rows;
}

void fill_row(const AnnotatedSentence& sentence, const FeatureContext& ctx,
              const FeatureLayout& layout, std::span<double> out) {
  for (const auto& seg : layout.segments) {
    const auto v = extract_group(seg.group, sentence, ctx);
    if (v.size() != seg.width)
      throw DataError(std::string(group_name(seg.group)) + " produced " +
                      std::to_string(v.size()) + " values, layout expects " +
                      std::to_string(seg.width));
    std::copy(v.begin(), v.end(), out.begin() + static_cast<std::ptrdiff_t>(seg.offset));
  }
}

FeatureMatrix prepare(const Corpus& corpus, const FeatureContext& ctx, GroupSet enabled,
                      std::vector<RowRef>& rows) {
  if (enabled.empty()) throw DataError("no feature groups enabled");
  const auto missing = ctx.missing_resources(enabled);
  if (!missing.empty()) {
    std::string msg = "missing resources for enabled groups:";
    for (const auto& m : missing) msg += " " + m;
    throw DataError(msg);
  }
  rows = flatten(corpus);
  FeatureMatrix m;
  m.layout = std::make_shared<const FeatureLayout>(FeatureLayout::make(enabled, ctx.widths()));
  m.keys.reserve(rows.size());
  for (const auto& r : rows) m.keys.emplace_back(r.record->doc_id, r.record->line_no);
  m.values = DenseMatrix(rows.size(), m.layout->width);
  return m;
}

std::string row_error(const RowRef& r, const char* what) {
  return r.record->doc_id + ":" + std::to_string(r.record->line_no) + ": " + what;
}

}  // namespace

FeatureMatrix assemble_features(const Corpus& corpus, const AnnotationIndex& index,
                                const FeatureContext& ctx, GroupSet enabled) {
  std::vector<RowRef> rows;
  auto m = prepare(corpus, ctx, enabled, rows);
  std::vector<std::string> errors(rows.size());

#pragma omp parallel for schedule(dynamic, 64)
  for (std::size_t i = 0; i < rows.size(); ++i) {
    try {
      const auto& s = index.at(rows[i].record->doc_id, rows[i].record->line_no);
      fill_row(s, ctx, *m.layout, m.values.row(i));
    } catch (const std::exception& e) {
      errors[i] = row_error(rows[i], e.what());
    }
  }
  // Report the first failure in corpus order, independent of scheduling.
  for (const auto& e : errors)
    if (!e.empty()) throw DataError(e);
  return m;
}

FeatureMatrix assemble_features_serial(const Corpus& corpus, const AnnotationIndex& index,
                                       const FeatureContext& ctx, GroupSet enabled) {
  std::vector<RowRef> rows;
  auto m = prepare(corpus, ctx, enabled, rows);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    try {
      const auto& s = index.at(rows[i].record->doc_id, rows[i].record->line_no);
      fill_row(s, ctx, *m.layout, m.values.row(i));
    } catch (const std::exception& e) {
      throw DataError(row_error(rows[i], e.what()));
    }
  }
  return m;
}

FeatureMatrix project(const FeatureMatrix& m, GroupSet subset) {
  if (subset.empty()) throw DataError("project: empty group set");
  GroupWidths widths;
  std::vector<const Segment*> src;
  for (auto g : subset.groups()) {
    const auto* seg = m.layout->find(g);
    if (!seg)
      throw DataError("project: group " + std::string(group_name(g)) + " not in layout");
    src.push_back(seg);
    if (g == FeatureGroup::WE) widths.embedding_dim = seg->width;
    if (g == FeatureGroup::CT) widths.topic_count = seg->width;
  }
  FeatureMatrix out;
  out.layout = std::make_shared<const FeatureLayout>(FeatureLayout::make(subset, widths));
  out.keys = m.keys;
  out.values = DenseMatrix(m.rows(), out.layout->width);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    const auto from = m.values.row(i);
    auto to = out.values.row(i);
    for (std::size_t k = 0; k < src.size(); ++k) {
      const auto& dst = out.layout->segments[k];
      std::copy_n(from.begin() + static_cast<std::ptrdiff_t>(src[k]->offset), src[k]->width,
                  to.begin() + static_cast<std::ptrdiff_t>(dst.offset));
    }
  }
  return out;
}

std::pair<FeatureMatrix, Standardizer> standardize(const FeatureMatrix& m) {
  if (m.rows() == 0) throw DataError("standardize: empty matrix");
  Standardizer s{kernels::column_stats(m.values)};
  return {standardize(m, s), std::move(s)};
}

FeatureMatrix standardize(const FeatureMatrix& m, const Standardizer& fitted) {
  if (fitted.width() != m.values.cols)
    throw DataError("standardizer width " + std::to_string(fitted.width()) +
                    " does not match feature width " + std::to_string(m.values.cols));
  FeatureMatrix out = m;
  kernels::standardize_in_place(out.values, fitted.stats);
  return out;
}

void write_feature_tsv(std::ostream& out, const FeatureMatrix& m) {
  out << "doc_id\tline_no";
  for (const auto& seg : m.layout->segments)
    for (std::size_t k = 0; k < seg.width; ++k) out << '\t' << group_name(seg.group) << '.' << k;
  out << '\n';
  for (std::size_t i = 0; i < m.rows(); ++i) {
    out << m.keys[i].first << '\t' << m.keys[i].second;
    for (double v : m.values.row(i)) out << '\t' << text::format_double(v);
    out << '\n';
  }
}

}  // namespace checkworthy
