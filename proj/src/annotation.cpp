#include "checkworthy/annotation.hpp"

#include <fstream>
#include <set>

#include "checkworthy/error.hpp"
#include "checkworthy/text.hpp"

namespace checkworthy {

StopwordList::StopwordList(const std::vector<std::string>& words) {
  for (const auto& w : words) words_.insert(text::to_lower(w));
}

StopwordList StopwordList::load(const std::string& path) {
  return StopwordList(text::read_word_list(path));
}

bool StopwordList::contains(std::string_view word) const {
  return words_.count(text::to_lower(word)) > 0;
}

namespace {

[[noreturn]] void block_error(std::size_t block, std::size_t line,
                              const std::string& what) {
  throw ParseError("conllu block " + std::to_string(block) + " (line " +
                   std::to_string(line) + "): " + what);
}

std::map<std::string, std::string> parse_feats(std::string_view col) {
  std::map<std::string, std::string> feats;
  if (col == "_" || col.empty()) return feats;
  for (auto kv : text::split(col, '|')) {
    const auto eq = kv.find('=');
    if (eq == std::string_view::npos)
      feats.emplace(std::string(kv), "");
    else
      feats.emplace(std::string(kv.substr(0, eq)), std::string(kv.substr(eq + 1)));
  }
  return feats;
}

struct Block {
  std::size_t index = 0;
  std::size_t first_line = 0;
  std::string sent_id;
  bool has_sent_id = false;
  std::vector<Token> tokens;
  std::int64_t next_id = 1;
};

AnnotatedSentence finish(Block& b) {
  if (!b.has_sent_id) block_error(b.index, b.first_line, "missing sent_id metadata");
  const auto colon = b.sent_id.rfind(':');
  if (colon == std::string::npos || colon == 0)
    block_error(b.index, b.first_line,
                "sent_id \"" + b.sent_id + "\" is not <doc_id>:<line_no>");
  const auto line_no = text::parse_int(std::string_view(b.sent_id).substr(colon + 1));
  if (!line_no || *line_no <= 0)
    block_error(b.index, b.first_line, "bad line number in sent_id \"" + b.sent_id + "\"");
  AnnotatedSentence s;
  s.doc_id = b.sent_id.substr(0, colon);
  s.line_no = *line_no;
  s.tokens = std::move(b.tokens);
  return s;
}

}  // namespace

std::vector<AnnotatedSentence> parse_conllu(std::istream& in,
                                            const StopwordList* stopwords) {
  std::vector<AnnotatedSentence> out;
  std::string line;
  std::size_t line_no = 0;
  Block block;
  bool open = false;

  auto close = [&] {
    if (!open) return;
    out.push_back(finish(block));
    open = false;
  };

  while (text::read_line(in, line)) {
    ++line_no;
    if (line_no == 1) text::strip_bom(line);
    if (text::trim(line).empty()) {
      close();
      continue;
    }
    if (!open) {
      block = Block{};
      block.index = out.size();
      block.first_line = line_no;
      open = true;
    }
    if (line.front() == '#') {
      auto body = text::trim(std::string_view(line).substr(1));
      if (body.substr(0, 7) == "sent_id") {
        auto rest = text::trim(body.substr(7));
        if (!rest.empty() && rest.front() == '=') {
          block.sent_id = std::string(text::trim(rest.substr(1)));
          block.has_sent_id = true;
        }
      }
      continue;
    }

    const auto cols = text::split(line, '\t');
    if (cols.size() != 10)
      block_error(block.index, line_no,
                  "expected 10 columns, got " + std::to_string(cols.size()));
    const auto id = cols[0];
    if (id.find('-') != std::string_view::npos || id.find('.') != std::string_view::npos)
      continue;  // multiword range or empty node
    const auto n = text::parse_int(id);
    if (!n || *n != block.next_id)
      block_error(block.index, line_no,
                  "non-contiguous token id \"" + std::string(id) + "\", expected " +
                      std::to_string(block.next_id));
    ++block.next_id;

    Token t;
    t.surface = std::string(cols[1]);
    t.lemma = std::string(cols[2]);
    t.upos = std::string(cols[3]);
    t.xpos = std::string(cols[4]);
    if (t.surface.empty() || t.lemma.empty())
      block_error(block.index, line_no, "empty form or lemma");
    if (t.xpos.empty()) t.xpos = "_";
    t.morph = parse_feats(cols[5]);
    if (stopwords) t.is_stopword = stopwords->contains(t.surface);
    block.tokens.push_back(std::move(t));
  }
  close();
  return out;
}

void write_conllu(std::ostream& out, const std::vector<AnnotatedSentence>& sentences) {
  for (const auto& s : sentences) {
    out << "# sent_id = " << s.doc_id << ':' << s.line_no << '\n';
    for (std::size_t i = 0; i < s.tokens.size(); ++i) {
      const auto& t = s.tokens[i];
      std::string feats;
      for (const auto& [k, v] : t.morph) {
        if (!feats.empty()) feats += '|';
        feats += k + "=" + v;
      }
      if (feats.empty()) feats = "_";
      out << (i + 1) << '\t' << t.surface << '\t' << t.lemma << '\t'
          << (t.upos.empty() ? "_" : t.upos) << '\t' << t.xpos << '\t' << feats
          << "\t_\t_\t_\t_\n";
    }
    out << '\n';
  }
}

const AnnotatedSentence& AnnotationIndex::at(const std::string& doc_id,
                                             std::int64_t line_no) const {
  const auto it = map_.find({doc_id, line_no});
  if (it == map_.end())
    throw DataError("no annotation for " + doc_id + ":" + std::to_string(line_no));
  return it->second;
}

namespace {

std::string join_keys(const std::vector<SentenceKey>& keys) {
  std::string s;
  const std::size_t shown = std::min<std::size_t>(keys.size(), 20);
  for (std::size_t i = 0; i < shown; ++i)
    s += " " + keys[i].first + ":" + std::to_string(keys[i].second);
  if (shown < keys.size()) s += " ...";
  return s;
}

}  // namespace

AnnotationIndex align_annotations(std::vector<AnnotatedSentence> sentences,
                                  const Corpus& corpus) {
  std::set<SentenceKey> wanted;
  for (const auto& d : corpus.documents)
    for (const auto& r : d.records) wanted.emplace(d.doc_id, r.line_no);

  AnnotationIndex index;
  std::vector<SentenceKey> duplicate, unknown, missing;
  for (auto& s : sentences) {
    SentenceKey key{s.doc_id, s.line_no};
    if (!wanted.count(key)) {
      unknown.push_back(key);
      continue;
    }
    if (!index.map_.emplace(key, std::move(s)).second) duplicate.push_back(key);
  }
  for (const auto& k : wanted)
    if (!index.map_.count(k)) missing.push_back(k);

  std::string msg;
  if (!duplicate.empty()) msg += "duplicate key:" + join_keys(duplicate) + "; ";
  if (!unknown.empty()) msg += "annotation for unknown record:" + join_keys(unknown) + "; ";
  if (!missing.empty()) msg += "missing annotation:" + join_keys(missing) + "; ";
  if (!msg.empty()) throw DataError(msg.substr(0, msg.size() - 2));
  return index;
}

std::vector<AnnotatedSentence> load_conllu_files(const std::vector<std::string>& paths,
                                                 const StopwordList* stopwords) {
  const auto files = expand_paths(paths);
  std::vector<std::vector<AnnotatedSentence>> parts(files.size());
  std::vector<std::string> errors(files.size());
#pragma omp parallel for schedule(dynamic)
  for (std::size_t i = 0; i < files.size(); ++i) {
    try {
      std::ifstream in(files[i]);
      if (!in) throw ParseError("cannot open annotation file \"" + files[i] + "\"");
      parts[i] = parse_conllu(in, stopwords);
    } catch (const std::exception& e) {
      errors[i] = files[i] + ": " + e.what();
    }
  }
  for (const auto& e : errors)
    if (!e.empty()) throw ParseError(e);
  std::vector<AnnotatedSentence> all;
  for (auto& p : parts)
    for (auto& s : p) all.push_back(std::move(s));
  return all;
}

}  // namespace checkworthy
