#include "checkworthy/corpus.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <unordered_map>

#include "checkworthy/error.hpp"
#include "checkworthy/text.hpp"

namespace checkworthy {

namespace fs = std::filesystem;

std::size_t Corpus::sentence_count() const {
  std::size_t n = 0;
  for (const auto& d : documents) n += d.records.size();
  return n;
}

const Document* Corpus::find(const std::string& doc_id) const {
  for (const auto& d : documents)
    if (d.doc_id == doc_id) return &d;
  return nullptr;
}

namespace {

[[noreturn]] void fail(const std::string& doc_id, std::size_t line,
                       const std::string& what) {
  throw ParseError(doc_id + ":" + std::to_string(line) + ": " + what);
}

std::optional<int> parse_label(std::string_view s) {
  if (s == "0") return 0;
  if (s == "1") return 1;
  return std::nullopt;
}

}  // namespace

std::vector<ClaimRecord> parse_transcript_tsv(std::istream& in,
                                              const std::string& doc_id) {
  std::vector<ClaimRecord> out;
  std::set<std::int64_t> seen;
  std::string line;
  std::size_t file_line = 0;
  while (text::read_line(in, line)) {
    ++file_line;
    if (file_line == 1) text::strip_bom(line);
    if (text::trim(line).empty()) continue;

    const auto fields = text::split(line, '\t');
    if (fields.size() != 3 && fields.size() != 4)
      fail(doc_id, file_line,
           "expected 3 or 4 tab-separated fields, got " +
               std::to_string(fields.size()));

    const auto line_no = text::parse_int(text::trim(fields[0]));
    if (!line_no || *line_no <= 0)
      fail(doc_id, file_line,
           "invalid line number \"" + std::string(fields[0]) + "\"");
    if (!seen.insert(*line_no).second)
      fail(doc_id, file_line, "duplicate line_no " + std::to_string(*line_no));
    if (!out.empty() && *line_no < out.back().line_no)
      fail(doc_id, file_line,
           "line numbers must be increasing (" + std::to_string(*line_no) +
               " after " + std::to_string(out.back().line_no) + ")");

    ClaimRecord rec;
    rec.doc_id = doc_id;
    rec.line_no = *line_no;
    rec.speaker = std::string(fields[1]);
    rec.text = std::string(fields[2]);
    if (text::trim(rec.text).empty()) fail(doc_id, file_line, "empty text");
    if (fields.size() == 4) {
      rec.label = parse_label(text::trim(fields[3]));
      if (!rec.label)
        fail(doc_id, file_line,
             "invalid label \"" + std::string(fields[3]) + "\"");
    }
    out.push_back(std::move(rec));
  }

  const bool any = std::any_of(out.begin(), out.end(),
                               [](const auto& r) { return r.label.has_value(); });
  const bool all = std::all_of(out.begin(), out.end(),
                               [](const auto& r) { return r.label.has_value(); });
  if (any && !all)
    throw ParseError(doc_id + ": mixes labeled and unlabeled lines");
  return out;
}

void write_transcript_tsv(std::ostream& out, const Document& doc) {
  for (const auto& r : doc.records) {
    out << r.line_no << '\t' << r.speaker << '\t' << r.text;
    if (r.label) out << '\t' << *r.label;
    out << '\n';
  }
}

Corpus attach_gold_labels(Corpus corpus, const std::vector<GoldSource>& gold) {
  std::map<std::string, std::unordered_map<std::int64_t, ClaimRecord*>> index;
  for (auto& d : corpus.documents)
    for (auto& r : d.records) index[d.doc_id][r.line_no] = &r;

  for (const auto& src : gold) {
    std::string line;
    std::size_t file_line = 0;
    const std::string name = src.name.empty() ? "gold" : src.name;
    while (text::read_line(*src.stream, line)) {
      ++file_line;
      if (file_line == 1) text::strip_bom(line);
      if (text::trim(line).empty()) continue;
      auto fields = text::split(line, '\t');
      std::string doc_id;
      if (fields.size() == 2) {
        if (!src.doc_id)
          fail(name, file_line, "2-field gold line needs a target document");
        doc_id = *src.doc_id;
      } else if (fields.size() == 3) {
        doc_id = std::string(text::trim(fields[0]));
        fields.erase(fields.begin());
      } else {
        fail(name, file_line, "expected 2 or 3 tab-separated fields");
      }
      const auto line_no = text::parse_int(text::trim(fields[0]));
      if (!line_no)
        fail(name, file_line,
             "invalid line number \"" + std::string(fields[0]) + "\"");
      const auto label = parse_label(text::trim(fields[1]));
      if (!label)
        fail(name, file_line,
             "invalid label \"" + std::string(fields[1]) + "\"");

      auto doc_it = index.find(doc_id);
      if (doc_it == index.end())
        fail(name, file_line, "unknown document \"" + doc_id + "\"");
      auto rec_it = doc_it->second.find(*line_no);
      if (rec_it == doc_it->second.end())
        fail(name, file_line,
             "unknown line " + doc_id + ":" + std::to_string(*line_no));
      rec_it->second->label = *label;
    }
  }

  std::vector<std::string> missing;
  for (const auto& d : corpus.documents)
    for (const auto& r : d.records)
      if (!r.label) missing.push_back(d.doc_id + ":" + std::to_string(r.line_no));
  if (!missing.empty()) {
    std::string msg = "unlabeled after gold attachment (" +
                      std::to_string(missing.size()) + "):";
    const std::size_t shown = std::min<std::size_t>(missing.size(), 20);
    for (std::size_t i = 0; i < shown; ++i) msg += " " + missing[i];
    if (shown < missing.size()) msg += " ...";
    throw DataError(msg);
  }
  return corpus;
}

CorpusStats corpus_stats(const Corpus& corpus) {
  CorpusStats s;
  s.doc_count = corpus.documents.size();
  for (const auto& d : corpus.documents) {
    for (const auto& r : d.records) {
      if (!r.label)
        throw DataError("unlabeled record " + d.doc_id + ":" +
                        std::to_string(r.line_no));
      ++s.sentence_count;
      s.positive_count += static_cast<std::size_t>(*r.label);
    }
  }
  return s;
}

std::string file_stem(const std::string& path) {
  return fs::path(path).stem().string();
}

std::vector<std::string> expand_paths(const std::vector<std::string>& paths) {
  std::vector<std::string> files;
  for (const auto& p : paths) {
    if (fs::is_directory(p)) {
      std::vector<std::string> entries;
      for (const auto& e : fs::directory_iterator(p))
        if (e.is_regular_file()) entries.push_back(e.path().string());
      std::sort(entries.begin(), entries.end());
      files.insert(files.end(), entries.begin(), entries.end());
    } else {
      files.push_back(p);
    }
  }
  return files;
}

Corpus load_corpus(const std::vector<std::string>& paths, Split split) {
  const auto files = expand_paths(paths);
  Corpus corpus;
  corpus.split = split;
  corpus.documents.resize(files.size());

  std::vector<std::string> errors(files.size());
#pragma omp parallel for schedule(dynamic)
  for (std::size_t i = 0; i < files.size(); ++i) {
    try {
      std::ifstream in(files[i]);
      if (!in) throw ParseError("cannot open transcript \"" + files[i] + "\"");
      const auto doc_id = file_stem(files[i]);
      corpus.documents[i].doc_id = doc_id;
      corpus.documents[i].records = parse_transcript_tsv(in, doc_id);
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  }
  for (const auto& e : errors)
    if (!e.empty()) throw ParseError(e);

  std::set<std::string> ids;
  for (const auto& d : corpus.documents)
    if (!ids.insert(d.doc_id).second)
      throw DataError("duplicate doc_id \"" + d.doc_id + "\"");
  return corpus;
}

}  // namespace checkworthy
