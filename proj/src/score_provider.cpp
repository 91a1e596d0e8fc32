#include "checkworthy/score_provider.hpp"

#include <cmath>
#include <fstream>
#include <future>
#include <set>

#include <httplib.h>
#include <json.hpp>

#include "checkworthy/error.hpp"
#include "checkworthy/text.hpp"

namespace checkworthy {

using json = nlohmann::json;

void ScoreMap::insert(const std::string& doc_id, std::int64_t line_no, double score) {
  if (!(score >= 0.0 && score <= 1.0))
    throw DataError("score for " + doc_id + ":" + std::to_string(line_no) +
                    " outside [0,1]: " + text::format_double(score));
  if (!scores_.emplace(SentenceKey{doc_id, line_no}, score).second)
    throw DataError("duplicate score for " + doc_id + ":" + std::to_string(line_no));
}

std::optional<double> ScoreMap::find(const std::string& doc_id, std::int64_t line_no) const {
  const auto it = scores_.find({doc_id, line_no});
  if (it == scores_.end()) return std::nullopt;
  return it->second;
}

ScoreMap parse_scores_tsv(std::istream& in, const std::string& name) {
  ScoreMap map;
  std::string line;
  std::size_t line_no = 0;
  auto fail = [&](const std::string& what) {
    throw ParseError(name + ":" + std::to_string(line_no) + ": " + what);
  };
  while (text::read_line(in, line)) {
    ++line_no;
    if (line_no == 1) text::strip_bom(line);
    if (text::trim(line).empty()) continue;
    const auto f = text::split(line, '\t');
    if (f.size() != 3) fail("expected doc_id<TAB>line_no<TAB>score");
    const auto ln = text::parse_int(text::trim(f[1]));
    if (!ln || *ln <= 0) fail("invalid line number \"" + std::string(f[1]) + "\"");
    const auto score = text::parse_double(text::trim(f[2]));
    if (!score) fail("invalid score \"" + std::string(f[2]) + "\"");
    try {
      map.insert(std::string(text::trim(f[0])), *ln, *score);
    } catch (const DataError& e) {
      fail(e.what());
    }
  }
  return map;
}

ScoreMap load_scores_tsv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open score file \"" + path + "\"");
  return parse_scores_tsv(in, path);
}

void write_scores_tsv(std::ostream& out, const ScoreMap& scores) {
  for (const auto& [key, score] : scores.entries())
    out << key.first << '\t' << key.second << '\t' << text::format_double(score) << '\n';
}

std::string encode_score_request(const std::vector<ScoreRequest>& batch) {
  json sentences = json::array();
  for (const auto& s : batch)
    sentences.push_back({{"doc_id", s.doc_id}, {"line_no", s.line_no}, {"text", s.text}});
  return json{{"sentences", sentences}}.dump();
}

std::vector<ScoreRequest> decode_score_request(const std::string& body) {
  std::vector<ScoreRequest> out;
  try {
    const auto j = json::parse(body);
    for (const auto& s : j.at("sentences"))
      out.push_back({s.at("doc_id").get<std::string>(), s.at("line_no").get<std::int64_t>(),
                     s.at("text").get<std::string>()});
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed score request: ") + e.what());
  }
  return out;
}

std::string encode_score_response(const ScoreMap& scores) {
  json arr = json::array();
  for (const auto& [key, score] : scores.entries())
    arr.push_back({{"doc_id", key.first}, {"line_no", key.second}, {"score", score}});
  return json{{"scores", arr}}.dump();
}

namespace {

struct Endpoint {
  std::string base;  // scheme://host[:port]
  std::string path;  // ends with /score
};

Endpoint split_endpoint(const std::string& url) {
  const auto scheme = url.find("://");
  if (scheme == std::string::npos) throw ConfigError("score endpoint must be a URL: " + url);
  if (url.compare(0, scheme, "http") != 0)
    throw ConfigError("only http:// score endpoints are supported: " + url);
  const auto slash = url.find('/', scheme + 3);
  Endpoint ep;
  ep.base = url.substr(0, slash);
  std::string path = slash == std::string::npos ? "" : url.substr(slash);
  while (!path.empty() && path.back() == '/') path.pop_back();
  const std::string suffix = "/score";
  if (path.size() < suffix.size() || path.compare(path.size() - suffix.size(), suffix.size(), suffix) != 0)
    path += suffix;
  ep.path = path;
  return ep;
}

ScoreMap fetch_batch(const Endpoint& ep, const std::vector<ScoreRequest>& batch,
                     const HttpScoreOptions& opt) {
  const auto body = encode_score_request(batch);
  std::string last_error;
  for (int attempt = 0; attempt <= std::max(0, opt.retries); ++attempt) {
    httplib::Client cli(ep.base);
    const auto secs = opt.timeout.count() / 1000;
    const auto usecs = (opt.timeout.count() % 1000) * 1000;
    cli.set_connection_timeout(secs, usecs);
    cli.set_read_timeout(secs, usecs);
    cli.set_write_timeout(secs, usecs);
    auto res = cli.Post(ep.path, body, "application/json");
    if (!res) {
      last_error = "transport failure: " + httplib::to_string(res.error());
      continue;
    }
    if (res->status >= 500) {
      last_error = "server error " + std::to_string(res->status);
      continue;
    }
    if (res->status < 200 || res->status >= 300)
      throw TransportError("score service returned status " + std::to_string(res->status));

    std::set<SentenceKey> wanted;
    for (const auto& s : batch) wanted.emplace(s.doc_id, s.line_no);
    ScoreMap map;
    try {
      const auto j = json::parse(res->body);
      for (const auto& e : j.at("scores")) {
        const auto doc = e.at("doc_id").get<std::string>();
        const auto line = e.at("line_no").get<std::int64_t>();
        const auto& s = e.at("score");
        if (!s.is_number())
          throw DataError("non-numeric score for " + doc + ":" + std::to_string(line));
        if (!wanted.count({doc, line}))
          throw DataError("unexpected key " + doc + ":" + std::to_string(line) + " in response");
        map.insert(doc, line, s.get<double>());
      }
    } catch (const json::exception& e) {
      throw DataError(std::string("malformed score response: ") + e.what());
    }
    if (map.size() != wanted.size())
      throw DataError("incomplete response: " + std::to_string(map.size()) + " of " +
                      std::to_string(wanted.size()) + " scores");
    return map;
  }
  throw TransportError("score service unreachable at " + ep.base + ep.path + ": " + last_error);
}

}  // namespace

ScoreMap fetch_scores_http(const std::string& endpoint, const std::vector<ScoreRequest>& sentences,
                           const HttpScoreOptions& options) {
  if (options.batch_size == 0) throw ConfigError("batch size must be positive");
  const auto ep = split_endpoint(endpoint);

  std::vector<std::vector<ScoreRequest>> batches;
  for (std::size_t i = 0; i < sentences.size(); i += options.batch_size)
    batches.emplace_back(sentences.begin() + static_cast<std::ptrdiff_t>(i),
                         sentences.begin() + static_cast<std::ptrdiff_t>(
                                                 std::min(sentences.size(), i + options.batch_size)));

  std::vector<ScoreMap> results(batches.size());
  const std::size_t width = std::max<std::size_t>(1, options.parallelism);
  for (std::size_t start = 0; start < batches.size(); start += width) {
    std::vector<std::future<ScoreMap>> wave;
    const std::size_t end = std::min(batches.size(), start + width);
    for (std::size_t b = start; b < end; ++b)
      wave.push_back(std::async(std::launch::async,
                                [&, b] { return fetch_batch(ep, batches[b], options); }));
    for (std::size_t b = start; b < end; ++b) results[b] = wave[b - start].get();
  }

  ScoreMap merged;
  for (const auto& r : results)
    for (const auto& [key, score] : r.entries()) merged.insert(key.first, key.second, score);
  return merged;
}

}  // namespace checkworthy
