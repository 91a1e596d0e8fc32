#include <doctest.h>

#include <atomic>
#include <cmath>
#include <httplib.h>
#include <json.hpp>
#include <sstream>
#include <thread>

#include "checkworthy/error.hpp"
#include "checkworthy/score_provider.hpp"

using namespace checkworthy;
using json = nlohmann::json;

namespace {

ScoreMap parse(const std::string& s) {
  std::istringstream in(s);
  return parse_scores_tsv(in);
}

// In-process scorer. `mode` selects a misbehaviour for the next responses.
class FakeScorer {
 public:
  enum class Mode { ok, drop_one, nan, out_of_range, extra_key, server_error, bad_request };

  FakeScorer() {
    server_.Post("/score", [this](const httplib::Request& req, httplib::Response& res) {
      ++requests_;
      const auto sentences = decode_score_request(req.body);
      if (mode_ == Mode::server_error) {
        res.status = 503;
        return;
      }
      if (mode_ == Mode::bad_request) {
        res.status = 400;
        return;
      }
      json out = {{"scores", json::array()}};
      for (std::size_t i = 0; i < sentences.size(); ++i) {
        const auto& s = sentences[i];
        if (mode_ == Mode::drop_one && i == 0) continue;
        json score = score_for(s);
        if (mode_ == Mode::nan && i == 0) score = "NaN";
        if (mode_ == Mode::out_of_range && i == 0) score = 1.5;
        out["scores"].push_back({{"doc_id", s.doc_id}, {"line_no", s.line_no}, {"score", score}});
      }
      if (mode_ == Mode::extra_key)
        out["scores"].push_back({{"doc_id", "zz"}, {"line_no", 1}, {"score", 0.5}});
      res.set_content(out.dump(), "application/json");
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~FakeScorer() {
    server_.stop();
    thread_.join();
  }

  static double score_for(const ScoreRequest& s) {
    return static_cast<double>(s.text.size() % 10) / 10.0 + 0.01 * static_cast<double>(s.line_no % 5);
  }
  std::string endpoint() const { return "http://127.0.0.1:" + std::to_string(port_); }
  void set_mode(Mode m) { mode_ = m; }
  int requests() const { return requests_; }

 private:
  httplib::Server server_;
  std::thread thread_;
  int port_ = 0;
  std::atomic<Mode> mode_{Mode::ok};
  std::atomic<int> requests_{0};
};

std::vector<ScoreRequest> requests(int n) {
  std::vector<ScoreRequest> r;
  for (int i = 1; i <= n; ++i)
    r.push_back({i % 2 ? "doc_a" : "doc_b", i, std::string(static_cast<std::size_t>(i), 'x') + " \"quoted\" é"});
  return r;
}

HttpScoreOptions fast(std::size_t batch) {
  HttpScoreOptions o;
  o.batch_size = batch;
  o.timeout = std::chrono::milliseconds(2000);
  o.retries = 1;
  return o;
}

}  // namespace

TEST_CASE("score TSV parsing") {
  const auto m = parse("d1\t3\t0.87\n");
  CHECK(m.size() == 1);
  CHECK(m.find("d1", 3) == 0.87);
  CHECK_FALSE(m.find("d1", 4).has_value());
  CHECK_THROWS_AS(parse("d1\t3\t1.2\n"), ParseError);
  CHECK_THROWS_WITH_AS(parse("d1\t3\t0.1\nd1\t3\t0.2\n"), doctest::Contains("duplicate"), ParseError);
  CHECK_THROWS_WITH_AS(parse("d1\t3\t0.1\nd1\t4\n"), doctest::Contains(":2:"), ParseError);
  CHECK_THROWS_AS(parse("d1\tx\t0.1\n"), ParseError);
  CHECK_THROWS_AS(parse("d1\t1\tnan\n"), ParseError);
}

TEST_CASE("score TSV round-trip") {
  ScoreMap m;
  m.insert("a", 1, 0.1);
  m.insert("a", 2, 1.0 / 3.0);
  m.insert("b", 7, 0.0);
  std::ostringstream out;
  write_scores_tsv(out, m);
  CHECK(parse(out.str()) == m);
}

TEST_CASE("request and response JSON shape") {
  const auto body = json::parse(encode_score_request({{"d", 2, "Jobs, jobs, jobs."}}));
  CHECK(body == json::parse(R"({"sentences":[{"doc_id":"d","line_no":2,"text":"Jobs, jobs, jobs."}]})"));
  ScoreMap m;
  m.insert("d", 2, 0.25);
  CHECK(json::parse(encode_score_response(m)) ==
        json::parse(R"({"scores":[{"doc_id":"d","line_no":2,"score":0.25}]})"));
  const auto back = decode_score_request(body.dump());
  REQUIRE(back.size() == 1);
  CHECK(back[0].text == "Jobs, jobs, jobs.");
}

TEST_CASE("HTTP scoring") {
  FakeScorer server;
  SUBCASE("two sentences") {
    const auto m = fetch_scores_http(server.endpoint(), requests(2), fast(64));
    CHECK(m.size() == 2);
  }
  SUBCASE("batching does not change the result") {
    const auto reqs = requests(150);
    const auto one = fetch_scores_http(server.endpoint(), reqs, fast(1));
    auto par = fast(64);
    par.parallelism = 3;
    const auto many = fetch_scores_http(server.endpoint() + "/score", reqs, par);
    CHECK(one == many);
    CHECK(one.size() == 150);
    for (const auto& r : reqs) CHECK(one.find(r.doc_id, r.line_no) == FakeScorer::score_for(r));
  }
  SUBCASE("incomplete response") {
    server.set_mode(FakeScorer::Mode::drop_one);
    CHECK_THROWS_WITH_AS(fetch_scores_http(server.endpoint(), requests(2), fast(64)),
                         doctest::Contains("incomplete response"), DataError);
  }
  SUBCASE("NaN score") {
    server.set_mode(FakeScorer::Mode::nan);
    CHECK_THROWS_AS(fetch_scores_http(server.endpoint(), requests(2), fast(64)), DataError);
  }
  SUBCASE("score outside [0,1]") {
    server.set_mode(FakeScorer::Mode::out_of_range);
    CHECK_THROWS_AS(fetch_scores_http(server.endpoint(), requests(2), fast(64)), DataError);
  }
  SUBCASE("unrequested key") {
    server.set_mode(FakeScorer::Mode::extra_key);
    CHECK_THROWS_WITH_AS(fetch_scores_http(server.endpoint(), requests(2), fast(64)),
                         doctest::Contains("unexpected key"), DataError);
  }
  SUBCASE("server errors are retried and then reported") {
    server.set_mode(FakeScorer::Mode::server_error);
    CHECK_THROWS_AS(fetch_scores_http(server.endpoint(), requests(2), fast(64)), TransportError);
    CHECK(server.requests() == 2);
  }
  SUBCASE("client errors are not retried") {
    server.set_mode(FakeScorer::Mode::bad_request);
    CHECK_THROWS_AS(fetch_scores_http(server.endpoint(), requests(2), fast(64)), TransportError);
    CHECK(server.requests() == 1);
  }
}

TEST_CASE("unreachable endpoint and bad URLs") {
  int port;
  {
    httplib::Server probe;
    port = probe.bind_to_any_port("127.0.0.1");
  }
  CHECK_THROWS_AS(fetch_scores_http("http://127.0.0.1:" + std::to_string(port), requests(1), fast(8)),
                  TransportError);
  CHECK_THROWS_AS(fetch_scores_http("https://example.org", requests(1)), ConfigError);
  CHECK_THROWS_AS(fetch_scores_http("localhost:80", requests(1)), ConfigError);
}
