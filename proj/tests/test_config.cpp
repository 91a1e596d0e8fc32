#include <doctest.h>

#include <algorithm>
#include <sstream>

#include "checkworthy/config.hpp"
#include "checkworthy/error.hpp"
#include "support.hpp"

using namespace checkworthy;

namespace {

RunConfig parse(const std::string& s, const std::string& base = "/base") {
  std::istringstream in(s);
  return parse_config(in, base);
}

bool mentions(const std::vector<std::string>& problems, const std::string& what) {
  return std::any_of(problems.begin(), problems.end(),
                     [&](const std::string& p) { return p.rfind(what, 0) == 0; });
}

}  // namespace

TEST_CASE("config keys and path resolution") {
  const auto cfg = parse(
      "# run\n"
      "train_transcripts = a.tsv, /abs/b.tsv\n"
      "embeddings = emb/vec.txt\n"
      "features = WE,CT\n"
      "we_policy = content_words\n"
      "lambda = 0.5\n"
      "max_iterations = 50\n"
      "ablation_mode = use_only_one\n"
      "http_batch_size = 8\n"
      "score_endpoint = http://localhost:8000\n");
  CHECK(cfg.train_transcripts == std::vector<std::string>{"/base/a.tsv", "/abs/b.tsv"});
  CHECK(cfg.embeddings == "/base/emb/vec.txt");
  CHECK(cfg.features == GroupSet{FeatureGroup::WE, FeatureGroup::CT});
  CHECK(cfg.we_policy == VectorPolicy::content_words);
  CHECK(cfg.train.lambda == 0.5);
  CHECK(cfg.train.max_iterations == 50);
  CHECK(cfg.ablation_mode == AblationMode::use_only_one);
  CHECK(cfg.http.batch_size == 8);
  CHECK(cfg.score_endpoint == "http://localhost:8000");
  CHECK(cfg.output_dir == "/base/out");
}

TEST_CASE("config errors") {
  CHECK_THROWS_WITH_AS(parse("nonsense = 1\n"), doctest::Contains("config:1"), ConfigError);
  CHECK_THROWS_AS(parse("lambda = abc\n"), ConfigError);
  CHECK_THROWS_AS(parse("just a line\n"), ConfigError);
  CHECK_THROWS_AS(parse("features = WE,XX\n"), ConfigError);
  CHECK_THROWS_AS(parse("we_policy = some\n"), ConfigError);
}

TEST_CASE("validation names the missing resource") {
  auto cfg = load_config(testing::fixture("run.cfg"));
  CHECK(validate(cfg, Command::evaluate).empty());

  auto no_emb = cfg;
  no_emb.embeddings.clear();
  CHECK(mentions(validate(no_emb, Command::evaluate), "embeddings"));

  no_emb.features = {FeatureGroup::CS, FeatureGroup::VT, FeatureGroup::POS};
  CHECK(validate(no_emb, Command::evaluate).empty());
  CHECK(mentions(validate(no_emb, Command::ablate), "embeddings"));

  auto no_scores = cfg;
  no_scores.scores.clear();
  CHECK(mentions(validate(no_scores, Command::train), "scores"));
  no_scores.score_endpoint = "http://127.0.0.1:1";
  CHECK(validate(no_scores, Command::train).empty());

  auto missing_file = cfg;
  missing_file.hw_list = "/nonexistent/words.txt";
  CHECK(mentions(validate(missing_file, Command::evaluate), "hw_list"));

  auto fresh = cfg;
  fresh.output_dir = "/nonexistent/out";
  CHECK(mentions(validate(fresh, Command::rank), "model"));
}
