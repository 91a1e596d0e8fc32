#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sys/wait.h>

#include "checkworthy/text.hpp"
#include "support.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run cli(const std::string& args, const testing::TempDir& dir) {
  const auto out = (dir.path() / "stdout.txt").string();
  const auto err = (dir.path() / "stderr.txt").string();
  const std::string cmd = std::string("'") + CHECKWORTHY_CLI + "' " + args + " >'" + out + "' 2>'" + err + "'";
  const int status = std::system(cmd.c_str());
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, checkworthy::text::read_file(out),
          checkworthy::text::read_file(err)};
}

std::string base_args(const std::string& command, const fs::path& out_dir) {
  return command + " --config '" + testing::fixture("run.cfg") + "' --output-dir '" + out_dir.string() + "'";
}

std::vector<std::string> lines(const std::string& path) {
  std::ifstream in(path);
  std::vector<std::string> out;
  std::string l;
  while (std::getline(in, l)) out.push_back(l);
  return out;
}

}  // namespace

TEST_CASE("evaluate reaches MAP 1.0 when the scores are the labels") {
  testing::TempDir dir;
  const auto r = cli(base_args("evaluate", dir.path() / "out"), dir);
  REQUIRE_MESSAGE(r.code == 0, r.err);
  const auto eval = lines((dir.path() / "out" / "eval.tsv").string());
  REQUIRE(!eval.empty());
  CHECK(eval.back().rfind("MEAN\t\t\t1\t", 0) == 0);
  for (const char* f : {"model.txt", "ranked.tsv"}) CHECK(fs::exists(dir.path() / "out" / f));
}

TEST_CASE("use-only-one ablation writes seven rows") {
  testing::TempDir dir;
  const auto r = cli(base_args("ablate", dir.path() / "out") + " --mode use_only_one", dir);
  REQUIRE_MESSAGE(r.code == 0, r.err);
  const auto rows = lines((dir.path() / "out" / "ablation_use_only_one.tsv").string());
  CHECK(rows.size() == 8);
}

TEST_CASE("missing embeddings is a validation failure naming the resource") {
  testing::TempDir dir;
  const auto r = cli(base_args("evaluate", dir.path() / "out") + " --set embeddings=", dir);
  CHECK(r.code == 1);
  CHECK(r.err.find("embeddings") != std::string::npos);
}

TEST_CASE("usage errors and runtime errors have distinct exit codes") {
  testing::TempDir dir;
  CHECK(cli("evaluate", dir).code == 1);
  CHECK(cli("frobnicate --config x", dir).code == 1);
  const auto bad_scores = dir.file("bad_scores.tsv", "debate_a\t1\t7\n");
  const auto r = cli(base_args("evaluate", dir.path() / "out") + " --set scores=" + bad_scores, dir);
  CHECK(r.code == 2);
  CHECK(r.err.find("bad_scores.tsv:1") != std::string::npos);
}

TEST_CASE("identical runs produce byte-identical artifacts") {
  testing::TempDir dir;
  for (const char* run : {"a", "b"}) {
    for (const char* command : {"stats", "featurize", "evaluate", "report"})
      REQUIRE(cli(base_args(command, dir.path() / run), dir).code == 0);
    REQUIRE(cli(base_args("ablate", dir.path() / run) + " --mode leave_one_out", dir).code == 0);
  }
  std::size_t compared = 0;
  for (const auto& e : fs::directory_iterator(dir.path() / "a")) {
    const auto name = e.path().filename();
    CHECK_MESSAGE(checkworthy::text::read_file(e.path().string()) ==
                      checkworthy::text::read_file((dir.path() / "b" / name).string()),
                  name.string());
    ++compared;
  }
  CHECK(compared == 8);
}

TEST_CASE("train then rank matches evaluate's ranking") {
  testing::TempDir dir;
  REQUIRE(cli(base_args("evaluate", dir.path() / "eval"), dir).code == 0);
  REQUIRE(cli(base_args("train", dir.path() / "split"), dir).code == 0);
  const auto r = cli(base_args("rank", dir.path() / "split"), dir);
  REQUIRE_MESSAGE(r.code == 0, r.err);
  CHECK(checkworthy::text::read_file((dir.path() / "split" / "ranked.tsv").string()) ==
        checkworthy::text::read_file((dir.path() / "eval" / "ranked.tsv").string()));
  CHECK(checkworthy::text::read_file((dir.path() / "split" / "model.txt").string()) ==
        checkworthy::text::read_file((dir.path() / "eval" / "model.txt").string()));
}

TEST_CASE("the VT feature marks the going-to sentence as future only") {
  testing::TempDir dir;
  REQUIRE(cli(base_args("featurize", dir.path() / "out") + " --features VT", dir).code == 0);
  const auto rows = lines((dir.path() / "out" / "features_test.tsv").string());
  CHECK(std::find(rows.begin(), rows.end(), "debate_c\t2\t0\t0\t1") != rows.end());
}
