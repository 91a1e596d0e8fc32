#pragma once

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "checkworthy/annotation.hpp"
#include "checkworthy/text.hpp"

namespace testing {

inline std::string fixture(const std::string& rel) {
  return std::string(CHECKWORTHY_TEST_DATA_DIR) + "/" + rel;
}

// "Tense=Past|VerbForm=Fin" style feature string.
inline checkworthy::Token tok(std::string surface, std::string lemma, std::string upos,
                              std::string xpos = "_", std::string feats = "") {
  checkworthy::Token t;
  t.surface = std::move(surface);
  t.lemma = std::move(lemma);
  t.upos = std::move(upos);
  t.xpos = std::move(xpos);
  for (auto kv : checkworthy::text::split(feats, '|')) {
    const auto eq = kv.find('=');
    if (eq != std::string_view::npos)
      t.morph.emplace(std::string(kv.substr(0, eq)), std::string(kv.substr(eq + 1)));
  }
  return t;
}

class TempDir {
 public:
  TempDir() {
    static std::mt19937_64 rng{std::random_device{}()};
    path_ = std::filesystem::temp_directory_path() / ("cw-test-" + std::to_string(rng()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::string file(const std::string& name, const std::string& content) const {
    const auto p = path_ / name;
    std::filesystem::create_directories(p.parent_path());
    std::ofstream(p, std::ios::binary) << content;
    return p.string();
  }

 private:
  std::filesystem::path path_;
};

}  // namespace testing
