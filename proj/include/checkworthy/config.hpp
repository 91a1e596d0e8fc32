#pragma once

#include <istream>
#include <optional>
#include <string>
#include <vector>

#include "checkworthy/embedding.hpp"
#include "checkworthy/evaluation.hpp"
#include "checkworthy/features.hpp"
#include "checkworthy/ranker.hpp"
#include "checkworthy/score_provider.hpp"

namespace checkworthy {

enum class Command { stats, featurize, train, rank, evaluate, ablate, report };

std::optional<Command> parse_command(std::string_view name);
std::string_view command_name(Command c);

/// Declarative run configuration (`key = value` lines, '#' comments).
/// Relative paths are resolved against the config file's directory.
struct RunConfig {
  std::vector<std::string> train_transcripts;
  std::vector<std::string> train_gold;
  std::vector<std::string> train_annotations;
  std::vector<std::string> test_transcripts;
  std::vector<std::string> test_gold;
  std::vector<std::string> test_annotations;
  std::string embeddings;
  std::string vocab_restriction;
  std::string topic_seeds;
  std::string hw_list;
  std::string stopwords;
  std::string scores;
  std::string score_endpoint;

  GroupSet features = GroupSet::all();
  VectorPolicy we_policy = VectorPolicy::all_words;
  TrainConfig train;
  AblationMode ablation_mode = AblationMode::leave_one_out;
  HttpScoreOptions http;
  std::string output_dir = "out";

  std::string base_dir = ".";  // for resolving relative paths
};

RunConfig parse_config(std::istream& in, const std::string& base_dir, const std::string& name = "config");
RunConfig load_config(const std::string& path);

/// Sets one key as if it appeared in the file; throws ConfigError.
void apply_setting(RunConfig& cfg, std::string_view key, std::string_view value);

/// Every problem that prevents `command` from running (all of them, not just
/// the first). Empty when the configuration is usable.
std::vector<std::string> validate(const RunConfig& cfg, Command command);

}  // namespace checkworthy
