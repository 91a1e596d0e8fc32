#include "checkworthy/config.hpp"

#include <filesystem>
#include <fstream>

#include "checkworthy/error.hpp"
#include "checkworthy/text.hpp"

namespace checkworthy {

namespace fs = std::filesystem;

std::optional<Command> parse_command(std::string_view name) {
  static constexpr std::pair<std::string_view, Command> names[] = {
      {"stats", Command::stats},       {"featurize", Command::featurize},
      {"train", Command::train},       {"rank", Command::rank},
      {"evaluate", Command::evaluate}, {"ablate", Command::ablate},
      {"report", Command::report}};
  for (const auto& [n, c] : names)
    if (n == name) return c;
  return std::nullopt;
}

std::string_view command_name(Command c) {
  switch (c) {
    case Command::stats: return "stats";
    case Command::featurize: return "featurize";
    case Command::train: return "train";
    case Command::rank: return "rank";
    case Command::evaluate: return "evaluate";
    case Command::ablate: return "ablate";
    case Command::report: return "report";
  }
  return "?";
}

namespace {

std::string resolve(const RunConfig& cfg, std::string_view value) {
  const fs::path p{std::string(value)};
  if (p.empty() || p.is_absolute()) return p.string();
  return (fs::path(cfg.base_dir) / p).lexically_normal().string();
}

std::vector<std::string> resolve_list(const RunConfig& cfg, std::string_view value) {
  std::vector<std::string> out;
  for (auto part : text::split(value, ',')) {
    const auto t = text::trim(part);
    if (!t.empty()) out.push_back(resolve(cfg, t));
  }
  return out;
}

double number(std::string_view key, std::string_view value) {
  const auto v = text::parse_double(text::trim(value));
  if (!v) throw ConfigError(std::string(key) + ": not a number \"" + std::string(value) + "\"");
  return *v;
}

std::int64_t integer(std::string_view key, std::string_view value) {
  const auto v = text::parse_int(text::trim(value));
  if (!v) throw ConfigError(std::string(key) + ": not an integer \"" + std::string(value) + "\"");
  return *v;
}

}  // namespace

void apply_setting(RunConfig& cfg, std::string_view key, std::string_view raw) {
  const auto value = text::trim(raw);
  if (key == "train_transcripts") cfg.train_transcripts = resolve_list(cfg, value);
  else if (key == "train_gold") cfg.train_gold = resolve_list(cfg, value);
  else if (key == "train_annotations") cfg.train_annotations = resolve_list(cfg, value);
  else if (key == "test_transcripts") cfg.test_transcripts = resolve_list(cfg, value);
  else if (key == "test_gold") cfg.test_gold = resolve_list(cfg, value);
  else if (key == "test_annotations") cfg.test_annotations = resolve_list(cfg, value);
  else if (key == "embeddings") cfg.embeddings = resolve(cfg, value);
  else if (key == "vocab_restriction") cfg.vocab_restriction = resolve(cfg, value);
  else if (key == "topic_seeds") cfg.topic_seeds = resolve(cfg, value);
  else if (key == "hw_list") cfg.hw_list = resolve(cfg, value);
  else if (key == "stopwords") cfg.stopwords = resolve(cfg, value);
  else if (key == "scores") cfg.scores = resolve(cfg, value);
  else if (key == "score_endpoint") cfg.score_endpoint = std::string(value);
  else if (key == "output_dir") cfg.output_dir = resolve(cfg, value);
  else if (key == "features") {
    cfg.features = GroupSet::parse(value);
    if (cfg.features.empty()) throw ConfigError("features: at least one group must be enabled");
  } else if (key == "we_policy") {
    if (value == "all_words") cfg.we_policy = VectorPolicy::all_words;
    else if (value == "content_words") cfg.we_policy = VectorPolicy::content_words;
    else throw ConfigError("we_policy: expected all_words or content_words");
  } else if (key == "ablation_mode") {
    if (value == "leave_one_out") cfg.ablation_mode = AblationMode::leave_one_out;
    else if (value == "use_only_one") cfg.ablation_mode = AblationMode::use_only_one;
    else throw ConfigError("ablation_mode: expected leave_one_out or use_only_one");
  } else if (key == "lambda") {
    cfg.train.lambda = number(key, value);
    if (cfg.train.lambda < 0) throw ConfigError("lambda must be >= 0");
  } else if (key == "tolerance") {
    cfg.train.tolerance = number(key, value);
    if (!(cfg.train.tolerance > 0)) throw ConfigError("tolerance must be > 0");
  } else if (key == "max_iterations") {
    cfg.train.max_iterations = static_cast<int>(integer(key, value));
    if (cfg.train.max_iterations <= 0) throw ConfigError("max_iterations must be positive");
  } else if (key == "seed") {
    cfg.train.seed = integer(key, value);
  } else if (key == "http_batch_size") {
    const auto v = integer(key, value);
    if (v <= 0) throw ConfigError("http_batch_size must be positive");
    cfg.http.batch_size = static_cast<std::size_t>(v);
  } else if (key == "http_parallelism") {
    const auto v = integer(key, value);
    if (v <= 0) throw ConfigError("http_parallelism must be positive");
    cfg.http.parallelism = static_cast<std::size_t>(v);
  } else if (key == "http_timeout_ms") {
    cfg.http.timeout = std::chrono::milliseconds(integer(key, value));
  } else if (key == "http_retries") {
    cfg.http.retries = static_cast<int>(integer(key, value));
  } else {
    throw ConfigError("unknown configuration key \"" + std::string(key) + "\"");
  }
}

RunConfig parse_config(std::istream& in, const std::string& base_dir, const std::string& name) {
  RunConfig cfg;
  cfg.base_dir = base_dir;
  cfg.output_dir = resolve(cfg, cfg.output_dir);
  std::string line;
  std::size_t line_no = 0;
  while (text::read_line(in, line)) {
    ++line_no;
    const auto body = text::trim(line);
    if (body.empty() || body.front() == '#') continue;
    const auto eq = body.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError(name + ":" + std::to_string(line_no) + ": expected key = value");
    try {
      apply_setting(cfg, text::trim(body.substr(0, eq)), body.substr(eq + 1));
    } catch (const ConfigError& e) {
      throw ConfigError(name + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config \"" + path + "\"");
  auto base = fs::path(path).parent_path();
  if (base.empty()) base = ".";
  return parse_config(in, base.string(), path);
}

std::vector<std::string> validate(const RunConfig& cfg, Command command) {
  std::vector<std::string> problems;
  auto need_path = [&](const std::string& what, const std::string& path) {
    if (path.empty()) problems.push_back(what + ": not set");
    else if (!fs::exists(path)) problems.push_back(what + ": \"" + path + "\" does not exist");
  };
  auto need_list = [&](const std::string& what, const std::vector<std::string>& paths) {
    if (paths.empty()) problems.push_back(what + ": not set");
    for (const auto& p : paths)
      if (!fs::exists(p)) problems.push_back(what + ": \"" + p + "\" does not exist");
  };
  auto optional_list = [&](const std::string& what, const std::vector<std::string>& paths) {
    for (const auto& p : paths)
      if (!fs::exists(p)) problems.push_back(what + ": \"" + p + "\" does not exist");
  };

  const bool needs_train = command == Command::train || command == Command::evaluate ||
                           command == Command::ablate || command == Command::report ||
                           command == Command::featurize;
  const bool needs_test = command == Command::rank || command == Command::evaluate ||
                          command == Command::ablate || command == Command::report;

  if (command == Command::stats) {
    if (cfg.train_transcripts.empty() && cfg.test_transcripts.empty())
      problems.push_back("train_transcripts/test_transcripts: neither is set");
    optional_list("train_transcripts", cfg.train_transcripts);
    optional_list("test_transcripts", cfg.test_transcripts);
    optional_list("train_gold", cfg.train_gold);
    optional_list("test_gold", cfg.test_gold);
    return problems;
  }

  if (needs_train) {
    need_list("train_transcripts", cfg.train_transcripts);
    need_list("train_annotations", cfg.train_annotations);
    optional_list("train_gold", cfg.train_gold);
  }
  if (needs_test) {
    need_list("test_transcripts", cfg.test_transcripts);
    need_list("test_annotations", cfg.test_annotations);
    optional_list("test_gold", cfg.test_gold);
  }
  if (command == Command::featurize) {
    optional_list("test_transcripts", cfg.test_transcripts);
    if (!cfg.test_transcripts.empty()) need_list("test_annotations", cfg.test_annotations);
  }

  const GroupSet groups = command == Command::ablate ? GroupSet::all() : cfg.features;
  if (groups.contains(FeatureGroup::BERT)) {
    if (cfg.scores.empty() && cfg.score_endpoint.empty())
      problems.push_back("scores/score_endpoint: BERT enabled but neither is set");
    else if (!cfg.scores.empty() && !cfg.score_endpoint.empty())
      problems.push_back("scores/score_endpoint: set only one of them");
    else if (!cfg.scores.empty())
      need_path("scores", cfg.scores);
  }
  if (groups.contains(FeatureGroup::WE) || groups.contains(FeatureGroup::CT)) {
    need_path("embeddings", cfg.embeddings);
    if (!cfg.vocab_restriction.empty()) need_path("vocab_restriction", cfg.vocab_restriction);
  }
  if (groups.contains(FeatureGroup::CT)) {
    need_path("topic_seeds", cfg.topic_seeds);
    need_path("stopwords", cfg.stopwords);
  } else if (groups.contains(FeatureGroup::WE) && cfg.we_policy == VectorPolicy::content_words) {
    need_path("stopwords", cfg.stopwords);
  }
  if (groups.contains(FeatureGroup::HW)) need_path("hw_list", cfg.hw_list);
  if (command == Command::rank) need_path("model", (fs::path(cfg.output_dir) / "model.txt").string());
  return problems;
}

}  // namespace checkworthy
