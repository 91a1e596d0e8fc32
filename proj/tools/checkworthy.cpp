// Command-line entry point: checkworthy <command> --config run.cfg [--set key=value]...

#include <CLI11.hpp>
#include <iostream>

#include "checkworthy/config.hpp"
#include "checkworthy/error.hpp"
#include "checkworthy/pipeline.hpp"

using namespace checkworthy;

int main(int argc, char** argv) {
  CLI::App app{"Rank transcript sentences by check-worthiness"};
  app.require_subcommand(1);

  std::string config_path;
  std::vector<std::string> overrides;
  std::string features, output_dir, mode;

  const std::vector<std::pair<const char*, const char*>> commands = {
      {"stats", "corpus document/sentence/positive counts"},
      {"featurize", "write feature matrices as TSV"},
      {"train", "fit the logistic regression ranker"},
      {"rank", "rank test documents with a trained model"},
      {"evaluate", "train, rank and report AP/RP/P@5/P@10"},
      {"ablate", "leave-one-out or use-only-one feature ablation"},
      {"report", "highest-ranked non-check-worthy sentence per document"}};
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("-c,--config", config_path, "run configuration file")->required();
    sub->add_option("-s,--set", overrides, "override a config key (key=value)");
    sub->add_option("--features", features, "enabled feature groups, e.g. BERT,WE,CT");
    sub->add_option("-o,--output-dir", output_dir, "artifact directory");
    if (std::string_view(name) == "ablate")
      sub->add_option("-m,--mode", mode, "leave_one_out | use_only_one")
          ->check(CLI::IsMember({"leave_one_out", "use_only_one"}));
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  const auto command = *parse_command(app.get_subcommands().front()->get_name());
  RunConfig cfg;
  try {
    cfg = load_config(config_path);
    cfg.base_dir = ".";  // overrides given on the command line are relative to the cwd
    for (const auto& o : overrides) {
      const auto eq = o.find('=');
      if (eq == std::string::npos) throw ConfigError("--set expects key=value, got \"" + o + "\"");
      apply_setting(cfg, o.substr(0, eq), o.substr(eq + 1));
    }
    if (!features.empty()) apply_setting(cfg, "features", features);
    if (!output_dir.empty()) apply_setting(cfg, "output_dir", output_dir);
    if (!mode.empty()) apply_setting(cfg, "ablation_mode", mode);
  } catch (const std::exception& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return 1;
  }
  return run_command(command, cfg, std::cout, std::cerr);
}
