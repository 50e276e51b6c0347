// segshield: train the reference segmentation model, attack it, and run the
// evaluation pipelines from a JSON config. Exit codes: 0 ok, 2 config error,
// 3 io error, 4 runtime error.

#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "segshield/cli.hpp"

namespace {

void print_error(const char* type, const std::string& message, const std::string& field = "") {
  nlohmann::json err;
  err["error"]["type"] = type;
  err["error"]["message"] = message;
  if (!field.empty()) err["error"]["field"] = field;
  std::fprintf(stderr, "%s\n", err.dump().c_str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"red-teaming toolkit for the point-promptable reference segmentation model"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_override, model_override;
  std::uint64_t seed_override = 0;
  bool has_seed = false;
  std::vector<std::string> overrides;

  const std::vector<std::string> commands = {"train", "attack", "eval-style", "eval-grid",
                                             "noise-sweep", "report"};
  for (const auto& name : commands) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "JSON config file")->required();
    sub->add_option("--out", out_override, "output directory (overrides global.out)");
    sub->add_option("--model", model_override, "model checkpoint (overrides global.model)");
    sub->add_option("--seed", seed_override, "root seed (overrides global.seed)")
        ->each([&](const std::string&) { has_seed = true; });
    sub->add_option("--set", overrides, "config override key.path=value (repeatable, flags win)");
  }

  CLI11_PARSE(app, argc, argv);
  const std::string command = app.get_subcommands().front()->get_name();

  try {
    auto cfg = segshield::cli::RunConfig::load(config_path);
    for (const auto& kv : overrides) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos)
        throw segshield::cli::ConfigError("--set expects key.path=value, got '" + kv + "'");
      cfg.set_override(kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (!out_override.empty()) cfg.set_override("global.out", out_override);
    if (!model_override.empty()) cfg.set_override("global.model", model_override);
    if (has_seed) cfg.set_override("global.seed", std::to_string(seed_override));
    return segshield::cli::run_command(command, cfg);
  } catch (const segshield::cli::ConfigError& e) {
    print_error("config-invalid", e.what(), e.field);
    return 2;
  } catch (const segshield::cli::IoError& e) {
    print_error("io-error", e.what());
    return 3;
  } catch (const std::exception& e) {
    print_error("runtime-error", e.what());
    return 4;
  }
}
