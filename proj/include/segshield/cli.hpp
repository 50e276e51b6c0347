#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

namespace segshield::cli {

// exit code 2
struct ConfigError : std::runtime_error {
  std::string field;
  ConfigError(const std::string& message, std::string field_path = "")
      : std::runtime_error(message), field(std::move(field_path)) {}
};

// exit code 3
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// JSON config with schema validation (unknown keys rejected) and flag
// overrides (flags win). All randomness derives from global.seed via named
// sub-streams.
struct RunConfig {
  nlohmann::json root;

  static RunConfig load(const std::filesystem::path& path);
  static RunConfig from_json(const nlohmann::json& j);

  // key path like "train.steps"; value parsed as JSON when possible, else
  // taken as a string
  void set_override(const std::string& key_path, const std::string& value);
  void validate() const;

  std::uint64_t seed() const;
  std::filesystem::path out_dir() const;
  std::filesystem::path model_path() const;  // may be empty
  int workers() const;

  const nlohmann::json* section(const std::string& name) const;
  const nlohmann::json& require_section(const std::string& name) const;
};

std::uint64_t derive_seed(std::uint64_t root_seed, const std::string& stream);

int cmd_train(const RunConfig& cfg);
int cmd_attack(const RunConfig& cfg);
int cmd_eval_style(const RunConfig& cfg);
int cmd_eval_grid(const RunConfig& cfg);
int cmd_noise_sweep(const RunConfig& cfg);
int cmd_report(const RunConfig& cfg);

int run_command(const std::string& command, const RunConfig& cfg);

// deterministic float formatting shared by every CSV/JSON artifact
std::string fmt_double(double v);

// write-temp-then-rename
void atomic_write(const std::filesystem::path& path, const std::string& content);

}  // namespace segshield::cli
