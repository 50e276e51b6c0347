#include <cstdio>
#include <fstream>
#include <map>
#include <set>

#include "segshield/cli.hpp"
#include "segshield/rng.hpp"

namespace segshield::cli {

namespace {

using nlohmann::json;

struct FieldSpec {
  std::set<std::string> keys;
  std::map<std::string, FieldSpec> children;
};

const FieldSpec& schema() {
  static const FieldSpec scenes{{"height", "width", "min_shapes", "max_shapes", "min_extent",
                                 "max_extent", "bg_min", "bg_max", "shape_intensity_min",
                                 "shape_intensity_max", "min_gap", "max_tries"},
                                {}};
  static const FieldSpec spec{
      {"global", "train", "attack", "eval_style", "eval_grid", "noise_sweep", "report"},
      {
          {"global", {{"seed", "out", "model", "workers"}, {}}},
          {"train",
           {{"steps", "lr", "batch", "adam_beta1", "adam_beta2", "adam_eps", "bg_prompt_fraction", "label_smoothing", "holdout_prompts", "scenes"},
            {{"scenes", scenes}}}},
          {"attack",
           {{"method", "epsilon", "k", "iters", "objective", "text", "target_file", "stop", "prompt",
             "images", "simba", "ensemble"},
            {{"images", {{"scenes", "dir"}, {{"scenes", {{"count", "scenes"}, {{"scenes", scenes}}}}}}},
             {"simba", {{"epsilon", "max_queries", "basis"}, {}}},
             {"ensemble", {{"surrogates", "eps_step", "eps_ball", "iters"}, {}}}}}},
          {"eval_style",
           {{"specs", "k_masks", "grid_step", "images"},
            {{"images", {{"scenes", "dir"}, {{"scenes", {{"count", "scenes"}, {{"scenes", scenes}}}}}}}}}},
          {"eval_grid",
           {{"detector", "permutations", "grids_per_label", "labels", "images_per_label", "scenes"},
            {{"scenes", scenes}}}},
          {"noise_sweep", {{"sigmas", "trials", "original", "attacked", "prompt"}, {}}},
          {"report", {{"records_dir"}, {}}},
      }};
  return spec;
}

void validate_keys(const json& node, const FieldSpec& spec, const std::string& path) {
  if (!node.is_object()) return;
  for (const auto& [key, value] : node.items()) {
    const std::string field = path.empty() ? key : path + "." + key;
    if (spec.keys.count(key) == 0) throw ConfigError("unknown config key '" + field + "'", field);
    auto it = spec.children.find(key);
    if (it != spec.children.end()) validate_keys(value, it->second, field);
  }
}

}  // namespace

RunConfig RunConfig::load(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open config file " + path.string());
  json j;
  try {
    j = json::parse(is);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  return from_json(j);
}

RunConfig RunConfig::from_json(const nlohmann::json& j) {
  RunConfig cfg;
  cfg.root = j;
  cfg.validate();
  return cfg;
}

void RunConfig::set_override(const std::string& key_path, const std::string& value) {
  json* node = &root;
  std::size_t start = 0;
  while (true) {
    const std::size_t dot = key_path.find('.', start);
    const std::string key = key_path.substr(start, dot == std::string::npos ? dot : dot - start);
    if (key.empty()) throw ConfigError("bad override key '" + key_path + "'", key_path);
    if (dot == std::string::npos) {
      json parsed = json::parse(value, nullptr, false);
      (*node)[key] = parsed.is_discarded() ? json(value) : parsed;
      break;
    }
    node = &(*node)[key];
    start = dot + 1;
  }
  validate();
}

void RunConfig::validate() const {
  if (!root.is_object()) throw ConfigError("config root must be a JSON object");
  validate_keys(root, schema(), "");
  if (const auto* g = section("global"); g != nullptr) {
    if (g->contains("seed") && !(*g)["seed"].is_number_unsigned() && !(*g)["seed"].is_number_integer())
      throw ConfigError("global.seed must be an integer", "global.seed");
    if (g->contains("workers") && (!(*g)["workers"].is_number_integer() || (*g)["workers"].get<int>() < 1))
      throw ConfigError("global.workers must be a positive integer", "global.workers");
  }
}

std::uint64_t RunConfig::seed() const {
  const auto* g = section("global");
  if (g == nullptr || !g->contains("seed")) return 1234;
  return (*g)["seed"].get<std::uint64_t>();
}

std::filesystem::path RunConfig::out_dir() const {
  const auto* g = section("global");
  if (g == nullptr || !g->contains("out")) throw ConfigError("global.out is required", "global.out");
  return (*g)["out"].get<std::string>();
}

std::filesystem::path RunConfig::model_path() const {
  const auto* g = section("global");
  if (g == nullptr || !g->contains("model")) return {};
  return (*g)["model"].get<std::string>();
}

int RunConfig::workers() const {
  const auto* g = section("global");
  if (g == nullptr || !g->contains("workers")) return 1;
  return (*g)["workers"].get<int>();
}

const nlohmann::json* RunConfig::section(const std::string& name) const {
  auto it = root.find(name);
  return it == root.end() ? nullptr : &*it;
}

const nlohmann::json& RunConfig::require_section(const std::string& name) const {
  const auto* s = section(name);
  if (s == nullptr) throw ConfigError("config section '" + name + "' is required", name);
  return *s;
}

std::uint64_t derive_seed(std::uint64_t root_seed, const std::string& stream) {
  return Rng(root_seed).substream(stream).next_u64();
}

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

void atomic_write(const std::filesystem::path& path, const std::string& content) {
  const auto tmp = path.string() + ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary);
    if (!os) throw IoError("cannot write " + tmp);
    os << content;
    if (!os) throw IoError("write failed for " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace segshield::cli
