#include <fstream>

#include "json.hpp"
#include "segshield/model.hpp"

namespace segshield::refmodel {

namespace {

constexpr const char* kArchLiteral = "conv3x3x16-16-16+conv1x1";

std::filesystem::path container_path(const std::filesystem::path& json_path) {
  auto p = json_path;
  p.replace_extension(".rtn");
  return p;
}

}  // namespace

void save_checkpoint(const std::filesystem::path& json_path, const SegModel& model,
                     const std::string& extra_json) {
  nlohmann::json sidecar;
  sidecar["schema"] = 1;
  sidecar["arch"] = kArchLiteral;
  sidecar["image_channels"] = model.image_channels();
  sidecar["seed"] = model.seed();
  sidecar["tensors"] = SegModel::param_names();
  sidecar["container"] = container_path(json_path).filename().string();
  if (!extra_json.empty()) sidecar["train"] = nlohmann::json::parse(extra_json);

  std::ofstream js(json_path);
  if (!js) throw std::runtime_error("checkpoint: cannot write " + json_path.string());
  js << sidecar.dump(2) << "\n";

  std::ofstream container(container_path(json_path), std::ios::binary);
  if (!container) throw std::runtime_error("checkpoint: cannot write " + container_path(json_path).string());
  for (const auto& name : SegModel::param_names()) numcore::write_rtn(container, model.params().at(name));
}

SegModel load_checkpoint(const std::filesystem::path& json_path) {
  std::ifstream js(json_path);
  if (!js) throw std::runtime_error("checkpoint: cannot open " + json_path.string());
  nlohmann::json sidecar = nlohmann::json::parse(js);
  if (sidecar.value("arch", "") != kArchLiteral)
    throw std::runtime_error("model-mismatch: unexpected architecture '" +
                             sidecar.value("arch", std::string("<missing>")) + "' in " + json_path.string());

  SegModel model;
  model.seed_ = sidecar.value("seed", 0ull);
  model.image_channels_ = sidecar.value("image_channels", 1);

  const auto container = json_path.parent_path() / sidecar.value("container", "");
  std::ifstream is(container, std::ios::binary);
  if (!is) throw std::runtime_error("checkpoint: cannot open container " + container.string());
  const auto names = sidecar.at("tensors").get<std::vector<std::string>>();
  if (names != SegModel::param_names())
    throw std::runtime_error("model-mismatch: unexpected tensor list in " + json_path.string());
  for (const auto& name : names) {
    numcore::Tensor t = numcore::read_rtn(is);
    if (t.dims != model.param_dims(name))
      throw std::runtime_error("model-mismatch: tensor '" + name + "' has dims " +
                               numcore::dims_str(t.dims) + ", expected " +
                               numcore::dims_str(model.param_dims(name)));
    numcore::check_finite(t, "checkpoint tensor '" + name + "'");
    model.params_[name] = std::move(t);
  }
  model.build_graph();
  return model;
}

}  // namespace segshield::refmodel
