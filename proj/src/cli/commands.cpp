#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>
#include <thread>

#include "segshield/blackbox.hpp"
#include "segshield/cli.hpp"
#include "segshield/evalpipes.hpp"
#include "segshield/metrics.hpp"
#include "segshield/model.hpp"
#include "segshield/pgm.hpp"
#include "segshield/whitebox.hpp"

namespace segshield::cli {

namespace {

using nlohmann::json;
using numcore::Tensor;

void write_manifest(const RunConfig& cfg, const std::string& command) {
  json manifest;
  manifest["command"] = command;
  const auto now = std::chrono::system_clock::now().time_since_epoch();
  manifest["timestamp_unix_ms"] = std::chrono::duration_cast<std::chrono::milliseconds>(now).count();
  manifest["config"] = cfg.root;
  atomic_write(cfg.out_dir() / "run_manifest.json", manifest.dump(2) + "\n");
}

void ensure_out(const RunConfig& cfg) {
  std::error_code ec;
  std::filesystem::create_directories(cfg.out_dir(), ec);
  if (ec) throw IoError("cannot create output directory " + cfg.out_dir().string());
}

std::string zero_pad(int v, int width = 3) {
  std::string s = std::to_string(v);
  while (static_cast<int>(s.size()) < width) s.insert(s.begin(), '0');
  return s;
}

refmodel::SceneConfig parse_scenes(const json* j) {
  refmodel::SceneConfig cfg;
  if (j == nullptr) return cfg;
  cfg.height = j->value("height", cfg.height);
  cfg.width = j->value("width", cfg.width);
  cfg.min_shapes = j->value("min_shapes", cfg.min_shapes);
  cfg.max_shapes = j->value("max_shapes", cfg.max_shapes);
  cfg.min_extent = j->value("min_extent", cfg.min_extent);
  cfg.max_extent = j->value("max_extent", cfg.max_extent);
  cfg.bg_min = j->value("bg_min", cfg.bg_min);
  cfg.bg_max = j->value("bg_max", cfg.bg_max);
  cfg.shape_intensity_min = j->value("shape_intensity_min", cfg.shape_intensity_min);
  cfg.shape_intensity_max = j->value("shape_intensity_max", cfg.shape_intensity_max);
  cfg.min_gap = j->value("min_gap", cfg.min_gap);
  cfg.max_tries = j->value("max_tries", cfg.max_tries);
  return cfg;
}

refmodel::SegModel load_model(const RunConfig& cfg) {
  const auto path = cfg.model_path();
  if (path.empty()) throw ConfigError("global.model is required for this command", "global.model");
  if (!std::filesystem::exists(path)) throw IoError("model checkpoint not found: " + path.string());
  return refmodel::load_checkpoint(path);
}

// images either generated from seeded scenes or loaded from a directory
std::vector<Tensor> collect_images(const RunConfig& cfg, const json& section,
                                   const std::string& field_path) {
  const auto it = section.find("images");
  if (it == section.end()) throw ConfigError(field_path + ".images is required", field_path + ".images");
  if (it->contains("dir")) {
    const std::filesystem::path dir = (*it)["dir"].get<std::string>();
    if (!std::filesystem::is_directory(dir)) throw IoError("image directory not found: " + dir.string());
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
      const auto ext = entry.path().extension().string();
      if (ext == ".pgm" || ext == ".rtn") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) throw IoError("no .pgm/.rtn images in " + dir.string());
    std::vector<Tensor> images;
    for (const auto& f : files) images.push_back(load_image(f));
    return images;
  }
  if (it->contains("scenes")) {
    const auto& sc = (*it)["scenes"];
    const int count = sc.value("count", 20);
    if (count < 1) throw ConfigError(field_path + ".images.scenes.count must be >= 1");
    const auto scene_cfg = parse_scenes(sc.contains("scenes") ? &sc["scenes"] : nullptr);
    const std::uint64_t base = derive_seed(cfg.seed(), "scene");
    std::vector<Tensor> images;
    for (int i = 0; i < count; ++i)
      images.push_back(refmodel::generate_scene(base + static_cast<std::uint64_t>(i), scene_cfg).image);
    return images;
  }
  throw ConfigError(field_path + ".images needs either 'scenes' or 'dir'", field_path + ".images");
}

refmodel::PointPrompt resolve_prompt(const json& section, const refmodel::SegModel& model,
                                     const Tensor& image) {
  if (section.contains("prompt") && section["prompt"].is_object()) {
    return {section["prompt"].at("x").get<int>(), section["prompt"].at("y").get<int>()};
  }
  // "auto": center point of the largest auto-generated mask
  const MaskSet masks = refmodel::auto_masks(model, image, 8, 1);
  if (masks.entries.empty())
    throw std::runtime_error("auto prompt failed: model produced no mask on this image");
  return masks.entries[0].id;
}

void parallel_for(int n, int workers, const std::function<void(int)>& fn) {
  workers = std::max(1, std::min(workers, n));
  if (workers == 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (int t = 0; t < workers; ++t) {
    pool.emplace_back([&] {
      while (true) {
        const int i = next.fetch_add(1);
        if (i >= n) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

whitebox::Method parse_method(const std::string& name) {
  if (name == "fgsm") return whitebox::Method::Fgsm;
  if (name == "figa") return whitebox::Method::Figa;
  if (name == "jsma") return whitebox::Method::Jsma;
  if (name == "simba") return whitebox::Method::Simba;
  if (name == "ensemble") return whitebox::Method::EnsemblePgd;
  throw ConfigError("unknown attack method '" + name + "'", "attack.method");
}

}  // namespace

int cmd_train(const RunConfig& cfg) {
  ensure_out(cfg);
  const json& tr = cfg.require_section("train");

  refmodel::TrainConfig train_cfg;
  train_cfg.seed = derive_seed(cfg.seed(), "train");
  train_cfg.steps = tr.value("steps", 2000);
  train_cfg.lr = tr.value("lr", 0.01);
  train_cfg.batch = tr.value("batch", 8);
  train_cfg.adam_beta1 = tr.value("adam_beta1", 0.9);
  train_cfg.adam_beta2 = tr.value("adam_beta2", 0.999);
  train_cfg.adam_eps = tr.value("adam_eps", 1e-8);
  train_cfg.bg_prompt_fraction = tr.value("bg_prompt_fraction", 0.25);
  train_cfg.label_smoothing = tr.value("label_smoothing", 0.05);
  train_cfg.scenes = parse_scenes(tr.contains("scenes") ? &tr["scenes"] : nullptr);

  const auto result = refmodel::train(train_cfg);

  const int holdout_prompts = tr.value("holdout_prompts", 100);
  const auto holdout =
      refmodel::holdout_eval(result.model, derive_seed(cfg.seed(), "holdout"), holdout_prompts, train_cfg.scenes);

  json info;
  info["steps"] = train_cfg.steps;
  info["lr"] = train_cfg.lr;
  info["batch"] = train_cfg.batch;
  info["adam_beta1"] = train_cfg.adam_beta1;
  info["bg_prompt_fraction"] = train_cfg.bg_prompt_fraction;
  info["holdout_mean_iou"] = holdout.mean_iou;
  refmodel::save_checkpoint(cfg.out_dir() / "model.json", result.model, info.dump());

  std::ostringstream trace;
  trace << "step,loss\n";
  for (std::size_t i = 0; i < result.loss_trace.size(); ++i)
    trace << i << "," << fmt_double(result.loss_trace[i]) << "\n";
  atomic_write(cfg.out_dir() / "train_trace.csv", trace.str());

  std::ostringstream ho;
  ho << "prompt,iou\n";
  for (std::size_t i = 0; i < holdout.per_prompt.size(); ++i)
    ho << i << "," << fmt_double(holdout.per_prompt[i]) << "\n";
  atomic_write(cfg.out_dir() / "holdout.csv", ho.str());

  write_manifest(cfg, "train");
  std::printf("trained %d steps, holdout mean IoU %.4f over %d prompts\n", train_cfg.steps,
              holdout.mean_iou, holdout_prompts);
  return 0;
}

int cmd_attack(const RunConfig& cfg) {
  ensure_out(cfg);
  const json& at = cfg.require_section("attack");
  const auto model = load_model(cfg);
  const auto method = parse_method(at.value("method", "fgsm"));

  if (method == whitebox::Method::Figa && !at.contains("k"))
    throw ConfigError("attack.k is required for method=figa (integer or \"scaled\")", "attack.k");

  const auto images = collect_images(cfg, at, "attack");
  std::filesystem::create_directories(cfg.out_dir() / "adv");
  std::filesystem::create_directories(cfg.out_dir() / "orig");
  std::filesystem::create_directories(cfg.out_dir() / "records");

  // ensemble surrogates are trained checkpoints supplied by the user
  std::unique_ptr<blackbox::Ensemble> ensemble;
  if (method == whitebox::Method::EnsemblePgd) {
    const auto& en = at.find("ensemble") != at.end() ? at["ensemble"] : json::object();
    if (!en.contains("surrogates") || !en["surrogates"].is_array() || en["surrogates"].size() < 2)
      throw ConfigError("attack.ensemble.surrogates must list >= 2 checkpoint paths",
                        "attack.ensemble.surrogates");
    std::vector<refmodel::SegModel> surrogates;
    for (const auto& p : en["surrogates"]) surrogates.push_back(refmodel::load_checkpoint(p.get<std::string>()));
    ensemble = std::make_unique<blackbox::Ensemble>(std::move(surrogates));
  }

  const std::uint64_t attack_seed = derive_seed(cfg.seed(), "attack");
  std::vector<json> records(images.size());

  parallel_for(static_cast<int>(images.size()), cfg.workers(), [&](int i) {
    const Tensor& image = images[static_cast<std::size_t>(i)];
    const auto prompt = resolve_prompt(at, model, image);

    whitebox::AttackObjective objective;
    const std::string obj = at.value("objective", "invert");
    if (obj == "invert") {
      objective.mode = whitebox::ObjectiveMode::Invert;
    } else if (obj == "text") {
      objective.mode = whitebox::ObjectiveMode::Custom;
      objective.target = whitebox::text_target(at.value("text", ""), image.dims[0], image.dims[1]);
    } else if (obj == "mask-file") {
      objective.mode = whitebox::ObjectiveMode::Custom;
      const Tensor m = load_image(at.at("target_file").get<std::string>());
      objective.target = binarize(m, 127.0f);
    } else {
      throw ConfigError("attack.objective must be invert|text|mask-file", "attack.objective");
    }

    whitebox::AttackResult result;
    if (method == whitebox::Method::Simba) {
      const auto& sb = at.find("simba") != at.end() ? at["simba"] : json::object();
      const auto kind = sb.value("basis", "dct") == "pixel" ? blackbox::BasisKind::Pixel
                                                            : blackbox::BasisKind::DctLowFrequency;
      const auto basis = blackbox::make_basis(kind, image.dims[0], image.dims[1],
                                              attack_seed + static_cast<std::uint64_t>(i));
      result = blackbox::simba_attack(blackbox::make_query(model, prompt), image, objective,
                                      sb.value("epsilon", 8.0), sb.value("max_queries", 20000),
                                      basis, at.value("stop", std::numeric_limits<double>::quiet_NaN()));
    } else if (method == whitebox::Method::EnsemblePgd) {
      const auto& en = at["ensemble"];
      result = blackbox::ensemble_pgd_attack(blackbox::make_query(model, prompt), *ensemble, image,
                                             prompt, objective, en.value("eps_step", 2.0),
                                             en.value("eps_ball", 16.0), en.value("iters", 60),
                                             at.value("stop", std::numeric_limits<double>::quiet_NaN()));
    } else {
      whitebox::AttackConfig attack_cfg;
      attack_cfg.method = method;
      attack_cfg.epsilon = at.value("epsilon", method == whitebox::Method::Fgsm ? 1.0 : 5.0);
      attack_cfg.max_iters = at.value("iters", 200);
      attack_cfg.stop_iou = at.value("stop", std::numeric_limits<double>::quiet_NaN());
      if (at.contains("k") && at["k"].is_number_integer()) attack_cfg.k = at["k"].get<std::int64_t>();
      result = whitebox::run_attack(model, prompt, image, objective, attack_cfg);
    }

    const std::string id = zero_pad(i);
    save_pgm(cfg.out_dir() / "orig" / ("orig_" + id + ".pgm"), image);
    save_pgm(cfg.out_dir() / "adv" / ("adv_" + id + ".pgm"), result.adversarial);
    numcore::save_rtn(cfg.out_dir() / "adv" / ("adv_" + id + ".rtn"), result.adversarial);

    json rec;
    rec["schema"] = 1;
    rec["image_id"] = id;
    rec["method"] = at.value("method", "fgsm");
    rec["prompt"] = {{"x", prompt.x}, {"y", prompt.y}};
    rec["iterations"] = result.iterations;
    rec["queries"] = result.queries;
    rec["iou"] = result.final_iou;
    rec["mse"] = result.final_mse;
    rec["linf"] = result.final_linf;
    rec["l2"] = result.final_l2;
    rec["stop_reason"] = whitebox::stop_reason_name(result.stop_reason);
    records[static_cast<std::size_t>(i)] = std::move(rec);
  });

  for (std::size_t i = 0; i < records.size(); ++i)
    atomic_write(cfg.out_dir() / "records" / ("record_" + zero_pad(static_cast<int>(i)) + ".json"),
                 records[i].dump(2) + "\n");

  write_manifest(cfg, "attack");
  std::printf("attacked %zu images with method %s\n", images.size(), at.value("method", "fgsm").c_str());
  return 0;
}

int cmd_eval_style(const RunConfig& cfg) {
  ensure_out(cfg);
  const json& ev = cfg.require_section("eval_style");
  const auto model = load_model(cfg);
  const auto images = collect_images(cfg, ev, "eval_style");

  std::vector<evalpipes::CorruptionSpec> specs;
  if (!ev.contains("specs") || !ev["specs"].is_array() || ev["specs"].empty())
    throw ConfigError("eval_style.specs must be a non-empty array", "eval_style.specs");
  const std::uint64_t style_seed = derive_seed(cfg.seed(), "style");
  int spec_idx = 0;
  for (const auto& s : ev["specs"]) {
    evalpipes::CorruptionSpec spec;
    spec.kind = evalpipes::parse_corruption(s.at("kind").get<std::string>());
    spec.strength = s.value("strength", 1.0);
    spec.seed = s.value("seed", style_seed + static_cast<std::uint64_t>(spec_idx));
    specs.push_back(spec);
    ++spec_idx;
  }

  const int k = ev.value("k_masks", 3);
  const int grid_step = ev.value("grid_step", 8);
  const auto results = evalpipes::style_robustness_eval(model, images, specs, k, grid_step);

  std::ostringstream per_image;
  per_image << "spec,kind,strength,image,mean_iou,shortfall\n";
  std::ostringstream summary;
  summary << "spec,kind,strength,mean,std,n\n";
  std::ostringstream hist;
  hist << "spec,kind,bin_lo,bin_hi,count\n";
  for (std::size_t si = 0; si < results.size(); ++si) {
    const auto& r = results[si];
    for (const auto& ir : r.per_image)
      per_image << si << "," << evalpipes::corruption_name(r.spec.kind) << ","
                << fmt_double(r.spec.strength) << "," << ir.image_index << ","
                << fmt_double(ir.mean_iou) << "," << (ir.shortfall ? 1 : 0) << "\n";
    summary << si << "," << evalpipes::corruption_name(r.spec.kind) << ","
            << fmt_double(r.spec.strength) << "," << fmt_double(r.mean) << ","
            << fmt_double(r.stddev) << "," << r.per_image.size() << "\n";
    constexpr int kBins = 20;
    std::array<int, kBins> bins{};
    for (const auto& ir : r.per_image) {
      int b = static_cast<int>(ir.mean_iou * kBins);
      b = std::clamp(b, 0, kBins - 1);
      ++bins[static_cast<std::size_t>(b)];
    }
    for (int b = 0; b < kBins; ++b)
      hist << si << "," << evalpipes::corruption_name(r.spec.kind) << ","
           << fmt_double(static_cast<double>(b) / kBins) << ","
           << fmt_double(static_cast<double>(b + 1) / kBins) << "," << bins[static_cast<std::size_t>(b)]
           << "\n";
  }
  atomic_write(cfg.out_dir() / "style_per_image.csv", per_image.str());
  atomic_write(cfg.out_dir() / "style_summary.csv", summary.str());
  atomic_write(cfg.out_dir() / "style_hist.csv", hist.str());

  write_manifest(cfg, "eval-style");
  std::printf("style eval: %zu specs over %zu images\n", specs.size(), images.size());
  return 0;
}

int cmd_eval_grid(const RunConfig& cfg) {
  ensure_out(cfg);
  const json& ev = cfg.require_section("eval_grid");

  const int labels = ev.value("labels", 12);
  const int images_per_label = ev.value("images_per_label", 4);
  const int permutations = ev.value("permutations", 5);
  const int grids_per_label = ev.value("grids_per_label", 20);
  const auto scenes = parse_scenes(ev.contains("scenes") ? &ev["scenes"] : nullptr);

  const std::uint64_t grid_seed = derive_seed(cfg.seed(), "grid");
  const auto gallery = evalpipes::make_gallery(labels, images_per_label, grid_seed, scenes);

  const std::string det_name = ev.value("detector", "oracle");
  evalpipes::DetectorFn detector;
  if (det_name == "oracle") detector = evalpipes::oracle_detector();
  else if (det_name == "all") detector = evalpipes::all_cells_detector();
  else if (det_name == "never") detector = evalpipes::never_detector();
  else if (det_name == "random") detector = evalpipes::random_detector(derive_seed(cfg.seed(), "detector"));
  else throw ConfigError("eval_grid.detector must be oracle|all|never|random", "eval_grid.detector");

  std::vector<int> targets;
  for (int l = 0; l < labels; ++l) targets.push_back(l);
  const auto result =
      evalpipes::grid_privacy_eval(detector, gallery, targets, permutations, grids_per_label, grid_seed);

  std::ostringstream scores;
  scores << "label,precision,precision_std,recall,recall_std,f1,f1_std,tp,fp,fn,tn,precision_undefined\n";
  for (std::size_t i = 0; i < result.labels.size(); ++i) {
    const auto& r = result.reports[i];
    scores << result.labels[i] << "," << fmt_double(r.precision) << "," << fmt_double(r.precision_std)
           << "," << fmt_double(r.recall) << "," << fmt_double(r.recall_std) << "," << fmt_double(r.f1)
           << "," << fmt_double(r.f1_std) << "," << r.tp << "," << r.fp << "," << r.fn << "," << r.tn
           << "," << (r.precision_undefined ? 1 : 0) << "\n";
  }
  atomic_write(cfg.out_dir() / "grid_scores.csv", scores.str());

  json trials = json::array();
  for (const auto& t : result.trials) {
    json jt;
    jt["label"] = t.label;
    jt["grid"] = t.grid_index;
    jt["permutation"] = t.permutation;
    jt["truth_cell"] = t.truth_cell;
    jt["cell_labels"] = t.cell_labels;
    jt["predicted"] = t.predicted;
    trials.push_back(std::move(jt));
  }
  atomic_write(cfg.out_dir() / "grid_trials.json", trials.dump(2) + "\n");

  write_manifest(cfg, "eval-grid");
  std::printf("grid eval: detector=%s labels=%d grids=%d perms=%d\n", det_name.c_str(), labels,
              grids_per_label, permutations);
  return 0;
}

int cmd_noise_sweep(const RunConfig& cfg) {
  ensure_out(cfg);
  const json& ns = cfg.require_section("noise_sweep");
  const auto model = load_model(cfg);

  const Tensor original = load_image(ns.at("original").get<std::string>());
  const Tensor attacked = load_image(ns.at("attacked").get<std::string>());
  const auto prompt = resolve_prompt(ns, model, original);

  std::vector<double> sigmas;
  if (!ns.contains("sigmas") || !ns["sigmas"].is_array() || ns["sigmas"].empty())
    throw ConfigError("noise_sweep.sigmas must be a non-empty array", "noise_sweep.sigmas");
  for (const auto& s : ns["sigmas"]) sigmas.push_back(s.get<double>());
  const int trials = ns.value("trials", 5);

  const auto sweep =
      evalpipes::noise_sweep(model, prompt, original, attacked, sigmas, trials, derive_seed(cfg.seed(), "noise"));

  std::ostringstream csv;
  csv << "sigma,mean_iou_vs_original,mean_iou_vs_attacked,attack_l2\n";
  for (const auto& row : sweep.rows)
    csv << fmt_double(row.sigma) << "," << fmt_double(row.mean_iou_vs_original) << ","
        << fmt_double(row.mean_iou_vs_attacked) << "," << fmt_double(sweep.attack_l2) << "\n";
  atomic_write(cfg.out_dir() / "noise_sweep.csv", csv.str());

  write_manifest(cfg, "noise-sweep");
  std::printf("noise sweep: %zu sigmas, %d trials\n", sigmas.size(), trials);
  return 0;
}

int cmd_report(const RunConfig& cfg) {
  ensure_out(cfg);
  const json* rp = cfg.section("report");
  const std::filesystem::path records_dir =
      rp != nullptr ? rp->value("records_dir", (cfg.out_dir() / "records").string())
                    : (cfg.out_dir() / "records").string();
  if (!std::filesystem::is_directory(records_dir))
    throw IoError("records directory not found: " + records_dir.string());

  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(records_dir))
    if (entry.path().extension() == ".json") files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  if (files.empty()) throw IoError("no records in " + records_dir.string());

  struct Agg {
    std::vector<double> iou, mse, linf, l2, iters, queries;
  };
  std::map<std::string, Agg> by_method;
  for (const auto& f : files) {
    std::ifstream is(f);
    json rec = json::parse(is);
    Agg& a = by_method[rec.value("method", "?")];
    a.iou.push_back(rec.value("iou", 0.0));
    a.mse.push_back(rec.value("mse", 0.0));
    a.linf.push_back(rec.value("linf", 0.0));
    a.l2.push_back(rec.value("l2", 0.0));
    a.iters.push_back(rec.value("iterations", 0));
    a.queries.push_back(rec.value("queries", 0));
  }

  auto mean = [](const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return v.empty() ? 0.0 : s / static_cast<double>(v.size());
  };
  auto stddev = [&](const std::vector<double>& v) {
    const double m = mean(v);
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return v.empty() ? 0.0 : std::sqrt(s / static_cast<double>(v.size()));
  };

  std::ostringstream csv;
  csv << "method,n,iou_mean,iou_std,mse_mean,mse_std,linf_mean,linf_std,l2_mean,l2_std,iters_mean,"
         "queries_mean\n";
  for (const auto& [method, a] : by_method) {
    csv << method << "," << a.iou.size() << "," << fmt_double(mean(a.iou)) << ","
        << fmt_double(stddev(a.iou)) << "," << fmt_double(mean(a.mse)) << "," << fmt_double(stddev(a.mse))
        << "," << fmt_double(mean(a.linf)) << "," << fmt_double(stddev(a.linf)) << ","
        << fmt_double(mean(a.l2)) << "," << fmt_double(stddev(a.l2)) << "," << fmt_double(mean(a.iters))
        << "," << fmt_double(mean(a.queries)) << "\n";
  }
  atomic_write(cfg.out_dir() / "summary.csv", csv.str());

  write_manifest(cfg, "report");
  std::printf("report over %zu records -> summary.csv\n", files.size());
  return 0;
}

int run_command(const std::string& command, const RunConfig& cfg) {
  if (command == "train") return cmd_train(cfg);
  if (command == "attack") return cmd_attack(cfg);
  if (command == "eval-style") return cmd_eval_style(cfg);
  if (command == "eval-grid") return cmd_eval_grid(cfg);
  if (command == "noise-sweep") return cmd_noise_sweep(cfg);
  if (command == "report") return cmd_report(cfg);
  throw ConfigError("unknown command '" + command + "'");
}

}  // namespace segshield::cli
