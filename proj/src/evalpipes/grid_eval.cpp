#include <algorithm>
#include <memory>
#include <stdexcept>

#include "segshield/evalpipes.hpp"
#include "segshield/rng.hpp"

namespace segshield::evalpipes {

using numcore::Tensor;

int gallery_label_tag(int label) { return 40 + 8 * label; }

Gallery make_gallery(int labels, int images_per_label, std::uint64_t seed,
                     const refmodel::SceneConfig& scenes) {
  if (labels < 9) throw std::invalid_argument("gallery needs at least 9 distinct labels");
  if (images_per_label < 1) throw std::invalid_argument("gallery needs at least one image per label");
  if (gallery_label_tag(labels - 1) > 255) throw std::invalid_argument("too many labels for tag encoding");

  Gallery g;
  g.image_h = scenes.height;
  g.image_w = scenes.width;
  Rng rng = Rng(seed).substream("gallery");
  for (int label = 0; label < labels; ++label) {
    std::vector<Tensor> imgs;
    for (int i = 0; i < images_per_label; ++i) {
      auto scene = refmodel::generate_scene(rng.next_u64(), scenes);
      Tensor img = std::move(scene.image);
      const auto tag = static_cast<float>(gallery_label_tag(label));
      for (int y = 0; y < 4; ++y)
        for (int x = 0; x < 4; ++x) img.at2(y, x) = tag;
      imgs.push_back(std::move(img));
    }
    g.by_label.push_back(std::move(imgs));
  }
  return g;
}

namespace {

Tensor compose_grid(const std::array<const Tensor*, 9>& cells, int cell_h, int cell_w) {
  Tensor grid = Tensor::zeros({3 * cell_h, 3 * cell_w});
  for (int cell = 0; cell < 9; ++cell) {
    const int row = cell / 3, col = cell % 3;
    const Tensor& src = *cells[static_cast<std::size_t>(cell)];
    for (int y = 0; y < cell_h; ++y)
      for (int x = 0; x < cell_w; ++x)
        grid.at2(row * cell_h + y, col * cell_w + x) = src.at2(y, x);
  }
  return grid;
}

// empty-mask boxes are discarded; survivors snap to the cell under the box
// center
std::set<int> detections_to_cells(const std::vector<Detection>& detections, int cell_h, int cell_w) {
  std::set<int> cells;
  for (const auto& det : detections) {
    if (det.mask.empty()) continue;
    const int cx = (det.x0 + det.x1) / 2;
    const int cy = (det.y0 + det.y1) / 2;
    const int col = std::clamp(cx / cell_w, 0, 2);
    const int row = std::clamp(cy / cell_h, 0, 2);
    cells.insert(row * 3 + col);
  }
  return cells;
}

Detection full_cell_detection(int cell, int cell_h, int cell_w) {
  const int row = cell / 3, col = cell % 3;
  Detection det;
  det.x0 = col * cell_w;
  det.y0 = row * cell_h;
  det.x1 = det.x0 + cell_w;
  det.y1 = det.y0 + cell_h;
  det.mask = BinaryMask(cell_h, cell_w);
  std::fill(det.mask.v.begin(), det.mask.v.end(), std::uint8_t{1});
  return det;
}

}  // namespace

DetectorFn oracle_detector() {
  return [](const GridTrialView& view) {
    std::vector<Detection> out;
    const int tag = gallery_label_tag(view.target_label);
    for (int cell = 0; cell < 9; ++cell) {
      const int row = cell / 3, col = cell % 3;
      const float v = view.image.at2(row * view.cell_h + 1, col * view.cell_w + 1);
      if (static_cast<int>(v) == tag) out.push_back(full_cell_detection(cell, view.cell_h, view.cell_w));
    }
    return out;
  };
}

DetectorFn all_cells_detector() {
  return [](const GridTrialView& view) {
    std::vector<Detection> out;
    for (int cell = 0; cell < 9; ++cell) out.push_back(full_cell_detection(cell, view.cell_h, view.cell_w));
    return out;
  };
}

DetectorFn never_detector() {
  return [](const GridTrialView&) { return std::vector<Detection>{}; };
}

DetectorFn random_detector(std::uint64_t seed) {
  auto rng = std::make_shared<Rng>(Rng(seed).substream("random-detector"));
  return [rng](const GridTrialView& view) {
    return std::vector<Detection>{full_cell_detection(rng->uniform_int(0, 8), view.cell_h, view.cell_w)};
  };
}

GridEvalResult grid_privacy_eval(const DetectorFn& detector, const Gallery& gallery,
                                 const std::vector<int>& target_labels, int permutations,
                                 int grids_per_label, std::uint64_t seed) {
  const int n_labels = static_cast<int>(gallery.by_label.size());
  if (n_labels < 9) throw std::invalid_argument("gallery too small: need >= 9 distinct labels");
  if (permutations < 1 || grids_per_label < 1)
    throw std::invalid_argument("grid eval: permutations and grids_per_label must be >= 1");

  GridEvalResult result;
  Rng rng = Rng(seed).substream("grid");
  for (int label : target_labels) {
    if (label < 0 || label >= n_labels) throw std::invalid_argument("target label out of range");
    std::vector<std::vector<metrics::GridOutcome>> outcomes(static_cast<std::size_t>(permutations));

    for (int grid_idx = 0; grid_idx < grids_per_label; ++grid_idx) {
      // one target image + 8 distinct distractor labels
      const auto& target_imgs = gallery.by_label[static_cast<std::size_t>(label)];
      const Tensor* target_img = &target_imgs[static_cast<std::size_t>(
          rng.uniform_int(0, static_cast<int>(target_imgs.size()) - 1))];

      std::vector<int> others;
      for (int l = 0; l < n_labels; ++l)
        if (l != label) others.push_back(l);
      rng.shuffle(others);
      others.resize(8);

      std::array<const Tensor*, 9> members{};
      std::array<int, 9> member_labels{};
      members[0] = target_img;
      member_labels[0] = label;
      for (int i = 0; i < 8; ++i) {
        const auto& imgs = gallery.by_label[static_cast<std::size_t>(others[static_cast<std::size_t>(i)])];
        members[static_cast<std::size_t>(i + 1)] =
            &imgs[static_cast<std::size_t>(rng.uniform_int(0, static_cast<int>(imgs.size()) - 1))];
        member_labels[static_cast<std::size_t>(i + 1)] = others[static_cast<std::size_t>(i)];
      }

      for (int perm = 0; perm < permutations; ++perm) {
        std::vector<int> placement{0, 1, 2, 3, 4, 5, 6, 7, 8};
        rng.shuffle(placement);

        std::array<const Tensor*, 9> cells{};
        std::array<int, 9> cell_labels{};
        int truth_cell = 0;
        for (int cell = 0; cell < 9; ++cell) {
          const int member = placement[static_cast<std::size_t>(cell)];
          cells[static_cast<std::size_t>(cell)] = members[static_cast<std::size_t>(member)];
          cell_labels[static_cast<std::size_t>(cell)] = member_labels[static_cast<std::size_t>(member)];
          if (member == 0) truth_cell = cell;
        }

        const Tensor grid_image = compose_grid(cells, gallery.image_h, gallery.image_w);
        const GridTrialView view{grid_image, label, gallery.image_h, gallery.image_w, truth_cell, cell_labels};
        const auto detections = detector(view);
        const auto predicted = detections_to_cells(detections, gallery.image_h, gallery.image_w);

        metrics::GridOutcome outcome;
        outcome.truth[static_cast<std::size_t>(truth_cell)] = true;
        outcome.predicted = predicted;
        outcomes[static_cast<std::size_t>(perm)].push_back(outcome);

        GridTrialRecord record;
        record.label = label;
        record.grid_index = grid_idx;
        record.permutation = perm;
        record.truth_cell = truth_cell;
        record.cell_labels = cell_labels;
        record.predicted.assign(predicted.begin(), predicted.end());
        result.trials.push_back(std::move(record));
      }
    }
    result.labels.push_back(label);
    result.reports.push_back(metrics::score_grid(outcomes));
  }
  return result;
}

}  // namespace segshield::evalpipes
