#include <cmath>

#include "segshield/evalpipes.hpp"

namespace segshield::evalpipes {

std::vector<StyleSpecResult> style_robustness_eval(const SegModel& model,
                                                   const std::vector<numcore::Tensor>& images,
                                                   const std::vector<CorruptionSpec>& specs, int k,
                                                   int grid_step) {
  if (k < 1) throw std::invalid_argument("style eval: k must be >= 1");

  // Mask IDs come from auto_masks on the original images; the reference masks
  // are re-predicted at those center points so that every condition, the
  // original image included, goes through the same point-prompt path.
  std::vector<MaskSet> originals;
  originals.reserve(images.size());
  for (const auto& img : images) {
    const MaskSet automasks = refmodel::auto_masks(model, img, grid_step, k);
    MaskSet ref;
    ref.shortfall = automasks.shortfall;
    for (const auto& entry : automasks.entries) {
      BinaryMask m = binarize(model.predict(img, entry.id));
      const auto area = m.area();
      ref.entries.push_back({entry.id, std::move(m), area});
    }
    originals.push_back(std::move(ref));
  }

  std::vector<StyleSpecResult> results;
  for (const auto& spec : specs) {
    StyleSpecResult sr;
    sr.spec = spec;
    for (std::size_t i = 0; i < images.size(); ++i) {
      const numcore::Tensor corrupted = corrupt(images[i], spec);
      const MaskSet& ref = originals[i];
      MaskSet predicted;
      for (const auto& entry : ref.entries) {
        BinaryMask m = binarize(model.predict(corrupted, entry.id));
        const auto area = m.area();
        predicted.entries.push_back({entry.id, std::move(m), area});
      }
      StyleImageResult ir;
      ir.image_index = static_cast<int>(i);
      ir.mean_iou = metrics::mean_iou(ref, predicted);
      ir.shortfall = ref.shortfall;
      sr.per_image.push_back(ir);
    }
    double mean = 0.0;
    for (const auto& r : sr.per_image) mean += r.mean_iou;
    mean = sr.per_image.empty() ? 0.0 : mean / static_cast<double>(sr.per_image.size());
    double var = 0.0;
    for (const auto& r : sr.per_image) var += (r.mean_iou - mean) * (r.mean_iou - mean);
    sr.mean = mean;
    sr.stddev = sr.per_image.empty() ? 0.0 : std::sqrt(var / static_cast<double>(sr.per_image.size()));
    results.push_back(std::move(sr));
  }
  return results;
}

}  // namespace segshield::evalpipes
