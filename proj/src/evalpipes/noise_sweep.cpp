#include <cmath>
#include <stdexcept>

#include "segshield/evalpipes.hpp"
#include "segshield/rng.hpp"

namespace segshield::evalpipes {

using numcore::Tensor;

SweepResult noise_sweep(const SegModel& model, refmodel::PointPrompt prompt, const Tensor& original,
                        const Tensor& attacked, const std::vector<double>& sigmas, int trials,
                        std::uint64_t seed) {
  if (!original.same_dims(attacked)) throw std::invalid_argument("noise sweep: image dims differ");
  if (trials < 1) throw std::invalid_argument("noise sweep: trials must be >= 1");
  for (std::size_t i = 0; i < sigmas.size(); ++i) {
    if (sigmas[i] < 0.0) throw std::invalid_argument("noise sweep: sigma must be >= 0");
    if (i > 0 && sigmas[i] <= sigmas[i - 1])
      throw std::invalid_argument("noise sweep: sigmas must be strictly ascending");
  }

  const BinaryMask original_mask = binarize(model.predict(original, prompt));
  const BinaryMask attacked_mask = binarize(model.predict(attacked, prompt));

  SweepResult result;
  result.attack_l2 = metrics::l2(original, attacked);
  Rng rng = Rng(seed).substream("noise");

  for (double sigma : sigmas) {
    double sum_orig = 0.0, sum_att = 0.0;
    for (int t = 0; t < trials; ++t) {
      Tensor noisy = attacked;
      for (auto& v : noisy.data) {
        const double perturbed = v + sigma * rng.gauss();
        v = static_cast<float>(std::min(255.0, std::max(0.0, perturbed)));
      }
      const BinaryMask m = binarize(model.predict(noisy, prompt));
      sum_orig += metrics::iou(m, original_mask);
      sum_att += metrics::iou(m, attacked_mask);
    }
    result.rows.push_back({sigma, sum_orig / trials, sum_att / trials});
  }
  return result;
}

}  // namespace segshield::evalpipes
