#include <cmath>

#include "texkd/statexture.hpp"

namespace texkd {

void StatConfig::validate() const {
    sampler.validate();
    if (n_levels < 2) {
        throw StatTextureError("N must be at least 2");
    }
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw StatTextureError("alpha must lie in (0, 1)");
    }
    if (!(theta > 0.0 && theta <= 1.0)) {
        throw StatTextureError("theta must lie in (0, 1]");
    }
    if (!(effective_delta() > 0.0) || !std::isfinite(effective_delta())) {
        throw StatTextureError("delta must be positive");
    }
    if (iterations < 1) {
        throw StatTextureError("iterations must be at least 1");
    }
    if (!(tau > 0.0) || !std::isfinite(tau)) {
        throw StatTextureError("tau must be positive");
    }
}

StatTexture extract_statistical(const FeatureMap& a, const StatConfig& cfg,
                                const SampleSet* shared) {
    cfg.validate();
    const auto similarity = self_similarity(a);

    StatTexture out;
    if (shared != nullptr) {
        if (shared->height != a.height() || shared->width != a.width()) {
            throw StatTextureError("sampleset was drawn on a " + std::to_string(shared->height) +
                                   "x" + std::to_string(shared->width) +
                                   " map but the input is " + std::to_string(a.height()) + "x" +
                                   std::to_string(a.width()));
        }
        out.samples = *shared;
    } else {
        out.samples = sample_regions(similarity, cfg.sampler);
    }

    const auto points = out.samples.ordered();
    out.descriptors.reserve(points.size());
    out.histograms.reserve(points.size());
    for (const auto& p : points) {
        const auto values = region_values(similarity, p.region.box);
        const auto levels =
            heuristic_levels(values, cfg.n_levels, cfg.alpha, cfg.effective_delta(),
                             cfg.iterations);
        const auto encoded = quantize(values, levels);
        const auto equalized = denoise(encoded, cfg.theta);
        const auto desc = graph_enhance(equalized, levels, cfg.tau);

        out.descriptors.emplace_back(Shape{1, levels.size(), kDescriptorWidth},
                                     std::vector<float>(desc.begin(), desc.end()));
        out.histograms.push_back({levels.levels, encoded.counts, equalized.counts,
                                  levels.fallback});
    }
    return out;
}

}  // namespace texkd
