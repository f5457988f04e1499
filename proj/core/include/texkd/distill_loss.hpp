#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>

#include "texkd/feature_map.hpp"
#include "texkd/statexture.hpp"

namespace texkd {

class LossError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Weights of the structural, statistical, response and adversarial terms.
struct LossWeights {
    double structural = 0.9;
    double statistical = 1.15;
    double response = 5.0;
    double adversarial = 0.01;

    void validate() const;
};

struct LossParts {
    double l_seg = 0.0;
    double l_str = 0.0;
    double l_sta = 0.0;
    double l_re = 0.0;
    double l_adv = 0.0;
};

struct LossReport {
    LossParts parts;
    LossWeights weights;
    double total = 0.0;
    // Sizes the terms were computed over; zero when a term was not evaluated.
    std::size_t str_pixels = 0;
    std::size_t sta_regions = 0;
    std::size_t re_pixels = 0;
    std::size_t seg_pixels = 0;
};

/// Sum of squared differences over all C*H*W entries divided by H*W.
double loss_structural(const FeatureMap& teacher, const FeatureMap& student);

/// Mean over regions of the mean squared descriptor difference. Both sides
/// must come from the same SampleSet.
double loss_statistical(const StatTexture& teacher, const StatTexture& student);

/// Pixel-averaged KL(teacher || student); student probabilities are floored
/// at 1e-12 and 0 * log(0 / q) is taken as 0.
double loss_response(const ProbMap& teacher, const ProbMap& student);

using Discriminator = std::function<double(const ProbMap& seg, const FeatureMap& image)>;

/// Default scorer: a fixed seeded random projection of the per-pixel
/// concatenation [seg classes, image channels], averaged over pixels. It is
/// linear with no bias.
class ProjectionDiscriminator {
public:
    explicit ProjectionDiscriminator(std::uint64_t seed = 0x5eedULL) : seed_(seed) {}

    double operator()(const ProbMap& seg, const FeatureMap& image) const;

    /// Raw form over channel-major planes sharing `pixels` positions.
    double score(std::span<const float> seg, std::size_t seg_channels,
                 std::span<const float> image, std::size_t image_channels,
                 std::size_t pixels) const;

    [[nodiscard]] double weight(std::size_t feature) const;

private:
    std::uint64_t seed_;
};

/// Adversarial expectation: the discriminator's score of the segmentation
/// given the image.
double loss_adversarial(const ProbMap& seg, const FeatureMap& image, const Discriminator& d);

/// Mean -log p[label] over non-ignored pixels, p floored at 1e-12.
double loss_segmentation(const ProbMap& probs, const LabelMap& labels);

/// total = l_seg + w1*l_str + w2*l_sta + w3*l_re - w4*l_adv
LossReport loss_total(const LossParts& parts, const LossWeights& weights = {});

/// Channel softmax: turns a logit map into per-pixel class probabilities.
ProbMap softmax_response(const FeatureMap& logits);

/// Most probable class per pixel (lowest index on ties).
LabelMap argmax_labels(const ProbMap& probs, std::int32_t ignore_index = LabelMap::kDefaultIgnore);

}  // namespace texkd
