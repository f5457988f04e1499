#include "texkd/distill_loss.hpp"

#include <algorithm>
#include <cmath>

namespace texkd {

namespace {

constexpr double kProbFloor = 1e-12;

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace

void LossWeights::validate() const {
    for (double w : {structural, statistical, response, adversarial}) {
        if (!std::isfinite(w) || w < 0.0) {
            throw LossError("loss weights must be finite and non-negative");
        }
    }
}

double loss_structural(const FeatureMap& teacher, const FeatureMap& student) {
    if (teacher.shape() != student.shape()) {
        throw LossError("structural shape mismatch: " + to_string(teacher.shape()) + " vs " +
                        to_string(student.shape()));
    }
    const auto t = teacher.data();
    const auto s = student.data();
    double acc = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        const double d = static_cast<double>(t[i]) - static_cast<double>(s[i]);
        acc += d * d;
    }
    return acc / static_cast<double>(teacher.shape().plane());
}

double loss_statistical(const StatTexture& teacher, const StatTexture& student) {
    if (teacher.samples.seed != student.samples.seed ||
        teacher.samples.digest() != student.samples.digest()) {
        throw LossError("statistical texture sampleset mismatch: the student did not reuse the "
                        "teacher's sampling");
    }
    if (teacher.descriptors.size() != student.descriptors.size()) {
        throw LossError("statistical texture region count mismatch");
    }
    if (teacher.descriptors.empty()) {
        return 0.0;
    }
    double acc = 0.0;
    for (std::size_t r = 0; r < teacher.descriptors.size(); ++r) {
        const auto& td = teacher.descriptors[r];
        const auto& sd = student.descriptors[r];
        if (td.shape() != sd.shape()) {
            throw LossError("statistical descriptor shape mismatch in region " +
                            std::to_string(r));
        }
        double region = 0.0;
        const auto t = td.data();
        const auto s = sd.data();
        for (std::size_t i = 0; i < t.size(); ++i) {
            const double d = static_cast<double>(t[i]) - static_cast<double>(s[i]);
            region += d * d;
        }
        acc += region / static_cast<double>(t.size());
    }
    return acc / static_cast<double>(teacher.descriptors.size());
}

double loss_response(const ProbMap& teacher, const ProbMap& student) {
    if (teacher.classes() != student.classes() || teacher.height() != student.height() ||
        teacher.width() != student.width()) {
        throw LossError("response shape mismatch");
    }
    const auto pixels = teacher.pixels();
    double acc = 0.0;
    for (std::size_t i = 0; i < pixels; ++i) {
        double kl = 0.0;
        for (std::size_t c = 0; c < teacher.classes(); ++c) {
            const double t = teacher.prob(c, i);
            if (t > 0.0) {
                const double s = std::max(static_cast<double>(student.prob(c, i)), kProbFloor);
                kl += t * std::log(t / s);
            }
        }
        // Rounding in float probabilities can push a pixel a hair below zero.
        acc += std::max(kl, 0.0);
    }
    return acc / static_cast<double>(pixels);
}

double ProjectionDiscriminator::weight(std::size_t feature) const {
    const auto bits = splitmix64(seed_ ^ splitmix64(feature));
    return static_cast<double>(bits >> 11) * 0x1.0p-53 * 2.0 - 1.0;
}

double ProjectionDiscriminator::score(std::span<const float> seg, std::size_t seg_channels,
                                      std::span<const float> image, std::size_t image_channels,
                                      std::size_t pixels) const {
    if (pixels == 0 || seg.size() != seg_channels * pixels ||
        image.size() != image_channels * pixels) {
        throw LossError("discriminator inputs do not share a pixel grid");
    }
    double acc = 0.0;
    for (std::size_t c = 0; c < seg_channels; ++c) {
        const double w = weight(c);
        for (std::size_t i = 0; i < pixels; ++i) {
            acc += w * seg[c * pixels + i];
        }
    }
    for (std::size_t c = 0; c < image_channels; ++c) {
        const double w = weight(seg_channels + c);
        for (std::size_t i = 0; i < pixels; ++i) {
            acc += w * image[c * pixels + i];
        }
    }
    return acc / static_cast<double>(pixels);
}

double ProjectionDiscriminator::operator()(const ProbMap& seg, const FeatureMap& image) const {
    if (seg.height() != image.height() || seg.width() != image.width()) {
        throw LossError("segmentation and image sizes differ");
    }
    return score(seg.data(), seg.classes(), image.data(), image.channels(), seg.pixels());
}

double loss_adversarial(const ProbMap& seg, const FeatureMap& image, const Discriminator& d) {
    if (!d) {
        throw LossError("no discriminator supplied");
    }
    const double v = d(seg, image);
    if (!std::isfinite(v)) {
        throw LossError("discriminator returned a non-finite score");
    }
    return v;
}

double loss_segmentation(const ProbMap& probs, const LabelMap& labels) {
    if (probs.height() != labels.height() || probs.width() != labels.width()) {
        throw LossError("segmentation label/probability size mismatch");
    }
    const auto ls = labels.labels();
    double acc = 0.0;
    std::size_t used = 0;
    for (std::size_t i = 0; i < ls.size(); ++i) {
        const auto y = ls[i];
        if (y == labels.ignore_index()) {
            continue;
        }
        if (y < 0 || static_cast<std::size_t>(y) >= probs.classes()) {
            throw LossError("label " + std::to_string(y) + " is not a valid class");
        }
        acc -= std::log(std::max(static_cast<double>(probs.prob(static_cast<std::size_t>(y), i)),
                                 kProbFloor));
        ++used;
    }
    if (used == 0) {
        throw LossError("every pixel is ignored");
    }
    return acc / static_cast<double>(used);
}

LossReport loss_total(const LossParts& parts, const LossWeights& weights) {
    weights.validate();
    for (double v : {parts.l_seg, parts.l_str, parts.l_sta, parts.l_re, parts.l_adv}) {
        if (!std::isfinite(v)) {
            throw LossError("loss parts must be finite");
        }
    }
    LossReport r;
    r.parts = parts;
    r.weights = weights;
    r.total = parts.l_seg + weights.structural * parts.l_str + weights.statistical * parts.l_sta +
              weights.response * parts.l_re - weights.adversarial * parts.l_adv;
    return r;
}

ProbMap softmax_response(const FeatureMap& logits) {
    const auto classes = logits.channels();
    const auto pixels = logits.shape().plane();
    const auto d = logits.data();
    std::vector<float> out(d.size());
    std::vector<double> e(classes);
    for (std::size_t i = 0; i < pixels; ++i) {
        double mx = d[i];
        for (std::size_t c = 1; c < classes; ++c) {
            mx = std::max(mx, static_cast<double>(d[c * pixels + i]));
        }
        double sum = 0.0;
        for (std::size_t c = 0; c < classes; ++c) {
            e[c] = std::exp(static_cast<double>(d[c * pixels + i]) - mx);
            sum += e[c];
        }
        for (std::size_t c = 0; c < classes; ++c) {
            out[c * pixels + i] = static_cast<float>(e[c] / sum);
        }
    }
    return ProbMap(classes, logits.height(), logits.width(), std::move(out));
}

LabelMap argmax_labels(const ProbMap& probs, std::int32_t ignore_index) {
    std::vector<std::int32_t> labels(probs.pixels());
    for (std::size_t i = 0; i < probs.pixels(); ++i) {
        std::size_t best = 0;
        for (std::size_t c = 1; c < probs.classes(); ++c) {
            if (probs.prob(c, i) > probs.prob(best, i)) {
                best = c;
            }
        }
        labels[i] = static_cast<std::int32_t>(best);
    }
    return LabelMap(probs.height(), probs.width(), std::move(labels), ignore_index);
}

}  // namespace texkd
