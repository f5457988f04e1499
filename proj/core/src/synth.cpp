#include "texkd/synth.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace texkd::synth {

Pattern parse_pattern(const std::string& name) {
    if (name == "constant") return Pattern::Constant;
    if (name == "ramp") return Pattern::Ramp;
    if (name == "grating") return Pattern::Grating;
    if (name == "bimodal") return Pattern::Bimodal;
    if (name == "noise") return Pattern::Noise;
    throw std::invalid_argument("unknown pattern '" + name + "'");
}

std::string pattern_name(Pattern p) {
    switch (p) {
        case Pattern::Constant: return "constant";
        case Pattern::Ramp: return "ramp";
        case Pattern::Grating: return "grating";
        case Pattern::Bimodal: return "bimodal";
        case Pattern::Noise: return "noise";
    }
    return "unknown";
}

void SynthSpec::validate() const {
    if (dims.channels == 0 || dims.height == 0 || dims.width == 0) {
        throw std::invalid_argument("synthetic dimensions must be positive");
    }
    if (!(sigma >= 0.0) || !std::isfinite(sigma)) {
        throw std::invalid_argument("noise sigma must be non-negative");
    }
    if (!std::isfinite(angle_deg) || !std::isfinite(cycles) || !std::isfinite(value) ||
        !std::isfinite(offset)) {
        throw std::invalid_argument("pattern parameters must be finite");
    }
}

FeatureMap generate_pattern(const SynthSpec& spec) {
    spec.validate();
    const auto [channels, height, width] = spec.dims;
    std::vector<float> data(spec.dims.size());
    std::mt19937_64 rng(spec.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);

    auto put = [&](std::size_t c, std::size_t y, std::size_t x, double v) {
        data[(c * height + y) * width + x] = static_cast<float>(v);
    };

    switch (spec.pattern) {
        case Pattern::Constant:
            std::fill(data.begin(), data.end(), spec.value);
            break;
        case Pattern::Ramp:
            for (std::size_t c = 0; c < channels; ++c)
                for (std::size_t y = 0; y < height; ++y)
                    for (std::size_t x = 0; x < width; ++x)
                        put(c, y, x,
                            static_cast<double>(x) / static_cast<double>(width) +
                                0.1 * static_cast<double>(c));
            break;
        case Pattern::Grating: {
            const double theta = spec.angle_deg * std::numbers::pi / 180.0;
            // Phase advances along the stripe normal; at 90 degrees that is the
            // x axis, giving vertical stripes.
            // Snap rounding residue so axis-aligned gratings are exactly constant
            // along the stripes.
            auto snap = [](double v) { return std::abs(v) < 1e-12 ? 0.0 : v; };
            const double ux = snap(std::sin(theta));
            const double uy = snap(std::cos(theta));
            for (std::size_t c = 0; c < channels; ++c) {
                const double phase = static_cast<double>(c) * std::numbers::pi / 3.0;
                for (std::size_t y = 0; y < height; ++y)
                    for (std::size_t x = 0; x < width; ++x) {
                        const double t = ux * static_cast<double>(x) / width +
                                         uy * static_cast<double>(y) / height;
                        put(c, y, x,
                            spec.offset +
                                std::sin(2.0 * std::numbers::pi * spec.cycles * t + phase));
                    }
            }
            break;
        }
        case Pattern::Bimodal: {
            // Pixels belong to one of two prototype vectors; the left half of
            // the image leans towards the first.
            std::vector<double> proto_a(channels);
            std::vector<double> proto_b(channels);
            for (std::size_t c = 0; c < channels; ++c) {
                proto_a[c] = 1.0 + 0.5 * static_cast<double>(c);
                proto_b[c] = c % 2 == 0 ? 1.0 : -0.5;
            }
            std::bernoulli_distribution left(0.8);
            std::bernoulli_distribution right(0.2);
            for (std::size_t y = 0; y < height; ++y)
                for (std::size_t x = 0; x < width; ++x) {
                    const bool use_a = 2 * x < width ? left(rng) : right(rng);
                    const auto& proto = use_a ? proto_a : proto_b;
                    for (std::size_t c = 0; c < channels; ++c) {
                        put(c, y, x, proto[c] + 0.05 * gauss(rng));
                    }
                }
            break;
        }
        case Pattern::Noise:
            for (auto& v : data) v = static_cast<float>(gauss(rng));
            break;
    }
    return FeatureMap(spec.dims, std::move(data));
}

FeaturePair generate_pair(const SynthSpec& spec) {
    auto teacher = generate_pattern(spec);
    if (spec.sigma == 0.0) {
        return {teacher, teacher};
    }
    // Separate stream so the noise field does not depend on the pattern.
    std::mt19937_64 rng(spec.seed ^ 0x9e3779b97f4a7c15ULL);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const auto t = teacher.data();
    std::vector<float> student(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) {
        student[i] = static_cast<float>(t[i] + spec.sigma * gauss(rng));
    }
    return {teacher, FeatureMap(spec.dims, std::move(student))};
}

std::vector<double> bimodal_samples(std::size_t count, double lo, double hi, double spread,
                                    double fraction_hi, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, spread);
    std::bernoulli_distribution upper(fraction_hi);
    std::vector<double> out(count);
    for (auto& v : out) {
        v = (upper(rng) ? hi : lo) + gauss(rng);
    }
    return out;
}

}  // namespace texkd::synth
